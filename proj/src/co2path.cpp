#include "storalyze/co2path.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "storalyze/error.hpp"

namespace storalyze {

namespace {

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK).
constexpr std::array<double, 8> kXgk{0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                     0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                     0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                     0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk{0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                     0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                     0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                     0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

using Integrand = std::function<double(double)>;

double adaptive(const Integrand& f, double a, double b, double tol, int depth) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double pair = f(c - dx) + f(c + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  kronrod *= h;
  gauss *= h;
  if (std::abs(kronrod - gauss) <= std::max(tol, 1e-13 * std::abs(kronrod)) || depth >= 30) return kronrod;
  return adaptive(f, a, c, tol, depth + 1) + adaptive(f, c, b, tol, depth + 1);
}

double integrate(const Integrand& f, double a, double b) {
  if (b <= a) return 0.0;
  return adaptive(f, a, b, 1e-15, 0);
}

// Incomplete beta integral of u^(p-1) (1-u)^(q-1) over [0, x], x <= 0.5.
// For p < 1 the substitution u = z^(1/p) removes the endpoint singularity.
double partial(double x, double p, double q) {
  if (x <= 0.0) return 0.0;
  if (p < 1.0) {
    const double inv = 1.0 / p;
    return inv * integrate([&](double z) { return std::pow(1.0 - std::pow(z, inv), q - 1.0); }, 0.0,
                           std::pow(x, p));
  }
  return integrate([&](double u) { return std::pow(u, p - 1.0) * std::pow(1.0 - u, q - 1.0); }, 0.0, x);
}

void check_shape(double s, const char* which) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw Error(ErrorCode::InvalidValue, std::string(which) + " beta shape must be positive and finite");
  }
}

}  // namespace

EmissionPathway::EmissionPathway(double e0, double t0, double tf, BetaShape shape)
    : e0_(e0), t0_(t0), tf_(tf), shape_(shape) {
  if (!(tf > t0) || !std::isfinite(t0) || !std::isfinite(tf)) {
    throw Error(ErrorCode::InvalidValue, "pathway needs t0 < tf");
  }
  if (!(e0 > 0.0) || !std::isfinite(e0)) throw Error(ErrorCode::InvalidValue, "e0 must be positive");
  check_shape(shape.left, "left");
  check_shape(shape.right, "right");
  const double a = shape.left;
  const double b = shape.right;
  norm_ = partial(0.5, a, b) + partial(0.5, b, a);
  first_moment_ = partial(0.5, a + 1.0, b) + partial(0.5, b, a + 1.0);
}

double EmissionPathway::unit(double t, bool open) const {
  const bool inside = open ? (t > t0_ && t < tf_) : (t >= t0_ && t <= tf_);
  if (!inside) {
    throw Error(ErrorCode::OutOfDomain, "t = " + std::to_string(t) + " is outside [" + std::to_string(t0_) +
                                            ", " + std::to_string(tf_) + "]");
  }
  return (t - t0_) / (tf_ - t0_);
}

double EmissionPathway::pdf(double t) const {
  const double u = unit(t, true);
  const double dens = std::pow(u, shape_.left - 1.0) * std::pow(1.0 - u, shape_.right - 1.0) / norm_;
  return dens / (tf_ - t0_);
}

double EmissionPathway::cdf(double t) const {
  const double u = unit(t, false);
  if (u <= 0.5) return partial(u, shape_.left, shape_.right) / norm_;
  return 1.0 - partial(1.0 - u, shape_.right, shape_.left) / norm_;
}

double EmissionPathway::emission(double t) const { return e0_ * (1.0 - cdf(t)); }

double EmissionPathway::cumulative(double t) const {
  // integral_0^u (1 - F) = u - u F(u) + integral_0^u s f(s) ds
  const double u = unit(t, false);
  const double a = shape_.left;
  const double b = shape_.right;
  const double moment = u <= 0.5 ? partial(u, a + 1.0, b) : first_moment_ - partial(1.0 - u, b, a + 1.0);
  return e0_ * (tf_ - t0_) * (u - u * cdf(t) + moment / norm_);
}

double EmissionPathway::total() const { return e0_ * (tf_ - t0_) * first_moment_ / norm_; }

double beta_pdf(double t, double t0, double tf, double beta) {
  return EmissionPathway(1.0, t0, tf, BetaShape::symmetric(beta)).pdf(t);
}

double beta_cdf(double t, double t0, double tf, double beta) {
  return EmissionPathway(1.0, t0, tf, BetaShape::symmetric(beta)).cdf(t);
}

double emission(double t, const EmissionPathway& pathway) { return pathway.emission(t); }

BetaShape solve_beta(double e0, double t0, double tf, double budget, const SolveOptions& opts) {
  if (!(tf > t0) || !(e0 > 0.0)) throw Error(ErrorCode::InvalidValue, "pathway needs t0 < tf and e0 > 0");
  const double rectangle = e0 * (tf - t0);
  if (!(budget > 0.0 && budget < rectangle)) {
    throw Error(ErrorCode::BudgetOutOfRange, "budget must lie strictly between 0 and e0 (tf - t0)");
  }
  if (opts.mode == BetaMode::Symmetric) {
    if (std::abs(budget - 0.5 * rectangle) <= 1e-12 * rectangle) {
      throw Error(ErrorCode::NonIdentifiable, "every symmetric shape meets a budget of e0 (tf - t0) / 2");
    }
    throw Error(ErrorCode::BudgetOutOfRange,
                "the symmetric family always emits e0 (tf - t0) / 2; use the asymmetric mode");
  }
  check_shape(opts.fixed_left, "fixed left");
  if (!(opts.lower > 0.0 && opts.upper > opts.lower)) {
    throw Error(ErrorCode::InvalidValue, "shape bracket must satisfy 0 < lower < upper");
  }

  // The emitted total falls as the right shape grows.
  auto residual = [&](double right) {
    return EmissionPathway(e0, t0, tf, {opts.fixed_left, right}).total() - budget;
  };
  double lo = opts.lower;
  double hi = opts.upper;
  const double g_lo = residual(lo);
  const double g_hi = residual(hi);
  if (g_lo < 0.0 || g_hi > 0.0) {
    throw Error(ErrorCode::BudgetOutOfRange, "budget is not reachable with the right shape in [" +
                                                 std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double g = residual(mid);
    if (g == 0.0) return {opts.fixed_left, mid};
    if (g > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {opts.fixed_left, 0.5 * (lo + hi)};
}

std::vector<YearlyEmission> yearly_path(const EmissionPathway& pathway) {
  std::vector<YearlyEmission> out;
  const int first = static_cast<int>(std::ceil(pathway.t0()));
  const int last = static_cast<int>(std::floor(pathway.tf()));
  for (int y = first; y <= last; ++y) {
    const double t = static_cast<double>(y);
    const double e = pathway.emission(t);
    out.push_back({y, e, pathway.cumulative(t), e / pathway.e0()});
  }
  return out;
}

}  // namespace storalyze
