#pragma once

#include <vector>

namespace storalyze {

/// Shape of the beta density driving the decline. Equal shapes give the
/// symmetric family.
struct BetaShape {
  double left = 1.0;
  double right = 1.0;

  static BetaShape symmetric(double beta) { return {beta, beta}; }
  bool is_symmetric() const noexcept { return left == right; }
};

/// e(t) = e0 (1 - CDF(t)) on [t0, tf], where CDF is a beta distribution
/// rescaled to [t0, tf] and normalized by quadrature.
class EmissionPathway {
 public:
  /// Throws InvalidValue unless tf > t0, e0 > 0 and both shapes are positive and finite.
  EmissionPathway(double e0, double t0, double tf, BetaShape shape);

  double e0() const noexcept { return e0_; }
  double t0() const noexcept { return t0_; }
  double tf() const noexcept { return tf_; }
  BetaShape shape() const noexcept { return shape_; }

  /// Density per year; OutOfDomain unless t0 < t < tf.
  double pdf(double t) const;
  /// OutOfDomain unless t0 <= t <= tf.
  double cdf(double t) const;
  double emission(double t) const;
  /// Emissions accumulated from t0 to t.
  double cumulative(double t) const;
  /// Emissions accumulated over [t0, tf].
  double total() const;

 private:
  double unit(double t, bool open) const;

  double e0_, t0_, tf_;
  BetaShape shape_;
  double norm_;       // integral of u^(a-1) (1-u)^(b-1) over [0, 1]
  double first_moment_;  // same with an extra factor u
};

/// Symmetric density and CDF for a single shape parameter.
double beta_pdf(double t, double t0, double tf, double beta);
double beta_cdf(double t, double t0, double tf, double beta);
double emission(double t, const EmissionPathway& pathway);

enum class BetaMode { Symmetric, Asymmetric };

struct SolveOptions {
  BetaMode mode = BetaMode::Asymmetric;
  /// Left shape held fixed in asymmetric mode; the right shape is solved for.
  double fixed_left = 1.0;
  double lower = 0.05;
  double upper = 50.0;
};

/// Shape whose pathway emits exactly `budget` over [t0, tf]. The symmetric
/// family always emits e0 (tf - t0) / 2, so symmetric mode can only report
/// NonIdentifiable (budget equals that value) or BudgetOutOfRange.
BetaShape solve_beta(double e0, double t0, double tf, double budget, const SolveOptions& opts = {});

struct YearlyEmission {
  int year;
  double emission;      ///< GtCO2/yr
  double cumulative;    ///< GtCO2 since t0
  double cap_fraction;  ///< emission / e0
};

/// One row per whole year from ceil(t0) to floor(tf).
std::vector<YearlyEmission> yearly_path(const EmissionPathway& pathway);

}  // namespace storalyze
