#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "stratest/data_model.hpp"

namespace stratest {

enum class EstimatorKind { Mean, T1, T2, T3, T4, T5, T6, T7, Tp };

inline constexpr std::array<EstimatorKind, 9> kAllEstimators = {
    EstimatorKind::Mean, EstimatorKind::T1, EstimatorKind::T2,
    EstimatorKind::T3,   EstimatorKind::T4, EstimatorKind::T5,
    EstimatorKind::T6,   EstimatorKind::T7, EstimatorKind::Tp};

std::string_view to_string(EstimatorKind kind);
EstimatorKind parse_estimator(std::string_view name);

/// An estimator; the exponents m1, m2 are meaningful only for Tp.
struct EstimatorId {
  EstimatorKind kind = EstimatorKind::Mean;
  double m1 = 0.0;
  double m2 = 0.0;

  static EstimatorId of(EstimatorKind k) { return {k, 0.0, 0.0}; }
  static EstimatorId tp(double m1, double m2) { return {EstimatorKind::Tp, m1, m2}; }

  std::string label() const;
};

struct StratifiedMeans {
  double ybar = 0.0;
  double xbar = 0.0;
  double zbar = 0.0;
};

struct RegressionCoeffs {
  double b1 = 0.0;
  double b2 = 0.0;
};

struct PopulationMeans {
  double Ybar = 0.0;
  double Xbar = 0.0;
  double Zbar = 0.0;

  static PopulationMeans of(const PopulationSummary& pop) {
    return {pop.Ybar(), pop.Xbar(), pop.Zbar()};
  }
};

/// sum_h W_h * (stratum sample mean), W_h from population sizes.
StratifiedMeans stratified_means(const StratifiedSample& sample, const PopulationSummary& pop);

/// Combined sample slopes: sum W_h^2 f_h s_yxh / sum W_h^2 f_h s_xh^2 (and
/// the z analogue), sample moments with divisor n_h - 1. Strata with
/// n_h < 2 contribute nothing. Throws NumericalError if a denominator is 0.
RegressionCoeffs sample_regression_coeffs(const StratifiedSample& sample,
                                          const PopulationSummary& pop);

/// Evaluates one estimator from precomputed sample means and slopes. The
/// slopes are only read by T7 and Tp.
double evaluate(const EstimatorId& id, const StratifiedMeans& s, const RegressionCoeffs& b,
                const PopulationMeans& pop);

/// Point estimate from a drawn sample. `coeffs` overrides the sample
/// slopes (used to pin b1 = b2 = 0).
double point_estimate(const EstimatorId& id, const StratifiedSample& sample,
                      const PopulationSummary& pop,
                      const std::optional<RegressionCoeffs>& coeffs = std::nullopt);

}  // namespace stratest
