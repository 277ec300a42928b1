#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stratest/estimators.hpp"
#include "stratest/moments.hpp"

namespace stratest {

/// First-order MSE of one estimator. For Tp the decomposition
/// MSE = Ybar^2 (V200 + P1) + P2 - Ybar P3 is filled in, with P2 and P3
/// carrying the Xbar/Zbar scale factors that make the units consistent.
struct MseBreakdown {
  EstimatorId id;
  double mse = 0.0;
  std::optional<double> P1;
  std::optional<double> P2;
  std::optional<double> P3;
  std::optional<double> bias;
  // Set when the first-order value is negative (theory breakdown).
  bool negative = false;
};

/// Ybar^2 V200. Exact, not an approximation.
double variance_mean(const MomentSet& m);

/// Closed-form MSE of t1..t7. t7 needs the moment set's regression kernel.
double mse_classic(EstimatorKind kind, const MomentSet& m);

/// MSE of tp as the expectation of the squared linearized error
/// Ybar [e0 - a1 e1 - a2 e2], a1 = m1/2 + D1, a2 = m2/2 + D2.
MseBreakdown mse_tp(const MomentSet& m, double m1, double m2);

/// MseBreakdown for any estimator; Tp uses id.m1, id.m2.
MseBreakdown mse_of(const EstimatorId& id, const MomentSet& m);

/// Same quantity as mse_tp(m, 0, 0), assembled in absolute units:
/// Var(ybar) + B1^2 Var(xbar) + ... - 2 B1 Cov(ybar, xbar) - ...
double mse_regression_point(const MomentSet& m);

/// Second-order bias of tp with the coefficients of the published
/// expansion, including its -m1 m2 / 4 cross term.
double bias_tp(const MomentSet& m, double m1, double m2);

struct OptimalExponents {
  double m1 = 0.0;
  double m2 = 0.0;
  // V020 V002 - V011^2 and its ratio to V020 V002.
  double determinant = 0.0;
  double relative_determinant = 0.0;
};

/// Stationary point of mse_tp in (m1, m2). Throws NumericalError when the
/// x/z moment matrix is singular relative to `singular_tolerance`.
OptimalExponents optimal_m(const MomentSet& m, double singular_tolerance = 1e-12);

MseBreakdown min_mse_tp(const MomentSet& m);

/// Printed-formula values alongside the implemented ones.
struct TpDiagnostics {
  double m1 = 0.0;
  double m2 = 0.0;
  double P1 = 0.0;
  double P2_printed = 0.0;
  double P2_implemented = 0.0;
  double P3_printed = 0.0;
  double P3_implemented = 0.0;
  double mse_printed = 0.0;
  double mse_implemented = 0.0;
  std::optional<double> m1_printed_optimum;
  std::optional<double> m2_printed_optimum;
  std::optional<double> m1_optimum;
  std::optional<double> m2_optimum;
  std::optional<double> mse_at_printed_optimum;
  std::optional<double> mse_at_optimum;
  // Cross-term coefficient of the published bias expansion (-1/4) against
  // the coefficient implied by P1 (+1/2).
  double bias_cross_coefficient_printed = -0.25;
  double bias_cross_coefficient_from_P1 = 0.5;
};

TpDiagnostics tp_diagnostics(const MomentSet& m, double m1, double m2);

}  // namespace stratest
