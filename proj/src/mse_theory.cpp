#include "stratest/mse_theory.hpp"

#include <cmath>
#include <sstream>

#include "stratest/errors.hpp"

namespace stratest {

double variance_mean(const MomentSet& m) { return m.Ybar * m.Ybar * m.V200; }

double mse_classic(EstimatorKind kind, const MomentSet& m) {
  const double y2 = m.Ybar * m.Ybar;
  const double common = m.V200 + m.V020 / 4 + m.V002 / 4;
  switch (kind) {
    case EstimatorKind::Mean: return variance_mean(m);
    case EstimatorKind::T1: return y2 * (m.V200 + m.V020 - 2 * m.V110);
    case EstimatorKind::T2: return y2 * (m.V200 + m.V020 / 4 - m.V110);
    case EstimatorKind::T3: return y2 * (common - m.V110 - m.V101 + m.V011 / 2);
    case EstimatorKind::T4: return y2 * (common + m.V110 + m.V101 + m.V011 / 2);
    case EstimatorKind::T5: return y2 * (common - m.V110 + m.V101 - m.V011 / 2);
    case EstimatorKind::T6: return y2 * (common + m.V110 - m.V101 - m.V011 / 2);
    case EstimatorKind::T7:
      if (!m.regression_kernel)
        throw InputError("t7 MSE needs stratum-level correlations (regression kernel)");
      return *m.regression_kernel;
    case EstimatorKind::Tp: break;
  }
  throw InputError("mse_classic: tp has its own formula; use mse_tp");
}

MseBreakdown mse_tp(const MomentSet& m, double m1, double m2) {
  const double Y = m.Ybar;
  const double D1 = m.D1(), D2 = m.D2();
  const double a1 = m1 / 2 + D1;
  const double a2 = m2 / 2 + D2;

  MseBreakdown out;
  out.id = EstimatorId::tp(m1, m2);
  out.mse = Y * Y *
            (m.V200 + a1 * a1 * m.V020 + a2 * a2 * m.V002 + 2 * a1 * a2 * m.V011 -
             2 * a1 * m.V110 - 2 * a2 * m.V101);

  const double B1 = m.B1.value_or(0.0), B2 = m.B2.value_or(0.0);
  const double bx = B1 * m.Xbar, bz = B2 * m.Zbar;
  out.P1 = m1 * m1 * m.V020 / 4 + m2 * m2 * m.V002 / 4 + m1 * m2 * m.V011 / 2 - m1 * m.V110 -
           m2 * m.V101;
  out.P2 = bx * bx * m.V020 + bz * bz * m.V002 + 2 * bx * bz * m.V011;
  out.P3 = 2 * bx * m.V110 + 2 * bz * m.V101 - m1 * bx * m.V020 - m1 * bz * m.V011 -
           m2 * bx * m.V011 - m2 * bz * m.V002;
  out.bias = bias_tp(m, m1, m2);
  out.negative = out.mse < 0.0;
  return out;
}

MseBreakdown mse_of(const EstimatorId& id, const MomentSet& m) {
  if (id.kind == EstimatorKind::Tp) return mse_tp(m, id.m1, id.m2);
  MseBreakdown out;
  out.id = id;
  out.mse = mse_classic(id.kind, m);
  out.negative = out.mse < 0.0;
  return out;
}

double mse_regression_point(const MomentSet& m) {
  const double Y = m.Ybar, X = m.Xbar, Z = m.Zbar;
  const double B1 = m.B1.value_or(0.0), B2 = m.B2.value_or(0.0);
  const double var_y = Y * Y * m.V200;
  const double var_x = X * X * m.V020;
  const double var_z = Z * Z * m.V002;
  const double cov_yx = Y * X * m.V110;
  const double cov_yz = Y * Z * m.V101;
  const double cov_xz = X * Z * m.V011;
  return var_y + B1 * B1 * var_x + B2 * B2 * var_z + 2 * B1 * B2 * cov_xz - 2 * B1 * cov_yx -
         2 * B2 * cov_yz;
}

double bias_tp(const MomentSet& m, double m1, double m2) {
  return m.Ybar * (m1 * m1 / 4 * m.V020 + m2 * m2 / 4 * m.V002 - m1 * m2 / 4 * m.V011 -
                   m1 / 2 * m.V110 - m2 / 2 * m.V101);
}

OptimalExponents optimal_m(const MomentSet& m, double singular_tolerance) {
  // Stationarity in a = (a1, a2):  [V020 V011; V011 V002] a = [V110; V101].
  const double scale = m.V020 * m.V002;
  const double det = scale - m.V011 * m.V011;
  const double rel = scale > 0.0 ? det / scale : 0.0;
  if (!(scale > 0.0) || !(rel > singular_tolerance)) {
    std::ostringstream os;
    os << "x/z moment matrix is singular (V020 V002 - V011^2 = " << det
       << ", relative " << rel << "); auxiliaries are collinear or degenerate";
    throw NumericalError(os.str());
  }
  const double a1 = (m.V110 * m.V002 - m.V101 * m.V011) / det;
  const double a2 = (m.V101 * m.V020 - m.V110 * m.V011) / det;
  return {2 * (a1 - m.D1()), 2 * (a2 - m.D2()), det, rel};
}

MseBreakdown min_mse_tp(const MomentSet& m) {
  const auto opt = optimal_m(m);
  return mse_tp(m, opt.m1, opt.m2);
}

TpDiagnostics tp_diagnostics(const MomentSet& m, double m1, double m2) {
  TpDiagnostics d;
  d.m1 = m1;
  d.m2 = m2;
  const auto impl = mse_tp(m, m1, m2);
  const double Y = m.Ybar;
  const double B1 = m.B1.value_or(0.0), B2 = m.B2.value_or(0.0);
  d.P1 = *impl.P1;
  d.P2_implemented = *impl.P2;
  d.P3_implemented = *impl.P3;
  d.mse_implemented = impl.mse;
  d.P2_printed = B1 * B1 * m.V020 + B2 * B2 * m.V002 + 2 * B1 * B2 * m.V011;
  d.P3_printed = -2 * B1 * m.V110 - 2 * B2 * m.V101 + m1 * B1 * m.V020 + m1 * B2 * m.V011 +
                 m2 * B1 * m.V011 + m2 * B2 * m.V002;
  d.mse_printed = Y * Y * (m.V200 + d.P1) + d.P2_printed - Y * d.P3_printed;

  const double det = m.V020 * m.V002 - m.V011 * m.V011;
  if (det != 0.0 && Y != 0.0) {
    d.m1_printed_optimum = 4 *
                           (B1 * m.V011 * m.V002 + B2 * m.V011 * m.V011 -
                            B1 * m.V020 * m.V002 - B2 * m.V011 * m.V002) /
                           (Y * det);
    d.m2_printed_optimum = 4 *
                           (B1 * m.V011 * m.V020 + B2 * m.V011 * m.V011 -
                            B1 * m.V011 * m.V020 - B2 * m.V002 * m.V020) /
                           (Y * det);
    d.mse_at_printed_optimum = mse_tp(m, *d.m1_printed_optimum, *d.m2_printed_optimum).mse;
  }
  try {
    const auto opt = optimal_m(m);
    d.m1_optimum = opt.m1;
    d.m2_optimum = opt.m2;
    d.mse_at_optimum = mse_tp(m, opt.m1, opt.m2).mse;
  } catch (const NumericalError&) {
  }
  return d;
}

}  // namespace stratest
