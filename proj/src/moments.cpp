#include "stratest/moments.hpp"

#include <cmath>
#include <string>

#include "stratest/errors.hpp"

namespace stratest {

std::vector<DesignFactor> design_factors(const PopulationSummary& pop,
                                         const SampleDesign& design) {
  validate(pop, design);
  const double N = static_cast<double>(pop.total_size());
  std::vector<DesignFactor> out;
  out.reserve(pop.strata.size());
  for (std::size_t h = 0; h < pop.strata.size(); ++h) {
    const double Nh = static_cast<double>(pop.strata[h].N_h);
    const double nh = static_cast<double>(design.n_h[h]);
    // Exact zero for a census stratum.
    const double f = design.n_h[h] == pop.strata[h].N_h ? 0.0 : 1.0 / nh - 1.0 / Nh;
    out.push_back({Nh / N, f});
  }
  return out;
}

namespace {

double covariance_of(const std::optional<double>& cov, const std::optional<double>& rho,
                     double sa, double sb) {
  if (cov) return *cov;
  if (rho) return *rho * sa * sb;
  throw InputError("covariance and correlation both missing; reconcile the summary first");
}

double correlation_of(const std::optional<double>& cov, const std::optional<double>& rho,
                      double sa, double sb) {
  if (rho) return *rho;
  if (cov && sa * sb != 0.0) return *cov / (sa * sb);
  if (cov) return 0.0;
  throw InputError("covariance and correlation both missing; reconcile the summary first");
}

void require_nonzero_mean(double mean, double sd_scale, const char* var) {
  if (!std::isfinite(mean) || std::abs(mean) <= 1e-12 * sd_scale || mean == 0.0)
    throw NumericalError(std::string("population mean of ") + var +
                         " is zero; relative moments are undefined");
}

}  // namespace

MomentSet moment_set(const PopulationSummary& pop, const SampleDesign& design) {
  const auto factors = design_factors(pop, design);

  double syy = 0, sxx = 0, szz = 0, syx = 0, syz = 0, sxz = 0;
  double b1_num = 0, b2_num = 0, kernel = 0;
  double sd_y = 0, sd_x = 0, sd_z = 0;
  for (std::size_t h = 0; h < pop.strata.size(); ++h) {
    const auto& s = pop.strata[h];
    const double a = factors[h].W_h * factors[h].W_h * factors[h].f_h;
    const double r_yx = correlation_of(s.S_yxh, s.rho_yxh, s.S_yh, s.S_xh);
    const double r_yz = correlation_of(s.S_yzh, s.rho_yzh, s.S_yh, s.S_zh);
    const double r_xz = correlation_of(s.S_xzh, s.rho_xzh, s.S_xh, s.S_zh);

    syy += a * s.S_yh * s.S_yh;
    sxx += a * s.S_xh * s.S_xh;
    szz += a * s.S_zh * s.S_zh;
    syx += a * covariance_of(s.S_yxh, s.rho_yxh, s.S_yh, s.S_xh);
    syz += a * covariance_of(s.S_yzh, s.rho_yzh, s.S_yh, s.S_zh);
    sxz += a * covariance_of(s.S_xzh, s.rho_xzh, s.S_xh, s.S_zh);
    b1_num += a * r_yx * s.S_yh * s.S_xh;
    b2_num += a * r_yz * s.S_yh * s.S_zh;
    kernel += a * s.S_yh * s.S_yh * (1.0 - r_yx * r_yx - r_yz * r_yz + 2.0 * r_yx * r_yz * r_xz);

    const double w = factors[h].W_h;
    sd_y += w * s.S_yh;
    sd_x += w * s.S_xh;
    sd_z += w * s.S_zh;
  }

  MomentSet m;
  m.Ybar = pop.Ybar();
  m.Xbar = pop.Xbar();
  m.Zbar = pop.Zbar();
  require_nonzero_mean(m.Ybar, sd_y, "y");
  require_nonzero_mean(m.Xbar, sd_x, "x");
  require_nonzero_mean(m.Zbar, sd_z, "z");

  m.V200 = syy / (m.Ybar * m.Ybar);
  m.V020 = sxx / (m.Xbar * m.Xbar);
  m.V002 = szz / (m.Zbar * m.Zbar);
  m.V110 = syx / (m.Ybar * m.Xbar);
  m.V101 = syz / (m.Ybar * m.Zbar);
  m.V011 = sxz / (m.Xbar * m.Zbar);
  if (sxx > 0.0) m.B1 = b1_num / sxx;
  if (szz > 0.0) m.B2 = b2_num / szz;
  m.regression_kernel = kernel;
  return m;
}

}  // namespace stratest
