#include "stratest/estimators.hpp"

#include <cmath>
#include <sstream>

#include "stratest/errors.hpp"
#include "stratest/moments.hpp"

namespace stratest {

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Mean: return "mean";
    case EstimatorKind::T1: return "t1";
    case EstimatorKind::T2: return "t2";
    case EstimatorKind::T3: return "t3";
    case EstimatorKind::T4: return "t4";
    case EstimatorKind::T5: return "t5";
    case EstimatorKind::T6: return "t6";
    case EstimatorKind::T7: return "t7";
    case EstimatorKind::Tp: return "tp";
  }
  return "?";
}

EstimatorKind parse_estimator(std::string_view name) {
  for (auto k : kAllEstimators)
    if (to_string(k) == name) return k;
  throw InputError("unknown estimator '" + std::string(name) + "'");
}

std::string EstimatorId::label() const {
  if (kind != EstimatorKind::Tp) return std::string(to_string(kind));
  std::ostringstream os;
  os << "tp(m1=" << m1 << ",m2=" << m2 << ")";
  return os.str();
}

namespace {

void check_conformance(const StratifiedSample& sample, const PopulationSummary& pop) {
  if (sample.units.size() != pop.strata.size())
    throw InputError("sample has " + std::to_string(sample.units.size()) +
                     " strata, population has " + std::to_string(pop.strata.size()));
  for (std::size_t h = 0; h < sample.units.size(); ++h)
    if (sample.units[h].empty())
      throw InputError("stratum " + std::to_string(h + 1) + ": empty sample");
}

}  // namespace

StratifiedMeans stratified_means(const StratifiedSample& sample, const PopulationSummary& pop) {
  check_conformance(sample, pop);
  StratifiedMeans out;
  for (std::size_t h = 0; h < sample.units.size(); ++h) {
    const auto& u = sample.units[h];
    double y = 0, x = 0, z = 0;
    for (const auto& o : u) {
      y += o.y;
      x += o.x;
      z += o.z;
    }
    const double w = pop.weight(h) / static_cast<double>(u.size());
    out.ybar += w * y;
    out.xbar += w * x;
    out.zbar += w * z;
  }
  return out;
}

RegressionCoeffs sample_regression_coeffs(const StratifiedSample& sample,
                                          const PopulationSummary& pop) {
  check_conformance(sample, pop);
  double sxy = 0, sxx = 0, szy = 0, szz = 0;
  for (std::size_t h = 0; h < sample.units.size(); ++h) {
    const auto& u = sample.units[h];
    const auto n = u.size();
    if (n < 2) continue;
    const double Nh = static_cast<double>(pop.strata[h].N_h);
    const double dn = static_cast<double>(n);
    const double f = static_cast<long>(n) == pop.strata[h].N_h ? 0.0 : 1.0 / dn - 1.0 / Nh;
    const double w = pop.weight(h);
    const double a = w * w * f;
    if (a == 0.0) continue;

    double my = 0, mx = 0, mz = 0;
    for (const auto& o : u) {
      my += o.y;
      mx += o.x;
      mz += o.z;
    }
    my /= dn;
    mx /= dn;
    mz /= dn;
    double cxy = 0, cxx = 0, czy = 0, czz = 0;
    for (const auto& o : u) {
      const double dy = o.y - my, dx = o.x - mx, dz = o.z - mz;
      cxy += dx * dy;
      cxx += dx * dx;
      czy += dz * dy;
      czz += dz * dz;
    }
    const double d = dn - 1.0;
    sxy += a * cxy / d;
    sxx += a * cxx / d;
    szy += a * czy / d;
    szz += a * czz / d;
  }
  if (sxx == 0.0) throw NumericalError("sample variance of x is zero; b1 undefined");
  if (szz == 0.0) throw NumericalError("sample variance of z is zero; b2 undefined");
  return {sxy / sxx, szy / szz};
}

double evaluate(const EstimatorId& id, const StratifiedMeans& s, const RegressionCoeffs& b,
                const PopulationMeans& pop) {
  const double dx = pop.Xbar - s.xbar;
  const double dz = pop.Zbar - s.zbar;
  auto exp_ratio = [](double gap, double sum, const char* var) {
    if (sum == 0.0)
      throw NumericalError(std::string("population + sample mean of ") + var + " is zero");
    return gap / sum;
  };

  double value = 0.0;
  switch (id.kind) {
    case EstimatorKind::Mean:
      value = s.ybar;
      break;
    case EstimatorKind::T1:
      if (s.xbar == 0.0) throw NumericalError("stratified sample mean of x is zero");
      value = s.ybar * pop.Xbar / s.xbar;
      break;
    case EstimatorKind::T2:
      value = s.ybar * std::exp(exp_ratio(dx, pop.Xbar + s.xbar, "x"));
      break;
    case EstimatorKind::T3:
    case EstimatorKind::T4:
    case EstimatorKind::T5:
    case EstimatorKind::T6: {
      const double ex = exp_ratio(dx, pop.Xbar + s.xbar, "x");
      const double ez = exp_ratio(dz, pop.Zbar + s.zbar, "z");
      const double sx = (id.kind == EstimatorKind::T3 || id.kind == EstimatorKind::T5) ? 1 : -1;
      const double sz = (id.kind == EstimatorKind::T3 || id.kind == EstimatorKind::T6) ? 1 : -1;
      value = s.ybar * std::exp(sx * ex) * std::exp(sz * ez);
      break;
    }
    case EstimatorKind::T7:
      value = s.ybar + b.b1 * dx + b.b2 * dz;
      break;
    case EstimatorKind::Tp: {
      if (!std::isfinite(id.m1) || !std::isfinite(id.m2))
        throw InputError("tp requires finite m1, m2");
      const double ex = exp_ratio(dx, pop.Xbar + s.xbar, "x");
      const double ez = exp_ratio(dz, pop.Zbar + s.zbar, "z");
      value = s.ybar * std::exp(id.m1 * ex) * std::exp(id.m2 * ez) + b.b1 * dx + b.b2 * dz;
      break;
    }
  }
  if (!std::isfinite(value))
    throw NumericalError(id.label() + ": non-finite estimate");
  return value;
}

double point_estimate(const EstimatorId& id, const StratifiedSample& sample,
                      const PopulationSummary& pop,
                      const std::optional<RegressionCoeffs>& coeffs) {
  const auto means = stratified_means(sample, pop);
  RegressionCoeffs b;
  const bool needs_b = id.kind == EstimatorKind::T7 || id.kind == EstimatorKind::Tp;
  if (coeffs)
    b = *coeffs;
  else if (needs_b)
    b = sample_regression_coeffs(sample, pop);
  return evaluate(id, means, b, PopulationMeans::of(pop));
}

}  // namespace stratest
