#pragma once

// Test-only helpers: random valid inputs and oracles that deliberately avoid
// the library's own code paths.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "stratest/data_model.hpp"
#include "stratest/moments.hpp"

namespace stratest::testing {

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

/// Random correlation matrix from a random Gram matrix, with entries of
/// mixed sign and strength.
inline Eigen::Matrix3d random_correlation(std::mt19937_64& gen, double ridge = 0.05) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::Matrix3d a;
  for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = nd(gen);
  Eigen::Matrix3d c = a * a.transpose() + ridge * Eigen::Matrix3d::Identity();
  Eigen::Vector3d d = c.diagonal().cwiseSqrt().cwiseInverse();
  return d.asDiagonal() * c * d.asDiagonal();
}

/// Random reconciled population summary plus design.
inline DesignedPopulation random_population(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> strata(1, 5);
  std::uniform_int_distribution<long> size(20, 400);
  std::uniform_real_distribution<double> mean(5.0, 2000.0), cv(0.05, 0.6), frac(0.02, 0.9);
  DesignedPopulation out;
  const int L = strata(gen);
  for (int h = 0; h < L; ++h) {
    StratumSummary s;
    s.index = h + 1;
    s.N_h = size(gen);
    s.Ybar_h = mean(gen);
    s.Xbar_h = mean(gen);
    s.Zbar_h = mean(gen);
    s.S_yh = cv(gen) * s.Ybar_h;
    s.S_xh = cv(gen) * s.Xbar_h;
    s.S_zh = cv(gen) * s.Zbar_h;
    const auto r = random_correlation(gen);
    s.rho_yxh = r(0, 1);
    s.rho_yzh = r(0, 2);
    s.rho_xzh = r(1, 2);
    s.S_yxh = r(0, 1) * s.S_yh * s.S_xh;
    s.S_yzh = r(0, 2) * s.S_yh * s.S_zh;
    s.S_xzh = r(1, 2) * s.S_xh * s.S_zh;
    out.population.strata.push_back(s);
    const long n = std::max(2L, std::min(s.N_h - 1, static_cast<long>(frac(gen) * s.N_h)));
    out.design.n_h.push_back(n);
  }
  return out;
}

inline MomentSet random_moment_set(std::mt19937_64& gen) {
  const auto p = random_population(gen);
  return moment_set(p.population, p.design);
}

/// Textbook variance/covariance with the one-pass sum-of-products form,
/// unlike the library's two-pass centering.
inline double textbook_cov(const std::vector<double>& a, const std::vector<double>& b) {
  long double sa = 0, sb = 0, sab = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
    sab += static_cast<long double>(a[i]) * b[i];
  }
  const long double n = static_cast<long double>(a.size());
  return static_cast<double>((sab - sa * sb / n) / (n - 1));
}

/// Golden-section search of a unimodal function on [lo, hi].
inline double golden_min(const std::function<double(double)>& f, double lo, double hi,
                         int iters = 200) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && hi - lo > 1e-15 * (1 + std::abs(lo) + std::abs(hi)); ++i) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  return (lo + hi) / 2;
}

/// Minimum of a convex f along p + t u: bracket by expanding steps, then
/// golden-section.
inline double line_min(const std::function<double(double)>& f) {
  double a = 0.0, h = 1.0, b = h;
  double fa = f(a), fb = f(b);
  if (fb > fa) {
    h = -h;
    b = h;
    fb = f(b);
  }
  if (fb > fa) return golden_min(f, -1.0, 1.0);
  double c = b + 2.0 * (b - a), fc = f(c);
  while (fc < fb) {
    a = b;
    b = c;
    fb = fc;
    c = b + 2.0 * (b - a);
    fc = f(c);
  }
  return golden_min(f, std::min(a, c), std::max(a, c));
}

/// Powell's direction-set method in two dimensions, function values only.
/// Exact on a quadratic after a couple of cycles, up to line-search accuracy.
inline std::pair<double, double> powell_minimize(
    const std::function<double(double, double)>& f, double m1 = 0.0, double m2 = 0.0,
    int cycles = 12) {
  Eigen::Vector2d p(m1, m2);
  Eigen::Vector2d u[2] = {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
  auto along = [&](const Eigen::Vector2d& base, const Eigen::Vector2d& dir) {
    const double t = line_min([&](double s) {
      const Eigen::Vector2d q = base + s * dir;
      return f(q(0), q(1));
    });
    return Eigen::Vector2d(base + t * dir);
  };
  for (int k = 0; k < cycles; ++k) {
    const Eigen::Vector2d start = p;
    for (auto& dir : u) p = along(p, dir);
    Eigen::Vector2d d = p - start;
    if (d.norm() == 0.0) break;
    p = along(p, d);
    u[0] = u[1];
    u[1] = d;
  }
  return {p(0), p(1)};
}

}  // namespace stratest::testing
