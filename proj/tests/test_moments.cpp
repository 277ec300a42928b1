#include "doctest.h"

#include <random>

#include "stratest/errors.hpp"
#include "stratest/moments.hpp"
#include "support.hpp"

using namespace stratest;
using stratest::testing::rel_diff;

TEST_CASE("design factors of the published table") {
  const auto kk = embedded_kk2009();
  const auto f = design_factors(kk.population, kk.design);
  REQUIRE(f.size() == 6);
  // W_1 = 127/923, f_1 = 1/31 - 1/127 = 96/3937.
  CHECK(f[0].W_h == doctest::Approx(127.0 / 923.0).epsilon(1e-15));
  CHECK(f[0].f_h == doctest::Approx(96.0 / 3937.0).epsilon(1e-14));
  CHECK(f[0].W_h == doctest::Approx(0.1375948).epsilon(1e-7));
  CHECK(f[0].f_h == doctest::Approx(0.0243841).epsilon(1e-6));
  double sum = 0;
  for (const auto& d : f) sum += d.W_h;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("design factors: census stratum, single stratum, invalid sizes") {
  StratumSummary s;
  s.N_h = 10;
  s.Ybar_h = s.Xbar_h = s.Zbar_h = 1;
  PopulationSummary pop{{s}};
  CHECK(design_factors(pop, {{10}})[0].f_h == 0.0);
  CHECK(design_factors(pop, {{4}})[0].W_h == 1.0);
  CHECK_THROWS_AS(design_factors(pop, {{11}}), InputError);
  CHECK_THROWS_AS(design_factors(pop, {{0}}), InputError);
}

TEST_CASE("moment set of the published table matches an independent summation") {
  // Frozen from a 40-digit recomputation over the six strata with the
  // correlation-based covariances and the repaired S_xz3, S_xz5.
  const auto kk = embedded_kk2009();
  const auto rec = reconcile_covariances(kk.population);
  const auto m = moment_set(rec.summary, kk.design);
  CHECK(rel_diff(m.V200, 0.011699878537905349) < 1e-12);
  CHECK(rel_diff(m.V020, 0.013162215041983048) < 1e-12);
  CHECK(rel_diff(m.V002, 0.0057601591223196647) < 1e-12);
  CHECK(rel_diff(m.V110, 0.011873517326259124) < 1e-12);
  CHECK(rel_diff(m.V101, 0.0080150062953038711) < 1e-12);
  CHECK(rel_diff(m.V011, 0.0081699065684585716) < 1e-12);
  CHECK(rel_diff(m.Ybar, 436.43302275189599) < 1e-13);
  CHECK(rel_diff(m.Xbar, 11440.498483206934) < 1e-13);
  CHECK(rel_diff(m.Zbar, 367.60082340195016) < 1e-13);
  CHECK(rel_diff(*m.B1, 0.034413042006222672) < 1e-12);
  CHECK(rel_diff(*m.B2, 1.6520017976819393) < 1e-12);
  CHECK(rel_diff(*m.regression_kernel, 2039.3618033228247) < 1e-10);
}

TEST_CASE("census design zeroes every moment and leaves B undefined") {
  const auto kk = embedded_kk2009();
  const auto rec = reconcile_covariances(kk.population).summary;
  SampleDesign census;
  for (const auto& s : rec.strata) census.n_h.push_back(s.N_h);
  const auto m = moment_set(rec, census);
  for (double v : {m.V200, m.V020, m.V002, m.V110, m.V101, m.V011}) CHECK(v == 0.0);
  CHECK_FALSE(m.B1);
  CHECK_FALSE(m.B2);

  std::mt19937_64 gen(3);
  for (int i = 0; i < 50; ++i) {
    auto p = stratest::testing::random_population(gen);
    for (std::size_t h = 0; h < p.design.n_h.size(); ++h) p.design.n_h[h] = p.population.strata[h].N_h;
    const auto mm = moment_set(p.population, p.design);
    CHECK(mm.V200 == 0.0);
    CHECK(mm.V011 == 0.0);
    CHECK_FALSE(mm.B1);
  }
}

TEST_CASE("zero covariance gives V110 = 0 and B1 = 0") {
  StratumSummary s;
  s.N_h = 50;
  s.Ybar_h = 10;
  s.Xbar_h = 20;
  s.Zbar_h = 30;
  s.S_yh = 2;
  s.S_xh = 3;
  s.S_zh = 4;
  s.S_yxh = 0.0;
  s.rho_yxh = 0.0;
  s.S_yzh = 1.0;
  s.S_xzh = 0.5;
  const auto rec = reconcile_covariances({{s}}).summary;
  const auto m = moment_set(rec, {{10}});
  CHECK(m.V110 == 0.0);
  CHECK(*m.B1 == 0.0);
  CHECK(m.V200 == doctest::Approx((1.0 / 10 - 1.0 / 50) * 4 / 100));
}

TEST_CASE("zero population mean is rejected") {
  StratumSummary s;
  s.N_h = 50;
  s.Ybar_h = 0.0;
  s.Xbar_h = 20;
  s.Zbar_h = 30;
  s.S_yh = 2;
  s.S_xh = 3;
  s.S_zh = 4;
  s.rho_yxh = 0.1;
  s.rho_yzh = 0.1;
  s.rho_xzh = 0.1;
  CHECK_THROWS_WITH_AS(moment_set({{s}}, {{10}}), doctest::Contains("mean of y"), NumericalError);
  s.Ybar_h = 1e-14;
  CHECK_THROWS_AS(moment_set({{s}}, {{10}}), NumericalError);
}

TEST_CASE("property: Cauchy-Schwarz bounds on random and published moment sets") {
  std::mt19937_64 gen(2024);
  auto check = [](const MomentSet& m) {
    const double slack = 1e-12;
    CHECK(m.V200 >= 0.0);
    CHECK(m.V020 >= 0.0);
    CHECK(m.V002 >= 0.0);
    CHECK(std::abs(m.V110) <= std::sqrt(m.V200 * m.V020) * (1 + slack));
    CHECK(std::abs(m.V101) <= std::sqrt(m.V200 * m.V002) * (1 + slack));
    CHECK(std::abs(m.V011) <= std::sqrt(m.V020 * m.V002) * (1 + slack));
  };
  for (int i = 0; i < 1000; ++i) check(stratest::testing::random_moment_set(gen));
  const auto kk = embedded_kk2009();
  for (auto policy : {CovariancePolicy::PreferCorrelation, CovariancePolicy::PreferCovariance})
    check(moment_set(reconcile_covariances(kk.population, {.policy = policy}).summary, kk.design));
}

TEST_CASE("property: scaling y leaves V entries unchanged and scales B") {
  std::mt19937_64 gen(31);
  for (int i = 0; i < 300; ++i) {
    auto p = stratest::testing::random_population(gen);
    const double c = std::uniform_real_distribution<double>(0.01, 100.0)(gen);
    const auto base = moment_set(p.population, p.design);
    for (auto& s : p.population.strata) {
      s.Ybar_h *= c;
      s.S_yh *= c;
      *s.S_yxh *= c;
      *s.S_yzh *= c;
    }
    const auto scaled = moment_set(p.population, p.design);
    CHECK(rel_diff(scaled.V200, base.V200) < 1e-13);
    CHECK(rel_diff(scaled.V020, base.V020) == 0.0);
    CHECK(rel_diff(scaled.V002, base.V002) == 0.0);
    CHECK(rel_diff(scaled.V110, base.V110) < 1e-13);
    CHECK(rel_diff(scaled.V101, base.V101) < 1e-13);
    CHECK(rel_diff(scaled.V011, base.V011) == 0.0);
    CHECK(rel_diff(*scaled.B1, c * *base.B1) < 1e-13);
    CHECK(rel_diff(*scaled.B2, c * *base.B2) < 1e-13);
  }
}

TEST_CASE("property: raising one n_h never increases a diagonal moment") {
  std::mt19937_64 gen(77);
  for (int i = 0; i < 300; ++i) {
    auto p = stratest::testing::random_population(gen);
    const auto h = std::uniform_int_distribution<std::size_t>(0, p.design.n_h.size() - 1)(gen);
    if (p.design.n_h[h] >= p.population.strata[h].N_h) continue;
    const auto before = moment_set(p.population, p.design);
    p.design.n_h[h] += 1;
    const auto after = moment_set(p.population, p.design);
    CHECK(after.V200 <= before.V200);
    CHECK(after.V020 <= before.V020);
    CHECK(after.V002 <= before.V002);
  }
}

TEST_CASE("scaling y by a power of two leaves the V entries bit-identical") {
  std::mt19937_64 gen(32);
  for (int i = 0; i < 100; ++i) {
    auto p = stratest::testing::random_population(gen);
    const double c = (i % 2) ? 8.0 : 0.25;
    const auto base = moment_set(p.population, p.design);
    for (auto& s : p.population.strata) {
      s.Ybar_h *= c;
      s.S_yh *= c;
      *s.S_yxh *= c;
      *s.S_yzh *= c;
    }
    const auto scaled = moment_set(p.population, p.design);
    CHECK(scaled.V200 == base.V200);
    CHECK(scaled.V110 == base.V110);
    CHECK(scaled.V101 == base.V101);
    CHECK(*scaled.B1 == c * *base.B1);
    CHECK(*scaled.B2 == c * *base.B2);
  }
}
