#include "doctest.h"

#include <random>

#include "stratest/efficiency.hpp"
#include "support.hpp"

using namespace stratest;
using stratest::testing::rel_diff;

namespace {

MomentSet kk2009_moments() {
  const auto kk = embedded_kk2009();
  return moment_set(reconcile_covariances(kk.population).summary, kk.design);
}

}  // namespace

TEST_CASE("PRE table of the embedded dataset") {
  const auto r = pre_table(kk2009_moments());
  REQUIRE(r.rows.size() == 9);
  CHECK(*r.row(EstimatorKind::Mean).pre == 100.0);

  // Frozen from an independent high-precision recomputation.
  const std::pair<EstimatorKind, double> expected[] = {
      {EstimatorKind::T1, 1049.2610077118834}, {EstimatorKind::T2, 375.36726675174683},
      {EstimatorKind::T3, 1866.301807865682},  {EstimatorKind::T4, 28.957264900801114},
      {EstimatorKind::T5, 137.85634305431163}, {EstimatorKind::T6, 72.203511495294809},
      {EstimatorKind::T7, 109.27536870603568}, {EstimatorKind::Tp, 3038.2702963903396}};
  for (const auto& [kind, pre] : expected) {
    CAPTURE(static_cast<int>(kind));
    CHECK(rel_diff(*r.row(kind).pre, pre) < 1e-10);
  }
  CHECK(rel_diff(r.optimum.m1, -1.1621112372426703) < 1e-10);
  CHECK(rel_diff(r.optimum.m2, -0.91067972481239542) < 1e-10);

  CHECK(r.row(EstimatorKind::Tp).rank == 1);
  CHECK(r.row(EstimatorKind::T4).rank == 9);
  CHECK(r.row(EstimatorKind::Tp).delta_vs_tp == 0.0);
  for (const auto& row : r.rows) CHECK(row.delta_vs_tp >= 0.0);
}

TEST_CASE("ranks are a permutation ordered by MSE") {
  std::mt19937_64 gen(31);
  for (int i = 0; i < 200; ++i) {
    const auto r = pre_table(stratest::testing::random_moment_set(gen));
    std::vector<int> seen(10, 0);
    for (const auto& row : r.rows) ++seen[row.rank];
    for (int k = 1; k <= 9; ++k) CHECK(seen[k] == 1);
    for (const auto& a : r.rows)
      for (const auto& b : r.rows)
        if (a.rank < b.rank) CHECK(a.mse <= b.mse);
  }
}

TEST_CASE("no cross-moments: tp reduces to the mean") {
  MomentSet m;
  m.V200 = 0.05;
  m.V020 = 0.04;
  m.V002 = 0.03;
  m.Ybar = 10;
  m.Xbar = 20;
  m.Zbar = 30;
  m.B1 = 0.0;
  m.B2 = 0.0;
  m.regression_kernel = 5.0;
  const auto r = pre_table(m);
  CHECK(*r.row(EstimatorKind::Tp).pre == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(r.optimum.m1 == 0.0);
  CHECK(r.optimum.m2 == 0.0);
  CHECK(*r.row(EstimatorKind::T1).pre < 100.0);
}

TEST_CASE("zero MSE leaves PRE empty") {
  MomentSet m;
  m.V200 = 0.0;
  m.V020 = 0.04;
  m.V002 = 0.03;
  m.Ybar = 10;
  m.Xbar = 20;
  m.Zbar = 30;
  m.B1 = 0.0;
  m.B2 = 0.0;
  m.regression_kernel = 0.0;
  const auto r = pre_table(m);
  CHECK_FALSE(r.row(EstimatorKind::T7).pre.has_value());
  CHECK_FALSE(r.row(EstimatorKind::Mean).pre.has_value());
}

TEST_CASE("dominance holds for every nested estimator") {
  std::mt19937_64 gen(32);
  for (int i = 0; i < 1000; ++i) {
    const auto m = stratest::testing::random_moment_set(gen);
    const double scale = m.Ybar * m.Ybar * std::max({m.V200, m.V020, m.V002});
    for (const auto& e : dominance_report(m)) {
      CHECK(e.nested == (e.id.kind != EstimatorKind::T7));
      if (e.nested) CHECK(e.difference >= -1e-12 * scale);
    }
  }
}
