// Acceptance checks: one PASS/FAIL line per criterion, exit status 0 only
// when all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "stratest/cli.hpp"
#include "stratest/efficiency.hpp"
#include "stratest/estimators.hpp"
#include "stratest/monte_carlo.hpp"
#include "stratest/mse_theory.hpp"
#include "support.hpp"

using namespace stratest;
using stratest::testing::rel_diff;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::vector<MomentSet> random_sets(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<MomentSet> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(stratest::testing::random_moment_set(gen));
  return out;
}

double scale_of(const MomentSet& m) {
  return m.Ybar * m.Ybar *
         std::max({m.V200, m.V020, m.V002, std::abs(m.V110), std::abs(m.V101), std::abs(m.V011)});
}

MomentSet without_b(MomentSet m) {
  m.B1 = 0.0;
  m.B2 = 0.0;
  return m;
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

Outcome nesting(const std::vector<MomentSet>& sets) {
  Outcome o;
  double worst = 0.0;
  for (const auto& full : sets) {
    const auto m = without_b(full);
    const std::tuple<double, double, EstimatorKind> corners[] = {
        {1, 1, EstimatorKind::T3}, {-1, -1, EstimatorKind::T4},
        {1, -1, EstimatorKind::T5}, {-1, 1, EstimatorKind::T6}};
    for (auto [m1, m2, kind] : corners)
      worst = std::max(worst, rel_diff(mse_tp(m, m1, m2).mse, mse_classic(kind, m)));
    worst = std::max(worst, rel_diff(mse_tp(full, 0, 0).mse, mse_regression_point(full)));
  }
  if (worst > 1e-12) o.fail("worst relative difference " + sci(worst));
  if (o.pass) o.detail = "worst relative difference " + sci(worst);
  return o;
}

Outcome optimizer(const std::vector<MomentSet>& sets) {
  Outcome o;
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> probe(-10.0, 10.0);
  double worst = 0.0;
  long violations = 0;
  for (const auto& m : sets) {
    const auto opt = optimal_m(m);
    const double best = mse_tp(m, opt.m1, opt.m2).mse;
    auto f = [&](double a, double b) { return mse_tp(m, a, b).mse; };
    const auto [p1, p2] = stratest::testing::powell_minimize(f, 0.0, 0.0, 40);
    worst = std::max(worst, std::abs(f(p1, p2) - best) / std::abs(best));
    const double tol = 1e-12 * scale_of(m);
    for (int k = 0; k < 10000; ++k)
      violations += best > f(probe(gen), probe(gen)) + tol;
  }
  if (worst > 1e-8) o.fail("optimizer relative MSE gap " + sci(worst));
  if (violations) o.fail(std::to_string(violations) + " probes beat the optimum");
  if (o.pass)
    o.detail = "max relative gap to Powell " + sci(worst) + ", probes dominated";
  return o;
}

Outcome monte_carlo() {
  Outcome o;
  const auto g = generate_population(reference_config());
  SimulationOptions opt;
  opt.replications = 100000;
  opt.master_seed = 20240602;
  opt.estimators = {EstimatorKind::Mean, EstimatorKind::T1, EstimatorKind::T2,
                    EstimatorKind::T3, EstimatorKind::T7};
  opt.threads = 0;
  const auto r = run_simulation(g.units, reference_design(), opt);
  std::string gaps;
  for (const auto& row : r.rows) {
    const double limit = row.label == "mean" ? 0.02 : 0.10;
    gaps += row.label + " " + sci(row.relative_gap) + "  ";
    if (!(std::abs(row.relative_gap) <= limit))
      o.fail(row.label + " relative gap " + sci(row.relative_gap));
  }
  const double tp = r.row("tp*").empirical_mse;
  for (const char* other : {"mean", "t3", "t7"})
    if (tp > r.row(other).empirical_mse) o.fail(std::string("tp* not ranked above ") + other);
  if (o.pass) o.detail = "gaps: " + gaps;
  return o;
}

Outcome reproduction() {
  Outcome o;
  cli::CommandConfig c;
  c.subcommand = "reproduce-kk2009";
  const auto doc = cli::build_report(c);
  const auto kk = embedded_kk2009();
  const auto m = moment_set(reconcile_covariances(kk.population).summary, kk.design);
  const auto pre = pre_table(m);
  if (*pre.row(EstimatorKind::Mean).pre != 100.0) o.fail("PRE(mean) != 100");
  if (pre.row(EstimatorKind::Tp).rank != 1) o.fail("tp not ranked first");
  if (pre.row(EstimatorKind::T4).rank != 9) o.fail("t4 not ranked last");

  bool comparison = false, repairs = false, ranking = false;
  for (const auto& s : doc.sections) {
    if (const auto* t = std::get_if<render::Table>(&s)) {
      if (t->name == "pre_comparison") comparison = t->rows.size() == 9;
      if (t->name == "repairs") repairs = !t->rows.empty();
      if (t->name == "ranking") ranking = t->rows.size() == 9;
    }
  }
  if (!comparison) o.fail("published-vs-computed table missing or incomplete");
  if (!repairs) o.fail("repair log missing");
  if (!ranking) o.fail("ranking comparison missing");
  if (o.pass)
    o.detail = "PRE(tp) " + std::to_string(*pre.row(EstimatorKind::Tp).pre) +
               ", tp first, t4 last";
  return o;
}

Outcome invariants(const std::vector<MomentSet>& sets) {
  Outcome o;
  for (const auto& m : sets) {
    if (m.V110 * m.V110 > m.V200 * m.V020 * (1 + 1e-12) ||
        m.V101 * m.V101 > m.V200 * m.V002 * (1 + 1e-12) ||
        m.V011 * m.V011 > m.V020 * m.V002 * (1 + 1e-12))
      o.fail("Cauchy-Schwarz bound violated");
    if (*pre_table(m).row(EstimatorKind::Mean).pre != 100.0) o.fail("PRE(mean) != 100");
  }

  // Census: every stratum fully enumerated, every moment zero.
  std::mt19937_64 gen(5);
  for (int i = 0; i < 200; ++i) {
    auto p = stratest::testing::random_population(gen);
    for (std::size_t h = 0; h < p.design.n_h.size(); ++h)
      p.design.n_h[h] = p.population.strata[h].N_h;
    const auto m = moment_set(p.population, p.design);
    if (m.V200 != 0 || m.V020 != 0 || m.V002 != 0 || m.V110 != 0 || m.V101 != 0 || m.V011 != 0)
      o.fail("census moments not zero");
  }

  // Scale equivariance of point estimates in y.
  const auto g = generate_population(reference_config(11));
  const auto pop = g.summary;
  auto scaled_units = g.units;
  for (auto& s : scaled_units.units)
    for (auto& u : s) u.y *= 3.0;
  const auto scaled_pop = summarize(scaled_units);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto a = draw_sample(g.units, reference_design(), seed);
    const auto b = draw_sample(scaled_units, reference_design(), seed);
    for (auto kind : kAllEstimators) {
      const auto id = kind == EstimatorKind::Tp ? EstimatorId::tp(0.7, -0.3) : EstimatorId::of(kind);
      const double ea = point_estimate(id, a, pop), eb = point_estimate(id, b, scaled_pop);
      if (rel_diff(3.0 * ea, eb) > 1e-12) o.fail("scale equivariance broken for " + id.label());
    }
  }

  // Simulation determinism, serial against threaded.
  SimulationOptions opt;
  opt.replications = 2000;
  opt.master_seed = 9;
  const auto s1 = run_simulation(g.units, reference_design(), opt);
  opt.threads = 4;
  const auto s2 = run_simulation(g.units, reference_design(), opt);
  for (std::size_t i = 0; i < s1.rows.size(); ++i)
    if (s1.rows[i].empirical_mse != s2.rows[i].empirical_mse ||
        s1.rows[i].empirical_mean != s2.rows[i].empirical_mean)
      o.fail("simulation not deterministic across thread counts");
  if (o.pass) o.detail = "all invariant suites hold";
  return o;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  struct Criterion {
    int number;
    const char* title;
    double limit_seconds;
    std::function<Outcome()> check;
  };
  std::vector<MomentSet> sets;
  const auto sets_start = clock::now();
  sets = random_sets(1000, 2024);
  const double setup = std::chrono::duration<double>(clock::now() - sets_start).count();

  const Criterion criteria[] = {
      {1, "nesting identities", 1.0, [&] { return nesting(sets); }},
      {2, "optimizer correctness", 30.0, [&] { return optimizer(sets); }},
      {3, "Monte Carlo validation", 60.0, monte_carlo},
      {4, "published table reproduction", 1.0, reproduction},
      {5, "invariant suites", 60.0, [&] { return invariants(sets); }},
  };

  bool all = true;
  for (const auto& c : criteria) {
    const auto start = clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(clock::now() - start).count();
    if (c.number == 1) seconds += setup;
    if (seconds > c.limit_seconds)
      o.fail("took " + std::to_string(seconds) + " s, limit " +
             std::to_string(c.limit_seconds) + " s");
    all &= o.pass;
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.number,
                c.title, o.detail.c_str(), seconds);
  }
  return all ? 0 : 1;
}
