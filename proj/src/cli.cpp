#include "stratest/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stratest/efficiency.hpp"
#include "stratest/errors.hpp"
#include "stratest/moments.hpp"
#include "stratest/mse_theory.hpp"

namespace stratest::cli {

namespace {

using render::Cell;
using render::Document;
using render::Fields;
using render::Table;

constexpr const char* kFormulaVariant =
    "implemented: tp MSE in scale-consistent form, optimum by linear solve; "
    "published P2/P3 and optimum formulas shown as diagnostics only";

Cell opt_cell(const std::optional<double>& v) {
  return v ? Cell{*v} : Cell{};
}

struct LoadedInput {
  PopulationSummary population;
  SampleDesign design;
  std::string source;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

LoadedInput load_input(const CommandConfig& cfg) {
  LoadedInput in;
  std::optional<SampleDesign> design;
  if (!cfg.input) {
    auto kk = embedded_kk2009();
    in.population = std::move(kk.population);
    design = std::move(kk.design);
    in.source = "embedded kk2009 dataset";
  } else if (ends_with(*cfg.input, ".csv")) {
    in.population = summarize(read_microdata_file(*cfg.input));
    in.source = "microdata " + *cfg.input;
  } else {
    auto doc = read_summary_file(*cfg.input);
    in.population = std::move(doc.population);
    design = std::move(doc.design);
    in.source = "summary " + *cfg.input;
  }
  if (cfg.n_h) design = SampleDesign{*cfg.n_h};
  if (!design) throw InputError("no sample sizes: pass --n-h or include 'n_h' in the summary");
  in.design = std::move(*design);
  validate(in.population, in.design);
  return in;
}

Table repair_table(const ReconciliationReport& report, bool with_policy = false) {
  Table t;
  t.name = "repairs";
  t.title = "Covariance reconciliation (entries other than 'consistent')";
  if (with_policy) t.columns.push_back("policy");
  for (const char* c : {"stratum", "pair", "status", "old_covariance", "new_covariance",
                        "old_correlation", "new_correlation", "note"})
    t.columns.push_back(c);
  for (const auto& e : report.changes()) {
    std::vector<Cell> row;
    if (with_policy) row.push_back(std::string(to_string(report.policy)));
    row.push_back(std::int64_t{e.stratum});
    row.push_back(e.pair);
    row.push_back(std::string(to_string(e.kind)));
    row.push_back(std::isnan(e.old_covariance) ? Cell{} : Cell{e.old_covariance});
    row.push_back(e.new_covariance);
    row.push_back(opt_cell(e.old_correlation));
    row.push_back(e.new_correlation);
    row.push_back(e.note);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void add_repair_warnings(Document& doc, const ReconciliationReport& report) {
  for (const auto& e : report.changes()) {
    if (e.kind == RepairKind::Derived) continue;
    std::ostringstream os;
    os.precision(10);
    os << "[" << to_string(report.policy) << "] stratum " << e.stratum << " pair " << e.pair
       << ": " << to_string(e.kind) << " (covariance " << e.old_covariance << " -> "
       << e.new_covariance << ", correlation ";
    if (e.old_correlation)
      os << *e.old_correlation;
    else
      os << "n/a";
    os << " -> " << e.new_correlation << ")";
    doc.warnings.push_back(os.str());
  }
}

Fields moment_fields(const MomentSet& m) {
  Fields f;
  f.name = "moments";
  f.title = "Relative moments";
  f.items = {{"V200", m.V200}, {"V020", m.V020}, {"V002", m.V002}, {"V110", m.V110},
             {"V101", m.V101}, {"V011", m.V011}, {"Ybar", m.Ybar}, {"Xbar", m.Xbar},
             {"Zbar", m.Zbar}, {"B1", opt_cell(m.B1)}, {"B2", opt_cell(m.B2)},
             {"regression_kernel", opt_cell(m.regression_kernel)}};
  return f;
}

Table design_table(const PopulationSummary& pop, const SampleDesign& design) {
  Table t;
  t.name = "design";
  t.title = "Design";
  t.columns = {"stratum", "N_h", "n_h", "W_h", "f_h"};
  const auto factors = design_factors(pop, design);
  for (std::size_t h = 0; h < factors.size(); ++h)
    t.rows.push_back({std::int64_t{pop.strata[h].index}, std::int64_t{pop.strata[h].N_h},
                      std::int64_t{design.n_h[h]}, factors[h].W_h, factors[h].f_h});
  return t;
}

void base_provenance(Document& doc, const std::string& source, CovariancePolicy policy) {
  doc.provenance.emplace_back("input", source);
  doc.provenance.emplace_back("covariance_policy", std::string(to_string(policy)));
  doc.provenance.emplace_back("formula_variant", std::string(kFormulaVariant));
}

struct Prepared {
  LoadedInput input;
  Reconciled reconciled;
  MomentSet moments;
};

Prepared prepare(const CommandConfig& cfg) {
  Prepared p;
  p.input = load_input(cfg);
  p.reconciled = reconcile_covariances(p.input.population, {.policy = cfg.policy});
  p.moments = moment_set(p.reconciled.summary, p.input.design);
  return p;
}

Document moments_report(const CommandConfig& cfg) {
  const auto p = prepare(cfg);
  Document doc;
  doc.kind = "moments";
  doc.sections.push_back(moment_fields(p.moments));
  doc.sections.push_back(design_table(p.reconciled.summary, p.input.design));
  doc.sections.push_back(repair_table(p.reconciled.report));
  add_repair_warnings(doc, p.reconciled.report);
  if (!p.moments.B1 || !p.moments.B2)
    doc.warnings.push_back("B1/B2 undefined: every stratum is a census or auxiliary is constant");
  base_provenance(doc, p.input.source, cfg.policy);
  return doc;
}

std::vector<Cell> mse_row(const MseBreakdown& b, const std::string& label) {
  const bool tp = b.id.kind == EstimatorKind::Tp;
  return {label,
          tp ? Cell{b.id.m1} : Cell{},
          tp ? Cell{b.id.m2} : Cell{},
          b.mse,
          opt_cell(b.bias),
          opt_cell(b.P1),
          opt_cell(b.P2),
          opt_cell(b.P3),
          b.negative};
}

Document mse_report(const CommandConfig& cfg) {
  const auto p = prepare(cfg);
  const auto& m = p.moments;
  const auto opt = optimal_m(m);

  Document doc;
  doc.kind = "mse";
  Table t;
  t.name = "mse";
  t.title = "First-order MSE";
  t.columns = {"estimator", "m1", "m2", "mse", "bias", "P1", "P2", "P3", "negative"};
  for (auto kind : kAllEstimators) {
    if (kind == EstimatorKind::Tp) continue;
    const auto b = mse_of(EstimatorId::of(kind), m);
    t.rows.push_back(mse_row(b, std::string(to_string(kind))));
    if (b.negative)
      doc.warnings.push_back(std::string(to_string(kind)) +
                             ": negative first-order MSE (approximation breaks down)");
  }
  const double m1 = cfg.m1.value_or(opt.m1);
  const double m2 = cfg.m2.value_or(opt.m2);
  if (cfg.m1 || cfg.m2) t.rows.push_back(mse_row(mse_tp(m, m1, m2), "tp"));
  const auto best = mse_tp(m, opt.m1, opt.m2);
  t.rows.push_back(mse_row(best, "tp*"));
  if (best.negative) doc.warnings.push_back("tp*: negative first-order MSE");
  doc.sections.push_back(std::move(t));

  Fields o;
  o.name = "optimum";
  o.title = "Optimal exponents";
  o.items = {{"m1", opt.m1},
             {"m2", opt.m2},
             {"determinant", opt.determinant},
             {"relative_determinant", opt.relative_determinant},
             {"min_mse", best.mse}};
  doc.sections.push_back(std::move(o));

  const auto d = tp_diagnostics(m, m1, m2);
  Table diag;
  diag.name = "diagnostics";
  diag.title = "Implemented vs published formulas (tp at m1 = " + std::to_string(m1) +
               ", m2 = " + std::to_string(m2) + ")";
  diag.columns = {"quantity", "implemented", "published", "difference"};
  auto add = [&](const std::string& q, const std::optional<double>& impl,
                 const std::optional<double>& pub) {
    Cell diff = impl && pub ? Cell{*impl - *pub} : Cell{};
    diag.rows.push_back({q, opt_cell(impl), opt_cell(pub), diff});
  };
  add("P2", d.P2_implemented, d.P2_printed);
  add("P3", d.P3_implemented, d.P3_printed);
  add("mse_tp", d.mse_implemented, d.mse_printed);
  add("m1_optimum", d.m1_optimum, d.m1_printed_optimum);
  add("m2_optimum", d.m2_optimum, d.m2_printed_optimum);
  add("mse_at_optimum", d.mse_at_optimum, d.mse_at_printed_optimum);
  add("bias_cross_coefficient", d.bias_cross_coefficient_from_P1,
      d.bias_cross_coefficient_printed);
  doc.sections.push_back(std::move(diag));

  doc.sections.push_back(repair_table(p.reconciled.report));
  add_repair_warnings(doc, p.reconciled.report);
  base_provenance(doc, p.input.source, cfg.policy);
  return doc;
}

Table pre_section(const PreReport& r) {
  Table t;
  t.name = "pre";
  t.title = "Percent relative efficiency (tp at optimum)";
  t.columns = {"estimator", "mse", "pre", "rank", "delta_mse_vs_tp"};
  for (const auto& row : r.rows)
    t.rows.push_back({std::string(to_string(row.id.kind)), row.mse, opt_cell(row.pre),
                      std::int64_t{row.rank}, row.delta_vs_tp});
  return t;
}

Document pre_report(const CommandConfig& cfg) {
  const auto p = prepare(cfg);
  Document doc;
  doc.kind = "pre";
  const auto report = pre_table(p.moments, std::string(to_string(cfg.policy)));
  doc.sections.push_back(pre_section(report));

  Table dom;
  dom.name = "dominance";
  dom.title = "MSE(t_i) - min MSE(tp)";
  dom.columns = {"estimator", "difference", "satisfied", "nested"};
  for (const auto& e : dominance_report(p.moments)) {
    dom.rows.push_back({std::string(to_string(e.id.kind)), e.difference, e.satisfied, e.nested});
    if (!e.satisfied)
      doc.warnings.push_back("tp does not dominate " + std::string(to_string(e.id.kind)) +
                             " at first order");
  }
  doc.sections.push_back(std::move(dom));
  for (const auto& row : report.rows) {
    if (row.negative_mse)
      doc.warnings.push_back(std::string(to_string(row.id.kind)) + ": negative first-order MSE");
    if (!row.pre) doc.warnings.push_back(std::string(to_string(row.id.kind)) + ": PRE undefined (zero MSE)");
  }
  doc.sections.push_back(Fields{"optimum", "Optimal exponents",
                                {{"m1", report.optimum.m1}, {"m2", report.optimum.m2}}});
  doc.sections.push_back(repair_table(p.reconciled.report));
  add_repair_warnings(doc, p.reconciled.report);
  base_provenance(doc, p.input.source, cfg.policy);
  return doc;
}

Document simulate_report(const CommandConfig& cfg) {
  Microdata population;
  SampleDesign design;
  std::string source;
  std::optional<SyntheticPopulationConfig> synthetic;

  if (cfg.input) {
    population = read_microdata_file(*cfg.input);
    if (!cfg.n_h) throw InputError("simulate with --input needs --n-h");
    design = SampleDesign{*cfg.n_h};
    source = "finite population " + *cfg.input;
  } else {
    SyntheticDocument doc;
    if (cfg.config) {
      std::ifstream in(*cfg.config);
      if (!in) throw InputError("cannot open '" + *cfg.config + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      doc = parse_synthetic_config(ss.str());
      source = "synthetic population " + *cfg.config;
    } else {
      doc.config = reference_config();
      doc.design = reference_design();
      doc.has_seed = true;
      source = "built-in reference synthetic population";
    }
    if (!doc.has_seed) doc.config.seed = cfg.seed;
    if (cfg.n_h) doc.design = SampleDesign{*cfg.n_h};
    if (!doc.design) throw InputError("no sample sizes: pass --n-h or include 'n_h' in the config");
    design = *doc.design;
    population = generate_population(doc.config).units;
    synthetic = doc.config;
  }

  SimulationOptions opts;
  opts.replications = cfg.replications;
  opts.master_seed = cfg.seed;
  opts.threads = cfg.threads;
  if (cfg.m1 || cfg.m2) opts.tp_fixed = std::pair{cfg.m1.value_or(0.0), cfg.m2.value_or(0.0)};
  const auto report = run_simulation(population, design, opts);

  Document doc;
  doc.kind = "simulate";
  Table t;
  t.name = "simulation";
  t.title = "Empirical vs first-order theory";
  t.columns = {"estimator",       "m1",               "m2",           "empirical_mean",
               "empirical_bias",  "empirical_mse",    "theoretical_mse", "theoretical_bias",
               "relative_gap",    "nonfinite"};
  for (const auto& r : report.rows) {
    const bool tp = r.id.kind == EstimatorKind::Tp;
    t.rows.push_back({r.label, tp ? Cell{r.id.m1} : Cell{}, tp ? Cell{r.id.m2} : Cell{},
                      r.empirical_mean, r.empirical_bias, r.empirical_mse, r.theoretical_mse,
                      opt_cell(r.theoretical_bias), r.relative_gap,
                      static_cast<std::uint64_t>(r.nonfinite)});
    if (r.nonfinite)
      doc.warnings.push_back(r.label + ": " + std::to_string(r.nonfinite) +
                             " non-finite replications excluded");
  }
  doc.sections.push_back(std::move(t));

  Fields run;
  run.name = "run";
  run.title = "Run";
  run.items = {{"replications", static_cast<std::uint64_t>(report.replications)},
               {"seed", report.master_seed},
               {"generator", report.generator},
               {"population_fingerprint", report.population_fingerprint},
               {"N", static_cast<std::int64_t>(population.num_records())},
               {"n", static_cast<std::int64_t>(design.total())},
               {"Ybar", report.moments.Ybar}};
  doc.sections.push_back(std::move(run));

  if (synthetic) {
    Table c;
    c.name = "config";
    c.title = "Synthetic population config (population seed " +
              std::to_string(synthetic->seed) + ")";
    c.columns = {"stratum", "N_h", "n_h",    "mean_y", "mean_x", "mean_z",
                 "sd_y",    "sd_x", "sd_z",  "rho_yx", "rho_yz", "rho_xz"};
    for (std::size_t h = 0; h < synthetic->strata.size(); ++h) {
      const auto& s = synthetic->strata[h];
      c.rows.push_back({static_cast<std::int64_t>(h + 1), std::int64_t{s.N_h},
                        std::int64_t{design.n_h.at(h)}, s.mean_y, s.mean_x, s.mean_z, s.sd_y,
                        s.sd_x, s.sd_z, s.rho_yx, s.rho_yz, s.rho_xz});
    }
    doc.sections.push_back(std::move(c));
  }
  doc.sections.push_back(moment_fields(report.moments));
  doc.provenance.emplace_back("input", source);
  doc.provenance.emplace_back("covariance_policy",
                              std::string("not applicable (moments from realized population)"));
  doc.provenance.emplace_back("formula_variant", std::string(kFormulaVariant));
  doc.provenance.emplace_back("seed", cfg.seed);
  if (synthetic) doc.provenance.emplace_back("population_seed", synthetic->seed);
  doc.provenance.emplace_back("generator", report.generator);
  return doc;
}

std::vector<int> ranks_descending(const std::vector<double>& pre) {
  std::vector<std::size_t> order(pre.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pre[a] > pre[b]; });
  std::vector<int> rank(pre.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i) + 1;
  return rank;
}

Document reproduce_report(const CommandConfig& cfg) {
  const auto kk = embedded_kk2009();
  const std::vector<double> published(std::begin(kPublishedPre), std::end(kPublishedPre));
  const auto published_rank = ranks_descending(published);

  auto evaluate_policy = [&](CovariancePolicy policy) {
    auto rec = reconcile_covariances(kk.population, {.policy = policy});
    auto m = moment_set(rec.summary, kk.design);
    auto pre = pre_table(m, std::string(to_string(policy)));
    return std::tuple{std::move(rec), m, std::move(pre)};
  };
  const auto [rec_c, m_c, pre_c] = evaluate_policy(CovariancePolicy::PreferCorrelation);
  const auto [rec_v, m_v, pre_v] = evaluate_policy(CovariancePolicy::PreferCovariance);

  Document doc;
  doc.kind = "reproduce-kk2009";
  Table t;
  t.name = "pre_comparison";
  t.title = "PRE: published vs computed (headline: prefer-correlation)";
  t.columns = {"estimator",     "published_pre", "pre",
               "delta",         "relative_delta", "published_rank",
               "rank",          "rank_match",    "pre_prefer_covariance",
               "rank_prefer_covariance"};
  for (std::size_t i = 0; i < pre_c.rows.size(); ++i) {
    const auto& rc = pre_c.rows[i];
    const auto& rv = pre_v.rows[i];
    Cell delta, rel;
    if (rc.pre) {
      delta = *rc.pre - published[i];
      rel = (*rc.pre - published[i]) / published[i];
    }
    const bool match = rc.rank == published_rank[i];
    t.rows.push_back({std::string(to_string(rc.id.kind)), published[i], opt_cell(rc.pre), delta,
                      rel, std::int64_t{published_rank[i]}, std::int64_t{rc.rank}, match,
                      opt_cell(rv.pre), std::int64_t{rv.rank}});
  }
  doc.sections.push_back(std::move(t));

  Table ranking;
  ranking.name = "ranking";
  ranking.title = "Ranking (best first)";
  ranking.columns = {"position", "published", "prefer_correlation", "match"};
  std::vector<std::string> by_pub(published.size()), by_comp(published.size());
  for (std::size_t i = 0; i < published.size(); ++i) {
    by_pub[static_cast<std::size_t>(published_rank[i] - 1)] =
        std::string(to_string(kAllEstimators[i]));
    by_comp[static_cast<std::size_t>(pre_c.rows[i].rank - 1)] =
        std::string(to_string(kAllEstimators[i]));
  }
  std::size_t mismatches = 0;
  for (std::size_t k = 0; k < by_pub.size(); ++k) {
    const bool match = by_pub[k] == by_comp[k];
    mismatches += !match;
    ranking.rows.push_back({static_cast<std::int64_t>(k + 1), by_pub[k], by_comp[k], match});
  }
  doc.sections.push_back(std::move(ranking));

  const auto& tp_row = pre_c.row(EstimatorKind::Tp);
  const auto& t4_row = pre_c.row(EstimatorKind::T4);
  Fields checks;
  checks.name = "checks";
  checks.title = "Checks (prefer-correlation)";
  checks.items = {{"pre_mean_is_100", pre_c.row(EstimatorKind::Mean).pre == 100.0},
                  {"tp_ranked_first", tp_row.rank == 1},
                  {"t4_ranked_last", t4_row.rank == static_cast<int>(pre_c.rows.size())},
                  {"ranking_mismatches", static_cast<std::int64_t>(mismatches)},
                  {"published_ranking", [&] {
                     std::string s;
                     for (const auto& e : by_pub) s += (s.empty() ? "" : " > ") + e;
                     return s;
                   }()},
                  {"computed_ranking", [&] {
                     std::string s;
                     for (const auto& e : by_comp) s += (s.empty() ? "" : " > ") + e;
                     return s;
                   }()},
                  {"m1_optimum", pre_c.optimum.m1},
                  {"m2_optimum", pre_c.optimum.m2},
                  {"m1_optimum_prefer_covariance", pre_v.optimum.m1},
                  {"m2_optimum_prefer_covariance", pre_v.optimum.m2}};
  doc.sections.push_back(std::move(checks));
  if (mismatches)
    doc.warnings.push_back(std::to_string(mismatches) +
                           " ranking position(s) differ from the published table");

  Table repairs = repair_table(rec_c.report, true);
  for (auto& row : repair_table(rec_v.report, true).rows) repairs.rows.push_back(std::move(row));
  doc.sections.push_back(std::move(repairs));
  add_repair_warnings(doc, rec_c.report);
  add_repair_warnings(doc, rec_v.report);

  auto mc = moment_fields(m_c);
  mc.name = "moments_prefer_correlation";
  mc.title = "Relative moments (prefer-correlation)";
  doc.sections.push_back(std::move(mc));
  auto mv = moment_fields(m_v);
  mv.name = "moments_prefer_covariance";
  mv.title = "Relative moments (prefer-covariance)";
  doc.sections.push_back(std::move(mv));

  doc.provenance.emplace_back("input", std::string("embedded kk2009 dataset"));
  doc.provenance.emplace_back("covariance_policy",
                              std::string("prefer-correlation (headline), prefer-covariance"));
  doc.provenance.emplace_back("formula_variant", std::string(kFormulaVariant));
  (void)cfg;
  return doc;
}

}  // namespace

SyntheticDocument parse_synthetic_config(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("synthetic config: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("synthetic config: top level must be an object");
  SyntheticDocument out;
  for (const auto& [key, value] : doc.items()) {
    if (key == "seed") {
      if (!value.is_number_unsigned()) throw InputError("synthetic config: seed must be a u64");
      out.config.seed = value.get<std::uint64_t>();
      out.has_seed = true;
    } else if (key == "n_h") {
      SampleDesign d;
      for (const auto& v : value) {
        if (!v.is_number_integer()) throw InputError("synthetic config: n_h entries must be integers");
        d.n_h.push_back(v.get<long>());
      }
      out.design = d;
    } else if (key == "strata") {
      std::size_t pos = 0;
      for (const auto& s : value) {
        ++pos;
        const std::string where = "synthetic config: strata[" + std::to_string(pos) + "]";
        SyntheticStratum st;
        const std::pair<const char*, double SyntheticStratum::*> fields[] = {
            {"mean_y", &SyntheticStratum::mean_y}, {"mean_x", &SyntheticStratum::mean_x},
            {"mean_z", &SyntheticStratum::mean_z}, {"sd_y", &SyntheticStratum::sd_y},
            {"sd_x", &SyntheticStratum::sd_x},     {"sd_z", &SyntheticStratum::sd_z},
            {"rho_yx", &SyntheticStratum::rho_yx}, {"rho_yz", &SyntheticStratum::rho_yz},
            {"rho_xz", &SyntheticStratum::rho_xz}};
        for (const auto& [k, v] : s.items()) {
          if (k == "N_h") {
            if (!v.is_number_integer()) throw InputError(where + ".N_h: expected an integer");
            st.N_h = v.get<long>();
            continue;
          }
          auto f = std::find_if(std::begin(fields), std::end(fields),
                                [&](const auto& p) { return k == p.first; });
          if (f == std::end(fields)) throw InputError(where + ": unknown field '" + k + "'");
          if (!v.is_number()) throw InputError(where + "." + k + ": expected a number");
          st.*(f->second) = v.get<double>();
        }
        for (const char* req : {"N_h", "mean_y", "mean_x", "mean_z", "sd_y", "sd_x", "sd_z",
                                "rho_yx", "rho_yz", "rho_xz"})
          if (!s.contains(req)) throw InputError(where + ": missing field '" + req + "'");
        out.config.strata.push_back(st);
      }
    } else {
      throw InputError("synthetic config: unknown field '" + key + "'");
    }
  }
  if (out.config.strata.empty()) throw InputError("synthetic config: no strata");
  return out;
}

render::Document build_report(const CommandConfig& cfg) {
  if (cfg.subcommand == "moments") return moments_report(cfg);
  if (cfg.subcommand == "mse") return mse_report(cfg);
  if (cfg.subcommand == "pre") return pre_report(cfg);
  if (cfg.subcommand == "simulate") return simulate_report(cfg);
  if (cfg.subcommand == "reproduce-kk2009") return reproduce_report(cfg);
  throw InputError("unknown subcommand '" + cfg.subcommand + "'");
}

RunResult run(const CommandConfig& cfg) {
  RunResult r;
  try {
    r.output = render::render(build_report(cfg), cfg.format);
  } catch (const InputError& e) {
    r.exit_code = kInputError;
    r.error = std::string("input error: ") + e.what();
  } catch (const NumericalError& e) {
    r.exit_code = kNumericalError;
    r.error = std::string("numerical error: ") + e.what();
  } catch (const ValidationError& e) {
    r.exit_code = kValidationError;
    r.error = std::string("validation failed: ") + e.what();
  } catch (const std::exception& e) {
    r.exit_code = kInternalError;
    r.error = std::string("error: ") + e.what();
  }
  return r;
}

}  // namespace stratest::cli
