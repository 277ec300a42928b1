#include "stratest/efficiency.hpp"

#include <algorithm>
#include <numeric>

#include "stratest/errors.hpp"

namespace stratest {

const PreRow& PreReport::row(EstimatorKind kind) const {
  for (const auto& r : rows)
    if (r.id.kind == kind) return r;
  throw InputError("no row for estimator " + std::string(to_string(kind)));
}

PreReport pre_table(const MomentSet& m, std::string provenance) {
  PreReport report;
  report.optimum = optimal_m(m);
  report.provenance = std::move(provenance);
  const double v = variance_mean(m);
  const double tp_mse = mse_tp(m, report.optimum.m1, report.optimum.m2).mse;

  for (auto kind : kAllEstimators) {
    PreRow r;
    r.id = kind == EstimatorKind::Tp ? EstimatorId::tp(report.optimum.m1, report.optimum.m2)
                                     : EstimatorId::of(kind);
    r.mse = kind == EstimatorKind::Tp ? tp_mse : mse_classic(kind, m);
    if (kind == EstimatorKind::Mean)
      r.pre = v != 0.0 ? std::optional<double>(100.0) : std::nullopt;
    else if (r.mse != 0.0)
      r.pre = 100.0 * v / r.mse;
    r.delta_vs_tp = r.mse - tp_mse;
    r.negative_mse = r.mse < 0.0;
    report.rows.push_back(r);
  }

  std::vector<std::size_t> order(report.rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return report.rows[a].mse < report.rows[b].mse;
  });
  for (std::size_t i = 0; i < order.size(); ++i)
    report.rows[order[i]].rank = static_cast<int>(i) + 1;
  return report;
}

std::vector<DominanceEntry> dominance_report(const MomentSet& m) {
  const double tp_mse = min_mse_tp(m).mse;
  std::vector<DominanceEntry> out;
  for (auto kind : kAllEstimators) {
    if (kind == EstimatorKind::Tp) continue;
    DominanceEntry e;
    e.id = EstimatorId::of(kind);
    e.difference = mse_classic(kind, m) - tp_mse;
    e.satisfied = e.difference >= 0.0;
    // Every closed form except t7's is the tp quadratic at some point of
    // the (a1, a2) plane: mean (0,0), t1 (1,0), t2 (1/2,0), t3..t6
    // (+-1/2, +-1/2). The t7 formula sums stratum-level correlations
    // instead and can undercut the optimum.
    e.nested = kind != EstimatorKind::T7;
    out.push_back(e);
  }
  return out;
}

}  // namespace stratest
