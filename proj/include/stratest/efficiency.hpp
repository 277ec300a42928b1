#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stratest/mse_theory.hpp"

namespace stratest {

struct PreRow {
  EstimatorId id;
  double mse = 0.0;
  std::optional<double> pre;  // empty when mse == 0
  int rank = 0;               // 1 = smallest MSE
  double delta_vs_tp = 0.0;   // mse - min MSE(tp)
  bool negative_mse = false;
};

struct PreReport {
  std::vector<PreRow> rows;  // mean, t1..t7, tp(optimal), in that order
  OptimalExponents optimum;
  std::string provenance;

  const PreRow& row(EstimatorKind kind) const;
};

/// PRE_i = 100 V(ybar_st) / MSE_i with tp at its optimum. Ranks by MSE,
/// ties broken by enumeration order.
PreReport pre_table(const MomentSet& m, std::string provenance = {});

struct DominanceEntry {
  EstimatorId id;
  double difference = 0.0;  // MSE(t_i) - min MSE(tp)
  bool satisfied = false;   // difference >= 0
  bool nested = false;      // t_i is a special case of tp
};

/// MSE(t_i) - min MSE(tp) for mean and t1..t7.
std::vector<DominanceEntry> dominance_report(const MomentSet& m);

}  // namespace stratest
