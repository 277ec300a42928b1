#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratest/data_model.hpp"
#include "stratest/estimators.hpp"
#include "stratest/moments.hpp"

namespace stratest {

struct SyntheticStratum {
  long N_h = 0;
  double mean_y = 0.0, mean_x = 0.0, mean_z = 0.0;
  double sd_y = 0.0, sd_x = 0.0, sd_z = 0.0;
  double rho_yx = 0.0, rho_yz = 0.0, rho_xz = 0.0;
};

struct SyntheticPopulationConfig {
  std::vector<SyntheticStratum> strata;
  std::uint64_t seed = 0;
};

/// Trivariate-normal finite population. The summary is computed from the
/// realized values. Throws InputError for a non-PSD correlation matrix or
/// non-positive target means, NumericalError if a realized mean is ~0.
struct GeneratedPopulation {
  Microdata units;
  PopulationSummary summary;
  std::uint64_t fingerprint = 0;
};

GeneratedPopulation generate_population(const SyntheticPopulationConfig& cfg);

/// FNV-1a over labels and the bit patterns of every value.
std::uint64_t fingerprint(const Microdata& micro);

/// SRSWOR within each stratum by partial Fisher-Yates shuffle.
StratifiedSample draw_sample(const Microdata& pop, const SampleDesign& design,
                             std::uint64_t stream_seed);

struct SimulationOptions {
  std::size_t replications = 1000;
  std::uint64_t master_seed = 0;
  std::vector<EstimatorKind> estimators = {EstimatorKind::Mean, EstimatorKind::T1,
                                           EstimatorKind::T2,   EstimatorKind::T3,
                                           EstimatorKind::T4,   EstimatorKind::T5,
                                           EstimatorKind::T6,   EstimatorKind::T7};
  // Tp at these exponents, in addition to Tp at the theory optimum.
  std::optional<std::pair<double, double>> tp_fixed;
  bool tp_optimal = true;
  // 0 = hardware concurrency. Output does not depend on this.
  unsigned threads = 1;
  // Fraction of non-finite replications above which the run fails.
  double max_nonfinite_fraction = 1e-3;
};

struct SimulationRow {
  EstimatorId id;
  std::string label;  // "tp*" for the optimum
  double empirical_mean = 0.0;
  double empirical_bias = 0.0;
  double empirical_mse = 0.0;
  double theoretical_mse = 0.0;
  std::optional<double> theoretical_bias;
  double relative_gap = 0.0;  // (empirical - theoretical) / theoretical
  std::size_t nonfinite = 0;
};

struct SimulationReport {
  std::vector<SimulationRow> rows;
  std::size_t replications = 0;
  std::uint64_t master_seed = 0;
  std::string generator;
  std::uint64_t population_fingerprint = 0;
  SampleDesign design;
  MomentSet moments;

  const SimulationRow& row(const std::string& label) const;
};

SimulationReport run_simulation(const Microdata& pop, const SampleDesign& design,
                                const SimulationOptions& opts);

/// Three strata (N = 200/300/500, n = 20/30/50), correlations
/// 0.9/0.8/0.7, coefficients of variation <= 0.3.
SyntheticPopulationConfig reference_config(std::uint64_t seed = 20240601);
SampleDesign reference_design();

/// Pairwise (cascade) summation: result depends only on the order of
/// `values`, not on how the work was split.
double pairwise_sum(const double* values, std::size_t n);

}  // namespace stratest
