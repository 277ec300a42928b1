#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratest/data_model.hpp"
#include "stratest/monte_carlo.hpp"
#include "stratest/render.hpp"

namespace stratest::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kInputError = 2,
  kNumericalError = 3,
  kValidationError = 4,
};

struct CommandConfig {
  std::string subcommand;  // moments | mse | pre | simulate | reproduce-kk2009
  std::optional<std::string> input;
  std::optional<std::string> config;  // synthetic population (simulate)
  std::optional<std::vector<long>> n_h;
  CovariancePolicy policy = CovariancePolicy::PreferCorrelation;
  render::Format format = render::Format::Text;
  std::uint64_t seed = 42;
  std::size_t replications = 10000;
  std::optional<double> m1;
  std::optional<double> m2;
  unsigned threads = 1;
};

struct RunResult {
  int exit_code = kOk;
  std::string output;
  std::string error;
};

/// Executes one subcommand. Never throws; failures map to exit codes.
RunResult run(const CommandConfig& cfg);

/// Builds the report document without rendering (throws on failure).
render::Document build_report(const CommandConfig& cfg);

/// Published PRE values for the embedded dataset, in estimator order
/// mean, t1..t7, tp.
inline constexpr double kPublishedPre[] = {100,    1029.46, 370.17,  2045.43, 27.94,
                                           126.41, 77.21,   2360.54, 4656.35};

/// JSON document {"seed"?, "strata": [{N_h, mean_y, ..., rho_xz}], "n_h"?}.
struct SyntheticDocument {
  SyntheticPopulationConfig config;
  std::optional<SampleDesign> design;
  bool has_seed = false;
};
SyntheticDocument parse_synthetic_config(const std::string& text);

}  // namespace stratest::cli
