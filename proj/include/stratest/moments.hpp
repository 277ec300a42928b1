#pragma once

#include <optional>
#include <vector>

#include "stratest/data_model.hpp"

namespace stratest {

struct DesignFactor {
  double W_h = 0.0;  // N_h / N
  double f_h = 0.0;  // 1/n_h - 1/N_h
};

std::vector<DesignFactor> design_factors(const PopulationSummary& pop,
                                         const SampleDesign& design);

/// Second-order relative moments of (e0, e1, e2), the relative errors of the
/// stratified means of y, x and z, with the population means alongside.
struct MomentSet {
  double V200 = 0.0;
  double V020 = 0.0;
  double V002 = 0.0;
  double V110 = 0.0;
  double V101 = 0.0;
  double V011 = 0.0;
  double Ybar = 1.0;
  double Xbar = 1.0;
  double Zbar = 1.0;
  // Combined regression slopes of y on x and y on z; empty when every
  // stratum is a census.
  std::optional<double> B1;
  std::optional<double> B2;
  // sum W_h^2 f_h S_yh^2 (1 - rho_yx^2 - rho_yz^2 + 2 rho_yx rho_yz rho_xz):
  // the stratum-level sum behind the two-auxiliary regression MSE. Empty
  // for moment sets built without stratum detail.
  std::optional<double> regression_kernel;

  // B1 * Xbar / Ybar and B2 * Zbar / Ybar; zero when the slope is absent.
  double D1() const { return B1.value_or(0.0) * Xbar / Ybar; }
  double D2() const { return B2.value_or(0.0) * Zbar / Ybar; }
};

/// Aggregates a reconciled summary. Covariances are taken as given,
/// B1/B2 are built from correlations. Throws NumericalError on a
/// (near-)zero population mean.
MomentSet moment_set(const PopulationSummary& pop, const SampleDesign& design);

}  // namespace stratest
