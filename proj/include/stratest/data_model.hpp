#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stratest {

/// Known population quantities for one stratum. SDs and covariances use
/// divisor N_h - 1. A covariance/correlation pair may have either side
/// missing on input; reconcile_covariances() fills both.
struct StratumSummary {
  int index = 1;
  long N_h = 0;
  double Ybar_h = 0.0;
  double Xbar_h = 0.0;
  double Zbar_h = 0.0;
  double S_yh = 0.0;
  double S_xh = 0.0;
  double S_zh = 0.0;
  std::optional<double> S_yxh;
  std::optional<double> S_yzh;
  std::optional<double> S_xzh;
  std::optional<double> rho_yxh;
  std::optional<double> rho_yzh;
  std::optional<double> rho_xzh;
  // Kurtosis metadata, carried but never used in any computation.
  std::optional<double> beta2_x;
  std::optional<double> beta2_y;
  std::optional<double> beta2_z;

  bool operator==(const StratumSummary&) const = default;
};

struct PopulationSummary {
  std::vector<StratumSummary> strata;

  std::size_t num_strata() const { return strata.size(); }
  long total_size() const;
  double weight(std::size_t h) const;
  double Ybar() const;
  double Xbar() const;
  double Zbar() const;

  bool operator==(const PopulationSummary&) const = default;
};

struct SampleDesign {
  std::vector<long> n_h;

  long total() const;
  bool operator==(const SampleDesign&) const = default;
};

struct Observation {
  double y = 0.0;
  double x = 0.0;
  double z = 0.0;
  bool operator==(const Observation&) const = default;
};

/// Population (or file) records grouped by stratum label in first-appearance
/// order.
struct Microdata {
  std::vector<std::string> labels;
  std::vector<std::vector<Observation>> units;

  std::size_t num_strata() const { return labels.size(); }
  std::size_t num_records() const;
  bool operator==(const Microdata&) const = default;
};

/// Observations drawn without replacement, one sequence per stratum, along
/// with the unit indices they came from.
struct StratifiedSample {
  SampleDesign design;
  std::vector<std::vector<Observation>> units;
  std::vector<std::vector<std::size_t>> unit_ids;
};

/// Throws InputError on any violated invariant (N_h >= 2, SDs >= 0,
/// correlations in [-1, 1], contiguous indices).
void validate(const PopulationSummary& pop);
void validate(const PopulationSummary& pop, const SampleDesign& design);

// --- microdata ------------------------------------------------------------

/// Parses a comma-separated table with header `stratum,y,x,z`.
Microdata parse_microdata(std::string_view text);
Microdata read_microdata_file(const std::string& path);
std::string write_microdata(const Microdata& micro);

/// Exact finite-population summary: means, SDs and covariances with
/// divisor N_h - 1, correlations from the same covariances. Throws
/// NumericalError if x or z has zero variance in some stratum.
PopulationSummary summarize(const Microdata& micro);

// --- reconciliation -------------------------------------------------------

enum class CovariancePolicy { PreferCorrelation, PreferCovariance, Strict };

std::string_view to_string(CovariancePolicy policy);
CovariancePolicy parse_policy(std::string_view name);

enum class RepairKind {
  Consistent,  // replaced within tolerance
  Repaired,    // pair disagreed beyond tolerance; preferred side kept
  Derived,     // correlation missing, computed from the covariance
  Rescaled,    // impossible value fixed by a power-of-ten shift
  Unrepaired,  // implausible and no shift fixes it; left as is
};

std::string_view to_string(RepairKind kind);

struct RepairEntry {
  int stratum = 0;
  std::string pair;  // "yx", "yz" or "xz"
  RepairKind kind = RepairKind::Consistent;
  double old_covariance = 0.0;
  double new_covariance = 0.0;
  std::optional<double> old_correlation;
  double new_correlation = 0.0;
  std::string note;
};

struct ReconciliationOptions {
  CovariancePolicy policy = CovariancePolicy::PreferCorrelation;
  // Allowed |S_ab/(S_a S_b) - rho_ab|.
  double tolerance = 0.01;
  // Smallest eigenvalue admitted for a stratum correlation matrix. Printed
  // correlations carry three decimals, so each entry may be off by 5e-4 and
  // the spectrum by up to sqrt(6) * 5e-4.
  double psd_tolerance = 1.5e-3;
  // Largest power-of-ten shift tried when repairing an impossible value.
  int max_shift = 6;
};

struct ReconciliationReport {
  CovariancePolicy policy = CovariancePolicy::PreferCorrelation;
  std::vector<RepairEntry> entries;

  std::size_t count(RepairKind kind) const;
  // Entries other than Consistent.
  std::vector<RepairEntry> changes() const;
};

struct Reconciled {
  PopulationSummary summary;
  ReconciliationReport report;
};

/// Makes every covariance/correlation pair present and consistent. Under
/// Strict, any disagreement or implausible value throws ValidationError.
Reconciled reconcile_covariances(const PopulationSummary& pop,
                                 const ReconciliationOptions& opts = {});

/// Smallest eigenvalue of the stratum's y/x/z correlation matrix. Requires
/// all three correlations.
double min_correlation_eigenvalue(double rho_yx, double rho_yz, double rho_xz);

// --- embedded dataset -----------------------------------------------------

struct DesignedPopulation {
  PopulationSummary population;
  SampleDesign design;
};

/// Six-stratum school dataset (teachers / students / classes), verbatim
/// including its known transcription errors. No xz correlations are given.
DesignedPopulation embedded_kk2009();

// --- summary document -----------------------------------------------------

/// JSON document: {"strata": [{field: value, ...}], "n_h": [...]}. Field
/// names match StratumSummary; unknown fields are rejected. `n_h` is
/// optional on input.
std::string write_summary_document(const PopulationSummary& pop,
                                   const std::optional<SampleDesign>& design);

struct SummaryDocument {
  PopulationSummary population;
  std::optional<SampleDesign> design;
};

SummaryDocument parse_summary_document(std::string_view text);
SummaryDocument read_summary_file(const std::string& path);

}  // namespace stratest
