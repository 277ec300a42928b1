#include "stratest/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <thread>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "stratest/errors.hpp"
#include "stratest/mse_theory.hpp"
#include "stratest/rng.hpp"

namespace stratest {

double pairwise_sum(const double* values, std::size_t n) {
  if (n <= 8) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += values[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

std::uint64_t fingerprint(const Microdata& micro) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (std::size_t s = 0; s < micro.labels.size(); ++s) {
    feed(micro.labels[s].data(), micro.labels[s].size());
    for (const auto& o : micro.units[s]) {
      for (double v : {o.y, o.x, o.z}) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        feed(&bits, sizeof bits);
      }
    }
  }
  return h;
}

GeneratedPopulation generate_population(const SyntheticPopulationConfig& cfg) {
  if (cfg.strata.empty()) throw InputError("synthetic population needs at least one stratum");
  const auto master = rng::domain_seed(cfg.seed, rng::kDomainPopulation);

  GeneratedPopulation out;
  for (std::size_t h = 0; h < cfg.strata.size(); ++h) {
    const auto& s = cfg.strata[h];
    const std::string name = "stratum " + std::to_string(h + 1);
    if (s.N_h < 2) throw InputError(name + ": N_h must be >= 2");
    if (!(s.mean_y > 0 && s.mean_x > 0 && s.mean_z > 0))
      throw InputError(name + ": target means must be positive");
    if (!(s.sd_y >= 0 && s.sd_x >= 0 && s.sd_z >= 0))
      throw InputError(name + ": target SDs must be >= 0");

    Eigen::Matrix3d r;
    r << 1.0, s.rho_yx, s.rho_yz, s.rho_yx, 1.0, s.rho_xz, s.rho_yz, s.rho_xz, 1.0;
    const double min_eig =
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(r, Eigen::EigenvaluesOnly)
            .eigenvalues()(0);
    if (min_eig < -1e-12)
      throw InputError(name + ": target correlation matrix is not positive semi-definite");

    // R = P^T L D L^T P; pivoting keeps the factorization defined for
    // singular R.
    Eigen::LDLT<Eigen::Matrix3d> ldlt(r);
    Eigen::Vector3d d = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
    Eigen::Matrix3d lower = ldlt.matrixL();
    Eigen::Matrix3d factor = ldlt.transpositionsP().transpose() * (lower * d.asDiagonal());

    rng::Engine eng(rng::stream_seed(master, h));
    std::vector<Observation> units(static_cast<std::size_t>(s.N_h));
    for (auto& u : units) {
      Eigen::Vector3d g;
      double extra;
      rng::normal_pair(eng, g(0), g(1));
      rng::normal_pair(eng, g(2), extra);
      const Eigen::Vector3d c = factor * g;
      u = {s.mean_y + s.sd_y * c(0), s.mean_x + s.sd_x * c(1), s.mean_z + s.sd_z * c(2)};
    }
    out.units.labels.push_back(std::to_string(h + 1));
    out.units.units.push_back(std::move(units));
  }

  out.summary = summarize(out.units);
  for (const auto& st : out.summary.strata) {
    const std::string name = "stratum " + std::to_string(st.index);
    for (auto [mean, sd, var] : {std::tuple{st.Ybar_h, st.S_yh, "y"},
                                 {st.Xbar_h, st.S_xh, "x"}, {st.Zbar_h, st.S_zh, "z"}}) {
      if (std::abs(mean) <= 1e-6 * std::max(sd, 1.0))
        throw NumericalError(name + ": realized mean of " + var + " is too close to zero");
    }
  }
  out.fingerprint = fingerprint(out.units);
  return out;
}

StratifiedSample draw_sample(const Microdata& pop, const SampleDesign& design,
                             std::uint64_t stream_seed) {
  if (design.n_h.size() != pop.units.size())
    throw InputError("design has " + std::to_string(design.n_h.size()) +
                     " strata, population has " + std::to_string(pop.units.size()));
  rng::Engine eng(stream_seed);
  StratifiedSample sample;
  sample.design = design;
  sample.units.resize(pop.units.size());
  sample.unit_ids.resize(pop.units.size());
  std::vector<std::size_t> idx;
  for (std::size_t h = 0; h < pop.units.size(); ++h) {
    const auto N = pop.units[h].size();
    const auto n = design.n_h[h];
    if (n < 1 || static_cast<std::size_t>(n) > N)
      throw InputError("stratum " + std::to_string(h + 1) + ": n_h = " + std::to_string(n) +
                       " outside [1, " + std::to_string(N) + "]");
    idx.resize(N);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
      const auto j = i + rng::bounded(eng, N - i);
      std::swap(idx[i], idx[j]);
    }
    auto& ids = sample.unit_ids[h];
    ids.assign(idx.begin(), idx.begin() + n);
    auto& units = sample.units[h];
    units.reserve(ids.size());
    for (auto id : ids) units.push_back(pop.units[h][id]);
  }
  return sample;
}

const SimulationRow& SimulationReport::row(const std::string& label) const {
  for (const auto& r : rows)
    if (r.label == label) return r;
  throw InputError("no simulation row '" + label + "'");
}

SimulationReport run_simulation(const Microdata& pop, const SampleDesign& design,
                                const SimulationOptions& opts) {
  if (opts.replications < 1) throw InputError("replication count must be >= 1");
  const auto summary = summarize(pop);
  validate(summary, design);

  SimulationReport report;
  report.replications = opts.replications;
  report.master_seed = opts.master_seed;
  report.generator = rng::kGeneratorName;
  report.population_fingerprint = fingerprint(pop);
  report.design = design;
  report.moments = moment_set(summary, design);
  const auto& m = report.moments;

  for (auto kind : opts.estimators) {
    if (kind == EstimatorKind::Tp) continue;
    SimulationRow r;
    r.id = EstimatorId::of(kind);
    r.label = std::string(to_string(kind));
    r.theoretical_mse = mse_classic(kind, m);
    report.rows.push_back(r);
  }
  auto add_tp = [&](double m1, double m2, std::string label) {
    SimulationRow r;
    r.id = EstimatorId::tp(m1, m2);
    r.label = std::move(label);
    const auto b = mse_tp(m, m1, m2);
    r.theoretical_mse = b.mse;
    r.theoretical_bias = b.bias;
    report.rows.push_back(r);
  };
  if (opts.tp_fixed) add_tp(opts.tp_fixed->first, opts.tp_fixed->second, "tp");
  if (opts.tp_optimal) {
    const auto opt = optimal_m(m);
    add_tp(opt.m1, opt.m2, "tp*");
  }
  if (report.rows.empty()) throw InputError("no estimators selected");

  const auto E = report.rows.size();
  const auto R = opts.replications;
  const PopulationMeans truth = PopulationMeans::of(summary);
  const auto sampling_master = rng::domain_seed(opts.master_seed, rng::kDomainSampling);
  bool needs_b = false;
  for (const auto& r : report.rows)
    needs_b |= r.id.kind == EstimatorKind::T7 || r.id.kind == EstimatorKind::Tp;

  // estimates[r * E + e]; NaN marks a failed evaluation.
  std::vector<double> estimates(R * E, std::nan(""));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t rep = begin; rep < end; ++rep) {
      const auto sample = draw_sample(pop, design, rng::stream_seed(sampling_master, rep));
      const auto means = stratified_means(sample, summary);
      std::optional<RegressionCoeffs> b;
      if (needs_b) {
        try {
          b = sample_regression_coeffs(sample, summary);
        } catch (const NumericalError&) {
        }
      }
      for (std::size_t e = 0; e < E; ++e) {
        const auto& id = report.rows[e].id;
        const bool uses_b = id.kind == EstimatorKind::T7 || id.kind == EstimatorKind::Tp;
        if (uses_b && !b) continue;
        try {
          estimates[rep * E + e] = evaluate(id, means, b.value_or(RegressionCoeffs{}), truth);
        } catch (const NumericalError&) {
        }
      }
    }
  };

  unsigned threads = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : opts.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, R));
  if (threads <= 1) {
    work(0, R);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (R + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk, e = std::min(R, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<double> value, dev, sq;
  for (std::size_t e = 0; e < E; ++e) {
    value.clear();
    dev.clear();
    sq.clear();
    for (std::size_t rep = 0; rep < R; ++rep) {
      const double v = estimates[rep * E + e];
      if (!std::isfinite(v)) continue;
      const double d = v - truth.Ybar;
      value.push_back(v);
      dev.push_back(d);
      sq.push_back(d * d);
    }
    auto& row = report.rows[e];
    row.nonfinite = R - value.size();
    if (static_cast<double>(row.nonfinite) > opts.max_nonfinite_fraction * static_cast<double>(R))
      throw ValidationError(row.label + ": " + std::to_string(row.nonfinite) + " of " +
                            std::to_string(R) + " replications gave no finite estimate");
    const double k = static_cast<double>(value.size());
    row.empirical_mean = pairwise_sum(value.data(), value.size()) / k;
    row.empirical_bias = pairwise_sum(dev.data(), dev.size()) / k;
    row.empirical_mse = pairwise_sum(sq.data(), sq.size()) / k;
    row.relative_gap = row.theoretical_mse != 0.0
                           ? (row.empirical_mse - row.theoretical_mse) / row.theoretical_mse
                           : std::nan("");
  }
  return report;
}

SyntheticPopulationConfig reference_config(std::uint64_t seed) {
  // Equal y-on-x and y-on-z slopes in every stratum, so the combined
  // slopes match the stratum slopes.
  SyntheticPopulationConfig cfg;
  cfg.seed = seed;
  const long sizes[] = {200, 300, 500};
  const double scale[] = {1.0, 1.25, 1.5};
  for (int h = 0; h < 3; ++h) {
    const double c = scale[h];
    cfg.strata.push_back({sizes[h], 40 * c, 100 * c, 60 * c, 8 * c, 15 * c, 9 * c, 0.9, 0.8,
                          0.7});
  }
  return cfg;
}

SampleDesign reference_design() { return {{20, 30, 50}}; }

}  // namespace stratest
