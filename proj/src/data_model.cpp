#include "stratest/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "stratest/errors.hpp"

namespace stratest {

namespace {

std::string stratum_name(const StratumSummary& s) {
  return "stratum " + std::to_string(s.index);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

long PopulationSummary::total_size() const {
  long n = 0;
  for (const auto& s : strata) n += s.N_h;
  return n;
}

double PopulationSummary::weight(std::size_t h) const {
  return static_cast<double>(strata.at(h).N_h) / static_cast<double>(total_size());
}

double PopulationSummary::Ybar() const {
  double acc = 0.0;
  for (std::size_t h = 0; h < strata.size(); ++h) acc += weight(h) * strata[h].Ybar_h;
  return acc;
}

double PopulationSummary::Xbar() const {
  double acc = 0.0;
  for (std::size_t h = 0; h < strata.size(); ++h) acc += weight(h) * strata[h].Xbar_h;
  return acc;
}

double PopulationSummary::Zbar() const {
  double acc = 0.0;
  for (std::size_t h = 0; h < strata.size(); ++h) acc += weight(h) * strata[h].Zbar_h;
  return acc;
}

long SampleDesign::total() const { return std::accumulate(n_h.begin(), n_h.end(), 0L); }

std::size_t Microdata::num_records() const {
  std::size_t n = 0;
  for (const auto& u : units) n += u.size();
  return n;
}

void validate(const PopulationSummary& pop) {
  if (pop.strata.empty()) throw InputError("population has no strata");
  for (std::size_t h = 0; h < pop.strata.size(); ++h) {
    const auto& s = pop.strata[h];
    if (s.index != static_cast<int>(h) + 1)
      throw InputError("stratum indices must be 1.." + std::to_string(pop.strata.size()) +
                       " in order; found " + std::to_string(s.index) + " at position " +
                       std::to_string(h + 1));
    if (s.N_h < 2) throw InputError(stratum_name(s) + ": N_h must be >= 2");
    for (auto [name, v] : {std::pair{"S_yh", s.S_yh}, {"S_xh", s.S_xh}, {"S_zh", s.S_zh}}) {
      if (!std::isfinite(v) || v < 0.0)
        throw InputError(stratum_name(s) + ": " + name + " must be finite and >= 0");
    }
    for (auto [name, v] : {std::pair{"rho_yxh", s.rho_yxh}, {"rho_yzh", s.rho_yzh},
                           {"rho_xzh", s.rho_xzh}}) {
      if (v && !(std::abs(*v) <= 1.0))
        throw InputError(stratum_name(s) + ": " + name + " must lie in [-1, 1]");
    }
  }
}

void validate(const PopulationSummary& pop, const SampleDesign& design) {
  validate(pop);
  if (design.n_h.size() != pop.strata.size())
    throw InputError("design has " + std::to_string(design.n_h.size()) +
                     " strata, population has " + std::to_string(pop.strata.size()));
  for (std::size_t h = 0; h < pop.strata.size(); ++h) {
    if (design.n_h[h] < 1)
      throw InputError(stratum_name(pop.strata[h]) + ": n_h must be >= 1");
    if (design.n_h[h] > pop.strata[h].N_h)
      throw InputError(stratum_name(pop.strata[h]) + ": n_h = " +
                       std::to_string(design.n_h[h]) + " exceeds N_h = " +
                       std::to_string(pop.strata[h].N_h));
  }
}

// --- microdata --------------------------------------------------------------

Microdata parse_microdata(std::string_view text) {
  static constexpr const char* kColumns[] = {"stratum", "y", "x", "z"};
  Microdata micro;
  std::unordered_map<std::string, std::size_t> slot;

  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (trim(line).empty()) continue;

    auto fields = split_fields(line);
    if (!header_seen) {
      if (line_no == 1 && !fields.empty() && fields[0].starts_with("\xEF\xBB\xBF"))
        fields[0].remove_prefix(3);
      if (fields.size() != 4 || !std::equal(fields.begin(), fields.end(), kColumns))
        throw InputError("line " + std::to_string(line_no) +
                         ": expected header 'stratum,y,x,z'");
      header_seen = true;
      continue;
    }
    if (fields.size() != 4)
      throw InputError("line " + std::to_string(line_no) + ": expected 4 fields, found " +
                       std::to_string(fields.size()));
    if (fields[0].empty())
      throw InputError("line " + std::to_string(line_no) + ", column 1 (stratum): empty label");

    double values[3];
    for (int c = 0; c < 3; ++c) {
      auto f = fields[c + 1];
      const char* first = f.data();
      const char* last = f.data() + f.size();
      if (!f.empty() && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, values[c]);
      if (f.empty() || ec != std::errc() || ptr != last || !std::isfinite(values[c]))
        throw InputError("line " + std::to_string(line_no) + ", column " +
                         std::to_string(c + 2) + " (" + kColumns[c + 1] +
                         "): not a number: '" + std::string(f) + "'");
    }

    std::string label(fields[0]);
    auto [it, inserted] = slot.emplace(label, micro.labels.size());
    if (inserted) {
      micro.labels.push_back(label);
      micro.units.emplace_back();
    }
    micro.units[it->second].push_back({values[0], values[1], values[2]});
  }

  if (!header_seen) throw InputError("missing header 'stratum,y,x,z'");
  if (micro.labels.empty()) throw InputError("no records");
  for (std::size_t h = 0; h < micro.labels.size(); ++h) {
    if (micro.units[h].size() < 2)
      throw InputError("stratum '" + micro.labels[h] + "' has " +
                       std::to_string(micro.units[h].size()) + " record(s); at least 2 needed");
  }
  return micro;
}

Microdata read_microdata_file(const std::string& path) { return parse_microdata(slurp(path)); }

std::string write_microdata(const Microdata& micro) {
  std::ostringstream out;
  out.precision(17);
  out << "stratum,y,x,z\n";
  for (std::size_t h = 0; h < micro.labels.size(); ++h)
    for (const auto& o : micro.units[h])
      out << micro.labels[h] << ',' << o.y << ',' << o.x << ',' << o.z << '\n';
  return out.str();
}

PopulationSummary summarize(const Microdata& micro) {
  if (micro.labels.empty()) throw InputError("no records");
  PopulationSummary pop;
  for (std::size_t h = 0; h < micro.labels.size(); ++h) {
    const auto& u = micro.units[h];
    const auto n = u.size();
    if (n < 2)
      throw InputError("stratum '" + micro.labels[h] + "' has fewer than 2 records");

    double my = 0, mx = 0, mz = 0;
    for (const auto& o : u) {
      my += o.y;
      mx += o.x;
      mz += o.z;
    }
    const double dn = static_cast<double>(n);
    my /= dn;
    mx /= dn;
    mz /= dn;

    double syy = 0, sxx = 0, szz = 0, syx = 0, syz = 0, sxz = 0;
    for (const auto& o : u) {
      const double dy = o.y - my, dx = o.x - mx, dz = o.z - mz;
      syy += dy * dy;
      sxx += dx * dx;
      szz += dz * dz;
      syx += dy * dx;
      syz += dy * dz;
      sxz += dx * dz;
    }
    const double d = dn - 1.0;

    StratumSummary s;
    s.index = static_cast<int>(h) + 1;
    s.N_h = static_cast<long>(n);
    s.Ybar_h = my;
    s.Xbar_h = mx;
    s.Zbar_h = mz;
    s.S_yh = std::sqrt(syy / d);
    s.S_xh = std::sqrt(sxx / d);
    s.S_zh = std::sqrt(szz / d);
    s.S_yxh = syx / d;
    s.S_yzh = syz / d;
    s.S_xzh = sxz / d;
    if (sxx == 0.0 || szz == 0.0)
      throw NumericalError("stratum '" + micro.labels[h] + "': zero variance in " +
                           (sxx == 0.0 ? "x" : "z") + "; correlations undefined");
    auto corr = [](double sab, double saa, double sbb) {
      if (saa == 0.0 || sbb == 0.0) return 0.0;
      return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
    };
    s.rho_yxh = corr(syx, syy, sxx);
    s.rho_yzh = corr(syz, syy, szz);
    s.rho_xzh = corr(sxz, sxx, szz);
    pop.strata.push_back(s);
  }
  return pop;
}

// --- reconciliation ---------------------------------------------------------

std::string_view to_string(CovariancePolicy policy) {
  switch (policy) {
    case CovariancePolicy::PreferCorrelation: return "prefer-correlation";
    case CovariancePolicy::PreferCovariance: return "prefer-covariance";
    case CovariancePolicy::Strict: return "strict";
  }
  return "?";
}

CovariancePolicy parse_policy(std::string_view name) {
  if (name == "prefer-correlation") return CovariancePolicy::PreferCorrelation;
  if (name == "prefer-covariance") return CovariancePolicy::PreferCovariance;
  if (name == "strict") return CovariancePolicy::Strict;
  throw InputError("unknown covariance policy '" + std::string(name) + "'");
}

std::string_view to_string(RepairKind kind) {
  switch (kind) {
    case RepairKind::Consistent: return "consistent";
    case RepairKind::Repaired: return "repaired";
    case RepairKind::Derived: return "derived";
    case RepairKind::Rescaled: return "rescaled";
    case RepairKind::Unrepaired: return "unrepaired";
  }
  return "?";
}

std::size_t ReconciliationReport::count(RepairKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [kind](const RepairEntry& e) { return e.kind == kind; }));
}

std::vector<RepairEntry> ReconciliationReport::changes() const {
  std::vector<RepairEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
               [](const RepairEntry& e) { return e.kind != RepairKind::Consistent; });
  return out;
}

double min_correlation_eigenvalue(double rho_yx, double rho_yz, double rho_xz) {
  Eigen::Matrix3d r;
  r << 1.0, rho_yx, rho_yz,  //
      rho_yx, 1.0, rho_xz,   //
      rho_yz, rho_xz, 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(r, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

namespace {

struct PairRef {
  const char* name;
  std::optional<double> StratumSummary::*cov;
  std::optional<double> StratumSummary::*rho;
  double StratumSummary::*sd_a;
  double StratumSummary::*sd_b;
};

constexpr PairRef kPairs[] = {
    {"yx", &StratumSummary::S_yxh, &StratumSummary::rho_yxh, &StratumSummary::S_yh,
     &StratumSummary::S_xh},
    {"yz", &StratumSummary::S_yzh, &StratumSummary::rho_yzh, &StratumSummary::S_yh,
     &StratumSummary::S_zh},
    {"xz", &StratumSummary::S_xzh, &StratumSummary::rho_xzh, &StratumSummary::S_xh,
     &StratumSummary::S_zh},
};

bool plausible(const StratumSummary& s, double psd_tol) {
  const double a = *s.rho_yxh, b = *s.rho_yzh, c = *s.rho_xzh;
  if (!(std::abs(a) <= 1.0 && std::abs(b) <= 1.0 && std::abs(c) <= 1.0)) return false;
  return min_correlation_eigenvalue(a, b, c) >= -psd_tol;
}

}  // namespace

Reconciled reconcile_covariances(const PopulationSummary& pop,
                                 const ReconciliationOptions& opts) {
  Reconciled out{pop, {opts.policy, {}}};
  const bool prefer_cov = opts.policy == CovariancePolicy::PreferCovariance;

  for (auto& s : out.summary.strata) {
    // Pairs whose correlation came from the covariance are candidates for a
    // power-of-ten repair if the stratum turns out implausible.
    bool from_cov[3] = {false, false, false};
    std::size_t first_entry = out.report.entries.size();

    for (int p = 0; p < 3; ++p) {
      const auto& ref = kPairs[p];
      auto& cov = s.*(ref.cov);
      auto& rho = s.*(ref.rho);
      const double denom = s.*(ref.sd_a) * s.*(ref.sd_b);

      RepairEntry e;
      e.stratum = s.index;
      e.pair = ref.name;
      e.old_correlation = rho;
      e.old_covariance = cov.value_or(std::nan(""));

      if (!cov && !rho)
        throw InputError(stratum_name(s) + ": neither S_" + ref.name + "h nor rho_" +
                         ref.name + "h given");

      if (denom == 0.0) {
        // Degenerate variable: the pair carries no information.
        cov = 0.0;
        rho = rho.value_or(0.0);
        e.kind = RepairKind::Derived;
        e.note = "zero standard deviation";
      } else if (cov && rho) {
        const double implied = *cov / denom;
        const double gap = std::abs(implied - *rho);
        const bool agree = gap <= opts.tolerance;
        if (!agree && opts.policy == CovariancePolicy::Strict)
          throw ValidationError(stratum_name(s) + ": S_" + std::string(ref.name) +
                                "h implies correlation " + std::to_string(implied) +
                                " but rho_" + ref.name + "h = " + std::to_string(*rho));
        if (prefer_cov) {
          rho = implied;
          from_cov[p] = true;
        } else {
          cov = *rho * denom;
        }
        e.kind = agree ? RepairKind::Consistent : RepairKind::Repaired;
        if (!agree) e.note = "implied correlation " + std::to_string(implied);
      } else if (cov) {
        rho = *cov / denom;
        if (!prefer_cov) cov = *rho * denom;
        from_cov[p] = true;
        e.kind = RepairKind::Derived;
        e.note = "correlation derived from covariance";
      } else {
        cov = *rho * denom;
        e.kind = RepairKind::Derived;
        e.note = "covariance derived from correlation";
      }
      e.new_covariance = *cov;
      e.new_correlation = *rho;
      out.report.entries.push_back(e);
    }

    if (plausible(s, opts.psd_tolerance)) continue;

    if (opts.policy == CovariancePolicy::Strict)
      throw ValidationError(stratum_name(s) +
                            ": correlations form an impossible (non-PSD) matrix");

    // Smallest power-of-ten shift of a single covariance-derived pair that
    // restores a valid correlation matrix.
    int best_pair = -1, best_shift = 0;
    for (int mag = 1; mag <= opts.max_shift && best_pair < 0; ++mag) {
      for (int sign : {-1, 1}) {
        for (int p = 0; p < 3 && best_pair < 0; ++p) {
          if (!from_cov[p]) continue;
          StratumSummary trial = s;
          const auto& ref = kPairs[p];
          const double shifted = *(trial.*(ref.cov)) * std::pow(10.0, sign * mag);
          const double shifted_rho = shifted / (trial.*(ref.sd_a) * trial.*(ref.sd_b));
          // A printed correlation vetoes any shift that does not land on it.
          const auto& printed =
              out.report.entries[first_entry + static_cast<std::size_t>(p)].old_correlation;
          if (printed && std::abs(shifted_rho - *printed) > opts.tolerance) continue;
          trial.*(ref.rho) = shifted_rho;
          if (plausible(trial, opts.psd_tolerance)) {
            best_pair = p;
            best_shift = sign * mag;
          }
        }
        if (best_pair >= 0) break;
      }
    }

    if (best_pair < 0) {
      for (std::size_t i = first_entry; i < out.report.entries.size(); ++i) {
        auto& e = out.report.entries[i];
        if (from_cov[i - first_entry]) {
          e.kind = RepairKind::Unrepaired;
          e.note = "stratum correlation matrix is not positive semi-definite";
        }
      }
      continue;
    }

    const auto& ref = kPairs[best_pair];
    const double denom = s.*(ref.sd_a) * s.*(ref.sd_b);
    auto& cov = s.*(ref.cov);
    auto& rho = s.*(ref.rho);
    cov = *cov * std::pow(10.0, best_shift);
    rho = *cov / denom;
    if (!prefer_cov) cov = *rho * denom;

    auto& e = out.report.entries[first_entry + static_cast<std::size_t>(best_pair)];
    e.kind = RepairKind::Rescaled;
    e.new_covariance = *cov;
    e.new_correlation = *rho;
    e.note = "scaled by 1e" + std::to_string(best_shift) +
             " to restore a positive semi-definite correlation matrix";
  }
  return out;
}

// --- embedded dataset -------------------------------------------------------

DesignedPopulation embedded_kk2009() {
  struct Row {
    long N, n;
    double Sy, Ybar, Sx, Xbar, Syx, rho_yx, b2x, b2y, Sz, Zbar, Syz, Sxz, rho_yz, b2z;
  };
  static constexpr Row kRows[] = {
      {127, 31, 883.835, 703.74, 30486.751, 20804.59, 25237153.52, 0.936, 4.593, 2.158,
       555.5816, 498.28, 480688.2, 15914648, 0.978, 2.314},
      {117, 21, 644, 413, 15180.760, 9211.79, 9747942.85, 0.996, 18.543, 16.392, 365.4576,
       318.33, 230092.8, 5379190, 0.976, 11.190},
      {103, 29, 1033.467, 573.17, 27549.697, 14309.30, 28294397.04, 0.994, 15.446, 14.979,
       612.9509, 431.36, 623019.3, 16490067456, 0.983, 10.786},
      {170, 38, 810.585, 424.66, 18218.931, 9478.85, 1452885.53, 0.983, 10.162, 12.167,
       458.0282, 498.28, 36493.4, 8041254, 0.982, 8.624},
      {205, 22, 403.654, 267.03, 8997.776, 5569.95, 3393591.75, 0.989, 21.947, 21.008,
       260.8511, 227.20, 101539, 214457, 0.964, 9.720},
      {201, 39, 711.723, 393.84, 23094.141, 12997.59, 15864573.97, 0.965, 23.114, 20.254,
       397.0481, 313.71, 277696.1, 8857729, 0.982, 14.406},
  };

  DesignedPopulation out;
  int index = 1;
  for (const auto& r : kRows) {
    StratumSummary s;
    s.index = index++;
    s.N_h = r.N;
    s.Ybar_h = r.Ybar;
    s.Xbar_h = r.Xbar;
    s.Zbar_h = r.Zbar;
    s.S_yh = r.Sy;
    s.S_xh = r.Sx;
    s.S_zh = r.Sz;
    s.S_yxh = r.Syx;
    s.S_yzh = r.Syz;
    s.S_xzh = r.Sxz;
    s.rho_yxh = r.rho_yx;
    s.rho_yzh = r.rho_yz;
    s.beta2_x = r.b2x;
    s.beta2_y = r.b2y;
    s.beta2_z = r.b2z;
    out.population.strata.push_back(s);
    out.design.n_h.push_back(r.n);
  }
  return out;
}

// --- summary document -------------------------------------------------------

namespace {

using nlohmann::json;

struct FieldRef {
  const char* name;
  double StratumSummary::*value = nullptr;
  std::optional<double> StratumSummary::*opt = nullptr;
};

const FieldRef kFields[] = {
    {"Ybar_h", &StratumSummary::Ybar_h},   {"Xbar_h", &StratumSummary::Xbar_h},
    {"Zbar_h", &StratumSummary::Zbar_h},   {"S_yh", &StratumSummary::S_yh},
    {"S_xh", &StratumSummary::S_xh},       {"S_zh", &StratumSummary::S_zh},
    {"S_yxh", nullptr, &StratumSummary::S_yxh},
    {"S_yzh", nullptr, &StratumSummary::S_yzh},
    {"S_xzh", nullptr, &StratumSummary::S_xzh},
    {"rho_yxh", nullptr, &StratumSummary::rho_yxh},
    {"rho_yzh", nullptr, &StratumSummary::rho_yzh},
    {"rho_xzh", nullptr, &StratumSummary::rho_xzh},
    {"beta2_x", nullptr, &StratumSummary::beta2_x},
    {"beta2_y", nullptr, &StratumSummary::beta2_y},
    {"beta2_z", nullptr, &StratumSummary::beta2_z},
};

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw InputError(where + ": expected a number");
  return v.get<double>();
}

long as_count(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw InputError(where + ": expected an integer");
  return v.get<long>();
}

}  // namespace

std::string write_summary_document(const PopulationSummary& pop,
                                   const std::optional<SampleDesign>& design) {
  json doc;
  doc["strata"] = json::array();
  for (const auto& s : pop.strata) {
    json j;
    j["index"] = s.index;
    j["N_h"] = s.N_h;
    for (const auto& f : kFields) {
      if (f.value) {
        j[f.name] = s.*(f.value);
      } else if (const auto& o = s.*(f.opt)) {
        j[f.name] = *o;
      }
    }
    doc["strata"].push_back(std::move(j));
  }
  if (design) doc["n_h"] = design->n_h;
  return doc.dump(2) + "\n";
}

SummaryDocument parse_summary_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("summary document: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("summary document: top level must be an object");
  for (const auto& [key, _] : doc.items())
    if (key != "strata" && key != "n_h")
      throw InputError("summary document: unknown top-level field '" + key + "'");
  if (!doc.contains("strata") || !doc["strata"].is_array())
    throw InputError("summary document: missing 'strata' list");

  SummaryDocument out;
  std::size_t pos = 0;
  for (const auto& j : doc["strata"]) {
    ++pos;
    const std::string where = "strata[" + std::to_string(pos) + "]";
    if (!j.is_object()) throw InputError(where + ": expected an object");
    StratumSummary s;
    for (const auto& [key, value] : j.items()) {
      const std::string at = where + "." + key;
      if (key == "index") {
        s.index = static_cast<int>(as_count(value, at));
        continue;
      }
      if (key == "N_h") {
        s.N_h = as_count(value, at);
        continue;
      }
      auto f = std::find_if(std::begin(kFields), std::end(kFields),
                            [&](const FieldRef& r) { return key == r.name; });
      if (f == std::end(kFields)) throw InputError(where + ": unknown field '" + key + "'");
      if (f->value)
        s.*(f->value) = as_number(value, at);
      else
        s.*(f->opt) = as_number(value, at);
    }
    for (const char* required : {"index", "N_h", "Ybar_h", "Xbar_h", "Zbar_h", "S_yh", "S_xh",
                                 "S_zh"})
      if (!j.contains(required))
        throw InputError(where + ": missing required field '" + required + "'");
    out.population.strata.push_back(s);
  }
  validate(out.population);

  if (doc.contains("n_h")) {
    if (!doc["n_h"].is_array()) throw InputError("summary document: 'n_h' must be a list");
    SampleDesign d;
    std::size_t i = 0;
    for (const auto& v : doc["n_h"]) d.n_h.push_back(as_count(v, "n_h[" + std::to_string(++i) + "]"));
    validate(out.population, d);
    out.design = std::move(d);
  }
  return out;
}

SummaryDocument read_summary_file(const std::string& path) {
  return parse_summary_document(slurp(path));
}

}  // namespace stratest
