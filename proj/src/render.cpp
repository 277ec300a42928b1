#include "stratest/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stratest/errors.hpp"

namespace stratest::render {

Format parse_format(std::string_view name) {
  if (name == "text") return Format::Text;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw InputError("unknown output format '" + std::string(name) + "'");
}

std::string_view to_string(Format f) {
  switch (f) {
    case Format::Text: return "text";
    case Format::Csv: return "csv";
    case Format::Json: return "json";
  }
  return "?";
}

namespace {

std::string format_double(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string cell_text(const Cell& c, int digits) {
  return std::visit(
      [digits](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "-";
        else if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, double>) return format_double(v, digits);
        else if constexpr (std::is_same_v<T, bool>) return v ? "yes" : "no";
        else return std::to_string(v);
      },
      c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else return v;
      },
      c);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

bool numeric(const Cell& c) {
  return std::holds_alternative<double>(c) || std::holds_alternative<std::int64_t>(c) ||
         std::holds_alternative<std::uint64_t>(c);
}

void text_table(std::ostringstream& out, const Table& t) {
  const auto ncol = t.columns.size();
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(ncol);
  for (std::size_t c = 0; c < ncol; ++c) width[c] = t.columns[c].size();
  for (const auto& row : t.rows) {
    auto& line = cells.emplace_back();
    for (std::size_t c = 0; c < ncol; ++c) {
      line.push_back(c < row.size() ? cell_text(row[c], 6) : "");
      width[c] = std::max(width[c], line.back().size());
    }
  }
  auto emit = [&](const std::vector<std::string>& line, const std::vector<Cell>* src) {
    for (std::size_t c = 0; c < ncol; ++c) {
      const bool right = src && c < src->size() && numeric((*src)[c]);
      const auto pad = std::string(width[c] - line[c].size(), ' ');
      out << (c ? "  " : "") << (right ? pad + line[c] : line[c] + pad);
    }
    out << '\n';
  };
  emit(t.columns, nullptr);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 2 * (ncol ? ncol - 1 : 0), '-') << '\n';
  for (std::size_t r = 0; r < cells.size(); ++r) emit(cells[r], &t.rows[r]);
}

std::string render_text(const Document& doc) {
  std::ostringstream out;
  for (const auto& section : doc.sections) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          out << s.title << '\n';
          if constexpr (std::is_same_v<T, Table>) {
            text_table(out, s);
          } else {
            std::size_t w = 0;
            for (const auto& [k, _] : s.items) w = std::max(w, k.size());
            for (const auto& [k, v] : s.items)
              out << "  " << k << std::string(w - k.size(), ' ') << " : " << cell_text(v, 6)
                  << '\n';
          }
          out << '\n';
        },
        section);
  }
  for (const auto& w : doc.warnings) out << "warning: " << w << '\n';
  if (!doc.warnings.empty()) out << '\n';
  out << "-- provenance --\n";
  for (const auto& [k, v] : doc.provenance) out << k << ": " << cell_text(v, 17) << '\n';
  return out.str();
}

std::string render_csv(const Document& doc) {
  std::ostringstream out;
  for (const auto& section : doc.sections) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          out << "# " << s.name << '\n';
          if constexpr (std::is_same_v<T, Table>) {
            for (std::size_t c = 0; c < s.columns.size(); ++c)
              out << (c ? "," : "") << csv_escape(s.columns[c]);
            out << '\n';
            for (const auto& row : s.rows) {
              for (std::size_t c = 0; c < row.size(); ++c)
                out << (c ? "," : "") << csv_escape(cell_text(row[c], 17));
              out << '\n';
            }
          } else {
            out << "field,value\n";
            for (const auto& [k, v] : s.items)
              out << csv_escape(k) << ',' << csv_escape(cell_text(v, 17)) << '\n';
          }
          out << '\n';
        },
        section);
  }
  out << "# warnings\nmessage\n";
  for (const auto& w : doc.warnings) out << csv_escape(w) << '\n';
  out << "\n# provenance\nfield,value\n";
  for (const auto& [k, v] : doc.provenance)
    out << csv_escape(k) << ',' << csv_escape(cell_text(v, 17)) << '\n';
  return out.str();
}

std::string render_json(const Document& doc) {
  nlohmann::ordered_json j;
  j["report"] = doc.kind;
  for (const auto& section : doc.sections) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Table>) {
            auto arr = nlohmann::ordered_json::array();
            for (const auto& row : s.rows) {
              nlohmann::ordered_json o;
              for (std::size_t c = 0; c < s.columns.size() && c < row.size(); ++c)
                o[s.columns[c]] = cell_json(row[c]);
              arr.push_back(std::move(o));
            }
            j[s.name] = std::move(arr);
          } else {
            nlohmann::ordered_json o = nlohmann::ordered_json::object();
            for (const auto& [k, v] : s.items) o[k] = cell_json(v);
            j[s.name] = std::move(o);
          }
        },
        section);
  }
  j["warnings"] = doc.warnings;
  nlohmann::ordered_json prov = nlohmann::ordered_json::object();
  for (const auto& [k, v] : doc.provenance) prov[k] = cell_json(v);
  j["provenance"] = std::move(prov);
  return j.dump(2) + "\n";
}

}  // namespace

std::string render(const Document& doc, Format format) {
  switch (format) {
    case Format::Text: return render_text(doc);
    case Format::Csv: return render_csv(doc);
    case Format::Json: return render_json(doc);
  }
  return {};
}

}  // namespace stratest::render
