#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace stratest::render {

enum class Format { Text, Csv, Json };

Format parse_format(std::string_view name);
std::string_view to_string(Format f);

using Cell = std::variant<std::monostate, std::string, double, std::int64_t, std::uint64_t, bool>;

struct Table {
  std::string name;  // key in structured output
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Fields {
  std::string name;
  std::string title;
  std::vector<std::pair<std::string, Cell>> items;
};

using Section = std::variant<Table, Fields>;

struct Document {
  std::string kind;
  std::vector<Section> sections;
  std::vector<std::pair<std::string, Cell>> provenance;
  std::vector<std::string> warnings;
};

/// Text: aligned tables, 6 significant digits. Csv: one block per section,
/// full precision. Json: one object, full (round-trip) precision.
std::string render(const Document& doc, Format format);

}  // namespace stratest::render
