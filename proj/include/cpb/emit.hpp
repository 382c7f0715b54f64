#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace cpb {

enum class Format { csv, json };

/// monostate renders as NONE in CSV and null in JSON.
using Cell = std::variant<std::monostate, std::int64_t, double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// A named side table. CSV writes it as '#'-prefixed lines after the main
/// table; JSON writes it as an extra array-valued key.
struct Annex {
  std::string name;
  Table table;
};

/// Main table plus annexes. A single-record document (one row) renders as a
/// JSON object instead of an array of row objects.
struct Document {
  Table table;
  bool single_record = false;
  std::vector<Annex> annexes;
};

/// 17 significant digits, so every finite double round-trips exactly.
std::string format_double(double x);

std::string render(const Document& doc, Format format);

}  // namespace cpb
