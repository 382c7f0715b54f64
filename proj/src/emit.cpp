#include "cpb/emit.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace cpb {

namespace {

std::string csv_cell(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return "NONE";
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return format_double(std::get<double>(c));
}

std::string json_cell(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return "null";
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const double x = std::get<double>(c);
  if (!std::isfinite(x)) return "null";
  return format_double(x);
}

std::string json_key(const std::string& k) {
  std::string out = "\"";
  for (char ch : k) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

void csv_table(std::ostream& os, const Table& t, const char* prefix) {
  os << prefix;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    os << prefix;
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
}

void json_fields(std::ostream& os, const Table& t, const std::vector<Cell>& row, const std::string& indent) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    os << (i ? ",\n" : "") << indent << json_key(t.columns[i]) << ": " << json_cell(row[i]);
  }
}

void json_rows(std::ostream& os, const Table& t, const std::string& indent) {
  os << "[";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << (r ? "," : "") << "\n" << indent << "  {\n";
    json_fields(os, t, t.rows[r], indent + "    ");
    os << "\n" << indent << "  }";
  }
  os << (t.rows.empty() ? "]" : "\n" + indent + "]");
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string render(const Document& doc, Format format) {
  std::ostringstream os;
  if (format == Format::csv) {
    csv_table(os, doc.table, "");
    for (const auto& annex : doc.annexes) {
      os << "# " << annex.name << '\n';
      csv_table(os, annex.table, "# ");
    }
    return os.str();
  }

  if (doc.single_record || !doc.annexes.empty()) {
    os << "{\n";
    if (doc.single_record) {
      json_fields(os, doc.table, doc.table.rows.at(0), "  ");
    } else {
      os << "  \"rows\": ";
      json_rows(os, doc.table, "  ");
    }
    for (const auto& annex : doc.annexes) {
      os << ",\n  " << json_key(annex.name) << ": ";
      json_rows(os, annex.table, "  ");
    }
    os << "\n}\n";
  } else {
    json_rows(os, doc.table, "");
    os << "\n";
  }
  return os.str();
}

}  // namespace cpb
