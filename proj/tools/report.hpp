#pragma once

// Command reports and their text / CSV / JSON renderings. Rendering is a pure
// function of the report, so a fixed command and seed give identical bytes.

#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "parrondo/ring_games.hpp"

namespace parrondo::cli {

using Json = nlohmann::ordered_json;

enum class Format { text, csv, json };

inline std::string decimal(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// A reported value: its JSON form plus how it reads in a table.
struct Value {
  Json json;
  std::string text;

  Value(const char* s) : json(s), text(s) {}
  Value(std::string s) : json(s), text(std::move(s)) {}
  Value(bool b) : json(b), text(b ? "true" : "false") {}
  Value(double x) : json(x), text(decimal(x)) {}
  Value(std::uint64_t x) : json(x), text(std::to_string(x)) {}
  Value(std::int64_t x) : json(x), text(std::to_string(x)) {}
  Value(int x) : json(x), text(std::to_string(x)) {}

  /// Exact rational with its decimal approximation.
  static Value exact(const Rational& r) {
    const std::string s = to_string(r);
    const double d = static_cast<double>(r);
    Value v(s);
    v.json = Json{{"exact", s}, {"decimal", d}};
    v.text = denominator(r) == 1 ? s : s + " (" + decimal(d) + ")";
    return v;
  }
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, Value>> fields;
  std::vector<Table> tables;

  void add(std::string key, Value value) { fields.emplace_back(std::move(key), std::move(value)); }
};

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_value(const Value& v) {
  if (v.json.is_object() && v.json.contains("exact")) return v.json["exact"].get<std::string>();
  return v.json.is_string() ? v.json.get<std::string>() : v.text;
}

inline void render_text(std::ostream& out, const Report& report) {
  std::size_t width = 0;
  for (const auto& [key, _] : report.fields) width = std::max(width, key.size());
  out << report.command << '\n';
  for (const auto& [key, value] : report.fields)
    out << "  " << std::left << std::setw(static_cast<int>(width)) << key << "  " << value.text << '\n';
  for (const auto& table : report.tables) {
    out << '\n' << table.name << '\n';
    std::vector<std::size_t> widths;
    for (const auto& c : table.columns) widths.push_back(c.size());
    for (const auto& row : table.rows)
      for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].text.size());
    auto line = [&](auto cell) {
      out << ' ';
      for (std::size_t i = 0; i < widths.size(); ++i)
        out << ' ' << std::left << std::setw(static_cast<int>(widths[i])) << cell(i);
      out << '\n';
    };
    line([&](std::size_t i) { return table.columns[i]; });
    line([&](std::size_t i) { return std::string(widths[i], '-'); });
    for (const auto& row : table.rows) line([&](std::size_t i) { return row[i].text; });
  }
}

/// Tables only when the report has any, otherwise key,value pairs.
inline void render_csv(std::ostream& out, const Report& report) {
  if (report.tables.empty()) {
    out << "key,value\n";
    for (const auto& [key, value] : report.fields)
      out << csv_cell(key) << ',' << csv_cell(csv_value(value)) << '\n';
    return;
  }
  bool first = true;
  for (const auto& table : report.tables) {
    if (!first) out << '\n';
    first = false;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
      out << (i ? "," : "") << csv_cell(table.columns[i]);
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(csv_value(row[i]));
      out << '\n';
    }
  }
}

inline void render_json(std::ostream& out, const Report& report) {
  Json doc;
  doc["schema"] = 1;
  doc["command"] = report.command;
  for (const auto& [key, value] : report.fields) doc[key] = value.json;
  for (const auto& table : report.tables) {
    Json rows = Json::array();
    for (const auto& row : table.rows) {
      Json obj;
      for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = row[i].json;
      rows.push_back(std::move(obj));
    }
    doc[table.name] = std::move(rows);
  }
  out << doc.dump(2) << '\n';
}

inline void render(std::ostream& out, const Report& report, Format format) {
  switch (format) {
    case Format::text: render_text(out, report); break;
    case Format::csv: render_csv(out, report); break;
    case Format::json: render_json(out, report); break;
  }
}

}  // namespace parrondo::cli
