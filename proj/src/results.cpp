#include "conewave/results.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace conewave {

Table::Table(std::string name, std::vector<std::string> columns) : name_(std::move(name)), columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("table '" + name_ + "' needs at least one column");
}

void Table::add_row(const Record& record) {
  if (record.size() != columns_.size()) {
    throw std::invalid_argument("table '" + name_ + "': record has " + std::to_string(record.size()) +
                                " fields, schema has " + std::to_string(columns_.size()));
  }
  std::vector<Value> row;
  row.reserve(record.size());
  for (std::size_t i = 0; i < record.size(); ++i) {
    if (record[i].first != columns_[i]) {
      throw std::invalid_argument("table '" + name_ + "': field '" + record[i].first + "' where '" + columns_[i] +
                                  "' was expected");
    }
    row.push_back(record[i].second);
  }
  rows_.push_back(std::move(row));
}

namespace {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", x);
  return buf.data();
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

nlohmann::json json_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Rational>) {
          return to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(x)) return format_double(x);
          return x;
        } else {
          return x;
        }
      },
      v);
}

}  // namespace

std::string format_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return quote_if_needed(x);
        } else if constexpr (std::is_same_v<T, Rational>) {
          return to_string(x);
        } else {
          return std::to_string(x);
        }
      },
      v);
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns().size(); ++i) {
    if (i) out += ',';
    out += quote_if_needed(table.columns()[i]);
  }
  out += '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_value(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : table.rows()) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns()[i]] = json_value(row[i]);
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::filesystem::path emit_results(const Table& table, Format format, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (table.name() + (format == Format::kCsv ? ".csv" : ".json"));
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << (format == Format::kCsv ? to_csv(table) : to_json(table));
  if (!os) throw std::runtime_error("failed writing " + path.string());
  return path;
}

std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xf];
  }
  return out;
}

}  // namespace conewave
