#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "conewave/rational.hpp"

namespace conewave {

using Value = std::variant<std::int64_t, double, bool, std::string, Rational>;

/// One record: (column, value) pairs in column order.
using Record = std::vector<std::pair<std::string, Value>>;

/// A homogeneous table. add_row rejects a record whose keys differ from the
/// table's columns.
class Table {
 public:
  Table(std::string name, std::vector<std::string> columns);

  void add_row(const Record& record);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Value>>& rows() const { return rows_; }

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Value>> rows_;
};

enum class Format { kCsv, kJson };

/// Cell text: doubles with 17 significant digits, rationals "num/den",
/// booleans true/false; strings quoted only when they need it.
std::string format_value(const Value& v);

/// Header row then one line per record, LF endings.
std::string to_csv(const Table& table);

/// Array of objects with sorted keys; rationals as "num/den" strings.
std::string to_json(const Table& table);

/// Writes <dir>/<name>.csv or .json and returns the path.
std::filesystem::path emit_results(const Table& table, Format format, const std::filesystem::path& dir);

/// Splits one CSV line written by to_csv back into cells.
std::vector<std::string> parse_csv_line(const std::string& line);

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);

}  // namespace conewave
