#pragma once

// Tabular command output: one row per run, written as CSV or a JSON array.

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace eowilson::cli {

using Value = std::variant<std::string, double, std::int64_t, bool>;

class Row {
 public:
  Row& set(const std::string& key, Value value);
  const Value* find(const std::string& key) const;
  const std::vector<std::pair<std::string, Value>>& fields() const { return fields_; }

 private:
  std::vector<std::pair<std::string, Value>> fields_;
};

// Header is the union of keys in first-seen order; missing cells are empty.
void write_csv(std::ostream& out, const std::vector<Row>& rows);
void write_json(std::ostream& out, const std::vector<Row>& rows);

std::string format_value(const Value& v);

}  // namespace eowilson::cli
