#include "report.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

namespace eowilson::cli {

Row& Row::set(const std::string& key, Value value) {
  for (auto& [k, v] : fields_)
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  fields_.emplace_back(key, std::move(value));
  return *this;
}

const Value* Row::find(const std::string& key) const {
  for (const auto& [k, v] : fields_)
    if (k == key) return &v;
  return nullptr;
}

std::string format_value(const Value& v) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double d) const {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.9g", d);
      return buf;
    }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(Visitor{}, v);
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<Row>& rows) {
  std::vector<std::string> header;
  for (const Row& r : rows)
    for (const auto& [k, v] : r.fields())
      if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_escape(header[i]);
  out << "\n";
  for (const Row& r : rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out << ",";
      if (const Value* v = r.find(header[i])) out << csv_escape(format_value(*v));
    }
    out << "\n";
  }
}

void write_json(std::ostream& out, const std::vector<Row>& rows) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const Row& r : rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.fields())
      std::visit([&](const auto& x) { obj[k] = x; }, v);
    doc.push_back(std::move(obj));
  }
  out << doc.dump(2) << "\n";
}

}  // namespace eowilson::cli
