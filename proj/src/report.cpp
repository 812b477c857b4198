#include "gaussbalance/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace gaussbalance {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
  out << '\n';
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void Report::add_check(std::string suite, std::string name, bool hard, bool passed, double value, std::string detail) {
  checks_.push_back({std::move(suite), std::move(name), hard, passed, value, std::move(detail)});
}

void Report::add_table(Table table) {
  for (const auto& row : table.rows)
    if (row.size() != table.columns.size()) throw std::invalid_argument("Report: row width mismatch in " + table.name);
  tables_.push_back(std::move(table));
}

int Report::failures(bool hard) const {
  int n = 0;
  for (const auto& c : checks_)
    if (c.hard == hard && !c.passed) ++n;
  return n;
}

void Report::write_csv(std::ostream& out) const {
  out << "# gaussbalance report v" << kReportVersion << '\n';
  out << "# command: " << command_ << '\n';
  out << "# hard_failures: " << failures(true) << '\n';
  out << "# soft_failures: " << failures(false) << '\n';
  out << "# table: checks\n";
  write_row(out, {"suite", "name", "severity", "status", "value", "detail"});
  for (const auto& c : checks_)
    write_row(out, {c.suite, c.name, c.hard ? "hard" : "soft", c.passed ? "pass" : "fail", format_number(c.value),
                    c.detail});
  for (const auto& t : tables_) {
    out << "# table: " << t.name << '\n';
    write_row(out, t.columns);
    for (const auto& row : t.rows) {
      std::vector<std::string> fields;
      for (const auto& cell : row) fields.push_back(cell_text(cell));
      write_row(out, fields);
    }
  }
}

void Report::write_json(std::ostream& out) const {
  using Json = nlohmann::ordered_json;
  auto cell_json = [](const Cell& c) -> Json {
    if (const auto* d = std::get_if<double>(&c)) {
      if (std::isfinite(*d)) return *d;
      return format_number(*d);
    }
    if (const auto* i = std::get_if<long long>(&c)) return *i;
    return std::get<std::string>(c);
  };
  Json doc;
  doc["schema"] = "gaussbalance-report";
  doc["version"] = kReportVersion;
  doc["command"] = command_;
  doc["hard_failures"] = failures(true);
  doc["soft_failures"] = failures(false);
  Json checks = Json::array();
  for (const auto& c : checks_) {
    Json j;
    j["suite"] = c.suite;
    j["name"] = c.name;
    j["severity"] = c.hard ? "hard" : "soft";
    j["passed"] = c.passed;
    j["value"] = cell_json(Cell{c.value});
    j["detail"] = c.detail;
    checks.push_back(std::move(j));
  }
  doc["checks"] = std::move(checks);
  Json tables = Json::object();
  for (const auto& t : tables_) {
    Json rows = Json::array();
    for (const auto& row : t.rows) {
      Json r = Json::array();
      for (const auto& cell : row) r.push_back(cell_json(cell));
      rows.push_back(std::move(r));
    }
    tables[t.name] = {{"columns", t.columns}, {"rows", std::move(rows)}};
  }
  doc["tables"] = std::move(tables);
  out << doc.dump(2) << '\n';
}

}  // namespace gaussbalance
