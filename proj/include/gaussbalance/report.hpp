#pragma once

// Verification report: named pass/fail checks plus plot-ready tables,
// written as CSV or JSON. Reports carry no timings, so a fixed configuration
// always yields byte-identical output.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace gaussbalance {

inline constexpr int kReportVersion = 1;

using Cell = std::variant<double, long long, std::string>;

struct Check {
  std::string suite;
  std::string name;
  bool hard;    // proven statements fail the run; conjectures only warn
  bool passed;
  double value; // the quantity compared against its threshold
  std::string detail;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void add_check(std::string suite, std::string name, bool hard, bool passed, double value, std::string detail = {});
  void add_table(Table table);

  const std::string& command() const { return command_; }
  const std::vector<Check>& checks() const { return checks_; }
  const std::vector<Table>& tables() const { return tables_; }
  int failures(bool hard) const;
  bool hard_passed() const { return failures(true) == 0; }

  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;

 private:
  std::string command_;
  std::vector<Check> checks_;
  std::vector<Table> tables_;
};

/// Shortest decimal that round-trips; "nan", "inf", "-inf" for non-finite
/// values. Locale-independent.
std::string format_number(double value);

}  // namespace gaussbalance
