#ifndef MOTZKIN_CLI_HPP
#define MOTZKIN_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "motzkin/params.hpp"

namespace motzkin::cli {

std::string_view artifact_version();

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;
  std::vector<int> n{1};
  std::vector<int> s{1};
  std::vector<double> t{1.0};
  std::vector<std::uint64_t> seeds{0};
  std::uint64_t steps = 100000;
  std::uint64_t thin = 1;
  double tol = 1e-9;
  std::size_t dense_cap = 4000;
  std::string start;       // mcmc start walk; all-flat when empty
  std::string out;         // report path; stdout when empty
  std::string trace;       // mcmc trajectory CSV
  std::string export_dir;  // operator exports (gap, markov-verify)
  Format format = Format::Csv;
  unsigned workers = 1;
  bool timings = false;

  /// Throws InvalidParams on an unknown command or out-of-range values.
  void validate() const;
  /// Canonical text of everything that affects the numbers.
  std::string canonical() const;
  /// FNV-1a of canonical(), 16 hex digits.
  std::string hash() const;
  /// Cartesian product in (n, s, t) order.
  std::vector<ModelParams> grid() const;
};

const std::vector<std::string>& commands();

/// "3", "1,2,5", "2..5" or "1..2:0.25".
std::vector<int> parse_int_list(std::string_view text);
std::vector<double> parse_real_list(std::string_view text);
/// MOTZKIN_WORKERS, at least 1.
unsigned workers_from_env();

using Cell = std::variant<std::monostate, std::int64_t, double, std::string, bool>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  std::string command;
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> formulas;
  std::vector<std::pair<std::string, double>> tolerances;
  std::vector<Table> tables;
  /// hard assertions that failed
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
  const Table* table(std::string_view name) const;
};

/// Computes every record of a command. Module errors propagate.
Report execute(const RunConfig& config);

/// CSV: "%.17g" floats, one file per table (extra tables go next to the first
/// as <stem>.<table>.csv), '#' metadata lines on top. JSON: one document.
/// Throws IoError when a file cannot be written.
void emit(const Report& report, Format format, const std::string& path, std::ostream& fallback);

/// execute + emit. 0 on success, 1 on a failed hard assertion, 2 on bad
/// parameters, 3 on IO errors, 4 on other library errors.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace motzkin::cli

#endif  // MOTZKIN_CLI_HPP
