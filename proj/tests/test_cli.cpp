#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "motzkin/cli.hpp"
#include "motzkin/errors.hpp"

using namespace motzkin;
using namespace motzkin::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig config(std::string command, std::vector<int> n, std::vector<int> s, std::vector<double> t) {
  RunConfig c;
  c.command = std::move(command);
  c.n = std::move(n);
  c.s = std::move(s);
  c.t = std::move(t);
  return c;
}

// header + rows of the first table, '#' lines skipped, no quoted cells expected
std::vector<std::map<std::string, std::string>> read_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  std::vector<std::map<std::string, std::string>> rows;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::stringstream ss(l);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!l.empty() && l.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    if (line.empty()) break;
    if (line[0] == '#') continue;
    if (header.empty()) {
      header = split(line);
      continue;
    }
    const auto cells = split(line);
    REQUIRE(cells.size() == header.size());
    std::map<std::string, std::string> row;
    for (std::size_t k = 0; k < cells.size(); ++k) row[header[k]] = cells[k];
    rows.push_back(row);
  }
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("list syntax") {
  CHECK(parse_int_list("3") == std::vector<int>{3});
  CHECK(parse_int_list("1,4,2") == std::vector<int>{1, 4, 2});
  CHECK(parse_int_list("2..5") == std::vector<int>{2, 3, 4, 5});
  CHECK(parse_int_list("20..60:20") == std::vector<int>{20, 40, 60});
  CHECK(parse_real_list("1.5") == std::vector<double>{1.5});
  const auto ts = parse_real_list("1..2:0.25");
  REQUIRE(ts.size() == 5);
  CHECK(ts.back() == doctest::Approx(2.0));
  CHECK(parse_real_list("0.5,1..2") == std::vector<double>{0.5, 1.0, 2.0});
  CHECK_THROWS_AS(parse_int_list("x"), MotzkinError);
  CHECK_THROWS_AS(parse_int_list("5..2"), MotzkinError);
  CHECK_THROWS_AS(parse_int_list("1,,2"), MotzkinError);
  CHECK_THROWS_AS(parse_real_list("1..2:0"), MotzkinError);
}

TEST_CASE("gap of the two-site chain is one") {
  const auto r = call(config("gap", {1}, {1}, {2.0}));
  CHECK(r.code == 0);
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() == 1);
  CHECK(std::abs(std::stod(rows[0].at("gap")) - 1.0) < 1e-12);
  CHECK(rows[0].at("artifact_version") == artifact_version());
  CHECK(rows[0].at("config_hash") == config("gap", {1}, {1}, {2.0}).hash());
  CHECK(r.out.find("# formula beta: (1 + t^2) / (2 n s t^2)") != std::string::npos);
}

TEST_CASE("markov-verify passes its identities") {
  const auto r = call(config("markov-verify", {3}, {2}, {1.5}));
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].at("identities_passed") == "true");
  CHECK(rows[0].at("relation_passed") == "true");
  CHECK(rows[0].at("literal_offdiagonal_bound_holds") == "false");
  CHECK(std::stod(rows[0].at("beta")) == doctest::Approx((1 + 2.25) / (2 * 3 * 2 * 2.25)));
}

TEST_CASE("theorem-scan gives a decreasing bound table and a slope fit") {
  auto cfg = config("theorem-scan", {2, 3, 4}, {2}, {2.0});
  const auto report = execute(cfg);
  CHECK(report.passed());
  const auto* scan = report.table("scan");
  const auto* fit = report.table("fit");
  REQUIRE(scan);
  REQUIRE(fit);
  CHECK(scan->rows.size() == 3);
  REQUIRE(fit->rows.size() == 1);
  CHECK(std::get<bool>(fit->rows[0][6]));   // slope_ok
  CHECK(std::get<bool>(fit->rows[0][8]));   // bound_monotone
  CHECK(std::get<double>(fit->rows[0][3]) < -std::log(2.0) / 3);

  CHECK(call(config("theorem-scan", {3}, {1}, {2.0})).code == 2);
  CHECK(call(config("theorem-scan", {3}, {2}, {1.0})).code == 2);
}

TEST_CASE("same config, same bytes") {
  for (const char* cmd : {"gap", "cheeger", "entropy-scan", "mcmc", "count"}) {
    auto cfg = config(cmd, {2, 3}, {2}, {1.5, 2.0});
    cfg.steps = 5000;
    cfg.seeds = {0, 3};
    const auto a = call(cfg);
    const auto b = call(cfg);
    CAPTURE(cmd);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    cfg.format = Format::Json;
    CHECK(call(cfg).out == call(cfg).out);
  }
}

TEST_CASE("worker pool keeps grid order") {
  auto cfg = config("markov-verify", {1, 2, 3}, {1, 2}, {1.1, 2.0});
  const auto serial = call(cfg);
  cfg.workers = 3;
  const auto pooled = call(cfg);
  CHECK(serial.code == 0);
  CHECK(serial.out == pooled.out);
}

TEST_CASE("json and csv carry the same numbers") {
  auto cfg = config("markov-verify", {2, 3}, {1, 2}, {1.1, 2.0});
  const auto csv = read_csv(call(cfg).out);
  cfg.format = Format::Json;
  const auto doc = nlohmann::json::parse(call(cfg).out);
  const auto& records = doc.at("tables").at("markov");
  REQUIRE(records.size() == csv.size());
  std::size_t compared = 0;
  for (std::size_t i = 0; i < csv.size(); ++i) {
    for (const auto& [key, text] : csv[i]) {
      const auto& v = records[i].at(key);
      if (v.is_number_float()) {
        CHECK(std::stod(text) == v.get<double>());
        ++compared;
      } else if (v.is_number_integer()) {
        CHECK(std::stoll(text) == v.get<long long>());
      } else if (v.is_boolean()) {
        CHECK(text == (v.get<bool>() ? "true" : "false"));
      }
    }
  }
  CHECK(compared > 50);
  CHECK(doc.at("config_hash") == cfg.hash());
  CHECK(doc.at("tolerances").at("identity_abs") == 1e-12);
}

TEST_CASE("config hash tracks the numbers, not the output format") {
  auto a = config("gap", {2}, {2}, {2.0});
  auto b = a;
  b.format = Format::Json;
  b.out = "/tmp/elsewhere.json";
  CHECK(a.hash() == b.hash());
  b.t = {2.5};
  CHECK(a.hash() != b.hash());
  b = a;
  b.dense_cap = 10;
  CHECK(a.hash() != b.hash());
}

TEST_CASE("missing output directory is an IO error") {
  auto cfg = config("gap", {1}, {1}, {2.0});
  cfg.out = "/nonexistent-dir/report.csv";
  const auto r = call(cfg);
  CHECK(r.code == 3);
  CHECK(r.err.find("IoError") != std::string::npos);
  cfg.out.clear();
  cfg.export_dir = "/nonexistent-dir";
  CHECK(call(cfg).code == 3);
}

TEST_CASE("bad parameters exit with 2") {
  CHECK(call(config("gap", {0}, {1}, {1.0})).code == 2);
  CHECK(call(config("gap", {1}, {1}, {-1.0})).code == 2);
  CHECK(call(config("nope", {1}, {1}, {1.0})).code == 2);
  auto cfg = config("gap", {1}, {1}, {1.0});
  cfg.tol = 0.0;
  CHECK(call(cfg).code == 2);
  cfg = config("mcmc", {2}, {2}, {2.0});
  cfg.start = "u1.d1";
  CHECK(call(cfg).code == 2);
}

TEST_CASE("files, tables and exports") {
  const auto dir = std::filesystem::temp_directory_path() / "motzkin_cli_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);

  auto cfg = config("cheeger", {3}, {2}, {2.0});
  cfg.out = (dir / "cheeger.csv").string();
  CHECK(call(cfg).code == 0);
  CHECK(std::filesystem::exists(dir / "cheeger.csv"));
  CHECK(std::filesystem::exists(dir / "cheeger.lemmas.csv"));
  CHECK(std::filesystem::exists(dir / "cheeger.defects.csv"));
  const auto lemmas = slurp(dir / "cheeger.lemmas.csv");
  CHECK(lemmas.find("lemma3.a_meets_s_prime") != std::string::npos);
  CHECK(lemmas.find("nonprime.max_area_vs_n2_minus_2n_plus_2") != std::string::npos);

  cfg = config("gap", {1}, {1}, {2.0});
  cfg.export_dir = dir.string();
  CHECK(call(cfg).code == 0);
  const auto coo = slurp(dir / "h_sub_n1_s1_t2.coo");
  std::istringstream in(coo);
  int i, j;
  double v;
  int entries = 0;
  while (in >> i >> j >> v) ++entries;
  CHECK(entries == 4);

  cfg = config("mcmc", {3}, {2}, {2.0});
  cfg.steps = 1000;
  cfg.thin = 10;
  cfg.trace = (dir / "trace.csv").string();
  CHECK(call(cfg).code == 0);
  std::istringstream trace(slurp(dir / "trace.csv"));
  std::string line;
  std::getline(trace, line);
  CHECK(line == "step,area,midpoint_height,in_B");
  int rows = 0;
  while (std::getline(trace, line)) ++rows;
  CHECK(rows == 100);

  cfg.seeds = {0, 1};
  CHECK(call(cfg).code == 2);  // one trace file per run
  std::filesystem::remove_all(dir);
}

TEST_CASE("mcmc summary against the exact measure") {
  auto cfg = config("mcmc", {3}, {1}, {2.0});
  cfg.steps = 200000;
  const auto report = execute(cfg);
  const auto& row = report.tables[0].rows.at(0);
  const double mean = std::get<double>(row[11]);
  const double exact = std::get<double>(row[12]);
  CHECK(mean == doctest::Approx(exact).epsilon(0.02));
  CHECK(std::get<double>(row[13]) < 0.05);
}

TEST_CASE("workers from the environment") {
  ::setenv("MOTZKIN_WORKERS", "3", 1);
  CHECK(workers_from_env() == 3);
  ::setenv("MOTZKIN_WORKERS", "0", 1);
  CHECK(workers_from_env() == 1);
  ::setenv("MOTZKIN_WORKERS", "many", 1);
  CHECK_THROWS_AS(workers_from_env(), MotzkinError);
  ::unsetenv("MOTZKIN_WORKERS");
  CHECK(workers_from_env() == 1);
}
