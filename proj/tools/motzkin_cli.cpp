// Command-line front end: parses flags into a RunConfig and hands off to run().

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "motzkin/cli.hpp"
#include "motzkin/errors.hpp"

namespace cli = motzkin::cli;

int main(int argc, char** argv) {
  CLI::App app{"Area-weighted colored Motzkin chain: spectra, mixing bounds and entropy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cli::artifact_version()));

  std::string n_text = "1", s_text = "1", t_text = "1", seed_text = "0", format = "csv";
  cli::RunConfig cfg;

  const std::string help[] = {
      "exact walk counts (t is ignored)",
      "spectral gap of H restricted to walks, plus the full space when small",
      "transition-matrix identities and the gap relation",
      "cut sets, conductance, lemma checks and defect table",
      "gap scan against 8ns t^(-n^2/3) with a slope fit of ln gap on n^2",
      "half-chain entropy from the Schmidt DP, with regime fits",
      "simulate the chain; --trace streams step,area,midpoint_height,in_B",
  };
  for (std::size_t k = 0; k < cli::commands().size(); ++k) {
    auto* sub = app.add_subcommand(cli::commands()[k], help[k]);
    sub->add_option("--n", n_text, "half-length n: value, list a,b or range a..b")->capture_default_str();
    sub->add_option("--s", s_text, "colors s")->capture_default_str();
    sub->add_option("--t", t_text, "deformation t; ranges take a step as a..b:step")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "relative tolerance")->capture_default_str();
    sub->add_option("--dense-cap", cfg.dense_cap, "largest dimension solved densely")->capture_default_str();
    sub->add_option("--out", cfg.out, "report path (stdout when omitted)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_flag("--timings", cfg.timings, "add wall-clock columns (output no longer byte-stable)");
    const auto& name = cli::commands()[k];
    if (name == "gap" || name == "markov-verify") {
      sub->add_option("--export", cfg.export_dir, "directory for coordinate-format operator dumps");
    }
    if (name == "mcmc") {
      sub->add_option("--seed", seed_text, "seed or list of seeds")->capture_default_str();
      sub->add_option("--steps", cfg.steps, "chain steps")->capture_default_str();
      sub->add_option("--start", cfg.start, "start walk, e.g. u1.0.d1.0 (all flat by default)");
      sub->add_option("--trace", cfg.trace, "trajectory CSV path");
      sub->add_option("--thin", cfg.thin, "keep every k-th step in the trace")->capture_default_str();
    }
  }

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.n = cli::parse_int_list(n_text);
    cfg.s = cli::parse_int_list(s_text);
    cfg.t = cli::parse_real_list(t_text);
    cfg.seeds.clear();
    for (int seed : cli::parse_int_list(seed_text)) {
      if (seed < 0) throw motzkin::MotzkinError(motzkin::ErrorKind::InvalidParams, "seeds must be non-negative");
      cfg.seeds.push_back(static_cast<std::uint64_t>(seed));
    }
    cfg.format = format == "json" ? cli::Format::Json : cli::Format::Csv;
    cfg.workers = cli::workers_from_env();
  } catch (const motzkin::MotzkinError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return cli::run(cfg, std::cout, std::cerr);
}
