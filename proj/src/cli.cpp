#include "motzkin/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "motzkin/cheeger.hpp"
#include "motzkin/entropy.hpp"
#include "motzkin/errors.hpp"
#include "motzkin/hamiltonian.hpp"
#include "motzkin/markov.hpp"

#ifndef MOTZKIN_VERSION
#define MOTZKIN_VERSION "0.0.0"
#endif

namespace motzkin::cli {

namespace {

// exact identities on P and the frustration-free residual
constexpr double kIdentityTol = 1e-12;
constexpr double kZeroModeTol = 1e-10;
// full (2s+1)^{2n} space is only diagonalized below this size
constexpr std::uint64_t kFullSpaceCap = 20000;
// enumerate for cross-checks and TV only below this many walks
constexpr std::size_t kEnumerateCap = 200000;

std::string real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

[[noreturn]] void bad(const std::string& what) { throw MotzkinError(ErrorKind::InvalidParams, what); }

template <class T>
T parse_number(std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw MotzkinError(ErrorKind::ParseError, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

template <class T>
std::vector<T> parse_list(std::string_view text) {
  std::vector<T> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const auto item = text.substr(pos, comma - pos);
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_number<T>(item));
    } else {
      auto rest = item.substr(dots + 2);
      T step = 1;
      if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
        step = parse_number<T>(rest.substr(colon + 1));
        rest = rest.substr(0, colon);
      }
      const T lo = parse_number<T>(item.substr(0, dots));
      const T hi = parse_number<T>(rest);
      if (!(step > 0) || hi < lo) {
        throw MotzkinError(ErrorKind::ParseError, "bad range '" + std::string(item) + "'");
      }
      // count first so floating steps do not drift past the end
      const auto count = static_cast<long long>(std::floor(double(hi - lo) / double(step) + 1e-9)) + 1;
      for (long long k = 0; k < count; ++k) out.push_back(static_cast<T>(lo + static_cast<T>(k) * step));
    }
    pos = comma + 1;
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string s;
  for (const auto& v : values) {
    if (!s.empty()) s += ',';
    if constexpr (std::is_floating_point_v<T>) {
      s += real(v);
    } else {
      s += std::to_string(v);
    }
  }
  return s;
}

std::string point_tag(const ModelParams& p) {
  return "n" + std::to_string(p.n) + "_s" + std::to_string(p.s) + "_t" + real(p.t);
}

std::ofstream open_file(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw MotzkinError(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
  return f;
}

void close_file(std::ofstream& f, const std::filesystem::path& path) {
  f.flush();
  if (!f) throw MotzkinError(ErrorKind::IoError, "write to '" + path.string() + "' failed");
}

Walk all_flat(const ModelParams& p) {
  return validate(std::vector<StepLabel>(static_cast<std::size_t>(2 * p.n), StepLabel::flat()), p.s);
}

// Output of one grid point: rows per table plus failed assertions.
struct Chunk {
  std::vector<std::vector<std::vector<Cell>>> rows;
  std::vector<std::string> failures;
  double seconds = 0.0;

  explicit Chunk(std::size_t tables = 1) : rows(tables) {}
  void expect(bool cond, const std::string& what) {
    if (!cond) failures.push_back(what);
  }
};

template <class Fn>
std::vector<Chunk> map_points(std::size_t count, unsigned workers, Fn&& fn) {
  std::vector<Chunk> out(count);
  auto one = [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    out[i] = fn(i);
    out[i].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) one(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(workers, count); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < count;) {
          try {
            one(i);
          } catch (...) {
            const std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

void collect(Report& report, std::vector<Chunk>& chunks, bool timings) {
  if (timings && !report.tables.empty()) report.tables[0].columns.push_back("runtime_s");
  for (auto& c : chunks) {
    for (std::size_t k = 0; k < c.rows.size() && k < report.tables.size(); ++k) {
      for (auto& row : c.rows[k]) {
        if (timings && k == 0) row.emplace_back(c.seconds);
        report.tables[k].rows.push_back(std::move(row));
      }
    }
    for (auto& f : c.failures) report.failures.push_back(std::move(f));
  }
}

Cell num(std::size_t v) { return static_cast<std::int64_t>(v); }
Cell num(int v) { return static_cast<std::int64_t>(v); }

std::string where(const ModelParams& p) { return p.to_string() + " "; }

// -- commands ----------------------------------------------------------------

void cmd_count(const RunConfig& cfg, Report& r) {
  r.tables.push_back({"counts", {"n", "s", "walks", "tents", "max_area", "log10_walks", "enumerated"}, {}});
  std::vector<ModelParams> pts;
  for (int n : cfg.n)
    for (int s : cfg.s) pts.push_back({n, s, 1.0});
  auto chunks = map_points(pts.size(), cfg.workers, [&](std::size_t i) {
    const auto& p = pts[i];
    Chunk c;
    const BigInt walks = count(p);
    BigInt tents = 1;
    for (int k = 0; k < p.n; ++k) tents *= p.s;
    Cell enumerated;
    if (walks <= kEnumerateCap) {
      const auto size = enumerate(p).size();
      enumerated = num(size);
      c.expect(BigInt(size) == walks, where(p) + "enumeration size differs from the count");
    }
    const double log10 = std::log10(static_cast<double>(walks));
    c.rows[0].push_back({num(p.n), num(p.s), walks.str(), tents.str(), static_cast<std::int64_t>(p.n) * p.n, log10,
                         enumerated});
    return c;
  });
  collect(r, chunks, cfg.timings);
}

void write_operator(const std::string& dir, const std::string& name, const SubspaceOperator& op) {
  const auto path = std::filesystem::path(dir) / name;
  auto f = open_file(path);
  op.write_coordinates(f);
  close_file(f, path);
}

void write_transition(const std::string& dir, const std::string& name, const TransitionMatrix& p) {
  const auto path = std::filesystem::path(dir) / name;
  auto f = open_file(path);
  f.precision(17);
  for (int row = 0; row < p.rows.outerSize(); ++row) {
    for (TransitionMatrix::Rows::InnerIterator it(p.rows, row); it; ++it) {
      f << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
  close_file(f, path);
}

void cmd_gap(const RunConfig& cfg, Report& r) {
  r.tables.push_back({"gap",
                      {"n", "s", "t", "dim", "method", "ground_energy", "gap", "residual", "iterations", "gs_residual",
                       "theorem_bound", "full_dim", "full_ground_energy", "full_gap"},
                      {}});
  const auto pts = cfg.grid();
  SolverOptions opts;
  opts.dense_cap = cfg.dense_cap;
  auto chunks = map_points(pts.size(), cfg.workers, [&](std::size_t i) {
    const auto& p = pts[i];
    Chunk c;
    const auto ens = enumerate(p);
    const auto h = build_h_subspace(p, ens);
    const auto rep = hamiltonian_gap(p, ens, opts);
    const double gs_res = h.apply(ground_state(p, ens).amplitudes).cwiseAbs().maxCoeff();
    c.expect(gs_res <= kZeroModeTol, where(p) + "H_sub |GS> != 0");
    c.expect(std::isfinite(rep.gap) && rep.gap > 0.0, where(p) + "gap not positive");
    if (!cfg.export_dir.empty()) write_operator(cfg.export_dir, "h_sub_" + point_tag(p) + ".coo", h);

    Cell full_dim, full_e0, full_gap;
    double dim = 1.0;
    for (int k = 0; k < 2 * p.n; ++k) dim *= p.local_dim();
    if (dim <= double(kFullSpaceCap)) {
      const auto full = spectral_gap(build_h_full(p), std::nullopt, opts);
      full_dim = static_cast<std::int64_t>(dim);
      full_e0 = full.ground_energy;
      full_gap = full.gap;
      c.expect(std::abs(full.ground_energy) <= kZeroModeTol, where(p) + "full-space ground energy not zero");
    }
    const bool regime = p.s >= 2 && p.t > 1.0;
    c.rows[0].push_back({num(p.n), num(p.s), p.t, num(ens.size()), std::string(to_string(rep.method)),
                         rep.ground_energy, rep.gap, rep.residuals.empty() ? 0.0 : rep.residuals.back(),
                         num(rep.iterations), gs_res, regime ? Cell{theorem_bound(p)} : Cell{}, full_dim, full_e0,
                         full_gap});
    return c;
  });
  collect(r, chunks, cfg.timings);
}

void cmd_markov(const RunConfig& cfg, Report& r) {
  r.tables.push_back({"markov",
                      {"n", "s", "t", "dim", "beta", "factor", "max_row_sum_error", "min_entry",
                       "max_detailed_balance_error", "stationarity_defect", "min_diagonal", "max_diagonal",
                       "diagonal_bound", "max_offdiagonal", "literal_offdiagonal_bound",
                       "literal_offdiagonal_bound_holds", "p_from_h_difference", "lambda2", "gap_chain", "gap_h",
                       "predicted_gap_h", "relative_discrepancy", "identities_passed", "relation_passed", "caveat"},
                      {}});
  const auto pts = cfg.grid();
  SolverOptions opts;
  opts.dense_cap = cfg.dense_cap;
  auto chunks = map_points(pts.size(), cfg.workers, [&](std::size_t i) {
    const auto& p = pts[i];
    Chunk c;
    const auto ens = enumerate(p);
    const auto graph = build_move_graph(ens);
    const auto pi = stationary(p, ens);
    const auto h = build_h_subspace(p, ens);
    const auto pd = build_p_direct(p, ens, graph);
    const auto ph = build_p_from_h(p, h, pi);
    const auto checks = check_transition(p, pd, pi);
    const double diff = max_abs_difference(pd, ph);
    const auto chain = lambda2(pd, pi, opts);
    const auto rel = gap_relation_check(p, hamiltonian_gap(p, ens, opts), chain, cfg.tol);
    const bool identities = checks.passed(kIdentityTol) && diff <= kIdentityTol;
    c.expect(identities, where(p) + "transition identities");
    c.expect(rel.passed, where(p) + "gap relation");
    if (!cfg.export_dir.empty()) write_transition(cfg.export_dir, "p_" + point_tag(p) + ".coo", pd);
    const std::string caveat =
        checks.literal_offdiagonal_bound_holds()
            ? ""
            : "area-increasing moves have P = 1/(2ns) > 1/(2nst^2); the stated off-diagonal bound is reported only";
    c.rows[0].push_back({num(p.n), num(p.s), p.t, num(ens.size()), pd.beta, rel.factor, checks.max_row_sum_error,
                         checks.min_entry, checks.max_detailed_balance_error, checks.stationarity_defect,
                         checks.min_diagonal, checks.max_diagonal, checks.diagonal_bound, checks.max_offdiagonal,
                         checks.literal_offdiagonal_bound, checks.literal_offdiagonal_bound_holds(), diff,
                         chain.lambda2, chain.gap_chain, rel.gap_h, rel.predicted_gap_h, rel.relative_discrepancy,
                         identities, rel.passed, caveat});
    return c;
  });
  collect(r, chunks, cfg.timings);
}

std::vector<Cell> lemma_row(const ModelParams& p, const LemmaResult& l) {
  return {num(p.n), num(p.s), p.t, l.id, l.lhs, l.rhs, l.margin, l.asserted, l.passed, l.caveat};
}

void cmd_cheeger(const RunConfig& cfg, Report& r) {
  r.tables.push_back({"summary",
                      {"n", "s", "t", "dim", "beta", "pi_lambda", "pi_s", "pi_s_prime", "pi_a", "pi_b", "a_size",
                       "b_size", "q_a_ac", "lambda2", "gap_chain", "gap_h_from_chain", "cheeger_bound",
                       "bottleneck_bound", "theorem_bound", "theorem_holds", "chain_holds"},
                      {}});
  r.tables.push_back({"lemmas", {"n", "s", "t", "id", "lhs", "rhs", "margin", "asserted", "passed", "caveat"}, {}});
  r.tables.push_back({"defects", {"n", "s", "t", "a", "size", "pi", "partition_bound", "geometric_bound"}, {}});
  const auto pts = cfg.grid();
  SolverOptions opts;
  opts.dense_cap = cfg.dense_cap;
  auto chunks = map_points(pts.size(), cfg.workers, [&](std::size_t i) {
    const auto& p = pts[i];
    Chunk c(3);
    const auto ens = enumerate(p);
    const auto graph = build_move_graph(ens);
    const auto pi = stationary(p, ens);
    auto cuts = classify(ens, p);
    cuts.a_set = reachable_a(ens, cuts, graph);
    const auto P = build_p_direct(p, ens, graph);
    const auto chain = lambda2(P, pi, opts);
    const auto rep = conductance(p, pi, P, cuts);
    const double gap_h = chain.gap_chain / P.beta;

    for (const auto& l : lemma_suite(ens, p, pi)) {
      if (l.asserted) c.expect(l.passed, where(p) + l.id);
      c.rows[1].push_back(lemma_row(p, l));
    }
    for (const auto& l : conductance_checks(rep, chain.gap_chain, cfg.tol)) {
      c.expect(l.passed, where(p) + l.id);
      c.rows[1].push_back(lemma_row(p, l));
    }
    for (const auto& d : defect_table(ens, p, pi)) {
      c.rows[2].push_back({num(p.n), num(p.s), p.t, num(d.defect), num(d.size), d.pi, d.partition_bound,
                           d.geometric_bound});
    }
    Cell holds, chain_holds;
    if (p.t > 1.0) {
      const auto v = theorem_check(p, gap_h, rep, cfg.tol);
      holds = v.holds;
      chain_holds = v.chain_holds;
      c.expect(v.chain_holds, where(p) + "Delta <= (1/beta) 2Q/pi(A) <= (1/beta) 2pi(B)/pi(A)");
    }
    c.rows[0].push_back({num(p.n), num(p.s), p.t, num(ens.size()), P.beta, rep.pi_lambda, rep.pi_s, rep.pi_s_prime,
                         rep.pi_a, rep.pi_b, num(CutSets::count(cuts.a_set)), num(CutSets::count(cuts.b_set)),
                         rep.q_a_ac, chain.lambda2, chain.gap_chain, gap_h, rep.cheeger_bound, rep.bottleneck_bound,
                         rep.theorem_bound, holds, chain_holds});
    return c;
  });
  collect(r, chunks, cfg.timings);
}

void cmd_theorem_scan(const RunConfig& cfg, Report& r) {
  r.tables.push_back({"scan",
                      {"n", "s", "t", "dim", "method", "gap_h", "theorem_bound", "holds", "cheeger_gap_bound",
                       "bottleneck_gap_bound", "chain_holds"},
                      {}});
  r.tables.push_back({"fit",
                      {"s", "t", "points", "slope", "intercept", "slope_bound", "slope_ok", "first_n_holds",
                       "bound_monotone", "caveat"},
                      {}});
  const auto pts = cfg.grid();
  for (const auto& p : pts) p.require_theorem_regime();
  SolverOptions opts;
  opts.dense_cap = cfg.dense_cap;
  std::vector<double> gaps(pts.size()), bounds(pts.size());
  std::vector<char> holds(pts.size());
  auto chunks = map_points(pts.size(), cfg.workers, [&](std::size_t i) {
    const auto& p = pts[i];
    Chunk c(2);
    const auto ens = enumerate(p);
    const auto graph = build_move_graph(ens);
    const auto pi = stationary(p, ens);
    auto cuts = classify(ens, p);
    cuts.a_set = reachable_a(ens, cuts, graph);
    const auto rep_h = hamiltonian_gap(p, ens, opts);
    const auto rep = conductance(p, pi, build_p_direct(p, ens, graph), cuts);
    const auto v = theorem_check(p, rep_h.gap, rep, cfg.tol);
    c.expect(v.chain_holds, where(p) + "Delta <= (1/beta) 2Q/pi(A) <= (1/beta) 2pi(B)/pi(A)");
    gaps[i] = rep_h.gap;
    bounds[i] = v.bound;
    holds[i] = v.holds;
    c.rows[0].push_back({num(p.n), num(p.s), p.t, num(ens.size()), std::string(to_string(rep_h.method)), rep_h.gap,
                         v.bound, v.holds, v.cheeger_gap_bound, v.bottleneck_gap_bound, v.chain_holds});
    return c;
  });

  // one fit per (s, t), over n in grid order
  std::map<std::pair<int, double>, std::vector<std::size_t>> series;
  std::vector<std::pair<int, double>> order;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto key = std::make_pair(pts[i].s, pts[i].t);
    if (!series.count(key)) order.push_back(key);
    series[key].push_back(i);
  }
  Chunk fits(2);
  for (const auto& key : order) {
    auto idx = series[key];
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return pts[a].n < pts[b].n; });
    std::vector<int> ns;
    std::vector<double> gs;
    Cell first;
    bool monotone = true;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      ns.push_back(pts[idx[k]].n);
      gs.push_back(gaps[idx[k]]);
      if (holds[idx[k]] && std::holds_alternative<std::monostate>(first)) first = num(pts[idx[k]].n);
      if (k && !(bounds[idx[k]] < bounds[idx[k - 1]])) monotone = false;
    }
    const std::string caveat = "absolute bound is asymptotic; first_n_holds is recorded, not asserted";
    if (ns.size() < 2) {
      fits.rows[1].push_back({num(key.first), key.second, num(ns.size()), Cell{}, Cell{}, -std::log(key.second) / 3.0,
                              Cell{}, first, monotone, caveat + "; slope needs two or more n"});
      continue;
    }
    const auto fit = fit_log_gap_slope(ns, gs, key.second);
    fits.expect(fit.slope_ok, "s=" + std::to_string(key.first) + " t=" + real(key.second) + " slope " +
                                  real(fit.slope) + " above " + real(fit.slope_bound));
    fits.rows[1].push_back({num(key.first), key.second, num(ns.size()), fit.slope, fit.intercept, fit.slope_bound,
                            fit.slope_ok, first, monotone, caveat});
  }
  chunks.push_back(std::move(fits));
  collect(r, chunks, false);
  if (cfg.timings) {
    // the fit chunk carries no timing
    r.tables[0].columns.push_back("runtime_s");
    for (std::size_t i = 0; i < pts.size(); ++i) r.tables[0].rows[i].emplace_back(chunks[i].seconds);
  }
}

void cmd_entropy_scan(const RunConfig& cfg, Report& r) {
  r.tables.push_back({"entropy",
                      {"n", "s", "t", "entropy_bits", "mean_midpoint_height", "log_norm", "total_weight",
                       "left_right_max_diff"},
                      {}});
  r.tables.push_back({"fits",
                      {"s", "t", "regime", "points", "max_n", "slope", "log_coefficient", "intercept", "statistic",
                       "reference", "relative_error", "tolerance", "judged", "passed", "caveat"},
                      {}});
  const auto pts = cfg.grid();
  auto chunks = map_points(pts.size(), cfg.workers, [&](std::size_t i) {
    const auto& p = pts[i];
    Chunk c(2);
    const auto left = half_weights(p);
    const auto right = right_half_weights(p);
    double lr = 0.0;
    for (std::size_t m = 0; m < left.log_d.size(); ++m) {
      lr = std::max(lr, std::abs(left.log_d[m] - right.log_d[m]) / (1.0 + std::abs(left.log_d[m])));
    }
    const auto spec = schmidt_entropy(left);
    const auto mid = midpoint_height_stats(left);
    c.expect(std::abs(spec.total_weight() - 1.0) <= cfg.tol, where(p) + "Schmidt weights do not sum to one");
    c.expect(lr <= cfg.tol, where(p) + "left and right half weights differ");
    c.rows[0].push_back({num(p.n), num(p.s), p.t, spec.entropy_bits, mid.mean, spec.log_norm, spec.total_weight(), lr});
    return c;
  });
  Chunk fits(2);
  for (const auto& f : entropy_scan(pts).fits) {
    std::string caveat = f.caveat;
    if (caveat.empty()) caveat = "asymptotic trend; compared with the reference but not asserted";
    fits.rows[1].push_back({num(f.s), f.t, to_string(f.regime), num(f.points), num(f.max_n), f.slope,
                            f.log_coefficient, f.intercept, f.statistic, f.reference, f.relative_error, f.tolerance,
                            f.judged, f.passed, caveat});
  }
  chunks.push_back(std::move(fits));
  collect(r, chunks, false);
}

void cmd_mcmc(const RunConfig& cfg, Report& r) {
  r.tables.push_back({"runs",
                      {"n", "s", "t", "seed", "steps", "start", "moves_up", "moves_down", "trajectory_digest",
                       "final_walk", "final_area", "mean_area", "exact_mean_area", "tv_distance"},
                      {}});
  struct Job {
    ModelParams p;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& p : cfg.grid())
    for (auto seed : cfg.seeds) jobs.push_back({p, seed});
  if (!cfg.trace.empty() && jobs.size() != 1) bad("--trace needs exactly one grid point and one seed");

  auto chunks = map_points(jobs.size(), cfg.workers, [&](std::size_t i) {
    const auto& [p, seed] = jobs[i];
    Chunk c;
    const Walk start = cfg.start.empty() ? all_flat(p) : parse_walk(cfg.start, p.s);

    std::optional<WalkEnsemble> ens;
    if (count(p) <= kEnumerateCap) ens = enumerate(p);

    std::ofstream trace;
    const std::filesystem::path trace_path(cfg.trace);
    if (!cfg.trace.empty()) {
      trace = open_file(trace_path);
      trace << "step,area,midpoint_height,in_B\n";
    }
    long double area_sum = 0.0L;
    std::vector<ChainObserver> obs{[&](const ChainState& st) {
      area_sum += static_cast<long double>(st.area);
      if (trace.is_open() && st.step % cfg.thin == 0) {
        trace << st.step << ',' << st.area << ',' << st.heights[static_cast<std::size_t>(p.n)] << ','
              << (in_bottleneck(st.steps, st.heights, p.n) ? 1 : 0) << '\n';
      }
    }};
    const auto run = mcmc_sample(p, cfg.steps, seed, start, obs, ens ? &*ens : nullptr);
    if (trace.is_open()) close_file(trace, trace_path);

    Cell exact_mean, tv;
    if (ens) {
      const auto pi = stationary(p, *ens);
      double mean = 0.0;
      for (std::size_t k = 0; k < ens->size(); ++k) {
        mean += pi.pi[static_cast<Eigen::Index>(k)] * static_cast<double>((*ens)[k].area());
      }
      exact_mean = mean;
      tv = tv_distance(run.visit_counts, pi.pi);
    }
    c.rows[0].push_back({num(p.n), num(p.s), p.t, static_cast<std::int64_t>(seed),
                         static_cast<std::int64_t>(run.steps), format_walk(start),
                         static_cast<std::int64_t>(run.moves_up), static_cast<std::int64_t>(run.moves_down),
                         hex64(run.trajectory_digest), format_walk(run.final_walk), run.final_walk.area(),
                         static_cast<double>(area_sum / static_cast<long double>(cfg.steps)), exact_mean, tv});
    return c;
  });
  collect(r, chunks, cfg.timings);
}

void add_formulas(const RunConfig& cfg, Report& r) {
  const std::string& c = cfg.command;
  auto f = [&](const char* k, const char* v) { r.formulas.emplace_back(k, v); };
  if (c == "count") {
    f("walks", "s-colored Motzkin walks of length 2n (height DP, exact)");
    f("tents", "s^n walks of maximal area n^2");
    return;
  }
  if (c == "entropy-scan") {
    f("entropy", "S = -sum_m s^m p_m log2 p_m, p_m = D(m)^2 / sum_k s^k D(k)^2");
    f("linear_reference", "log2 s (t > 1)");
    f("sqrt_reference", "2 log2(s) sqrt(2 sigma / pi), sigma = sqrt(s) / (2 sqrt(s) + 1) (t = 1)");
    f("bounded_reference", "max_n S_n < 3 bits (t < 1)");
    return;
  }
  f("stationary", "pi(x) = t^(2 A(x)) / Z");
  f("beta", "(1 + t^2) / (2 n s t^2)");
  f("gap_relation", "Delta(H) = (2 n s t^2 / (1 + t^2)) (1 - lambda_2)");
  f("theorem_bound", "8 n s t^(-n^2/3)");
  if (c == "cheeger" || c == "theorem-scan") {
    f("cheeger_bound", "1 - lambda_2 <= 2 Q(A, A^c) / pi(A)");
    f("bottleneck_bound", "2 Q(A, A^c) / pi(A) <= 2 pi(B) / pi(A)");
    f("partition_bound", "pi(D_a) < p(a) t^(-2a)");
  }
  if (c == "theorem-scan") f("slope_bound", "d ln Delta / d n^2 <= -(ln t) / 3");
  if (c == "markov-verify" || c == "mcmc") {
    f("rates", "P(x,y) = 1/(2ns) for area +1 moves, 1/(2n s t^2) for area -1 moves");
    f("diagonal_bound", "0 < P(x,x) <= 1 - 1/(2 n s t^2)");
  }
}

void add_tolerances(const RunConfig& cfg, Report& r) {
  const std::string& c = cfg.command;
  if (c == "markov-verify") r.tolerances.emplace_back("identity_abs", kIdentityTol);
  if (c == "gap") r.tolerances.emplace_back("zero_mode_abs", kZeroModeTol);
  if (c != "count" && c != "mcmc") r.tolerances.emplace_back("relative", cfg.tol);
}

// -- emission ----------------------------------------------------------------

void write_csv_cell(std::ostream& os, const Cell& cell) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
        } else if constexpr (std::is_same_v<T, bool>) {
          os << (v ? "true" : "false");
        } else if constexpr (std::is_same_v<T, double>) {
          os << real(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (v.find_first_of(",\"\n") == std::string::npos) {
            os << v;
          } else {
            os << '"';
            for (char ch : v) os << (ch == '"' ? "\"\"" : std::string(1, ch));
            os << '"';
          }
        } else {
          os << v;
        }
      },
      cell);
}

void write_csv_table(std::ostream& os, const Report& r, const Table& t, bool header_block, bool tag) {
  if (header_block) {
    os << "# artifact_version: " << artifact_version() << '\n';
    os << "# config_hash: " << r.config_hash << '\n';
    os << "# command: " << r.command << '\n';
    for (const auto& [k, v] : r.formulas) os << "# formula " << k << ": " << v << '\n';
    for (const auto& [k, v] : r.tolerances) os << "# tolerance " << k << ": " << real(v) << '\n';
    os << "# passed: " << (r.passed() ? "true" : "false") << '\n';
  }
  if (tag) os << "# table: " << t.name << '\n';
  os << "artifact_version,config_hash";
  for (const auto& c : t.columns) os << ',' << c;
  os << '\n';
  for (const auto& row : t.rows) {
    os << artifact_version() << ',' << r.config_hash;
    for (const auto& cell : row) {
      os << ',';
      write_csv_cell(os, cell);
    }
    os << '\n';
  }
}

nlohmann::ordered_json json_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          // JSON has no infinities; keep the CSV spelling
          if (!std::isfinite(v)) return real(v);
          return v;
        } else {
          return v;
        }
      },
      cell);
}

std::string to_json(const Report& r) {
  nlohmann::ordered_json doc;
  doc["artifact_version"] = artifact_version();
  doc["config_hash"] = r.config_hash;
  doc["command"] = r.command;
  auto& formulas = doc["formulas"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.formulas) formulas[k] = v;
  auto& tols = doc["tolerances"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.tolerances) tols[k] = v;
  doc["passed"] = r.passed();
  doc["failures"] = r.failures;
  auto& tables = doc["tables"] = nlohmann::ordered_json::object();
  for (const auto& t : r.tables) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json rec;
      rec["artifact_version"] = artifact_version();
      rec["config_hash"] = r.config_hash;
      for (std::size_t k = 0; k < t.columns.size() && k < row.size(); ++k) rec[t.columns[k]] = json_cell(row[k]);
      rows.push_back(std::move(rec));
    }
    tables[t.name] = std::move(rows);
  }
  return doc.dump(2) + "\n";
}

}  // namespace

std::string_view artifact_version() { return MOTZKIN_VERSION; }

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"count",        "gap",          "markov-verify", "cheeger",
                                              "theorem-scan", "entropy-scan", "mcmc"};
  return names;
}

std::vector<int> parse_int_list(std::string_view text) { return parse_list<int>(text); }
std::vector<double> parse_real_list(std::string_view text) { return parse_list<double>(text); }

unsigned workers_from_env() {
  const char* env = std::getenv("MOTZKIN_WORKERS");
  if (!env || !*env) return 1;
  try {
    return std::max(1, parse_number<int>(env));
  } catch (const MotzkinError&) {
    bad("MOTZKIN_WORKERS must be a positive integer");
  }
}

void RunConfig::validate() const {
  if (std::find(commands().begin(), commands().end(), command) == commands().end()) {
    bad("unknown command '" + command + "'");
  }
  if (n.empty() || s.empty() || t.empty() || seeds.empty()) bad("empty parameter list");
  for (const auto& p : grid()) p.validate();
  if (!(tol > 0.0) || !std::isfinite(tol)) bad("--tol must be positive");
  if (dense_cap == 0) bad("--dense-cap must be positive");
  if (steps == 0) bad("--steps must be positive");
  if (thin == 0) bad("--thin must be positive");
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "command=" << command << ";n=" << join(n) << ";s=" << join(s) << ";t=" << join(t)
     << ";tol=" << real(tol) << ";dense_cap=" << dense_cap;
  if (command == "mcmc") os << ";seeds=" << join(seeds) << ";steps=" << steps << ";thin=" << thin << ";start=" << start;
  os << ";version=" << artifact_version();
  return os.str();
}

std::string RunConfig::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return hex64(h);
}

std::vector<ModelParams> RunConfig::grid() const {
  std::vector<ModelParams> out;
  for (int nn : n)
    for (int ss : s)
      for (double tt : t) out.push_back({nn, ss, tt});
  return out;
}

const Table* Report::table(std::string_view name) const {
  for (const auto& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

Report execute(const RunConfig& config) {
  config.validate();
  Report r;
  r.command = config.command;
  r.config_hash = config.hash();
  add_formulas(config, r);
  add_tolerances(config, r);
  const auto& c = config.command;
  if (c == "count") cmd_count(config, r);
  if (c == "gap") cmd_gap(config, r);
  if (c == "markov-verify") cmd_markov(config, r);
  if (c == "cheeger") cmd_cheeger(config, r);
  if (c == "theorem-scan") cmd_theorem_scan(config, r);
  if (c == "entropy-scan") cmd_entropy_scan(config, r);
  if (c == "mcmc") cmd_mcmc(config, r);
  return r;
}

void emit(const Report& report, Format format, const std::string& path, std::ostream& fallback) {
  if (format == Format::Json) {
    const auto text = to_json(report);
    if (path.empty()) {
      fallback << text;
      return;
    }
    auto f = open_file(path);
    f << text;
    close_file(f, path);
    return;
  }
  if (path.empty()) {
    const bool many = report.tables.size() > 1;
    for (std::size_t k = 0; k < report.tables.size(); ++k) {
      if (k) fallback << '\n';
      write_csv_table(fallback, report, report.tables[k], k == 0, many);
    }
    return;
  }
  const std::filesystem::path base(path);
  for (std::size_t k = 0; k < report.tables.size(); ++k) {
    auto target = base;
    if (k) {
      const auto stem = base.extension() == ".csv" ? base.stem().string() : base.filename().string();
      target = base.parent_path() / (stem + "." + report.tables[k].name + ".csv");
    }
    auto f = open_file(target);
    write_csv_table(f, report, report.tables[k], true, false);
    close_file(f, target);
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    // fail on missing directories before any compute
    auto need_dir = [](const std::filesystem::path& dir) {
      if (!dir.empty() && !std::filesystem::is_directory(dir)) {
        throw MotzkinError(ErrorKind::IoError, "directory '" + dir.string() + "' does not exist");
      }
    };
    if (!config.out.empty()) need_dir(std::filesystem::path(config.out).parent_path());
    if (!config.trace.empty()) need_dir(std::filesystem::path(config.trace).parent_path());
    need_dir(config.export_dir);
    const auto report = execute(config);
    emit(report, config.format, config.out, out);
    for (const auto& f : report.failures) err << "assertion failed: " << f << '\n';
    return report.passed() ? 0 : 1;
  } catch (const MotzkinError& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::IoError:
        return 3;
      case ErrorKind::InvalidParams:
      case ErrorKind::ParseError:
      case ErrorKind::PreconditionViolated:
      case ErrorKind::InvalidStart:
      case ErrorKind::InvalidColor:
      case ErrorKind::OddLength:
      case ErrorKind::NegativeHeight:
      case ErrorKind::NonzeroEndpoint:
      case ErrorKind::ColorMismatch:
        return 2;
      default:
        return 4;
    }
  }
}

}  // namespace motzkin::cli
