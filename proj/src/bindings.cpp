// Python bindings. Functions take (n, s, t) directly and return numpy arrays,
// dicts and lists; the thin wrappers in motzkin_chain/__init__.py add scipy
// sparse matrices on top.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <sstream>

#include "motzkin/cheeger.hpp"
#include "motzkin/cli.hpp"
#include "motzkin/entropy.hpp"
#include "motzkin/errors.hpp"
#include "motzkin/hamiltonian.hpp"
#include "motzkin/markov.hpp"
#include "motzkin/partitions.hpp"

namespace py = pybind11;
using namespace motzkin;

namespace {

py::int_ big(const BigInt& v) { return py::int_(py::str(v.str())); }

ModelParams params(int n, int s, double t) {
  ModelParams p{n, s, t};
  p.validate();
  return p;
}

// (rows, cols, values) of a sparse matrix, column-major traversal
template <class Sparse>
py::tuple triplets(const Sparse& m) {
  std::vector<long long> rows, cols;
  std::vector<double> vals;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (typename Sparse::InnerIterator it(m, k); it; ++it) {
      rows.push_back(it.row());
      cols.push_back(it.col());
      vals.push_back(it.value());
    }
  }
  return py::make_tuple(rows, cols, vals, py::make_tuple(m.rows(), m.cols()));
}

py::dict spectrum_dict(const SpectrumReport& r) {
  py::dict d;
  d["ground_energy"] = r.ground_energy;
  d["gap"] = r.gap;
  d["method"] = std::string(to_string(r.method));
  d["residuals"] = r.residuals;
  d["iterations"] = r.iterations;
  return d;
}

py::dict lemma_dict(const LemmaResult& l) {
  py::dict d;
  d["id"] = l.id;
  d["lhs"] = l.lhs;
  d["rhs"] = l.rhs;
  d["margin"] = l.margin;
  d["asserted"] = l.asserted;
  d["passed"] = l.passed;
  d["caveat"] = l.caveat;
  return d;
}

struct Cheeger {
  WalkEnsemble ens;
  MoveGraph graph;
  StationaryDist pi;
  CutSets cuts;
  TransitionMatrix p;
};

Cheeger cheeger_setup(const ModelParams& prm) {
  Cheeger c{enumerate(prm), {}, {}, {}, {}};
  c.graph = build_move_graph(c.ens);
  c.pi = stationary(prm, c.ens);
  c.cuts = classify(c.ens, prm);
  c.cuts.a_set = reachable_a(c.ens, c.cuts, c.graph);
  c.p = build_p_direct(prm, c.ens, c.graph);
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Area-weighted colored Motzkin chain";
  m.attr("__version__") = std::string(cli::artifact_version());

  static py::handle error_type = py::exception<MotzkinError>(m, "MotzkinError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const MotzkinError& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
      inst.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type.ptr(), inst.ptr());
    }
  });

  // -- walks ------------------------------------------------------------------
  m.def(
      "count", [](int n, int s) { return big(count(params(n, s, 1.0))); }, py::arg("n"), py::arg("s"),
      "Number of s-colored Motzkin walks of length 2n.");
  m.def(
      "walks",
      [](int n, int s) {
        const auto ens = enumerate(params(n, s, 1.0));
        std::vector<std::string> out;
        for (const auto& w : ens.walks()) out.push_back(format_walk(w));
        return out;
      },
      py::arg("n"), py::arg("s"), "All walks in enumeration order, as text.");
  m.def(
      "areas",
      [](int n, int s) {
        const auto ens = enumerate(params(n, s, 1.0));
        Eigen::VectorXd a(static_cast<Eigen::Index>(ens.size()));
        for (std::size_t i = 0; i < ens.size(); ++i) a[static_cast<Eigen::Index>(i)] = double(ens[i].area());
        return a;
      },
      py::arg("n"), py::arg("s"));
  m.def(
      "walk_info",
      [](const std::string& text, int s) {
        const auto w = parse_walk(text, s);
        py::dict d;
        d["area"] = w.area();
        d["heights"] = w.heights();
        d["prime"] = is_prime(w);
        d["color_flip"] = format_walk(color_flip(w, s));
        std::vector<std::pair<std::string, int>> moves;
        for (const auto& mv : local_moves(w, s)) moves.emplace_back(format_walk(mv.target), mv.delta_area);
        d["moves"] = moves;
        return d;
      },
      py::arg("walk"), py::arg("s"));

  // -- hamiltonian ------------------------------------------------------------
  m.def(
      "ground_state",
      [](int n, int s, double t) {
        const auto p = params(n, s, t);
        const auto gs = ground_state(p, enumerate(p));
        return py::make_tuple(gs.amplitudes, gs.log_z);
      },
      py::arg("n"), py::arg("s"), py::arg("t"), "(amplitudes t^A/sqrt(Z), log Z)");
  m.def(
      "h_subspace_triplets",
      [](int n, int s, double t) {
        const auto p = params(n, s, t);
        return triplets(build_h_subspace(p, enumerate(p)).matrix());
      },
      py::arg("n"), py::arg("s"), py::arg("t"));
  m.def(
      "hamiltonian_gap",
      [](int n, int s, double t, std::size_t dense_cap) {
        const auto p = params(n, s, t);
        SolverOptions o;
        o.dense_cap = dense_cap;
        return spectrum_dict(hamiltonian_gap(p, enumerate(p), o));
      },
      py::arg("n"), py::arg("s"), py::arg("t"), py::arg("dense_cap") = 4000);
  m.def(
      "full_space_gap",
      [](int n, int s, double t) { return spectrum_dict(spectral_gap(build_h_full(params(n, s, t)))); },
      py::arg("n"), py::arg("s"), py::arg("t"));

  // -- markov -----------------------------------------------------------------
  m.def("transition_beta", [](int n, int s, double t) { return transition_beta(params(n, s, t)); }, py::arg("n"),
        py::arg("s"), py::arg("t"));
  m.def(
      "stationary",
      [](int n, int s, double t) {
        const auto p = params(n, s, t);
        return stationary(p, enumerate(p)).pi;
      },
      py::arg("n"), py::arg("s"), py::arg("t"));
  m.def(
      "transition_triplets",
      [](int n, int s, double t, bool from_h) {
        const auto p = params(n, s, t);
        const auto ens = enumerate(p);
        if (from_h) return triplets(build_p_from_h(p, build_h_subspace(p, ens), stationary(p, ens)).rows);
        return triplets(build_p_direct(p, ens).rows);
      },
      py::arg("n"), py::arg("s"), py::arg("t"), py::arg("from_h") = false);
  m.def(
      "gap_relation",
      [](int n, int s, double t, double tol) {
        const auto p = params(n, s, t);
        const auto ens = enumerate(p);
        const auto chain = lambda2(build_p_direct(p, ens), stationary(p, ens));
        const auto rel = gap_relation_check(p, hamiltonian_gap(p, ens), chain, tol);
        py::dict d;
        d["lambda2"] = chain.lambda2;
        d["gap_chain"] = rel.gap_chain;
        d["gap_h"] = rel.gap_h;
        d["factor"] = rel.factor;
        d["predicted_gap_h"] = rel.predicted_gap_h;
        d["relative_discrepancy"] = rel.relative_discrepancy;
        d["passed"] = rel.passed;
        return d;
      },
      py::arg("n"), py::arg("s"), py::arg("t"), py::arg("tol") = 1e-9);
  m.def(
      "mcmc",
      [](int n, int s, double t, std::uint64_t steps, std::uint64_t seed, const std::string& start) {
        const auto p = params(n, s, t);
        const Walk w = start.empty()
                           ? validate(std::vector<StepLabel>(static_cast<std::size_t>(2 * n), StepLabel::flat()), s)
                           : parse_walk(start, s);
        const auto ens = enumerate(p);
        McmcRun run;
        {
          py::gil_scoped_release release;
          run = mcmc_sample(p, steps, seed, w, {}, &ens);
        }
        py::dict d;
        d["steps"] = run.steps;
        d["moves_up"] = run.moves_up;
        d["moves_down"] = run.moves_down;
        d["trajectory_digest"] = run.trajectory_digest;
        d["visit_counts"] = run.visit_counts;
        d["final_walk"] = format_walk(run.final_walk);
        d["tv_distance"] = tv_distance(run.visit_counts, stationary(p, ens).pi);
        return d;
      },
      py::arg("n"), py::arg("s"), py::arg("t"), py::arg("steps"), py::arg("seed") = 0, py::arg("start") = "");

  // -- cheeger ----------------------------------------------------------------
  m.def(
      "conductance",
      [](int n, int s, double t) {
        const auto p = params(n, s, t);
        const auto c = cheeger_setup(p);
        const auto r = conductance(p, c.pi, c.p, c.cuts);
        py::dict d;
        d["q_a_ac"] = r.q_a_ac;
        d["pi_a"] = r.pi_a;
        d["pi_s"] = r.pi_s;
        d["pi_s_prime"] = r.pi_s_prime;
        d["pi_b"] = r.pi_b;
        d["pi_lambda"] = r.pi_lambda;
        d["cheeger_bound"] = r.cheeger_bound;
        d["bottleneck_bound"] = r.bottleneck_bound;
        d["theorem_bound"] = r.theorem_bound;
        d["gap_chain"] = lambda2(c.p, c.pi).gap_chain;
        return d;
      },
      py::arg("n"), py::arg("s"), py::arg("t"));
  m.def(
      "lemma_suite",
      [](int n, int s, double t) {
        const auto p = params(n, s, t);
        const auto c = cheeger_setup(p);
        py::list out;
        for (const auto& l : lemma_suite(c.ens, p, c.pi)) out.append(lemma_dict(l));
        const auto chain = lambda2(c.p, c.pi);
        for (const auto& l : conductance_checks(conductance(p, c.pi, c.p, c.cuts), chain.gap_chain)) {
          out.append(lemma_dict(l));
        }
        return out;
      },
      py::arg("n"), py::arg("s"), py::arg("t"));
  m.def("theorem_bound", [](int n, int s, double t) { return theorem_bound(params(n, s, t)); }, py::arg("n"),
        py::arg("s"), py::arg("t"));

  // -- entropy ----------------------------------------------------------------
  m.def(
      "entropy",
      [](int n, int s, double t) { return schmidt_entropy(params(n, s, t)).entropy_bits; }, py::arg("n"),
      py::arg("s"), py::arg("t"), "Half-chain entanglement entropy in bits.");
  m.def(
      "schmidt_spectrum",
      [](int n, int s, double t) {
        const auto spec = schmidt_entropy(params(n, s, t));
        std::vector<double> p, mult;
        for (const auto& l : spec.levels) {
          p.push_back(l.p);
          mult.push_back(std::exp(l.log_multiplicity));
        }
        return py::make_tuple(p, mult);
      },
      py::arg("n"), py::arg("s"), py::arg("t"), "(p_m, s^m) for m = 0..n");
  m.def(
      "midpoint_height",
      [](int n, int s, double t) {
        const auto st = midpoint_height_stats(params(n, s, t));
        return py::make_tuple(st.distribution, st.mean);
      },
      py::arg("n"), py::arg("s"), py::arg("t"));

  // -- partitions -------------------------------------------------------------
  m.def(
      "partition_count", [](int a) { return big(partition_count(a)); }, py::arg("a"));
  m.def("hardy_ramanujan", &hardy_ramanujan, py::arg("a"));

  // -- reports ----------------------------------------------------------------
  m.def(
      "run",
      [](const std::string& command, std::vector<int> n, std::vector<int> s, std::vector<double> t,
         const std::string& format, double tol, std::size_t dense_cap, std::vector<std::uint64_t> seeds,
         std::uint64_t steps) {
        cli::RunConfig cfg;
        cfg.command = command;
        cfg.n = std::move(n);
        cfg.s = std::move(s);
        cfg.t = std::move(t);
        cfg.tol = tol;
        cfg.dense_cap = dense_cap;
        cfg.seeds = std::move(seeds);
        cfg.steps = steps;
        if (format != "csv" && format != "json") throw MotzkinError(ErrorKind::InvalidParams, "format must be csv or json");
        cfg.format = format == "json" ? cli::Format::Json : cli::Format::Csv;
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(cfg, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("command"), py::arg("n"), py::arg("s"), py::arg("t"), py::arg("format") = "json",
      py::arg("tol") = 1e-9, py::arg("dense_cap") = 4000, py::arg("seeds") = std::vector<std::uint64_t>{0},
      py::arg("steps") = 100000, "Same records as the command-line tool: (exit code, report text, messages).");
}
