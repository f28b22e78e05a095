#include <doctest.h>

#include <cmath>
#include <queue>

#include "motzkin/cheeger.hpp"
#include "motzkin/errors.hpp"

using namespace motzkin;

namespace {

struct Fixture {
  ModelParams params;
  WalkEnsemble ens;
  MoveGraph graph;
  StationaryDist pi;
  CutSets cuts;

  explicit Fixture(ModelParams p)
      : params(p), ens(enumerate(p)), graph(build_move_graph(ens)), pi(stationary(p, ens)), cuts(classify(ens, p)) {
    cuts.a_set = reachable_a(ens, cuts, graph);
  }
  std::size_t id(const char* text) const { return *ens.find(parse_walk(text, params.s)); }
};

}  // namespace

TEST_CASE("classification examples") {
  const Fixture f({2, 2, 2.0});
  const auto tent1 = f.id("u1.u1.d1.d1");
  CHECK(f.cuts.prime[tent1]);
  CHECK(f.cuts.s_set[tent1]);
  CHECK_FALSE(f.cuts.b_set[tent1]);
  CHECK(f.cuts.s_prime[f.id("u2.u2.d2.d2")]);
  CHECK(f.cuts.b_set[f.id("0.u1.d1.0")]);
  CHECK_FALSE(f.cuts.prime[f.id("u1.d1.u1.d1")]);
  CHECK_THROWS_AS(classify(enumerate({2, 1, 2.0}), {2, 1, 2.0}), MotzkinError);
}

TEST_CASE("prime walks split into S and S'") {
  for (int s = 2; s <= 4; ++s) {
    const Fixture f({3, s, 1.5});
    for (std::size_t i = 0; i < f.ens.size(); ++i) {
      CHECK(f.cuts.prime[i] == (f.cuts.s_set[i] || f.cuts.s_prime[i]));
      CHECK_FALSE((f.cuts.s_set[i] && f.cuts.s_prime[i]));
      if (f.cuts.prime[i]) {
        const auto& st = f.ens[i].steps();
        CHECK(st.front().kind == StepKind::Up);
        CHECK(st.back().kind == StepKind::Down);
        CHECK(st.front().color == st.back().color);
      }
    }
  }
}

TEST_CASE("A is the closure of S outside B") {
  for (int s = 2; s <= 3; ++s) {
    for (int n = 2; n <= 4; ++n) {
      const Fixture f({n, s, 2.0});
      const auto& a = f.cuts.a_set;
      for (std::size_t i = 0; i < f.ens.size(); ++i) {
        if (f.cuts.s_set[i]) CHECK(a[i]);
        if (a[i]) CHECK_FALSE(f.cuts.b_set[i]);
        // closed under moves avoiding B
        if (a[i]) {
          for (const auto& e : f.graph.out_edges(i)) {
            if (!f.cuts.b_set[e.to_id]) CHECK(a[e.to_id]);
          }
        }
      }
    }
  }
}

TEST_CASE("removing B separates S from S'") {
  // independent check: BFS from S' must not reach S either
  for (int s = 2; s <= 3; ++s) {
    for (int n = 2; n <= 4; ++n) {
      const Fixture f({n, s, 2.0});
      std::vector<char> seen(f.ens.size(), 0);
      std::queue<std::size_t> q;
      for (std::size_t i = 0; i < f.ens.size(); ++i) {
        if (f.cuts.s_prime[i] && !f.cuts.b_set[i]) {
          seen[i] = 1;
          q.push(i);
        }
      }
      while (!q.empty()) {
        const auto x = q.front();
        q.pop();
        for (const auto& e : f.graph.out_edges(x)) {
          if (!seen[e.to_id] && !f.cuts.b_set[e.to_id]) {
            seen[e.to_id] = 1;
            q.push(e.to_id);
          }
        }
      }
      for (std::size_t i = 0; i < f.ens.size(); ++i) {
        if (f.cuts.s_set[i]) CHECK_FALSE(seen[i]);
      }
      CHECK(flip_overlap(f.ens, f.cuts.a_set) == 0);
    }
  }
}

TEST_CASE("conductance and the inequality chain") {
  for (int s = 2; s <= 3; ++s) {
    for (int n = 2; n <= 4; ++n) {
      for (double t : {1.5, 2.0}) {
        const Fixture f({n, s, t});
        const auto p = build_p_direct(f.params, f.ens, f.graph);
        const auto r = conductance(f.params, f.pi, p, f.cuts);
        const auto chain = lambda2(p, f.pi);
        for (const auto& c : conductance_checks(r, chain.gap_chain)) {
          CAPTURE(c.id);
          CHECK(c.passed);
        }
        // brute-force Q(A, A^c) over the dense matrix
        double q = 0.0;
        for (std::size_t x = 0; x < f.ens.size(); ++x) {
          for (std::size_t y = 0; y < f.ens.size(); ++y) {
            if (f.cuts.a_set[x] && !f.cuts.a_set[y]) {
              q += f.pi.pi[static_cast<Eigen::Index>(x)] * p.rows.coeff(static_cast<int>(x), static_cast<int>(y));
            }
          }
        }
        CHECK(r.q_a_ac == doctest::Approx(q).epsilon(1e-13));
        CHECK(r.theorem_bound == doctest::Approx(8.0 * n * s * std::pow(t, -n * n / 3.0)));
      }
    }
  }
}

TEST_CASE("conductance with an empty A is vacuous") {
  const Fixture f({1, 2, 2.0});
  CHECK(CutSets::count(f.cuts.a_set) == 0);
  const auto r = conductance(f.params, f.pi, build_p_direct(f.params, f.ens), f.cuts);
  CHECK(std::isinf(r.cheeger_bound));
}

TEST_CASE("defect table") {
  const Fixture f({4, 2, 2.0});
  const auto rows = defect_table(f.ens, f.params, f.pi);
  REQUIRE(rows.size() == 17);
  std::size_t total = 0;
  double mass = 0.0;
  for (const auto& r : rows) {
    total += r.size;
    mass += r.pi;
    if (r.size) CHECK(r.pi < r.partition_bound);
  }
  CHECK(total == f.ens.size());
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rows[0].size == 16);  // s^n tents
}

TEST_CASE("lemma suite: every asserted statement holds") {
  for (int s = 2; s <= 3; ++s) {
    for (int n = 2; n <= 4; ++n) {
      for (double t : {1.5, 2.0}) {
        const Fixture f({n, s, t});
        for (const auto& r : lemma_suite(f.ens, f.params, f.pi)) {
          CAPTURE(r.id);
          if (r.asserted) CHECK(r.passed);
          if (!r.asserted) CHECK_FALSE(r.caveat.empty());
        }
      }
    }
  }
}

TEST_CASE("non-prime area") {
  // the largest non-prime walk starts with a flat step
  const Fixture f({3, 2, 2.0});
  CHECK(f.ens[f.id("0.u1.u1.0.d1.d1")].area() == 6);
  CHECK_FALSE(f.cuts.prime[f.id("0.u1.u1.0.d1.d1")]);
  // among walks opening with Up and closing with Down, two tents of heights 1 and n-1 win
  CHECK(f.ens[f.id("u1.d1.u1.u1.d1.d1")].area() == 3 * 3 - 2 * 3 + 2);
  const auto results = lemma_suite(f.ens, f.params, f.pi);
  auto find = [&](const std::string& id) {
    for (const auto& r : results) {
      if (r.id == id) return r;
    }
    FAIL("missing " << id);
    return LemmaResult{};
  };
  CHECK_FALSE(find("nonprime.max_area_vs_n2_minus_2n_plus_2").passed);
  CHECK(find("nonprime.max_area_exact").lhs == 6.0);
  CHECK(find("nonprime.closed_max_area").lhs == 5.0);
}

TEST_CASE("theorem check") {
  const ModelParams p{3, 2, 2.0};
  const Fixture f(p);
  const auto P = build_p_direct(p, f.ens, f.graph);
  const auto r = conductance(p, f.pi, P, f.cuts);
  const double gap = (1.0 / transition_beta(p)) * lambda2(P, f.pi).gap_chain;
  const auto v = theorem_check(p, gap, r);
  CHECK(v.chain_holds);
  CHECK(v.bound == doctest::Approx(8 * 3 * 2 * std::pow(2.0, -3.0)));
  CHECK(v.holds == (gap < v.bound));
  CHECK_THROWS_AS(theorem_check({3, 2, 1.0}, gap, r), MotzkinError);
  CHECK_THROWS_AS(theorem_check({3, 1, 2.0}, gap, r), MotzkinError);
}

TEST_CASE("slope fit") {
  const std::vector<int> ns{2, 3, 4, 5};
  std::vector<double> gaps;
  for (int n : ns) gaps.push_back(std::exp(1.5 - 0.4 * n * n));
  const auto fit = fit_log_gap_slope(ns, gaps, 2.0);
  CHECK(fit.slope == doctest::Approx(-0.4).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(fit.slope_bound == doctest::Approx(-std::log(2.0) / 3));
  CHECK(fit.slope_ok);
  CHECK_THROWS_AS(fit_log_gap_slope(std::vector<int>{2}, std::vector<double>{1.0}, 2.0), MotzkinError);
}
