#include "motzkin/cheeger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "motzkin/errors.hpp"
#include "motzkin/log_math.hpp"
#include "motzkin/partitions.hpp"

namespace motzkin {

std::size_t CutSets::count(const std::vector<char>& flags) {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1));
}

double CutSets::measure(const std::vector<char>& flags, const Eigen::VectorXd& pi) {
  double sum = 0.0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) sum += pi[static_cast<Eigen::Index>(i)];
  }
  return sum;
}

bool in_bottleneck(std::span<const StepLabel> steps, std::span<const int> heights, int n) {
  const auto mid = static_cast<std::size_t>(n);
  const bool up_from_zero = steps[mid - 1].kind == StepKind::Up && heights[mid - 1] == 0;
  const bool down_to_zero = steps[mid].kind == StepKind::Down && heights[mid + 1] == 0;
  return up_from_zero || down_to_zero;
}

CutSets classify(const WalkEnsemble& ensemble, const ModelParams& params) {
  params.validate();
  if (params.s < 2) throw MotzkinError(ErrorKind::InvalidParams, "S and S' need s >= 2");
  const int half = params.s / 2;
  CutSets cuts;
  const std::size_t size = ensemble.size();
  cuts.prime.assign(size, 0);
  cuts.s_set.assign(size, 0);
  cuts.s_prime.assign(size, 0);
  cuts.b_set.assign(size, 0);
  for (std::size_t i = 0; i < size; ++i) {
    const Walk& w = ensemble[i];
    if (is_prime(w)) {
      cuts.prime[i] = 1;
      // a prime walk opens at position 1 and closes at 2n with the same color
      (w.steps().front().color <= half ? cuts.s_set : cuts.s_prime)[i] = 1;
    }
    cuts.b_set[i] = in_bottleneck(w.steps(), w.heights(), params.n) ? 1 : 0;
  }
  return cuts;
}

std::vector<char> reachable_a(const WalkEnsemble& ensemble, const CutSets& cuts, const MoveGraph& graph) {
  std::vector<char> a(ensemble.size(), 0);
  std::queue<std::size_t> frontier;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (cuts.s_set[i] && !cuts.b_set[i]) {
      a[i] = 1;
      frontier.push(i);
    }
  }
  while (!frontier.empty()) {
    const auto x = frontier.front();
    frontier.pop();
    for (const auto& e : graph.out_edges(x)) {
      if (!a[e.to_id] && !cuts.b_set[e.to_id]) {
        a[e.to_id] = 1;
        frontier.push(e.to_id);
      }
    }
  }
  return a;
}

std::size_t flip_overlap(const WalkEnsemble& ensemble, const std::vector<char>& a_set) {
  std::size_t overlap = 0;
  const int s = ensemble.params().s;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (!a_set[i]) continue;
    const auto j = ensemble.find(color_flip(ensemble[i], s));
    if (j && a_set[*j]) ++overlap;
  }
  return overlap;
}

double theorem_bound(const ModelParams& params) {
  const double n = params.n;
  return 8.0 * n * params.s * std::pow(params.t, -n * n / 3.0);
}

ConductanceReport conductance(const ModelParams& params, const StationaryDist& pi, const TransitionMatrix& p,
                              const CutSets& cuts) {
  if (cuts.a_set.size() != p.dim) throw MotzkinError(ErrorKind::InvalidParams, "A has not been computed");
  ConductanceReport r;
  r.pi_a = CutSets::measure(cuts.a_set, pi.pi);
  r.pi_s = CutSets::measure(cuts.s_set, pi.pi);
  r.pi_s_prime = CutSets::measure(cuts.s_prime, pi.pi);
  r.pi_b = CutSets::measure(cuts.b_set, pi.pi);
  r.pi_lambda = CutSets::measure(cuts.prime, pi.pi);
  if (r.pi_a > 0.5 + 1e-12) {
    throw MotzkinError(ErrorKind::PiAExceedsHalf, "pi(A) = " + std::to_string(r.pi_a));
  }
  for (int x = 0; x < p.rows.outerSize(); ++x) {
    for (TransitionMatrix::Rows::InnerIterator it(p.rows, x); it; ++it) {
      const auto y = static_cast<std::size_t>(it.col());
      const bool x_in = cuts.a_set[static_cast<std::size_t>(x)] != 0;
      const bool y_in = cuts.a_set[y] != 0;
      const double flow = pi.pi[x] * it.value();
      if (x_in && !y_in) r.q_a_ac += flow;
      if (!x_in && y_in) r.q_ac_a += flow;
    }
  }
  // with A empty (n = 1) the bounds are vacuous
  const double inf = std::numeric_limits<double>::infinity();
  r.cheeger_bound = r.pi_a > 0.0 ? 2.0 * r.q_a_ac / r.pi_a : inf;
  r.bottleneck_bound = r.pi_a > 0.0 ? 2.0 * r.pi_b / r.pi_a : inf;
  r.theorem_bound = theorem_bound(params);
  return r;
}

std::vector<DefectRow> defect_table(const WalkEnsemble& ensemble, const ModelParams& params,
                                    const StationaryDist& pi) {
  const int full = params.n * params.n;
  const PartitionTable partitions(full);
  const double log_t = std::log(params.t);
  std::vector<DefectRow> rows(static_cast<std::size_t>(full) + 1);
  for (int a = 0; a <= full; ++a) {
    auto& row = rows[static_cast<std::size_t>(a)];
    row.defect = a;
    row.partition_bound = partitions.as_double(a) * std::exp(-2.0 * a * log_t);
    row.geometric_bound = std::exp(-a * log_t);
  }
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    auto& row = rows[static_cast<std::size_t>(full - ensemble[i].area())];
    ++row.size;
    row.pi += pi.pi[static_cast<Eigen::Index>(i)];
  }
  return rows;
}

namespace {

LemmaResult less_than(std::string id, double lhs, double rhs, bool asserted, std::string caveat = {}) {
  return {std::move(id), lhs, rhs, rhs - lhs, asserted, lhs < rhs, std::move(caveat)};
}

LemmaResult at_most(std::string id, double lhs, double rhs, bool asserted, std::string caveat = {}) {
  return {std::move(id), lhs, rhs, rhs - lhs, asserted, lhs <= rhs, std::move(caveat)};
}

const char* kLargeN = "holds for sufficiently large n only; reported, not asserted";

}  // namespace

std::vector<LemmaResult> lemma_suite(const WalkEnsemble& ensemble, const ModelParams& params,
                                     const StationaryDist& pi) {
  const int n = params.n;
  std::vector<LemmaResult> out;

  for (const auto& row : defect_table(ensemble, params, pi)) {
    if (row.size == 0) continue;
    const auto a = std::to_string(row.defect);
    out.push_back(less_than("lemma1.defect_mass[a=" + a + "]", row.pi, row.partition_bound, true));
    out.push_back(less_than("lemma1.partition_vs_geometric[a=" + a + "]", row.partition_bound, row.geometric_bound,
                            false, "asymptotic in a; reported only"));
  }

  const auto cuts = classify(ensemble, params);
  const double pi_s = CutSets::measure(cuts.s_set, pi.pi);
  const double pi_s_prime = CutSets::measure(cuts.s_prime, pi.pi);
  const double pi_lambda = CutSets::measure(cuts.prime, pi.pi);
  out.push_back(at_most("lemma2.s_le_s_prime", pi_s, pi_s_prime, true));
  out.push_back(less_than("lemma2.s_above_quarter", 0.25, pi_s, false, kLargeN));
  out.push_back(less_than("lemma2.lambda_above_three_quarters", 0.75, pi_lambda, false, kLargeN));

  double non_prime = 0.0;
  std::int64_t non_prime_max_area = -1;
  std::int64_t closed_non_prime_max_area = -1;  // first step Up, last step Down
  std::int64_t b_max_area = -1;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const Walk& w = ensemble[i];
    if (!cuts.prime[i]) {
      non_prime += pi.pi[static_cast<Eigen::Index>(i)];
      non_prime_max_area = std::max(non_prime_max_area, w.area());
      if (w.steps().front().kind == StepKind::Up && w.steps().back().kind == StepKind::Down) {
        closed_non_prime_max_area = std::max(closed_non_prime_max_area, w.area());
      }
    }
    if (cuts.b_set[i]) b_max_area = std::max(b_max_area, w.area());
  }
  {
    LemmaResult sum{"measure.lambda_plus_complement", pi_lambda + non_prime, 1.0, 0.0, true, false, {}};
    sum.margin = -std::abs(sum.lhs - 1.0);
    sum.passed = std::abs(sum.lhs - 1.0) <= 1e-12;
    out.push_back(sum);
  }
  auto exactly = [&out](std::string id, double lhs, double rhs) {
    LemmaResult r{std::move(id), lhs, rhs, -std::abs(lhs - rhs), true, lhs == rhs, {}};
    out.push_back(std::move(r));
  };
  // A walk touching zero at vertex j is a concatenation from Omega_j x Omega_{2n-j},
  // and the largest area over Omega_j is floor(j^2/4).
  std::int64_t concatenation_max = -1;
  std::int64_t closed_concatenation_max = -1;  // Up first and Down last force 2 <= j <= 2n-2
  for (std::int64_t j = 1; j < 2 * n; ++j) {
    const std::int64_t bound = j * j / 4 + (2 * n - j) * (2 * n - j) / 4;
    concatenation_max = std::max(concatenation_max, bound);
    if (j >= 2 && j <= 2 * n - 2) {
      closed_concatenation_max = std::max(closed_concatenation_max, bound);
    }
  }
  const double paper_bound = static_cast<double>(n) * n - 2.0 * n + 2.0;
  out.push_back(at_most("nonprime.max_area_vs_n2_minus_2n_plus_2", static_cast<double>(non_prime_max_area),
                        paper_bound, false,
                        "fails for n >= 3: a walk starting or ending with a flat step is non-prime and "
                        "reaches n^2 - n; see nonprime.closed_max_area"));
  if (n > 1) {
    out.push_back(at_most("nonprime.closed_max_area", static_cast<double>(closed_non_prime_max_area),
                          paper_bound, true));
    exactly("nonprime.closed_max_area_attained", static_cast<double>(closed_non_prime_max_area),
            static_cast<double>(closed_concatenation_max));
  }
  exactly("nonprime.max_area_exact", static_cast<double>(non_prime_max_area),
          static_cast<double>(concatenation_max));

  const auto graph = build_move_graph(ensemble);
  const auto a_set = reachable_a(ensemble, cuts, graph);
  std::size_t leaked = 0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (a_set[i] && cuts.s_prime[i]) ++leaked;
  }
  out.push_back(at_most("lemma3.a_meets_s_prime", static_cast<double>(leaked), 0.0, true));
  out.push_back(at_most("theorem.flip_a_meets_a", static_cast<double>(flip_overlap(ensemble, a_set)), 0.0, true));

  if (b_max_area >= 0 && n > 1) {
    const double loose = ((n - 2.0) * (n - 2.0) + (n + 2.0) * (n + 2.0)) / 4.0;
    out.push_back(at_most("lemma4.b_area_vs_concatenation_bound", static_cast<double>(b_max_area), loose, true));
    out.push_back(less_than("lemma4.b_area_vs_half_n2_plus_2n", static_cast<double>(b_max_area),
                            0.5 * n * n + 2.0 * n, true));
  }
  const double pi_b = CutSets::measure(cuts.b_set, pi.pi);
  std::size_t b_not_closed = 0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (!cuts.b_set[i]) continue;
    const auto j = ensemble.find(color_flip(ensemble[i], params.s));
    if (!j || !cuts.b_set[*j]) ++b_not_closed;
  }
  out.push_back(at_most("theorem.b_flip_invariant", static_cast<double>(b_not_closed), 0.0, true));
  out.push_back(less_than("lemma4.b_mass", pi_b, std::pow(params.t, -static_cast<double>(n) * n / 3.0), false,
                          kLargeN));
  return out;
}

std::vector<LemmaResult> conductance_checks(const ConductanceReport& report, std::optional<double> gap_chain,
                                            double tol) {
  std::vector<LemmaResult> out;
  auto slack = [tol](double rhs) { return rhs + tol * std::abs(rhs); };
  auto check = [&](std::string id, double lhs, double rhs) {
    out.push_back({std::move(id), lhs, rhs, rhs - lhs, true, lhs <= slack(rhs), {}});
  };
  {
    const double scale = std::max(report.q_a_ac, report.q_ac_a);
    LemmaResult sym{"conductance.q_symmetric", report.q_a_ac, report.q_ac_a, 0.0, true, false, {}};
    sym.margin = -std::abs(report.q_a_ac - report.q_ac_a);
    sym.passed = std::abs(report.q_a_ac - report.q_ac_a) <= tol * scale + 1e-300;
    out.push_back(sym);
  }
  check("conductance.q_le_pi_b", report.q_a_ac, report.pi_b);
  check("conductance.pi_a_le_half", report.pi_a, 0.5);
  if (report.pi_a > 0.0) {
    if (gap_chain) check("cheeger.gap_le_2q_over_pi_a", *gap_chain, report.cheeger_bound);
    check("cheeger.2q_le_2pi_b", report.cheeger_bound, report.bottleneck_bound);
  }
  return out;
}

TheoremVerdict theorem_check(const ModelParams& params, double exact_gap, const ConductanceReport& report,
                             double tol) {
  params.require_theorem_regime();
  TheoremVerdict v;
  v.exact_gap = exact_gap;
  v.bound = theorem_bound(params);
  v.holds = exact_gap < v.bound;
  const double factor = 1.0 / transition_beta(params);
  v.cheeger_gap_bound = factor * report.cheeger_bound;
  v.bottleneck_gap_bound = factor * report.bottleneck_bound;
  v.chain_holds = exact_gap <= v.cheeger_gap_bound * (1.0 + tol) &&
                  report.cheeger_bound <= report.bottleneck_bound * (1.0 + tol);
  return v;
}

SlopeFit fit_log_gap_slope(std::span<const int> ns, std::span<const double> gaps, double t) {
  if (ns.size() != gaps.size() || ns.size() < 2) {
    throw MotzkinError(ErrorKind::InvalidParams, "slope fit needs at least two (n, gap) points");
  }
  const double m = static_cast<double>(ns.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = static_cast<double>(ns[i]) * ns[i];
    const double y = std::log(gaps[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  SlopeFit fit;
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / m;
  fit.slope_bound = -std::log(t) / 3.0;
  fit.slope_ok = fit.slope <= fit.slope_bound;
  return fit;
}

}  // namespace motzkin
