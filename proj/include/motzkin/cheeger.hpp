#ifndef MOTZKIN_CHEEGER_HPP
#define MOTZKIN_CHEEGER_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "motzkin/ensemble.hpp"
#include "motzkin/markov.hpp"
#include "motzkin/params.hpp"

namespace motzkin {

/// Membership flags over an ensemble (1 = member).
struct CutSets {
  std::vector<char> prime;   // Lambda
  std::vector<char> s_set;   // prime, first color <= floor(s/2)
  std::vector<char> s_prime; // prime, first color > floor(s/2)
  std::vector<char> b_set;   // bottleneck
  std::vector<char> a_set;   // reachable from S avoiding B; empty until reachable_a()

  static std::size_t count(const std::vector<char>& flags);
  static double measure(const std::vector<char>& flags, const Eigen::VectorXd& pi);
};

/// Step n is an Up leaving height 0, or step n+1 is a Down arriving at height 0.
bool in_bottleneck(std::span<const StepLabel> steps, std::span<const int> heights, int n);

/// Lambda, S, S', B for every walk. Throws InvalidParams for s < 2.
CutSets classify(const WalkEnsemble& ensemble, const ModelParams& params);

/// Breadth-first closure of S under local moves that never enter B.
std::vector<char> reachable_a(const WalkEnsemble& ensemble, const CutSets& cuts, const MoveGraph& graph);

/// Number of x in A whose color flip is also in A.
std::size_t flip_overlap(const WalkEnsemble& ensemble, const std::vector<char>& a_set);

struct ConductanceReport {
  double q_a_ac = 0.0;  // Q(A, A^c)
  double q_ac_a = 0.0;  // Q(A^c, A), equal by reversibility
  double pi_a = 0.0;
  double pi_s = 0.0;
  double pi_s_prime = 0.0;
  double pi_b = 0.0;
  double pi_lambda = 0.0;
  double cheeger_bound = 0.0;     // 2 Q / pi(A), bounds 1 - lambda_2
  double bottleneck_bound = 0.0;  // 2 pi(B) / pi(A)
  double theorem_bound = 0.0;     // 8 n s t^{-n^2/3}
  std::optional<double> exact_gap;  // Delta(H) when known
};

/// Exact Q(A, A^c) and the Cheeger bound. Throws PiAExceedsHalf when
/// pi(A) > 1/2 + 1e-12.
ConductanceReport conductance(const ModelParams& params, const StationaryDist& pi, const TransitionMatrix& p,
                              const CutSets& cuts);

/// 8 n s t^{-n^2/3}
double theorem_bound(const ModelParams& params);

struct LemmaResult {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // positive when the inequality holds
  bool asserted = false;
  bool passed = false;
  std::string caveat;
};

struct DefectRow {
  int defect = 0;
  std::size_t size = 0;
  double pi = 0.0;
  double partition_bound = 0.0;  // p(a) t^{-2a}
  double geometric_bound = 0.0;  // t^{-a}
};

/// |D_a|, pi(D_a) and the Lemma 1 bounds for a = 0..n^2.
std::vector<DefectRow> defect_table(const WalkEnsemble& ensemble, const ModelParams& params,
                                    const StationaryDist& pi);

/// Exact checks are asserted; statements that only hold for large n are
/// evaluated and carry a caveat instead.
std::vector<LemmaResult> lemma_suite(const WalkEnsemble& ensemble, const ModelParams& params,
                                     const StationaryDist& pi);

/// Hard checks on a conductance report: Q symmetric, Q(A,A^c) <= pi(B),
/// pi(A) <= 1/2 and, given 1 - lambda_2, the Cheeger and bottleneck chain.
/// Inequalities allow a relative slack of tol.
std::vector<LemmaResult> conductance_checks(const ConductanceReport& report, std::optional<double> gap_chain,
                                            double tol = 1e-9);

struct TheoremVerdict {
  double exact_gap = 0.0;
  double bound = 0.0;
  bool holds = false;
  /// Delta(H) = (1/beta)(1 - lambda_2) <= (1/beta) 2Q/pi(A) <= (1/beta) 2pi(B)/pi(A)
  double cheeger_gap_bound = 0.0;
  double bottleneck_gap_bound = 0.0;
  bool chain_holds = false;
};

/// Throws PreconditionViolated unless s >= 2 and t > 1.
TheoremVerdict theorem_check(const ModelParams& params, double exact_gap, const ConductanceReport& report,
                             double tol = 1e-9);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_bound = 0.0;  // -(ln t)/3
  bool slope_ok = false;
};

/// Least-squares fit of ln(gap) against n^2.
SlopeFit fit_log_gap_slope(std::span<const int> ns, std::span<const double> gaps, double t);

}  // namespace motzkin

#endif  // MOTZKIN_CHEEGER_HPP
