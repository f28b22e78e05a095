#ifndef MOTZKIN_MARKOV_HPP
#define MOTZKIN_MARKOV_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "motzkin/ensemble.hpp"
#include "motzkin/operator.hpp"
#include "motzkin/params.hpp"
#include "motzkin/spectrum.hpp"

namespace motzkin {

/// pi(x) = t^{2A(x)} / Z
struct StationaryDist {
  Eigen::VectorXd pi;
  Eigen::VectorXd log_pi;
  double log_z = 0.0;
};

StationaryDist stationary(const ModelParams& params, const WalkEnsemble& ensemble);

struct TransitionMatrix {
  using Rows = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
  std::size_t dim = 0;
  Rows rows;
  /// P = I - beta * sqrt(pi(y)/pi(x)) * H, so Delta(H) = (1 - lambda_2) / beta
  double beta = 0.0;
};

/// (1 + t^2) / (2 n s t^2)
double transition_beta(const ModelParams& params);

/// P(x,y) = delta_xy - beta sqrt(pi(y)/pi(x)) <x|H|y>. Throws NegativeEntry
/// when an entry falls below -1e-12.
TransitionMatrix build_p_from_h(const ModelParams& params, const SubspaceOperator& h_sub,
                                const StationaryDist& pi);

/// Rates straight from the move graph: 1/(2ns) up, 1/(2ns t^2) down.
TransitionMatrix build_p_direct(const ModelParams& params, const WalkEnsemble& ensemble);
TransitionMatrix build_p_direct(const ModelParams& params, const WalkEnsemble& ensemble, const MoveGraph& graph);

/// I - D^{1/2} P D^{-1/2}, carrying the squares (sqrt(P_xy) f_x - sqrt(P_yx) f_y)^2.
SubspaceOperator symmetrized_laplacian(const TransitionMatrix& p, const StationaryDist& pi);

struct ChainSpectrum {
  double lambda2 = 0.0;
  double gap_chain = 0.0;  // 1 - lambda2, computed directly
  SolverMethod method = SolverMethod::Dense;
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// lambda_2 of P on its symmetrization with sqrt(pi) deflated.
ChainSpectrum lambda2(const TransitionMatrix& p, const StationaryDist& pi, const SolverOptions& options = {});

struct GapRelation {
  double gap_h = 0.0;
  double gap_chain = 0.0;
  double factor = 0.0;  // 2nst^2/(1+t^2)
  double predicted_gap_h = 0.0;
  double relative_discrepancy = 0.0;
  bool passed = false;
};

GapRelation gap_relation_check(const ModelParams& params, const SpectrumReport& h_spectrum,
                               const ChainSpectrum& p_spectrum, double tol = 1e-9);

/// Identity checks on a transition matrix.
struct TransitionChecks {
  double max_row_sum_error = 0.0;
  double min_entry = 0.0;
  double max_detailed_balance_error = 0.0;
  double min_diagonal = 0.0;
  double max_diagonal = 0.0;
  double diagonal_bound = 0.0;  // 1 - 1/(2nst^2)
  double max_offdiagonal = 0.0;
  double literal_offdiagonal_bound = 0.0;  // 1/(2nst^2), stated for every off-diagonal entry
  /// max_y |sum_x pi_x P(x,y) - pi_y|
  double stationarity_defect = 0.0;

  bool passed(double tol) const;
  bool literal_offdiagonal_bound_holds() const { return max_offdiagonal <= literal_offdiagonal_bound; }
};

TransitionChecks check_transition(const ModelParams& params, const TransitionMatrix& p, const StationaryDist& pi);

/// max_xy |A(x,y) - B(x,y)|
double max_abs_difference(const TransitionMatrix& a, const TransitionMatrix& b);

// -- simulation --------------------------------------------------------------

struct ChainState {
  std::uint64_t step = 0;
  std::span<const StepLabel> steps;
  std::span<const int> heights;
  std::int64_t area = 0;
};

using ChainObserver = std::function<void(const ChainState&)>;

struct McmcRun {
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;
  std::uint64_t moves_up = 0;
  std::uint64_t moves_down = 0;
  /// FNV-1a over the sequence of (bond, fired move) decisions
  std::uint64_t trajectory_digest = 0;
  /// visits per ensemble id after each step; empty without an ensemble
  std::vector<std::uint64_t> visit_counts;
  Walk final_walk;
};

/// Runs the chain P without materializing it: pick a bond uniformly, then fire
/// each available area-increasing move with probability 1/(2ns) and each
/// decreasing move with 1/(2ns t^2) overall, staying put otherwise.
/// Randomness is std::mt19937_64 seeded with `seed`.
McmcRun mcmc_sample(const ModelParams& params, std::uint64_t steps, std::uint64_t seed, const Walk& start,
                    std::span<const ChainObserver> observers = {}, const WalkEnsemble* ensemble = nullptr);

/// (1/2) sum_x |counts_x / total - pi_x|
double tv_distance(std::span<const std::uint64_t> counts, const Eigen::VectorXd& pi);

}  // namespace motzkin

#endif  // MOTZKIN_MARKOV_HPP
