#ifndef MOTZKIN_HAMILTONIAN_HPP
#define MOTZKIN_HAMILTONIAN_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "motzkin/ensemble.hpp"
#include "motzkin/operator.hpp"
#include "motzkin/params.hpp"
#include "motzkin/spectrum.hpp"

namespace motzkin {

// Local terms as dense matrices in the site basis of site_code():
// two-site operators index the pair (a, b) as a * (2s+1) + b.

/// sum_k |U^k(t)><U^k(t)| + |D^k(t)><D^k(t)| + |phi^k(t)><phi^k(t)| with
/// U^k = (t|0u^k> - |u^k 0>)/sqrt(1+t^2), D^k = (|0d^k> - t|d^k 0>)/sqrt(1+t^2),
/// phi^k = (|u^k d^k> - t|00>)/sqrt(1+t^2).
Eigen::MatrixXd bond_projector(int s, double t);
/// sum_{k != i} |u^k d^i><u^k d^i|
Eigen::MatrixXd cross_projector(int s);
/// sum_k |d^k><d^k| (first site) and sum_k |u^k><u^k| (last site)
Eigen::MatrixXd boundary_first_projector(int s);
Eigen::MatrixXd boundary_last_projector(int s);

/// Amplitudes t^{A(x)}/sqrt(Z) over the ensemble; Z kept as log Z.
struct GroundState {
  Eigen::VectorXd amplitudes;
  double log_z = 0.0;
};

GroundState ground_state(const ModelParams& params, const WalkEnsemble& ensemble);

/// Contribution of each term family when H is applied to span(Omega).
struct SubspaceDiagnostics {
  /// norm of the component of H|x> outside span(Omega), summed over x
  double leakage = 0.0;
  /// Frobenius norms of the boundary / cross terms restricted to Omega
  double boundary_norm = 0.0;
  double cross_norm = 0.0;
};

/// P_Omega H(t) P_Omega assembled by applying every local term to every walk.
/// The returned operator also carries the move-edge square terms
/// (t v_lo - v_hi)^2 / (1 + t^2) for each local move lo -> hi.
SubspaceOperator build_h_subspace(const ModelParams& params, const WalkEnsemble& ensemble,
                                  SubspaceDiagnostics* diagnostics = nullptr);

/// Square terms of H_sub read off the move graph alone.
std::vector<SquareTerm> h_square_terms(const ModelParams& params, const WalkEnsemble& ensemble,
                                       const MoveGraph& graph);

struct FullSpaceOptions {
  std::uint64_t max_dim = 200000;
};

/// Full (2s+1)^{2n}-dimensional H(t). Basis index is the base-(2s+1) number
/// with site 1 most significant, which coincides with Walk::key().
SubspaceOperator build_h_full(const ModelParams& params, const FullSpaceOptions& options = {});

/// spectral_gap() of H_sub with the analytic ground state deflated.
SpectrumReport hamiltonian_gap(const ModelParams& params, const WalkEnsemble& ensemble,
                               const SolverOptions& options = {});

}  // namespace motzkin

#endif  // MOTZKIN_HAMILTONIAN_HPP
