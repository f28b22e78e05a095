#ifndef MOTZKIN_SPECTRUM_HPP
#define MOTZKIN_SPECTRUM_HPP

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "motzkin/operator.hpp"

namespace motzkin {

struct SolverOptions {
  std::size_t dense_cap = 4000;
  double tol = 1e-12;
  std::size_t max_iterations = 100000;
  /// eigenvalues below -psd_tol (relative to the diagonal scale) raise NotPSD
  double psd_tol = 1e-10;
};

enum class SolverMethod { Dense, DeflatedIterative };
std::string_view to_string(SolverMethod method);

struct SpectrumReport {
  double ground_energy = 0.0;
  double gap = 0.0;
  SolverMethod method = SolverMethod::Dense;
  /// ||M g - E0 g|| and ||M v - gap v|| for the returned vectors
  std::vector<double> residuals;
  std::size_t iterations = 0;
  Eigen::VectorXd ground_vector;
  Eigen::VectorXd excited_vector;
};

/// Smallest eigenvalue above the ground level of a symmetric PSD operator.
///
/// With a known exact zero mode the mode is deflated and the gap is the lowest
/// eigenvalue on its orthogonal complement. Without one the two lowest
/// eigenpairs are computed and gap = E1 - E0. Below dense_cap a dense
/// eigensolve is used; above it, Lanczos on the shifted inverse
/// (M + sigma)^{-1} from a sparse Cholesky factor, restricted to the
/// complement of the deflated vector. Eigenvalues are finished with a
/// Rayleigh quotient through SubspaceOperator::quadratic_form().
SpectrumReport spectral_gap(const SubspaceOperator& op,
                            const std::optional<Eigen::VectorXd>& known_ground = std::nullopt,
                            const SolverOptions& options = {});

}  // namespace motzkin

#endif  // MOTZKIN_SPECTRUM_HPP
