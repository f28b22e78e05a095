#include "motzkin/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/CholmodSupport>
#include <lapacke.h>

#include "motzkin/errors.hpp"

namespace motzkin {

std::string_view to_string(SolverMethod method) {
  return method == SolverMethod::Dense ? "dense" : "deflated-iterative";
}

namespace {

void project_out(Eigen::VectorXd& v, const Eigen::VectorXd* ground) {
  if (ground) v -= ground->dot(v) * (*ground);
}

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
};

// Rayleigh quotient through the operator's sum-of-squares form.
Eigenpair finish(const SubspaceOperator& op, Eigen::VectorXd v, const Eigen::VectorXd* ground) {
  project_out(v, ground);
  v.normalize();
  Eigenpair pair;
  pair.value = op.quadratic_form(v);
  pair.residual = (op.apply(v) - pair.value * v).norm();
  pair.vector = std::move(v);
  return pair;
}

double diagonal_scale(const SubspaceOperator& op) {
  const double d = op.max_abs_diagonal();
  return d > 0.0 ? d : 1.0;
}

void check_psd(double value, double scale, const SolverOptions& options) {
  if (value < -options.psd_tol * scale) {
    throw MotzkinError(ErrorKind::NotPSD, "eigenvalue " + std::to_string(value) + " below zero");
  }
}

// Lowest `count` eigenpairs of a dense symmetric matrix (LAPACK dsyevr, index range).
// `a` is overwritten.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> lowest_eigenpairs(Eigen::MatrixXd& a, int count) {
  const auto n = static_cast<lapack_int>(a.rows());
  count = std::min<int>(count, n);
  Eigen::VectorXd values(n);
  Eigen::MatrixXd vectors(n, count);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, count, 0.0, &found,
                     values.data(), vectors.data(), n, support.data());
  if (info != 0 || found != count) {
    throw MotzkinError(ErrorKind::NoConvergence, "dense eigensolver failed (info " + std::to_string(info) + ")");
  }
  return {values.head(count), std::move(vectors)};
}

SpectrumReport dense_gap(const SubspaceOperator& op, const Eigen::VectorXd* ground, const SolverOptions& options) {
  const double scale = diagonal_scale(op);
  Eigen::MatrixXd a = op.to_dense();
  if (ground) {
    // move the known zero mode above the rest of the spectrum
    const double lift = 2.0 * a.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
    a.noalias() += lift * (*ground) * ground->transpose();
  }
  const auto [values, vectors] = lowest_eigenpairs(a, ground ? 1 : 2);
  check_psd(values[0], scale, options);

  SpectrumReport report;
  report.method = SolverMethod::Dense;
  if (ground) {
    report.ground_vector = *ground;
    report.ground_energy = op.quadratic_form(*ground);
    auto excited = finish(op, vectors.col(0), ground);
    report.gap = excited.value;
    report.residuals = {(op.apply(*ground) - report.ground_energy * (*ground)).norm(), excited.residual};
    report.excited_vector = std::move(excited.vector);
  } else {
    auto low = finish(op, vectors.col(0), nullptr);
    auto excited = finish(op, vectors.col(1), &low.vector);
    report.ground_energy = low.value;
    report.gap = excited.value - low.value;
    report.residuals = {low.residual, excited.residual};
    report.ground_vector = std::move(low.vector);
    report.excited_vector = std::move(excited.vector);
  }
  return report;
}

using Factor = Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>, Eigen::Lower>;

struct ShiftedInverse {
  Factor factor;
  double sigma = 0.0;
};

void factor_shifted(const SubspaceOperator& op, double scale, ShiftedInverse& inv) {
  Eigen::SparseMatrix<double> identity(op.matrix().rows(), op.matrix().cols());
  identity.setIdentity();
  // smallest shift the factorization accepts; a rejected pivot means the
  // shift is below rounding noise
  for (double rel = 1e-10; rel <= 1e-4; rel *= 100.0) {
    inv.sigma = rel * scale;
    Eigen::SparseMatrix<double> shifted = op.matrix() + inv.sigma * identity;
    inv.factor.compute(shifted);
    if (inv.factor.info() == Eigen::Success) return;
  }
  throw MotzkinError(ErrorKind::NotPSD, "Cholesky factorization of the shifted operator failed");
}

// Lanczos with full reorthogonalization on P (M + sigma)^{-1} P, P projecting
// out `ground`. Returns the `wanted` dominant Ritz vectors.
std::vector<Eigen::VectorXd> shift_invert_lanczos(const ShiftedInverse& inv, const Eigen::VectorXd* ground,
                                                  std::size_t dim, int wanted, const SolverOptions& options,
                                                  std::size_t& iterations) {
  const std::size_t free_dim = dim - (ground ? 1 : 0);
  const int max_basis = static_cast<int>(std::min<std::size_t>(free_dim, 120));
  const auto n = static_cast<Eigen::Index>(dim);

  auto apply = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = inv.factor.solve(x);
    project_out(y, ground);
    return y;
  };

  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd start(n);
  for (Eigen::Index i = 0; i < n; ++i) start[i] = 1.0 + 0.25 * unit(rng);
  project_out(start, ground);
  start.normalize();

  Eigen::MatrixXd basis(n, max_basis + 1);
  std::vector<double> alpha;
  std::vector<double> beta;
  while (true) {
    basis.col(0) = start;
    alpha.clear();
    beta.clear();
    Eigen::MatrixXd ritz_vectors;
    bool converged = false;
    int k = 0;
    for (; k < max_basis; ++k) {
      Eigen::VectorXd w = apply(basis.col(k));
      ++iterations;
      alpha.push_back(basis.col(k).dot(w));
      w -= alpha.back() * basis.col(k);
      if (k > 0) w -= beta.back() * basis.col(k - 1);
      for (int pass = 0; pass < 2; ++pass) {
        const auto q = basis.leftCols(k + 1);
        w -= q * (q.transpose() * w);
      }
      project_out(w, ground);
      const double b = w.norm();

      const int m = k + 1;
      if (m >= wanted) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
          t(i, i) = alpha[i];
          if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(t);
        const auto& theta = tri.eigenvalues();  // ascending; dominant at the end
        const double top = std::abs(theta[m - 1]);
        bool ok = true;
        for (int j = 0; j < wanted; ++j) {
          const double res = std::abs(b * tri.eigenvectors()(m - 1, m - 1 - j));
          if (res > options.tol * top) ok = false;
        }
        if (ok || b <= options.tol * top || m == static_cast<int>(free_dim)) {
          ritz_vectors = basis.leftCols(m) * tri.eigenvectors().rightCols(wanted).rowwise().reverse();
          converged = true;
          break;
        }
        if (k + 1 == max_basis) {
          ritz_vectors = basis.leftCols(m) * tri.eigenvectors().rightCols(wanted).rowwise().reverse();
        }
      }
      if (iterations >= options.max_iterations) {
        throw MotzkinError(ErrorKind::NoConvergence,
                           "Lanczos budget of " + std::to_string(options.max_iterations) + " solves exhausted");
      }
      beta.push_back(b);
      basis.col(k + 1) = w / b;
    }
    if (converged) {
      std::vector<Eigen::VectorXd> out;
      for (int j = 0; j < wanted; ++j) out.emplace_back(ritz_vectors.col(j));
      return out;
    }
    // explicit restart from the wanted Ritz directions
    start = ritz_vectors.rowwise().sum();
    project_out(start, ground);
    start.normalize();
  }
}

SpectrumReport iterative_gap(const SubspaceOperator& op, const Eigen::VectorXd* ground,
                             const SolverOptions& options) {
  const double scale = diagonal_scale(op);
  ShiftedInverse inv;
  factor_shifted(op, scale, inv);

  SpectrumReport report;
  report.method = SolverMethod::DeflatedIterative;
  const int wanted = ground ? 1 : 2;
  auto vectors = shift_invert_lanczos(inv, ground, op.dim(), wanted, options, report.iterations);

  if (ground) {
    report.ground_vector = *ground;
    report.ground_energy = op.quadratic_form(*ground);
    auto excited = finish(op, vectors[0], ground);
    check_psd(excited.value, scale, options);
    report.gap = excited.value;
    report.residuals = {(op.apply(*ground) - report.ground_energy * (*ground)).norm(), excited.residual};
    report.excited_vector = std::move(excited.vector);
  } else {
    auto low = finish(op, vectors[0], nullptr);
    auto excited = finish(op, vectors[1], &low.vector);
    check_psd(low.value, scale, options);
    report.ground_energy = low.value;
    report.gap = excited.value - low.value;
    report.residuals = {low.residual, excited.residual};
    report.ground_vector = std::move(low.vector);
    report.excited_vector = std::move(excited.vector);
  }
  return report;
}

}  // namespace

SpectrumReport spectral_gap(const SubspaceOperator& op, const std::optional<Eigen::VectorXd>& known_ground,
                            const SolverOptions& options) {
  const std::size_t dim = op.dim();
  if (dim < 2) throw MotzkinError(ErrorKind::InvalidParams, "gap needs an operator of dimension >= 2");
  std::optional<Eigen::VectorXd> ground;
  if (known_ground) {
    if (static_cast<std::size_t>(known_ground->size()) != dim) {
      throw MotzkinError(ErrorKind::InvalidParams, "ground vector dimension mismatch");
    }
    ground = known_ground->normalized();
  }
  const Eigen::VectorXd* g = ground ? &*ground : nullptr;
  if (dim <= options.dense_cap) return dense_gap(op, g, options);
  return iterative_gap(op, g, options);
}

}  // namespace motzkin
