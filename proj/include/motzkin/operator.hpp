#ifndef MOTZKIN_OPERATOR_HPP
#define MOTZKIN_OPERATOR_HPP

#include <cstddef>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace motzkin {

/// Contributes (a v_i - b v_j)^2 to the quadratic form of an operator.
struct SquareTerm {
  std::size_t i = 0;
  std::size_t j = 0;
  double a = 0.0;
  double b = 0.0;
};

/// Symmetric sparse matrix over an enumerated basis (H restricted to the walk
/// span, the Laplacian of a symmetrized chain, or the full-space H).
///
/// When the operator is a sum of rank-one squares, keeping the terms lets
/// quadratic_form() evaluate v^T M v as a sum of non-negative numbers, which
/// resolves eigenvalues many orders of magnitude below ||M|| in relative terms.
class SubspaceOperator {
 public:
  using Matrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

  SubspaceOperator() = default;
  explicit SubspaceOperator(Matrix matrix, std::vector<SquareTerm> terms = {});

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  double entry(std::size_t row, std::size_t col) const;

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const { return matrix_ * v; }
  Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(matrix_); }

  bool has_square_terms() const { return !terms_.empty(); }
  const std::vector<SquareTerm>& square_terms() const { return terms_; }
  double quadratic_form(const Eigen::VectorXd& v) const;

  /// max |M_ij - M_ji|
  double symmetry_defect() const;
  /// max |M - sum of square terms| entrywise; 0 when no terms are attached.
  double square_term_defect() const;
  double max_abs_diagonal() const;

  /// One "row col value" line per stored entry, 17 significant digits.
  void write_coordinates(std::ostream& os) const;

 private:
  Matrix matrix_;
  std::vector<SquareTerm> terms_;
};

SubspaceOperator::Matrix matrix_from_square_terms(std::size_t dim, const std::vector<SquareTerm>& terms);

}  // namespace motzkin

#endif  // MOTZKIN_OPERATOR_HPP
