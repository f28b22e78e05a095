#include "motzkin/operator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace motzkin {

SubspaceOperator::SubspaceOperator(Matrix matrix, std::vector<SquareTerm> terms)
    : matrix_(std::move(matrix)), terms_(std::move(terms)) {
  matrix_.makeCompressed();
}

double SubspaceOperator::entry(std::size_t row, std::size_t col) const {
  return matrix_.coeff(static_cast<int>(row), static_cast<int>(col));
}

double SubspaceOperator::quadratic_form(const Eigen::VectorXd& v) const {
  if (terms_.empty()) return v.dot(matrix_ * v);
  double sum = 0.0;
  for (const auto& term : terms_) {
    const double r = term.a * v[static_cast<Eigen::Index>(term.i)] - term.b * v[static_cast<Eigen::Index>(term.j)];
    sum += r * r;
  }
  return sum;
}

double SubspaceOperator::symmetry_defect() const {
  Matrix transposed = matrix_.transpose();
  Matrix diff = matrix_ - transposed;
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (Matrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

double SubspaceOperator::square_term_defect() const {
  if (terms_.empty()) return 0.0;
  Matrix diff = matrix_ - matrix_from_square_terms(dim(), terms_);
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (Matrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

double SubspaceOperator::max_abs_diagonal() const {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < matrix_.rows(); ++k) worst = std::max(worst, std::abs(matrix_.coeff(k, k)));
  return worst;
}

void SubspaceOperator::write_coordinates(std::ostream& os) const {
  // row-major order for stable diffs against external tools
  Eigen::SparseMatrix<double, Eigen::RowMajor, int> rows = matrix_;
  const auto old_precision = os.precision(17);
  for (int r = 0; r < rows.outerSize(); ++r) {
    for (decltype(rows)::InnerIterator it(rows, r); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
  os.precision(old_precision);
}

SubspaceOperator::Matrix matrix_from_square_terms(std::size_t dim, const std::vector<SquareTerm>& terms) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(terms.size() * 4);
  for (const auto& t : terms) {
    const int i = static_cast<int>(t.i);
    const int j = static_cast<int>(t.j);
    triplets.emplace_back(i, i, t.a * t.a);
    triplets.emplace_back(j, j, t.b * t.b);
    triplets.emplace_back(i, j, -t.a * t.b);
    triplets.emplace_back(j, i, -t.a * t.b);
  }
  SubspaceOperator::Matrix m(static_cast<int>(dim), static_cast<int>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

}  // namespace motzkin
