#include <doctest.h>

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "motzkin/errors.hpp"
#include "motzkin/hamiltonian.hpp"

using namespace motzkin;

namespace {

Eigen::MatrixXd restrict_full(const SubspaceOperator& full, const WalkEnsemble& ens) {
  const int s = ens.params().s;
  const auto dim = static_cast<Eigen::Index>(ens.size());
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      m(i, j) = full.entry(ens[static_cast<std::size_t>(i)].key(s), ens[static_cast<std::size_t>(j)].key(s));
    }
  }
  return m;
}

}  // namespace

TEST_CASE("local bond terms") {
  for (int s = 1; s <= 3; ++s) {
    for (double t : {0.5, 1.0, 2.0}) {
      const auto p = bond_projector(s, t);
      // the phi^k kets share |00>, so only s = 1 gives an honest projector
      if (s == 1) CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-14);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p);
      CHECK(eig.eigenvalues().minCoeff() > -1e-14);
      CHECK(std::abs(p.trace() - 3.0 * s) < 1e-12);
      CHECK((p - p.transpose()).cwiseAbs().maxCoeff() == 0.0);
      const auto c = cross_projector(s);
      CHECK(std::abs(c.trace() - s * (s - 1.0)) < 1e-15);
      CHECK((c * p).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("ground state amplitudes") {
  const double t = 1.7;
  const ModelParams p{1, 1, t};
  const auto ens = enumerate(p);
  const auto gs = ground_state(p, ens);
  // ids: u1.d1 then 0.0
  CHECK(gs.amplitudes[0] == doctest::Approx(t / std::sqrt(1 + t * t)).epsilon(1e-15));
  CHECK(gs.amplitudes[1] == doctest::Approx(1 / std::sqrt(1 + t * t)).epsilon(1e-15));

  const auto e = enumerate({3, 2, 1.0});
  const auto uniform = ground_state({3, 2, 1.0}, e);
  for (Eigen::Index i = 0; i < uniform.amplitudes.size(); ++i) {
    CHECK(uniform.amplitudes[i] == doctest::Approx(1 / std::sqrt(static_cast<double>(e.size()))));
  }
  CHECK(uniform.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("ground state stays finite where t^{2n^2} overflows") {
  const ModelParams p{5, 2, 1e20};
  const auto ens = enumerate(p);
  const auto gs = ground_state(p, ens);
  CHECK(std::isfinite(gs.log_z));
  CHECK(gs.amplitudes.allFinite());
  CHECK(gs.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-site closed form (n=1, s=1)") {
  for (double t : {0.5, 1.0, 2.0, 3.0}) {
    const ModelParams p{1, 1, t};
    const auto ens = enumerate(p);
    const auto h = build_h_subspace(p, ens).to_dense();
    const double z = 1 + t * t;
    // basis (u1.d1, 0.0)
    CHECK(h(0, 0) == doctest::Approx(1 / z).epsilon(1e-15));
    CHECK(h(1, 1) == doctest::Approx(t * t / z).epsilon(1e-15));
    CHECK(h(0, 1) == doctest::Approx(-t / z).epsilon(1e-15));
    CHECK(h(1, 0) == doctest::Approx(-t / z).epsilon(1e-15));
    CHECK(std::abs(hamiltonian_gap(p, ens).gap - 1.0) < 1e-12);
  }
}

TEST_CASE("H_sub structure") {
  for (int s = 1; s <= 3; ++s) {
    for (int n = 1; n <= 3; ++n) {
      for (double t : {0.7, 1.0, 1.5}) {
        const ModelParams p{n, s, t};
        const auto ens = enumerate(p);
        SubspaceDiagnostics diag;
        const auto h = build_h_subspace(p, ens, &diag);
        CHECK(h.symmetry_defect() == 0.0);
        CHECK(h.square_term_defect() < 1e-14);
        CHECK(diag.boundary_norm == 0.0);
        CHECK(diag.cross_norm == 0.0);

        const auto graph = build_move_graph(ens);
        std::size_t off = 0;
        for (int k = 0; k < h.matrix().outerSize(); ++k) {
          for (SubspaceOperator::Matrix::InnerIterator it(h.matrix(), k); it; ++it) {
            if (it.row() == it.col()) continue;
            ++off;
            CHECK(it.value() == doctest::Approx(-t / (1 + t * t)).epsilon(1e-14));
          }
        }
        CHECK(off == graph.edges().size());

        const double z = 1 + t * t;
        std::string flat(static_cast<std::size_t>(4 * n - 1), '.');
        for (int j = 0; j < 2 * n; ++j) flat[static_cast<std::size_t>(2 * j)] = '0';
        const auto flat_id = *ens.find(parse_walk(flat, s));
        CHECK(h.entry(flat_id, flat_id) == doctest::Approx((2 * n - 1) * s * t * t / z).epsilon(1e-14));
        std::string tent;
        for (int j = 0; j < n; ++j) tent += "u1.";
        for (int j = 0; j < n; ++j) tent += j + 1 < n ? "d1." : "d1";
        const auto tent_id = *ens.find(parse_walk(tent, s));
        CHECK(h.entry(tent_id, tent_id) == doctest::Approx(1 / z).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("frustration-free ground state") {
  for (int s = 1; s <= 2; ++s) {
    for (int n = 1; n <= 4; ++n) {
      for (double t : {0.5, 1.1, 2.0}) {
        const ModelParams p{n, s, t};
        const auto ens = enumerate(p);
        const auto h = build_h_subspace(p, ens);
        const auto gs = ground_state(p, ens);
        CHECK(h.apply(gs.amplitudes).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(h.quadratic_form(gs.amplitudes) < 1e-14);
      }
    }
  }
}

TEST_CASE("t = 1 reduces to the unweighted projectors") {
  const ModelParams p{3, 2, 1.0};
  const auto ens = enumerate(p);
  const auto h = build_h_subspace(p, ens).to_dense();
  const auto graph = build_move_graph(ens);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(h.rows(), h.cols());
  // each undirected move contributes (|x> - |y>)(<x| - <y|)/2
  for (const auto& e : graph.edges()) {
    if (e.from_id > e.to_id) continue;
    const auto x = static_cast<Eigen::Index>(e.from_id);
    const auto y = static_cast<Eigen::Index>(e.to_id);
    expected(x, x) += 0.5;
    expected(y, y) += 0.5;
    expected(x, y) -= 0.5;
    expected(y, x) -= 0.5;
  }
  CHECK((h - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("full-space H restricts to H_sub and has the walk state as unique zero mode") {
  for (int s = 1; s <= 2; ++s) {
    for (int n = 1; n <= 3; ++n) {
      for (double t : {1.0, 2.0}) {
        const ModelParams p{n, s, t};
        CAPTURE(p.to_string());
        const auto ens = enumerate(p);
        const auto full = build_h_full(p);
        const auto sub = build_h_subspace(p, ens);
        CHECK((restrict_full(full, ens) - sub.to_dense()).cwiseAbs().maxCoeff() < 1e-14);

        const auto rep = spectral_gap(full);
        CHECK(std::abs(rep.ground_energy) < 1e-10);
        CHECK(rep.gap > 1e-6);
        Eigen::VectorXd v = rep.ground_vector;
        const auto gs = ground_state(p, ens);
        Eigen::VectorXd embedded = Eigen::VectorXd::Zero(v.size());
        for (std::size_t i = 0; i < ens.size(); ++i) {
          embedded[static_cast<Eigen::Index>(ens[i].key(s))] = gs.amplitudes[static_cast<Eigen::Index>(i)];
        }
        if (v.dot(embedded) < 0) v = -v;
        CHECK((v - embedded).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
  CHECK_THROWS_AS(build_h_full({5, 2, 1.0}), MotzkinError);
}

TEST_CASE("dense and iterative gaps agree") {
  for (double t : {1.1, 2.0}) {
    const ModelParams p{4, 2, t};
    const auto ens = enumerate(p);
    const auto dense = hamiltonian_gap(p, ens);
    SolverOptions opts;
    opts.dense_cap = 10;
    const auto iter = hamiltonian_gap(p, ens, opts);
    CHECK(dense.method == SolverMethod::Dense);
    CHECK(iter.method == SolverMethod::DeflatedIterative);
    CHECK(std::abs(dense.gap - iter.gap) <= 1e-10 * dense.gap);
    CHECK(iter.residuals.back() < 1e-10);
  }
}

TEST_CASE("spectral gap of a path-graph Laplacian") {
  const int dim = 300;
  std::vector<SquareTerm> terms;
  for (int i = 0; i + 1 < dim; ++i) terms.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1), 1.0, 1.0});
  const SubspaceOperator op(matrix_from_square_terms(dim, terms), terms);
  const Eigen::VectorXd ground = Eigen::VectorXd::Constant(dim, 1.0 / std::sqrt(double(dim)));
  const double expected = 2.0 - 2.0 * std::cos(M_PI / dim);
  CHECK(spectral_gap(op, ground).gap == doctest::Approx(expected).epsilon(1e-10));
  CHECK(spectral_gap(op).gap == doctest::Approx(expected).epsilon(1e-9));
  SolverOptions opts;
  opts.dense_cap = 1;
  CHECK(spectral_gap(op, ground, opts).gap == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("spectral gap rejects indefinite operators") {
  SubspaceOperator::Matrix m(2, 2);
  m.insert(0, 0) = -1.0;
  m.insert(1, 1) = 1.0;
  CHECK_THROWS_AS(spectral_gap(SubspaceOperator(m)), MotzkinError);
}

TEST_CASE("coordinate export") {
  const ModelParams p{1, 1, 2.0};
  const auto h = build_h_subspace(p, enumerate(p));
  std::ostringstream os;
  h.write_coordinates(os);
  std::istringstream in(os.str());
  const double expected[4] = {0.2, -0.4, -0.4, 0.8};
  std::string line;
  for (int k = 0; k < 4; ++k) {
    REQUIRE(std::getline(in, line));
    std::istringstream row(line);
    int i = -1, j = -1;
    std::string value;
    row >> i >> j >> value;
    CHECK(i == k / 2);
    CHECK(j == k % 2);
    CHECK(std::stod(value) == doctest::Approx(expected[k]).epsilon(1e-15));
    // round-trip precision
    CHECK(value.size() >= 17);
  }
  CHECK_FALSE(std::getline(in, line));
}
