#include "motzkin/hamiltonian.hpp"

#include <cmath>

#include "motzkin/errors.hpp"
#include "motzkin/log_math.hpp"

namespace motzkin {

namespace {

int up_code(int k) { return k - 1; }
int flat_code(int s) { return s; }
int down_code(int k, int s) { return s + k; }

void add_outer(Eigen::MatrixXd& m, const Eigen::VectorXd& ket) { m.noalias() += ket * ket.transpose(); }

struct ColumnEntry {
  int row;
  double value;
};

// Nonzero pattern of a dense local operator, grouped by column.
std::vector<std::vector<ColumnEntry>> columns_of(const Eigen::MatrixXd& m) {
  std::vector<std::vector<ColumnEntry>> cols(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (m(r, c) != 0.0) cols[static_cast<std::size_t>(c)].push_back({static_cast<int>(r), m(r, c)});
    }
  }
  return cols;
}

}  // namespace

Eigen::MatrixXd bond_projector(int s, double t) {
  const int d = 2 * s + 1;
  const int flat = flat_code(s);
  auto pair = [d](int a, int b) { return a * d + b; };
  const double norm = 1.0 / std::sqrt(1.0 + t * t);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d * d, d * d);
  for (int k = 1; k <= s; ++k) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(d * d);
    u[pair(flat, up_code(k))] = t * norm;
    u[pair(up_code(k), flat)] = -norm;
    add_outer(m, u);

    Eigen::VectorXd dn = Eigen::VectorXd::Zero(d * d);
    dn[pair(flat, down_code(k, s))] = norm;
    dn[pair(down_code(k, s), flat)] = -t * norm;
    add_outer(m, dn);

    Eigen::VectorXd phi = Eigen::VectorXd::Zero(d * d);
    phi[pair(up_code(k), down_code(k, s))] = norm;
    phi[pair(flat, flat)] = -t * norm;
    add_outer(m, phi);
  }
  return m;
}

Eigen::MatrixXd cross_projector(int s) {
  const int d = 2 * s + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d * d, d * d);
  for (int k = 1; k <= s; ++k) {
    for (int i = 1; i <= s; ++i) {
      if (k == i) continue;
      const int idx = up_code(k) * d + down_code(i, s);
      m(idx, idx) = 1.0;
    }
  }
  return m;
}

Eigen::MatrixXd boundary_first_projector(int s) {
  const int d = 2 * s + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int k = 1; k <= s; ++k) m(down_code(k, s), down_code(k, s)) = 1.0;
  return m;
}

Eigen::MatrixXd boundary_last_projector(int s) {
  const int d = 2 * s + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int k = 1; k <= s; ++k) m(up_code(k), up_code(k)) = 1.0;
  return m;
}

GroundState ground_state(const ModelParams& params, const WalkEnsemble& ensemble) {
  params.validate();
  const double log_t = std::log(params.t);
  std::vector<double> log_weight(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    log_weight[i] = 2.0 * static_cast<double>(ensemble[i].area()) * log_t;
  }
  GroundState gs;
  gs.log_z = log_sum_exp(log_weight);
  gs.amplitudes.resize(static_cast<Eigen::Index>(ensemble.size()));
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    gs.amplitudes[static_cast<Eigen::Index>(i)] = std::exp(0.5 * (log_weight[i] - gs.log_z));
  }
  return gs;
}

std::vector<SquareTerm> h_square_terms(const ModelParams& params, const WalkEnsemble& ensemble,
                                       const MoveGraph& graph) {
  const double norm = 1.0 / std::sqrt(1.0 + params.t * params.t);
  std::vector<SquareTerm> terms;
  for (std::size_t id = 0; id < ensemble.size(); ++id) {
    for (const auto& e : graph.out_edges(id)) {
      if (e.delta_area > 0) terms.push_back({e.from_id, e.to_id, params.t * norm, norm});
    }
  }
  return terms;
}

SubspaceOperator build_h_subspace(const ModelParams& params, const WalkEnsemble& ensemble,
                                  SubspaceDiagnostics* diagnostics) {
  params.validate();
  // the ensemble only depends on (n, s)
  if (ensemble.params().n != params.n || ensemble.params().s != params.s) {
    throw MotzkinError(ErrorKind::InvalidParams, "ensemble does not match " + params.to_string());
  }
  const int s = params.s;
  const int d = 2 * s + 1;
  const auto bond = columns_of(bond_projector(s, params.t));
  const auto cross = columns_of(cross_projector(s));
  const auto first = columns_of(boundary_first_projector(s));
  const auto last = columns_of(boundary_last_projector(s));

  std::vector<Eigen::Triplet<double>> triplets;
  double leakage_sq = 0.0;
  double boundary_sq = 0.0;
  double cross_sq = 0.0;

  std::vector<StepLabel> buf;
  for (std::size_t x = 0; x < ensemble.size(); ++x) {
    const auto& steps = ensemble[x].steps();
    buf = steps;
    auto emit = [&](double value, double* family_sq) {
      if (auto y = ensemble.find_steps(buf)) {
        triplets.emplace_back(static_cast<int>(*y), static_cast<int>(x), value);
        if (family_sq) *family_sq += value * value;
      } else {
        leakage_sq += value * value;
      }
    };
    for (std::size_t j = 0; j + 1 < steps.size(); ++j) {
      const int col = site_code(steps[j], s) * d + site_code(steps[j + 1], s);
      for (const auto& entry : bond[static_cast<std::size_t>(col)]) {
        buf[j] = site_label(entry.row / d, s);
        buf[j + 1] = site_label(entry.row % d, s);
        emit(entry.value, nullptr);
      }
      for (const auto& entry : cross[static_cast<std::size_t>(col)]) {
        buf[j] = site_label(entry.row / d, s);
        buf[j + 1] = site_label(entry.row % d, s);
        emit(entry.value, &cross_sq);
      }
      buf[j] = steps[j];
      buf[j + 1] = steps[j + 1];
    }
    const std::size_t tail = steps.size() - 1;
    for (const auto& entry : first[static_cast<std::size_t>(site_code(steps[0], s))]) {
      buf[0] = site_label(entry.row, s);
      emit(entry.value, &boundary_sq);
    }
    buf[0] = steps[0];
    for (const auto& entry : last[static_cast<std::size_t>(site_code(steps[tail], s))]) {
      buf[tail] = site_label(entry.row, s);
      emit(entry.value, &boundary_sq);
    }
  }

  const int dim = static_cast<int>(ensemble.size());
  SubspaceOperator::Matrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.prune(0.0);
  if (diagnostics) {
    diagnostics->leakage = std::sqrt(leakage_sq);
    diagnostics->boundary_norm = std::sqrt(boundary_sq);
    diagnostics->cross_norm = std::sqrt(cross_sq);
  }
  return SubspaceOperator(std::move(m), h_square_terms(params, ensemble, build_move_graph(ensemble)));
}

SubspaceOperator build_h_full(const ModelParams& params, const FullSpaceOptions& options) {
  params.validate();
  const int s = params.s;
  const int length = params.length();
  const std::uint64_t d = static_cast<std::uint64_t>(2 * s + 1);
  std::uint64_t dim = 1;
  for (int j = 0; j < length; ++j) {
    dim *= d;
    if (dim > options.max_dim) {
      throw MotzkinError(ErrorKind::SizeLimitExceeded, "full space of " + params.to_string() +
                                                           " exceeds " + std::to_string(options.max_dim));
    }
  }
  // place[j]: weight of site j in the basis index
  std::vector<std::uint64_t> place(static_cast<std::size_t>(length));
  std::uint64_t w = 1;
  for (int j = length - 1; j >= 0; --j) {
    place[static_cast<std::size_t>(j)] = w;
    w *= d;
  }
  Eigen::MatrixXd two_site = bond_projector(s, params.t) + cross_projector(s);
  const auto pair_cols = columns_of(two_site);
  const auto first = columns_of(boundary_first_projector(s));
  const auto last = columns_of(boundary_last_projector(s));

  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<std::uint64_t> digits(static_cast<std::size_t>(length));
  for (std::uint64_t x = 0; x < dim; ++x) {
    std::uint64_t rest = x;
    for (int j = length - 1; j >= 0; --j) {
      digits[static_cast<std::size_t>(j)] = rest % d;
      rest /= d;
    }
    for (int j = 0; j + 1 < length; ++j) {
      const auto a = digits[static_cast<std::size_t>(j)];
      const auto b = digits[static_cast<std::size_t>(j + 1)];
      const std::uint64_t base = x - a * place[static_cast<std::size_t>(j)] - b * place[static_cast<std::size_t>(j + 1)];
      for (const auto& entry : pair_cols[a * d + b]) {
        const std::uint64_t ra = static_cast<std::uint64_t>(entry.row) / d;
        const std::uint64_t rb = static_cast<std::uint64_t>(entry.row) % d;
        const std::uint64_t y = base + ra * place[static_cast<std::size_t>(j)] + rb * place[static_cast<std::size_t>(j + 1)];
        triplets.emplace_back(static_cast<int>(y), static_cast<int>(x), entry.value);
      }
    }
    for (const auto& entry : first[digits.front()]) {
      const std::uint64_t y = x + (static_cast<std::uint64_t>(entry.row) - digits.front()) * place.front();
      triplets.emplace_back(static_cast<int>(y), static_cast<int>(x), entry.value);
    }
    for (const auto& entry : last[digits.back()]) {
      const std::uint64_t y = x - digits.back() + static_cast<std::uint64_t>(entry.row);
      triplets.emplace_back(static_cast<int>(y), static_cast<int>(x), entry.value);
    }
  }
  SubspaceOperator::Matrix m(static_cast<int>(dim), static_cast<int>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.prune(0.0);
  return SubspaceOperator(std::move(m));
}

SpectrumReport hamiltonian_gap(const ModelParams& params, const WalkEnsemble& ensemble,
                               const SolverOptions& options) {
  const auto h = build_h_subspace(params, ensemble);
  const auto gs = ground_state(params, ensemble);
  return spectral_gap(h, gs.amplitudes, options);
}

}  // namespace motzkin
