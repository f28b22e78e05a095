#include "motzkin/markov.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "motzkin/errors.hpp"
#include "motzkin/log_math.hpp"

namespace motzkin {

namespace {

constexpr double kNegativeEntryTol = 1e-12;

void check_ensemble(const ModelParams& params, const WalkEnsemble& ensemble) {
  params.validate();
  if (ensemble.params().n != params.n || ensemble.params().s != params.s) {
    throw MotzkinError(ErrorKind::InvalidParams, "ensemble does not match " + params.to_string());
  }
}

}  // namespace

StationaryDist stationary(const ModelParams& params, const WalkEnsemble& ensemble) {
  check_ensemble(params, ensemble);
  const double log_t = std::log(params.t);
  std::vector<double> log_w(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) log_w[i] = 2.0 * static_cast<double>(ensemble[i].area()) * log_t;
  StationaryDist dist;
  dist.log_z = log_sum_exp(log_w);
  const auto dim = static_cast<Eigen::Index>(ensemble.size());
  dist.pi.resize(dim);
  dist.log_pi.resize(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    dist.log_pi[i] = log_w[static_cast<std::size_t>(i)] - dist.log_z;
    dist.pi[i] = std::exp(dist.log_pi[i]);
  }
  return dist;
}

double transition_beta(const ModelParams& params) {
  const double t2 = params.t * params.t;
  return (1.0 + t2) / (2.0 * params.n * params.s * t2);
}

TransitionMatrix build_p_from_h(const ModelParams& params, const SubspaceOperator& h_sub, const StationaryDist& pi) {
  params.validate();
  const auto dim = static_cast<int>(h_sub.dim());
  if (pi.pi.size() != dim) throw MotzkinError(ErrorKind::InvalidParams, "pi and H dimensions differ");
  const double beta = transition_beta(params);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(h_sub.matrix().nonZeros()));
  const auto& h = h_sub.matrix();
  for (int col = 0; col < h.outerSize(); ++col) {
    for (SubspaceOperator::Matrix::InnerIterator it(h, col); it; ++it) {
      const int x = static_cast<int>(it.row());
      const int y = col;
      double value;
      if (x == y) {
        value = 1.0 - beta * it.value();
      } else {
        value = -beta * std::exp(0.5 * (pi.log_pi[y] - pi.log_pi[x])) * it.value();
      }
      if (value < -kNegativeEntryTol) {
        throw MotzkinError(ErrorKind::NegativeEntry, "P(" + std::to_string(x) + "," + std::to_string(y) +
                                                         ") = " + std::to_string(value));
      }
      triplets.emplace_back(x, y, value);
    }
  }
  TransitionMatrix p;
  p.dim = static_cast<std::size_t>(dim);
  p.beta = beta;
  p.rows.resize(dim, dim);
  p.rows.setFromTriplets(triplets.begin(), triplets.end());
  p.rows.makeCompressed();
  return p;
}

TransitionMatrix build_p_direct(const ModelParams& params, const WalkEnsemble& ensemble) {
  return build_p_direct(params, ensemble, build_move_graph(ensemble));
}

TransitionMatrix build_p_direct(const ModelParams& params, const WalkEnsemble& ensemble, const MoveGraph& graph) {
  check_ensemble(params, ensemble);
  const double up_rate = 1.0 / (2.0 * params.n * params.s);
  const double down_rate = up_rate / (params.t * params.t);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(graph.edges().size() + ensemble.size());
  for (std::size_t x = 0; x < ensemble.size(); ++x) {
    double off = 0.0;
    for (const auto& e : graph.out_edges(x)) {
      const double rate = e.delta_area > 0 ? up_rate : down_rate;
      off += rate;
      triplets.emplace_back(static_cast<int>(x), static_cast<int>(e.to_id), rate);
    }
    triplets.emplace_back(static_cast<int>(x), static_cast<int>(x), 1.0 - off);
  }
  TransitionMatrix p;
  p.dim = ensemble.size();
  p.beta = transition_beta(params);
  const auto dim = static_cast<int>(p.dim);
  p.rows.resize(dim, dim);
  p.rows.setFromTriplets(triplets.begin(), triplets.end());
  p.rows.makeCompressed();
  return p;
}

SubspaceOperator symmetrized_laplacian(const TransitionMatrix& p, const StationaryDist& pi) {
  const auto dim = static_cast<int>(p.dim);
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<SquareTerm> terms;
  for (int x = 0; x < p.rows.outerSize(); ++x) {
    double off = 0.0;
    for (TransitionMatrix::Rows::InnerIterator it(p.rows, x); it; ++it) {
      const int y = static_cast<int>(it.col());
      if (y == x) continue;
      off += it.value();
      // D^{1/2} P D^{-1/2} entry
      triplets.emplace_back(x, y, -std::exp(0.5 * (pi.log_pi[x] - pi.log_pi[y])) * it.value());
      if (x < y) {
        const double back = p.rows.coeff(y, x);
        terms.push_back({static_cast<std::size_t>(x), static_cast<std::size_t>(y), std::sqrt(it.value()),
                         std::sqrt(back)});
      }
    }
    // 1 - P(x,x) as the off-diagonal mass, which keeps tiny gaps resolvable
    triplets.emplace_back(x, x, off);
  }
  SubspaceOperator::Matrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SubspaceOperator(std::move(m), std::move(terms));
}

ChainSpectrum lambda2(const TransitionMatrix& p, const StationaryDist& pi, const SolverOptions& options) {
  const auto laplacian = symmetrized_laplacian(p, pi);
  const Eigen::VectorXd top = pi.pi.cwiseSqrt();
  const auto report = spectral_gap(laplacian, top, options);
  ChainSpectrum spectrum;
  spectrum.gap_chain = report.gap;
  spectrum.lambda2 = 1.0 - report.gap;
  spectrum.method = report.method;
  spectrum.residual = report.residuals.empty() ? 0.0 : report.residuals.back();
  spectrum.iterations = report.iterations;
  return spectrum;
}

GapRelation gap_relation_check(const ModelParams& params, const SpectrumReport& h_spectrum,
                               const ChainSpectrum& p_spectrum, double tol) {
  GapRelation rel;
  rel.gap_h = h_spectrum.gap;
  rel.gap_chain = p_spectrum.gap_chain;
  rel.factor = 1.0 / transition_beta(params);
  rel.predicted_gap_h = rel.factor * rel.gap_chain;
  rel.relative_discrepancy = std::abs(rel.gap_h - rel.predicted_gap_h) / std::abs(rel.gap_h);
  rel.passed = rel.relative_discrepancy <= tol;
  return rel;
}

bool TransitionChecks::passed(double tol) const {
  return max_row_sum_error <= tol && min_entry >= -tol && max_detailed_balance_error <= tol &&
         min_diagonal > 0.0 && max_diagonal <= diagonal_bound + tol && stationarity_defect <= tol;
}

TransitionChecks check_transition(const ModelParams& params, const TransitionMatrix& p, const StationaryDist& pi) {
  TransitionChecks c;
  const double t2 = params.t * params.t;
  c.diagonal_bound = 1.0 - 1.0 / (2.0 * params.n * params.s * t2);
  c.literal_offdiagonal_bound = 1.0 / (2.0 * params.n * params.s * t2);
  c.min_entry = std::numeric_limits<double>::infinity();
  c.min_diagonal = std::numeric_limits<double>::infinity();
  Eigen::VectorXd flow = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.dim));
  for (int x = 0; x < p.rows.outerSize(); ++x) {
    double row_sum = 0.0;
    double diag = 0.0;
    for (TransitionMatrix::Rows::InnerIterator it(p.rows, x); it; ++it) {
      const int y = static_cast<int>(it.col());
      row_sum += it.value();
      c.min_entry = std::min(c.min_entry, it.value());
      flow[y] += pi.pi[x] * it.value();
      if (y == x) {
        diag = it.value();
      } else {
        c.max_offdiagonal = std::max(c.max_offdiagonal, it.value());
        const double balance = pi.pi[x] * it.value() - pi.pi[y] * p.rows.coeff(y, x);
        c.max_detailed_balance_error = std::max(c.max_detailed_balance_error, std::abs(balance));
      }
    }
    c.min_diagonal = std::min(c.min_diagonal, diag);
    c.max_diagonal = std::max(c.max_diagonal, diag);
    c.max_row_sum_error = std::max(c.max_row_sum_error, std::abs(row_sum - 1.0));
  }
  c.stationarity_defect = (flow - pi.pi).cwiseAbs().maxCoeff();
  return c;
}

double max_abs_difference(const TransitionMatrix& a, const TransitionMatrix& b) {
  if (a.dim != b.dim) return std::numeric_limits<double>::infinity();
  TransitionMatrix::Rows diff = a.rows - b.rows;
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (TransitionMatrix::Rows::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t value) {
  for (int b = 0; b < 8; ++b) {
    h ^= (value >> (8 * b)) & 0xffU;
    h *= kFnvPrime;
  }
}

}  // namespace

McmcRun mcmc_sample(const ModelParams& params, std::uint64_t steps, std::uint64_t seed, const Walk& start,
                    std::span<const ChainObserver> observers, const WalkEnsemble* ensemble) {
  params.validate();
  if (start.length() != params.length()) {
    throw MotzkinError(ErrorKind::InvalidStart, "start walk has length " + std::to_string(start.length()) +
                                                    ", expected " + std::to_string(params.length()));
  }
  for (const auto& step : start.steps()) {
    if (step.kind != StepKind::Flat && (step.color < 1 || step.color > params.s)) {
      throw MotzkinError(ErrorKind::InvalidStart, "start walk uses a color outside 1..s");
    }
  }
  if (ensemble && (ensemble->params().n != params.n || ensemble->params().s != params.s)) {
    throw MotzkinError(ErrorKind::InvalidParams, "ensemble does not match " + params.to_string());
  }

  const int s = params.s;
  const int length = params.length();
  const std::uint64_t bonds = static_cast<std::uint64_t>(length - 1);
  // per-move firing probability once the bond is chosen
  const double p_up = static_cast<double>(bonds) / (2.0 * params.n * s);
  const double p_down = p_up / (params.t * params.t);
  if (p_down > 1.0) {
    throw MotzkinError(ErrorKind::InvalidParams,
                       "area-decreasing move probability exceeds 1 at " + params.to_string());
  }

  std::vector<StepLabel> walk = start.steps();
  std::vector<int> heights = start.heights();
  std::int64_t area = start.area();

  McmcRun run;
  run.seed = seed;
  run.steps = steps;
  run.trajectory_digest = kFnvOffset;

  // base-(2s+1) key, site 0 most significant
  std::vector<std::uint64_t> place;
  std::uint64_t key = 0;
  if (ensemble) {
    run.visit_counts.assign(ensemble->size(), 0);
    place.resize(static_cast<std::size_t>(length));
    std::uint64_t w = 1;
    for (int j = length - 1; j >= 0; --j) {
      place[static_cast<std::size_t>(j)] = w;
      w *= static_cast<std::uint64_t>(2 * s + 1);
    }
    key = start.key(s);
  }
  auto set_site = [&](std::size_t j, StepLabel label) {
    if (ensemble) {
      key -= static_cast<std::uint64_t>(site_code(walk[j], s)) * place[j];
      key += static_cast<std::uint64_t>(site_code(label, s)) * place[j];
    }
    walk[j] = label;
  };

  std::mt19937_64 rng(seed);
  for (std::uint64_t step = 1; step <= steps; ++step) {
    const std::size_t j = static_cast<std::size_t>(rng() % bonds);
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const StepLabel a = walk[j];
    const StepLabel b = walk[j + 1];
    int fired = -1;  // 0 = no move, k > 0 identifies the move
    int delta = 0;
    using enum StepKind;
    if (a.kind == Flat && b.kind == Flat) {
      const int k = static_cast<int>(u / p_up) + 1;
      if (k <= s) {
        set_site(j, StepLabel::up(k));
        set_site(j + 1, StepLabel::down(k));
        fired = k;
        delta = +1;
      }
    } else if (u < (((a.kind == Flat && b.kind == Up) || (a.kind == Down && b.kind == Flat)) ? p_up : p_down)) {
      if (a.kind == Up && b.kind == Down) {
        set_site(j, StepLabel::flat());
        set_site(j + 1, StepLabel::flat());
        fired = 1;
        delta = -1;
      } else if ((a.kind == Flat && b.kind == Up) || (a.kind == Down && b.kind == Flat)) {
        set_site(j, b);
        set_site(j + 1, a);
        fired = 1;
        delta = +1;
      } else if ((a.kind == Up && b.kind == Flat) || (a.kind == Flat && b.kind == Down)) {
        set_site(j, b);
        set_site(j + 1, a);
        fired = 1;
        delta = -1;
      }
    }
    if (fired > 0) {
      heights[j + 1] += delta;
      area += delta;
      if (delta > 0) {
        ++run.moves_up;
      } else {
        ++run.moves_down;
      }
    }
    fnv_mix(run.trajectory_digest, (static_cast<std::uint64_t>(j) << 32) | static_cast<std::uint32_t>(fired + 1));

    if (ensemble) {
      const auto id = ensemble->find_key(key);
      if (!id) throw std::logic_error("chain left the walk ensemble");
      ++run.visit_counts[*id];
    }
    if (!observers.empty()) {
      const ChainState state{step, walk, heights, area};
      for (const auto& observer : observers) observer(state);
    }
  }
  run.final_walk = validate(walk, s);
  return run;
}

double tv_distance(std::span<const std::uint64_t> counts, const Eigen::VectorXd& pi) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  double tv = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    tv += std::abs(static_cast<double>(counts[i]) / total - pi[static_cast<Eigen::Index>(i)]);
  }
  return 0.5 * tv;
}

}  // namespace motzkin
