#include "motzkin/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "motzkin/errors.hpp"

namespace motzkin {

BigInt count_walks(int length, int s) {
  if (length < 0) return 0;
  // ways[h]: colored prefixes ending at height h
  std::vector<BigInt> ways(static_cast<std::size_t>(length) + 2, 0);
  ways[0] = 1;
  for (int j = 0; j < length; ++j) {
    std::vector<BigInt> next(ways.size(), 0);
    for (std::size_t h = 0; h + 1 < ways.size(); ++h) {
      if (ways[h] == 0) continue;
      next[h + 1] += ways[h] * s;
      next[h] += ways[h];
      if (h > 0) next[h - 1] += ways[h];
    }
    ways = std::move(next);
  }
  return ways[0];
}

BigInt count(const ModelParams& params) {
  params.validate();
  return count_walks(params.length(), params.s);
}

namespace {

struct Enumerator {
  int length;
  int s;
  std::vector<StepLabel> prefix;
  std::vector<int> open;
  std::vector<Walk>* out;

  void extend(int height) {
    const int filled = static_cast<int>(prefix.size());
    if (filled == length) {
      out->push_back(validate(prefix, s));
      return;
    }
    const int remaining = length - filled;
    if (height + 1 <= remaining - 1) {
      for (int c = 1; c <= s; ++c) {
        prefix.push_back(StepLabel::up(c));
        open.push_back(c);
        extend(height + 1);
        open.pop_back();
        prefix.pop_back();
      }
    }
    if (height <= remaining - 1) {
      prefix.push_back(StepLabel::flat());
      extend(height);
      prefix.pop_back();
    }
    if (height > 0) {
      const int c = open.back();
      open.pop_back();
      prefix.push_back(StepLabel::down(c));
      extend(height - 1);
      prefix.pop_back();
      open.push_back(c);
    }
  }
};

}  // namespace

WalkEnsemble enumerate(const ModelParams& params, const EnumerateOptions& options) {
  params.validate();
  const BigInt expected = count(params);
  if (expected > BigInt(options.max_walks)) {
    throw MotzkinError(ErrorKind::SizeLimitExceeded,
                       params.to_string() + " has " + expected.str() + " walks, cap is " +
                           std::to_string(options.max_walks));
  }
  WalkEnsemble ensemble;
  ensemble.params_ = params;
  ensemble.walks_.reserve(static_cast<std::size_t>(expected));
  Enumerator gen{params.length(), params.s, {}, {}, &ensemble.walks_};
  gen.prefix.reserve(static_cast<std::size_t>(params.length()));
  gen.extend(0);

  ensemble.index_.reserve(ensemble.walks_.size());
  for (std::size_t id = 0; id < ensemble.walks_.size(); ++id) {
    ensemble.index_.emplace(ensemble.walks_[id].key(params.s), id);
  }
  return ensemble;
}

std::optional<std::size_t> WalkEnsemble::find_key(std::uint64_t key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> WalkEnsemble::find(const Walk& walk) const {
  if (walk.length() != params_.length()) return std::nullopt;
  return find_key(walk.key(params_.s));
}

std::optional<std::size_t> WalkEnsemble::find_steps(std::span<const StepLabel> steps) const {
  if (static_cast<int>(steps.size()) != params_.length()) return std::nullopt;
  const std::uint64_t base = 2 * static_cast<std::uint64_t>(params_.s) + 1;
  std::uint64_t k = 0;
  for (const auto& step : steps) {
    if (step.kind != StepKind::Flat && (step.color < 1 || step.color > params_.s)) return std::nullopt;
    k = k * base + static_cast<std::uint64_t>(site_code(step, params_.s));
  }
  return find_key(k);
}

std::int64_t WalkEnsemble::max_area() const {
  std::int64_t best = 0;
  for (const auto& w : walks_) best = std::max(best, w.area());
  return best;
}

MoveGraph build_move_graph(const WalkEnsemble& ensemble) {
  MoveGraph graph;
  graph.offsets_.reserve(ensemble.size() + 1);
  graph.offsets_.push_back(0);
  for (std::size_t id = 0; id < ensemble.size(); ++id) {
    for (const auto& move : local_moves(ensemble[id], ensemble.params().s)) {
      const auto to = ensemble.find(move.target);
      if (!to) throw std::logic_error("local move left the walk ensemble");
      graph.edges_.push_back({id, *to, move.bond, move.delta_area});
    }
    graph.offsets_.push_back(graph.edges_.size());
  }
  return graph;
}

std::size_t connected_components(const MoveGraph& graph) {
  std::vector<char> seen(graph.size(), 0);
  std::size_t components = 0;
  std::queue<std::size_t> frontier;
  for (std::size_t root = 0; root < graph.size(); ++root) {
    if (seen[root]) continue;
    ++components;
    seen[root] = 1;
    frontier.push(root);
    while (!frontier.empty()) {
      const auto v = frontier.front();
      frontier.pop();
      for (const auto& e : graph.out_edges(v)) {
        if (!seen[e.to_id]) {
          seen[e.to_id] = 1;
          frontier.push(e.to_id);
        }
      }
    }
  }
  return components;
}

}  // namespace motzkin
