#ifndef MOTZKIN_ENSEMBLE_HPP
#define MOTZKIN_ENSEMBLE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "motzkin/params.hpp"
#include "motzkin/walk.hpp"

namespace motzkin {

using BigInt = boost::multiprecision::cpp_int;

/// Number of s-colored Motzkin walks of length 2n (height-indexed DP).
BigInt count(const ModelParams& params);
BigInt count_walks(int length, int s);

struct EnumerateOptions {
  std::size_t max_walks = 2'000'000;
};

/// Every walk of Omega_{2n} exactly once, ids in lexicographic step order.
class WalkEnsemble {
 public:
  const ModelParams& params() const { return params_; }
  std::size_t size() const { return walks_.size(); }
  const Walk& operator[](std::size_t id) const { return walks_[id]; }
  const std::vector<Walk>& walks() const { return walks_; }

  std::optional<std::size_t> find(const Walk& walk) const;
  std::optional<std::size_t> find_key(std::uint64_t key) const;
  std::optional<std::size_t> find_steps(std::span<const StepLabel> steps) const;

  std::int64_t max_area() const;

 private:
  friend WalkEnsemble enumerate(const ModelParams&, const EnumerateOptions&);
  ModelParams params_;
  std::vector<Walk> walks_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Prefix extension with height pruning. Throws SizeLimitExceeded past max_walks.
WalkEnsemble enumerate(const ModelParams& params, const EnumerateOptions& options = {});

struct MoveEdge {
  std::size_t from_id = 0;
  std::size_t to_id = 0;
  int bond = 0;
  int delta_area = 0;
};

/// Directed local-move graph in CSR layout; every undirected move appears once
/// in each direction.
class MoveGraph {
 public:
  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const MoveEdge> out_edges(std::size_t id) const {
    return {edges_.data() + offsets_[id], offsets_[id + 1] - offsets_[id]};
  }
  const std::vector<MoveEdge>& edges() const { return edges_; }

 private:
  friend MoveGraph build_move_graph(const WalkEnsemble&);
  std::vector<std::size_t> offsets_;
  std::vector<MoveEdge> edges_;
};

MoveGraph build_move_graph(const WalkEnsemble& ensemble);

/// Number of connected components of the move graph.
std::size_t connected_components(const MoveGraph& graph);

}  // namespace motzkin

#endif  // MOTZKIN_ENSEMBLE_HPP
