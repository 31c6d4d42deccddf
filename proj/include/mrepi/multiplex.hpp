#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace mrepi {

using NodeId = std::uint32_t;

/// Undirected edge, stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  constexpr Edge() = default;
  constexpr Edge(NodeId a, NodeId b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

using EdgeList = std::vector<Edge>;

/// Transmission class of an edge in the superposed graph.
enum class EdgeClass : std::uint8_t { a_only = 0, b_only = 1, shared = 2 };

/// Per-node edge counts by class: (k_A - k_C, k_B - k_C, k_C).
struct VectorDegree {
  std::uint32_t a_only = 0;
  std::uint32_t b_only = 0;
  std::uint32_t shared = 0;

  /// |k_M| = k_A + k_B - k_C
  constexpr std::uint32_t magnitude() const noexcept { return a_only + b_only + shared; }
  constexpr std::uint32_t degree_a() const noexcept { return a_only + shared; }
  constexpr std::uint32_t degree_b() const noexcept { return b_only + shared; }

  friend constexpr auto operator<=>(const VectorDegree&, const VectorDegree&) = default;
};

struct EdgeClasses {
  EdgeList a_only;
  EdgeList b_only;
  EdgeList shared;
};

/// Two-layer multiplex network over nodes 0..n-1. Both layers are simple,
/// undirected graphs on the same node set. Immutable after construction.
class MultiplexGraph {
 public:
  struct Arc {
    NodeId target;
    EdgeClass kind;
  };

  MultiplexGraph() = default;

  /// Validates both layers (range, self-loops, duplicates) and throws
  /// InputError on violation. Edge order in the inputs is irrelevant.
  MultiplexGraph(std::size_t n, EdgeList edges_a, EdgeList edges_b);

  std::size_t size() const noexcept { return n_; }

  /// Layer edge sets, sorted.
  std::span<const Edge> edges_a() const noexcept { return edges_a_; }
  std::span<const Edge> edges_b() const noexcept { return edges_b_; }

  /// The three classified edge sets, each sorted.
  std::span<const Edge> a_only() const noexcept { return classes_.a_only; }
  std::span<const Edge> b_only() const noexcept { return classes_.b_only; }
  std::span<const Edge> shared() const noexcept { return classes_.shared; }

  /// Superposed adjacency: every neighbour once, tagged with its edge class.
  std::span<const Arc> neighbors(NodeId node) const noexcept {
    return {arcs_.data() + offsets_[node], arcs_.data() + offsets_[node + 1]};
  }

  VectorDegree vector_degree(NodeId node) const;

  double mean_degree_a() const noexcept;
  double mean_degree_b() const noexcept;

 private:
  std::size_t n_ = 0;
  EdgeList edges_a_;
  EdgeList edges_b_;
  EdgeClasses classes_;
  std::vector<VectorDegree> degrees_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Arc> arcs_;
};

EdgeClasses classify_edges(const MultiplexGraph& g);

/// Throws InputError when node >= g.size().
VectorDegree vector_degree(const MultiplexGraph& g, NodeId node);

/// p_{k_M}: probability that a random node has a given vector degree.
class VectorDegreeDistribution {
 public:
  using Entries = std::map<VectorDegree, double>;

  VectorDegreeDistribution() = default;

  /// Throws InputError on negative probabilities or a total that is not 1
  /// within 1e-12.
  explicit VectorDegreeDistribution(Entries entries);

  const Entries& entries() const noexcept { return entries_; }
  /// <k_M> = sum |k_M| p_{k_M}
  double mean_magnitude() const noexcept { return mean_magnitude_; }

  /// Distribution with k_B = k_C = 0, built from a plain degree table p_k.
  static VectorDegreeDistribution single_layer(const std::map<std::uint32_t, double>& pk);

 private:
  Entries entries_;
  double mean_magnitude_ = 0.0;
};

/// Tally of vector degrees over all nodes, each weighted 1/n.
VectorDegreeDistribution empirical_vector_distribution(const MultiplexGraph& g);

/// p(k_A, k_B) over plain per-layer degrees.
class JointDegreeDistribution {
 public:
  using Entries = std::map<std::pair<std::uint32_t, std::uint32_t>, double>;

  JointDegreeDistribution() = default;
  explicit JointDegreeDistribution(Entries entries);

  const Entries& entries() const noexcept { return entries_; }

 private:
  Entries entries_;
};

JointDegreeDistribution joint_degree_distribution(const MultiplexGraph& g);

/// Average similarity of neighbours: sum_i k_C(i) / sum_i |k_M(i)|.
/// Throws UndefinedMetricError when every node is isolated.
double asn(const MultiplexGraph& g);

enum class DdcMode {
  variance_ratio,  ///< cov(k_A, k_B) / var(k_B)
  pearson         ///< cov(k_A, k_B) / sqrt(var(k_A) var(k_B))
};

/// Degree-degree correlation between layers. Throws UndefinedMetricError when
/// a variance in the denominator is zero.
double ddc(const JointDegreeDistribution& j, DdcMode mode = DdcMode::pearson);

/// Pearson DDC of a graph, shorthand for ddc(joint_degree_distribution(g)).
double ddc(const MultiplexGraph& g, DdcMode mode = DdcMode::pearson);

}  // namespace mrepi
