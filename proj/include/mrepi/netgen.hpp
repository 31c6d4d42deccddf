#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mrepi/multiplex.hpp"

namespace mrepi {

enum class LayerKind { er, sf };

std::string to_string(LayerKind kind);
/// Accepts "er" / "sf" (case-insensitive).
LayerKind parse_layer_kind(std::string_view text);

/// One network layer: X(n, <k>).
struct LayerSpec {
  LayerKind kind = LayerKind::er;
  std::size_t n = 0;
  double mean_degree = 0.0;

  /// Throws InputError unless n >= 2 and 0 <= mean_degree <= n - 1.
  void validate() const;
};

/// Erdos-Renyi G(n, p) with p = mean_degree / (n - 1).
EdgeList gen_er(std::size_t n, double mean_degree, std::uint64_t seed);

/// Barabasi-Albert preferential attachment with m = round(mean_degree / 2)
/// edges per new node, grown from a clique on m + 1 nodes.
EdgeList gen_sf(std::size_t n, double mean_degree, std::uint64_t seed);

EdgeList gen_layer(const LayerSpec& spec, std::uint64_t seed);

/// BA attachment parameter for a requested mean degree.
std::size_t sf_attachment(double mean_degree);

/// Edge count the generators aim for: round(n <k> / 2) for ER, the exact BA
/// edge count m(m+1)/2 + m(n-m-1) for SF.
std::size_t target_edge_count(const LayerSpec& spec);

/// Applies node relabelling old -> perm[old] to every edge.
EdgeList relabel(std::span<const Edge> edges, std::span<const NodeId> perm);

enum class CouplingStatus { met, unmet };

struct CouplingResult {
  MultiplexGraph graph;
  double target = 0.0;
  double measured = 0.0;
  CouplingStatus status = CouplingStatus::met;
  std::size_t swaps_tried = 0;
};

/// Two same-kind layers sharing a common base network. The base is a random
/// subset of a first generated layer; layer A is that full layer, layer B is
/// the base plus edges drawn from an independently generated layer of the same
/// kind, never duplicating an A edge. The shared-edge count fixes ASN exactly
/// up to rounding. Throws InfeasibleError for mixed kinds or unreachable targets.
CouplingResult couple_asn(const LayerSpec& spec_a, const LayerSpec& spec_b, double target_asn,
                          std::uint64_t seed, double tolerance = 0.01);

struct DdcSearchOptions {
  double tolerance = 0.02;
  /// Pairwise swap proposals; 0 selects 50 n.
  std::size_t swap_budget = 0;
};

/// Relabels layer B by a permutation found with greedy hill climbing over
/// random pairwise label swaps, starting from a uniformly random permutation,
/// until the Pearson DDC is within tolerance of the target. Layer topologies
/// are untouched. Reports status unmet (with the best value reached) when the
/// budget runs out.
CouplingResult couple_ddc(std::size_t n, std::span<const Edge> layer_a,
                          std::span<const Edge> layer_b, double target_ddc, std::uint64_t seed,
                          const DdcSearchOptions& options = {});

/// Layer B under a uniformly random relabelling (no targeting, DDC ~ 0).
MultiplexGraph couple_random(std::size_t n, std::span<const Edge> layer_a,
                             std::span<const Edge> layer_b, std::uint64_t seed);

/// Permutation for layer B pairing the i-th largest A degree with the i-th
/// largest B degree (ascending = false), or with the i-th smallest
/// (ascending = true). These bound the achievable DDC from above and below.
std::vector<NodeId> sorted_pairing(std::size_t n, std::span<const Edge> layer_a,
                                   std::span<const Edge> layer_b, bool ascending = false);

struct CouplingSpec {
  enum class Target { none, asn, ddc };
  Target target = Target::none;
  double value = 0.0;
  /// 0 selects the default for the target (0.01 for ASN, 0.02 for DDC).
  double tolerance = 0.0;
};

/// Builds a multiplex network from two layer specs and an optional coupling
/// target. Without a target, layer B is randomly relabelled.
CouplingResult generate_multiplex(const LayerSpec& spec_a, const LayerSpec& spec_b,
                                  const CouplingSpec& coupling, std::uint64_t seed);

}  // namespace mrepi
