#include "mrepi/netgen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "mrepi/error.hpp"
#include "mrepi/rng.hpp"

namespace mrepi {

namespace {

std::uint64_t edge_key(const Edge& e) { return (std::uint64_t{e.u} << 32) | e.v; }

class EdgeSet {
 public:
  bool contains(const Edge& e) const { return keys_.contains(edge_key(e)); }
  bool insert(const Edge& e) { return keys_.insert(edge_key(e)).second; }
  void insert_all(std::span<const Edge> edges) {
    for (const Edge& e : edges) insert(e);
  }

 private:
  std::unordered_set<std::uint64_t> keys_;
};

/// Appends uniformly random new edges to `out` until it holds `count`, never
/// producing an edge already in `taken` (which is updated).
void add_uniform_edges(std::size_t n, std::size_t count, EdgeList& out, EdgeSet& taken,
                       const EdgeSet* forbidden, Engine& rng) {
  while (out.size() < count) {
    const auto u = static_cast<NodeId>(uniform_below(rng, n));
    const auto v = static_cast<NodeId>(uniform_below(rng, n));
    if (u == v) continue;
    const Edge e(u, v);
    if (forbidden != nullptr && forbidden->contains(e)) continue;
    if (taken.insert(e)) out.push_back(e);
  }
}

/// Appends edges whose endpoints are drawn proportionally to current degree in
/// `out` (plus one, so isolated nodes remain reachable).
void add_preferential_edges(std::size_t n, std::size_t count, EdgeList& out, EdgeSet& taken,
                            const EdgeSet* forbidden, Engine& rng) {
  std::vector<NodeId> urn;
  urn.reserve(n + 2 * count);
  for (NodeId i = 0; i < n; ++i) urn.push_back(i);
  for (const Edge& e : out) {
    urn.push_back(e.u);
    urn.push_back(e.v);
  }
  while (out.size() < count) {
    const NodeId u = urn[uniform_below(rng, urn.size())];
    const NodeId v = urn[uniform_below(rng, urn.size())];
    if (u == v) continue;
    const Edge e(u, v);
    if (forbidden != nullptr && forbidden->contains(e)) continue;
    if (!taken.insert(e)) continue;
    out.push_back(e);
    urn.push_back(u);
    urn.push_back(v);
  }
}

std::vector<std::uint32_t> degree_sequence(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::uint32_t> deg(n, 0);
  for (const Edge& e : edges) {
    if (e.v >= n) throw InputError("edge endpoint out of range");
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

}  // namespace

std::string to_string(LayerKind kind) { return kind == LayerKind::er ? "ER" : "SF"; }

LayerKind parse_layer_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "er") return LayerKind::er;
  if (lower == "sf") return LayerKind::sf;
  throw InputError("unknown layer kind '" + std::string(text) + "' (expected ER or SF)");
}

void LayerSpec::validate() const {
  if (n < 2) throw InputError("layer needs at least 2 nodes");
  if (!(mean_degree >= 0.0) || mean_degree > static_cast<double>(n - 1)) {
    throw InputError("mean degree " + std::to_string(mean_degree) + " infeasible for n=" +
                     std::to_string(n));
  }
  if (kind == LayerKind::sf) {
    if (mean_degree < 2.0) throw InputError("SF layers need mean degree >= 2");
    if (sf_attachment(mean_degree) + 1 > n) throw InputError("SF seed clique larger than n");
  }
}

EdgeList gen_er(std::size_t n, double mean_degree, std::uint64_t seed) {
  if (n < 2) throw InputError("ER layer needs at least 2 nodes");
  const double p = mean_degree / static_cast<double>(n - 1);
  if (!(p >= 0.0) || p > 1.0) {
    throw InputError("ER edge probability " + std::to_string(p) + " outside [0, 1]");
  }
  EdgeList edges;
  if (p == 0.0) return edges;
  if (p == 1.0) {
    for (NodeId v = 1; v < n; ++v)
      for (NodeId u = 0; u < v; ++u) edges.emplace_back(u, v);
    return edges;
  }
  // Geometric skipping over the lexicographic list of node pairs.
  Engine rng = make_engine(seed);
  const double log_q = std::log1p(-p);
  edges.reserve(static_cast<std::size_t>(p * static_cast<double>(n) * static_cast<double>(n - 1) / 2 * 1.1) + 16);
  std::int64_t v = 1;
  std::int64_t w = -1;
  const auto nn = static_cast<std::int64_t>(n);
  while (v < nn) {
    const double r = uniform01(rng);
    w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) edges.emplace_back(static_cast<NodeId>(w), static_cast<NodeId>(v));
  }
  return edges;
}

std::size_t sf_attachment(double mean_degree) {
  if (!(mean_degree >= 2.0)) throw InputError("SF layers need mean degree >= 2");
  return static_cast<std::size_t>(std::llround(mean_degree / 2.0));
}

EdgeList gen_sf(std::size_t n, double mean_degree, std::uint64_t seed) {
  const std::size_t m = sf_attachment(mean_degree);
  if (n < m + 1) throw InputError("SF layer needs n >= m + 1");
  Engine rng = make_engine(seed);
  EdgeList edges;
  edges.reserve(m * n);
  // Every edge endpoint, so uniform picks are degree-proportional.
  std::vector<NodeId> ends;
  ends.reserve(2 * m * n);
  for (NodeId v = 1; v <= m; ++v) {
    for (NodeId u = 0; u < v; ++u) {
      edges.emplace_back(u, v);
      ends.push_back(u);
      ends.push_back(v);
    }
  }
  std::vector<NodeId> targets;
  targets.reserve(m);
  for (auto t = static_cast<NodeId>(m + 1); t < n; ++t) {
    targets.clear();
    while (targets.size() < m) {
      const NodeId pick = ends[uniform_below(rng, ends.size())];
      if (std::find(targets.begin(), targets.end(), pick) == targets.end()) targets.push_back(pick);
    }
    for (const NodeId target : targets) {
      edges.emplace_back(target, t);
      ends.push_back(target);
      ends.push_back(t);
    }
  }
  return edges;
}

EdgeList gen_layer(const LayerSpec& spec, std::uint64_t seed) {
  spec.validate();
  return spec.kind == LayerKind::er ? gen_er(spec.n, spec.mean_degree, seed)
                                    : gen_sf(spec.n, spec.mean_degree, seed);
}

std::size_t target_edge_count(const LayerSpec& spec) {
  spec.validate();
  if (spec.kind == LayerKind::er) {
    return static_cast<std::size_t>(std::llround(spec.mean_degree * static_cast<double>(spec.n) / 2.0));
  }
  const std::size_t m = sf_attachment(spec.mean_degree);
  return m * (m + 1) / 2 + m * (spec.n - m - 1);
}

EdgeList relabel(std::span<const Edge> edges, std::span<const NodeId> perm) {
  EdgeList out;
  out.reserve(edges.size());
  for (const Edge& e : edges) out.emplace_back(perm[e.u], perm[e.v]);
  return out;
}

CouplingResult couple_asn(const LayerSpec& spec_a, const LayerSpec& spec_b, double target_asn,
                          std::uint64_t seed, double tolerance) {
  spec_a.validate();
  spec_b.validate();
  if (spec_a.n != spec_b.n) throw InputError("layers must have the same node count");
  if (!(target_asn >= 0.0 && target_asn <= 1.0)) throw InputError("target ASN must lie in [0, 1]");
  if (!(tolerance > 0.0)) throw InputError("ASN tolerance must be positive");
  if (spec_a.kind != spec_b.kind) {
    throw InfeasibleError("ASN targeting needs two layers of the same kind; mixed ER-SF pairs "
                          "only reach the narrow ASN range of random relabelling");
  }
  const std::size_t n = spec_a.n;
  const std::size_t count_a = target_edge_count(spec_a);
  const std::size_t count_b = target_edge_count(spec_b);
  // asn = C / (E_A + E_B - C) when the extra edges of the two layers are disjoint.
  const auto shared = static_cast<std::size_t>(
      std::llround(target_asn * static_cast<double>(count_a + count_b) / (1.0 + target_asn)));
  if (shared > std::min(count_a, count_b)) {
    const double reachable = static_cast<double>(std::min(count_a, count_b)) /
                             static_cast<double>(std::max(count_a, count_b));
    throw InfeasibleError("target ASN " + std::to_string(target_asn) +
                          " unreachable with these mean degrees (maximum " +
                          std::to_string(reachable) + ")");
  }

  Engine rng = make_engine(derive_seed(seed, 0));
  EdgeList layer_a;
  EdgeSet set_a;
  if (spec_a.kind == LayerKind::er) {
    add_uniform_edges(n, count_a, layer_a, set_a, nullptr, rng);
  } else {
    layer_a = gen_sf(n, spec_a.mean_degree, derive_seed(seed, 1));
    set_a.insert_all(layer_a);
  }

  EdgeList base(layer_a);
  portable_shuffle(base.begin(), base.end(), rng);
  base.resize(shared);

  EdgeList layer_b(base);
  EdgeSet set_b;
  set_b.insert_all(layer_b);
  if (spec_b.kind == LayerKind::er) {
    add_uniform_edges(n, count_b, layer_b, set_b, &set_a, rng);
  } else {
    EdgeList donor = gen_sf(n, spec_b.mean_degree, derive_seed(seed, 2));
    portable_shuffle(donor.begin(), donor.end(), rng);
    for (const Edge& e : donor) {
      if (layer_b.size() >= count_b) break;
      if (set_a.contains(e) || set_b.contains(e)) continue;
      set_b.insert(e);
      layer_b.push_back(e);
    }
    add_preferential_edges(n, count_b, layer_b, set_b, &set_a, rng);
  }

  CouplingResult result{MultiplexGraph(n, std::move(layer_a), std::move(layer_b)), target_asn, 0.0,
                        CouplingStatus::met, 0};
  result.measured = asn(result.graph);
  if (std::abs(result.measured - target_asn) > tolerance) {
    throw InfeasibleError("achieved ASN " + std::to_string(result.measured) + " misses target " +
                          std::to_string(target_asn) + " by more than " + std::to_string(tolerance));
  }
  return result;
}

CouplingResult couple_ddc(std::size_t n, std::span<const Edge> layer_a,
                          std::span<const Edge> layer_b, double target_ddc, std::uint64_t seed,
                          const DdcSearchOptions& options) {
  if (!(target_ddc >= -1.0 && target_ddc <= 1.0)) throw InputError("target DDC must lie in [-1, 1]");
  if (!(options.tolerance > 0.0)) throw InputError("DDC tolerance must be positive");
  const auto deg_a = degree_sequence(n, layer_a);
  const auto deg_b = degree_sequence(n, layer_b);

  // Pearson DDC under a permutation depends only on sum_i k_A(i) k_B(slot[i]);
  // the marginal moments are permutation invariant.
  double mean_a = 0.0, mean_b = 0.0, sq_a = 0.0, sq_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += deg_a[i];
    mean_b += deg_b[i];
    sq_a += static_cast<double>(deg_a[i]) * deg_a[i];
    sq_b += static_cast<double>(deg_b[i]) * deg_b[i];
  }
  const auto nd = static_cast<double>(n);
  mean_a /= nd;
  mean_b /= nd;
  const double scale = std::sqrt((sq_a / nd - mean_a * mean_a) * (sq_b / nd - mean_b * mean_b));
  if (!(scale > 1e-14)) throw UndefinedMetricError("DDC undefined: a layer has zero degree variance");
  auto pearson = [&](std::int64_t cross) {
    return (static_cast<double>(cross) / nd - mean_a * mean_b) / scale;
  };

  Engine rng = make_engine(seed);
  // slot[i] = original layer-B node placed at position i.
  std::vector<NodeId> slot(n);
  std::iota(slot.begin(), slot.end(), NodeId{0});
  portable_shuffle(slot.begin(), slot.end(), rng);
  std::int64_t cross = 0;
  for (std::size_t i = 0; i < n; ++i) cross += std::int64_t{deg_a[i]} * deg_b[slot[i]];

  const std::size_t budget = options.swap_budget == 0 ? 50 * n : options.swap_budget;
  double current = pearson(cross);
  std::size_t tried = 0;
  while (std::abs(current - target_ddc) > options.tolerance && tried < budget) {
    ++tried;
    const auto i = uniform_below(rng, n);
    const auto j = uniform_below(rng, n);
    if (i == j) continue;
    const std::int64_t delta = (std::int64_t{deg_a[i]} - deg_a[j]) *
                               (std::int64_t{deg_b[slot[j]]} - deg_b[slot[i]]);
    const double proposed = pearson(cross + delta);
    if (std::abs(proposed - target_ddc) < std::abs(current - target_ddc)) {
      std::swap(slot[i], slot[j]);
      cross += delta;
      current = proposed;
    }
  }

  std::vector<NodeId> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[slot[i]] = static_cast<NodeId>(i);
  CouplingResult result{MultiplexGraph(n, EdgeList(layer_a.begin(), layer_a.end()), relabel(layer_b, perm)),
                        target_ddc, 0.0, CouplingStatus::met, tried};
  result.measured = ddc(result.graph);
  if (std::abs(result.measured - target_ddc) > options.tolerance) result.status = CouplingStatus::unmet;
  return result;
}

MultiplexGraph couple_random(std::size_t n, std::span<const Edge> layer_a,
                             std::span<const Edge> layer_b, std::uint64_t seed) {
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  Engine rng = make_engine(seed);
  portable_shuffle(perm.begin(), perm.end(), rng);
  return MultiplexGraph(n, EdgeList(layer_a.begin(), layer_a.end()), relabel(layer_b, perm));
}

std::vector<NodeId> sorted_pairing(std::size_t n, std::span<const Edge> layer_a,
                                   std::span<const Edge> layer_b, bool ascending) {
  const auto deg_a = degree_sequence(n, layer_a);
  const auto deg_b = degree_sequence(n, layer_b);
  std::vector<NodeId> by_a(n), by_b(n);
  std::iota(by_a.begin(), by_a.end(), NodeId{0});
  std::iota(by_b.begin(), by_b.end(), NodeId{0});
  std::stable_sort(by_a.begin(), by_a.end(), [&](NodeId x, NodeId y) { return deg_a[x] > deg_a[y]; });
  if (ascending) {
    std::stable_sort(by_b.begin(), by_b.end(), [&](NodeId x, NodeId y) { return deg_b[x] < deg_b[y]; });
  } else {
    std::stable_sort(by_b.begin(), by_b.end(), [&](NodeId x, NodeId y) { return deg_b[x] > deg_b[y]; });
  }
  std::vector<NodeId> perm(n);
  for (std::size_t r = 0; r < n; ++r) perm[by_b[r]] = by_a[r];
  return perm;
}

CouplingResult generate_multiplex(const LayerSpec& spec_a, const LayerSpec& spec_b,
                                  const CouplingSpec& coupling, std::uint64_t seed) {
  spec_a.validate();
  spec_b.validate();
  if (spec_a.n != spec_b.n) throw InputError("layers must have the same node count");
  switch (coupling.target) {
    case CouplingSpec::Target::asn:
      return couple_asn(spec_a, spec_b, coupling.value, seed,
                        coupling.tolerance > 0.0 ? coupling.tolerance : 0.01);
    case CouplingSpec::Target::ddc: {
      const auto a = gen_layer(spec_a, derive_seed(seed, 1));
      const auto b = gen_layer(spec_b, derive_seed(seed, 2));
      DdcSearchOptions options;
      if (coupling.tolerance > 0.0) options.tolerance = coupling.tolerance;
      return couple_ddc(spec_a.n, a, b, coupling.value, derive_seed(seed, 3), options);
    }
    case CouplingSpec::Target::none:
      break;
  }
  const auto a = gen_layer(spec_a, derive_seed(seed, 1));
  const auto b = gen_layer(spec_b, derive_seed(seed, 2));
  CouplingResult result{couple_random(spec_a.n, a, b, derive_seed(seed, 3)), 0.0, 0.0,
                        CouplingStatus::met, 0};
  return result;
}

}  // namespace mrepi
