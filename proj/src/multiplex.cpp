#include "mrepi/multiplex.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

#include "mrepi/error.hpp"

namespace mrepi {

namespace {

void validate_layer(EdgeList& edges, std::size_t n, char layer) {
  for (const Edge& e : edges) {
    if (e.u == e.v) {
      throw InputError("layer " + std::string(1, layer) + ": self-loop at node " +
                       std::to_string(e.u));
    }
    if (e.v >= n) {
      throw InputError("layer " + std::string(1, layer) + ": node " + std::to_string(e.v) +
                       " out of range for n=" + std::to_string(n));
    }
  }
  std::sort(edges.begin(), edges.end());
  const auto dup = std::adjacent_find(edges.begin(), edges.end());
  if (dup != edges.end()) {
    throw InputError("layer " + std::string(1, layer) + ": duplicate edge " +
                     std::to_string(dup->u) + "-" + std::to_string(dup->v));
  }
}

}  // namespace

MultiplexGraph::MultiplexGraph(std::size_t n, EdgeList edges_a, EdgeList edges_b)
    : n_(n), edges_a_(std::move(edges_a)), edges_b_(std::move(edges_b)) {
  if (n_ > std::size_t{0xFFFFFFFF}) throw InputError("node count exceeds 32-bit ids");
  validate_layer(edges_a_, n_, 'A');
  validate_layer(edges_b_, n_, 'B');

  std::set_intersection(edges_a_.begin(), edges_a_.end(), edges_b_.begin(), edges_b_.end(),
                        std::back_inserter(classes_.shared));
  std::set_difference(edges_a_.begin(), edges_a_.end(), edges_b_.begin(), edges_b_.end(),
                      std::back_inserter(classes_.a_only));
  std::set_difference(edges_b_.begin(), edges_b_.end(), edges_a_.begin(), edges_a_.end(),
                      std::back_inserter(classes_.b_only));

  degrees_.assign(n_, VectorDegree{});
  for (const Edge& e : classes_.a_only) {
    ++degrees_[e.u].a_only;
    ++degrees_[e.v].a_only;
  }
  for (const Edge& e : classes_.b_only) {
    ++degrees_[e.u].b_only;
    ++degrees_[e.v].b_only;
  }
  for (const Edge& e : classes_.shared) {
    ++degrees_[e.u].shared;
    ++degrees_[e.v].shared;
  }

  offsets_.assign(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] = offsets_[i] + degrees_[i].magnitude();
  arcs_.resize(offsets_[n_]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  auto add = [&](const EdgeList& list, EdgeClass kind) {
    for (const Edge& e : list) {
      arcs_[cursor[e.u]++] = Arc{e.v, kind};
      arcs_[cursor[e.v]++] = Arc{e.u, kind};
    }
  };
  add(classes_.a_only, EdgeClass::a_only);
  add(classes_.b_only, EdgeClass::b_only);
  add(classes_.shared, EdgeClass::shared);
}

VectorDegree MultiplexGraph::vector_degree(NodeId node) const {
  if (node >= n_) {
    throw InputError("node " + std::to_string(node) + " out of range for n=" + std::to_string(n_));
  }
  return degrees_[node];
}

double MultiplexGraph::mean_degree_a() const noexcept {
  return n_ == 0 ? 0.0 : 2.0 * static_cast<double>(edges_a_.size()) / static_cast<double>(n_);
}

double MultiplexGraph::mean_degree_b() const noexcept {
  return n_ == 0 ? 0.0 : 2.0 * static_cast<double>(edges_b_.size()) / static_cast<double>(n_);
}

EdgeClasses classify_edges(const MultiplexGraph& g) {
  return EdgeClasses{EdgeList(g.a_only().begin(), g.a_only().end()),
                     EdgeList(g.b_only().begin(), g.b_only().end()),
                     EdgeList(g.shared().begin(), g.shared().end())};
}

VectorDegree vector_degree(const MultiplexGraph& g, NodeId node) { return g.vector_degree(node); }

VectorDegreeDistribution::VectorDegreeDistribution(Entries entries) : entries_(std::move(entries)) {
  double total = 0.0;
  double mean = 0.0;
  for (const auto& [k, p] : entries_) {
    if (!(p >= 0.0)) throw InputError("negative or NaN probability in vector-degree distribution");
    total += p;
    mean += static_cast<double>(k.magnitude()) * p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InputError("vector-degree distribution sums to " + std::to_string(total) + ", not 1");
  }
  mean_magnitude_ = mean;
}

VectorDegreeDistribution VectorDegreeDistribution::single_layer(
    const std::map<std::uint32_t, double>& pk) {
  Entries entries;
  for (const auto& [k, p] : pk) entries[VectorDegree{k, 0, 0}] += p;
  return VectorDegreeDistribution(std::move(entries));
}

VectorDegreeDistribution empirical_vector_distribution(const MultiplexGraph& g) {
  if (g.size() == 0) throw InputError("empirical distribution of an empty graph");
  std::map<VectorDegree, std::size_t> counts;
  for (NodeId i = 0; i < g.size(); ++i) ++counts[g.vector_degree(i)];
  VectorDegreeDistribution::Entries entries;
  const auto n = static_cast<double>(g.size());
  for (const auto& [k, c] : counts) entries.emplace(k, static_cast<double>(c) / n);
  return VectorDegreeDistribution(std::move(entries));
}

JointDegreeDistribution::JointDegreeDistribution(Entries entries) : entries_(std::move(entries)) {
  double total = 0.0;
  for (const auto& [k, p] : entries_) {
    if (!(p >= 0.0)) throw InputError("negative or NaN probability in joint degree distribution");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InputError("joint degree distribution sums to " + std::to_string(total) + ", not 1");
  }
}

JointDegreeDistribution joint_degree_distribution(const MultiplexGraph& g) {
  if (g.size() == 0) throw InputError("joint degree distribution of an empty graph");
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> counts;
  for (NodeId i = 0; i < g.size(); ++i) {
    const auto k = g.vector_degree(i);
    ++counts[{k.degree_a(), k.degree_b()}];
  }
  JointDegreeDistribution::Entries entries;
  const auto n = static_cast<double>(g.size());
  for (const auto& [k, c] : counts) entries.emplace(k, static_cast<double>(c) / n);
  return JointDegreeDistribution(std::move(entries));
}

double asn(const MultiplexGraph& g) {
  std::uint64_t shared = 0;
  std::uint64_t magnitude = 0;
  for (NodeId i = 0; i < g.size(); ++i) {
    const auto k = g.vector_degree(i);
    shared += k.shared;
    magnitude += k.magnitude();
  }
  if (magnitude == 0) throw UndefinedMetricError("ASN undefined: every node is isolated");
  return static_cast<double>(shared) / static_cast<double>(magnitude);
}

double ddc(const JointDegreeDistribution& j, DdcMode mode) {
  // Marginal moments first; the covariance is sum k_A k_B (p(k_A,k_B) - p_A(k_A) p_B(k_B)).
  double mean_a = 0.0, mean_b = 0.0, sq_a = 0.0, sq_b = 0.0, cross = 0.0;
  for (const auto& [k, p] : j.entries()) {
    const auto ka = static_cast<double>(k.first);
    const auto kb = static_cast<double>(k.second);
    mean_a += ka * p;
    mean_b += kb * p;
    sq_a += ka * ka * p;
    sq_b += kb * kb * p;
    cross += ka * kb * p;
  }
  const double cov = cross - mean_a * mean_b;
  const double var_a = sq_a - mean_a * mean_a;
  const double var_b = sq_b - mean_b * mean_b;
  constexpr double kZero = 1e-14;
  if (mode == DdcMode::variance_ratio) {
    if (var_b <= kZero) throw UndefinedMetricError("DDC undefined: layer-B degrees have zero variance");
    return cov / var_b;
  }
  if (var_a <= kZero || var_b <= kZero) {
    throw UndefinedMetricError("DDC undefined: a layer has zero degree variance");
  }
  return std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
}

double ddc(const MultiplexGraph& g, DdcMode mode) { return ddc(joint_degree_distribution(g), mode); }

}  // namespace mrepi
