#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mrepi/edgelist_io.hpp"
#include "mrepi/error.hpp"
#include "mrepi/multiplex.hpp"
#include "mrepi/netgen.hpp"
#include "test_support.hpp"

using namespace mrepi;

namespace {

// Node 3 has layer-A neighbours {0, 1, 2, 4} and layer-B neighbours {4, 5}.
MultiplexGraph figure_one() {
  return MultiplexGraph(6, {{3, 0}, {3, 1}, {3, 2}, {3, 4}, {0, 1}, {1, 2}},
                        {{3, 4}, {3, 5}, {0, 5}, {2, 5}});
}

EdgeList path_edges(NodeId n) {
  EdgeList e;
  for (NodeId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return e;
}

}  // namespace

TEST_CASE("edge classification") {
  SUBCASE("figure graph node 3 has vector degree (3, 1, 1)") {
    const auto g = figure_one();
    const auto k = vector_degree(g, 3);
    CHECK(k == VectorDegree{3, 1, 1});
    CHECK(k.magnitude() == 5);
    CHECK(k.degree_a() == 4);
    CHECK(k.degree_b() == 2);
  }
  SUBCASE("identical layers are all shared") {
    const MultiplexGraph g(5, path_edges(5), path_edges(5));
    const auto c = classify_edges(g);
    CHECK(c.a_only.empty());
    CHECK(c.b_only.empty());
    CHECK(c.shared == path_edges(5));
  }
  SUBCASE("disjoint layers share nothing") {
    const MultiplexGraph g(4, {{0, 1}, {2, 3}}, {{1, 2}, {0, 3}});
    const auto c = classify_edges(g);
    CHECK(c.shared.empty());
    CHECK(c.a_only.size() == 2);
    CHECK(c.b_only.size() == 2);
  }
  SUBCASE("isolated node and a mixed node") {
    const MultiplexGraph g(5, {{0, 1}, {0, 2}, {0, 3}}, {{0, 3}});
    CHECK(vector_degree(g, 4) == VectorDegree{0, 0, 0});
    CHECK(vector_degree(g, 0) == VectorDegree{2, 0, 1});
    CHECK(vector_degree(g, 0).magnitude() == 3);
  }
  SUBCASE("node out of range") {
    const auto g = figure_one();
    CHECK_THROWS_AS(vector_degree(g, 6), InputError);
  }
}

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(MultiplexGraph(3, {{1, 1}}, {}), InputError);
  CHECK_THROWS_AS(MultiplexGraph(3, {{0, 1}, {1, 0}}, {}), InputError);
  CHECK_THROWS_AS(MultiplexGraph(3, {}, {{0, 3}}), InputError);
  CHECK_NOTHROW(MultiplexGraph(3, {{0, 1}}, {{0, 1}}));
}

TEST_CASE("classification invariants on random multiplexes") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = test::random_overlapping(150, 3.0 + static_cast<double>(seed % 4), 2.5,
                                            0.1 * static_cast<double>(seed % 6), seed);
    CHECK(g.a_only().size() + g.shared().size() == g.edges_a().size());
    CHECK(g.b_only().size() + g.shared().size() == g.edges_b().size());
    std::vector<Edge> all(g.a_only().begin(), g.a_only().end());
    all.insert(all.end(), g.b_only().begin(), g.b_only().end());
    all.insert(all.end(), g.shared().begin(), g.shared().end());
    std::sort(all.begin(), all.end());
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());

    // |k_M| = k_A + k_B - k_C with plain per-layer degrees counted from the edge sets.
    std::vector<std::uint32_t> ka(g.size()), kb(g.size()), kc(g.size());
    for (const Edge& e : g.edges_a()) ++ka[e.u], ++ka[e.v];
    for (const Edge& e : g.edges_b()) ++kb[e.u], ++kb[e.v];
    for (const Edge& e : g.shared()) ++kc[e.u], ++kc[e.v];
    for (NodeId i = 0; i < g.size(); ++i) {
      const auto k = g.vector_degree(i);
      REQUIRE(k.magnitude() == ka[i] + kb[i] - kc[i]);
      REQUIRE(g.neighbors(i).size() == k.magnitude());
    }
  }
}

TEST_CASE("empirical vector distribution") {
  SUBCASE("two isolated nodes") {
    const MultiplexGraph g(2, {}, {});
    const auto d = empirical_vector_distribution(g);
    REQUIRE(d.entries().size() == 1);
    CHECK(d.entries().at(VectorDegree{0, 0, 0}) == 1.0);
    CHECK(d.mean_magnitude() == 0.0);
  }
  SUBCASE("figure graph mean equals the per-node average") {
    const auto g = figure_one();
    std::uint32_t total = 0;
    for (NodeId i = 0; i < 6; ++i) total += g.vector_degree(i).magnitude();
    const auto d = empirical_vector_distribution(g);
    CHECK(d.mean_magnitude() == doctest::Approx(total / 6.0).epsilon(1e-12));
    double sum = 0.0;
    for (const auto& [k, p] : d.entries()) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("ER-ER mean magnitude is <k_A> + <k_B> - <k_C>") {
    const auto g = test::er_er(2000, 5.922, 5.965, 11);
    const auto d = empirical_vector_distribution(g);
    const double expected =
        g.mean_degree_a() + g.mean_degree_b() - 2.0 * static_cast<double>(g.shared().size()) / 2000.0;
    CHECK(d.mean_magnitude() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(d.mean_magnitude() == doctest::Approx(5.922 + 5.965).epsilon(0.05));
  }
  SUBCASE("empty graph") { CHECK_THROWS_AS(empirical_vector_distribution(MultiplexGraph(0, {}, {})), InputError); }
  SUBCASE("invalid tables") {
    CHECK_THROWS_AS(VectorDegreeDistribution({{VectorDegree{1, 0, 0}, 0.5}}), InputError);
    CHECK_THROWS_AS(VectorDegreeDistribution({{VectorDegree{1, 0, 0}, 1.5}, {VectorDegree{}, -0.5}}), InputError);
  }
}

TEST_CASE("average similarity of neighbours") {
  CHECK(asn(MultiplexGraph(5, path_edges(5), path_edges(5))) == 1.0);
  CHECK(asn(MultiplexGraph(4, {{0, 1}, {2, 3}}, {{1, 2}, {0, 3}})) == 0.0);
  // 2 A-only, 2 B-only and 1 shared edge: sum k_C = 2, sum |k_M| = 10.
  const MultiplexGraph toy(7, {{0, 1}, {2, 3}, {5, 6}}, {{1, 2}, {3, 4}, {5, 6}});
  CHECK(asn(toy) == doctest::Approx(0.2));
  CHECK_THROWS_AS(asn(MultiplexGraph(3, {}, {})), UndefinedMetricError);

  SUBCASE("relabelling both layers identically leaves ASN unchanged") {
    const auto g = test::random_overlapping(300, 4.0, 3.0, 0.4, 5);
    std::vector<NodeId> perm(300);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    Engine rng(99);
    portable_shuffle(perm.begin(), perm.end(), rng);
    const MultiplexGraph h(300, relabel(g.edges_a(), perm), relabel(g.edges_b(), perm));
    CHECK(asn(h) == asn(g));
  }
}

TEST_CASE("degree-degree correlation") {
  SUBCASE("identical degree sequences give 1 in both modes") {
    const MultiplexGraph g(6, {{0, 1}, {0, 2}, {0, 3}, {4, 5}}, {{0, 1}, {0, 2}, {0, 3}, {4, 5}});
    CHECK(ddc(g, DdcMode::pearson) == doctest::Approx(1.0));
    CHECK(ddc(g, DdcMode::variance_ratio) == doctest::Approx(1.0));
  }
  SUBCASE("k_B = c - k_A gives -1 in pearson mode") {
    JointDegreeDistribution j({{{0, 4}, 0.25}, {{1, 3}, 0.25}, {{3, 1}, 0.25}, {{4, 0}, 0.25}});
    CHECK(ddc(j, DdcMode::pearson) == doctest::Approx(-1.0));
  }
  SUBCASE("variance-ratio divides by var(k_B) only") {
    // k_B = 2 k_A: cov = 2 var(k_A), var(k_B) = 4 var(k_A) -> 0.5; pearson -> 1.
    JointDegreeDistribution j({{{1, 2}, 0.5}, {{3, 6}, 0.5}});
    CHECK(ddc(j, DdcMode::variance_ratio) == doctest::Approx(0.5));
    CHECK(ddc(j, DdcMode::pearson) == doctest::Approx(1.0));
  }
  SUBCASE("zero variance") {
    JointDegreeDistribution j({{{1, 2}, 0.5}, {{3, 2}, 0.5}});
    CHECK_THROWS_AS(ddc(j, DdcMode::variance_ratio), UndefinedMetricError);
    CHECK_THROWS_AS(ddc(j, DdcMode::pearson), UndefinedMetricError);
  }
  SUBCASE("independent random pairings are nearly uncorrelated") {
    const auto a = gen_er(2000, 6.0, 1);
    const auto b = gen_sf(2000, 4.0, 2);
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) worst = std::max(worst, std::abs(ddc(couple_random(2000, a, b, s))));
    CHECK(worst < 0.05);
  }
  SUBCASE("pearson is bounded and shift invariant in k_B") {
    Engine rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      JointDegreeDistribution::Entries e, shifted;
      std::vector<std::pair<std::uint32_t, std::uint32_t>> keys;
      for (int i = 0; i < 8; ++i) {
        keys.emplace_back(static_cast<std::uint32_t>(uniform_below(rng, 10)),
                          static_cast<std::uint32_t>(uniform_below(rng, 10)));
      }
      for (const auto& k : keys) {
        e[k] += 1.0 / 8.0;
        shifted[{k.first, k.second + 7}] += 1.0 / 8.0;
      }
      try {
        const double beta = ddc(JointDegreeDistribution(e));
        CHECK(beta >= -1.0);
        CHECK(beta <= 1.0);
        CHECK(ddc(JointDegreeDistribution(shifted)) == doctest::Approx(beta).epsilon(1e-9));
      } catch (const UndefinedMetricError&) {
      }
    }
  }
}

TEST_CASE("multiplex-edgelist v1") {
  SUBCASE("write then read reproduces the graph") {
    const auto g = test::random_overlapping(120, 3.0, 3.0, 0.5, 8);
    std::stringstream buf;
    write_edgelist(buf, g, {"rng mt19937_64 seed=8"});
    const std::string text = buf.str();
    CHECK(text.starts_with("#multiplex-edgelist v1 n=120\n#rng mt19937_64 seed=8\n"));
    const auto h = read_edgelist(buf);
    CHECK(h.size() == g.size());
    CHECK(std::equal(h.edges_a().begin(), h.edges_a().end(), g.edges_a().begin(), g.edges_a().end()));
    CHECK(std::equal(h.edges_b().begin(), h.edges_b().end(), g.edges_b().begin(), g.edges_b().end()));
  }
  SUBCASE("shared edges appear in both layers") {
    std::stringstream in("#multiplex-edgelist v1 n=3\nA 0 1\nB 0 1\nB 1 2\n");
    const auto g = read_edgelist(in);
    CHECK(g.shared().size() == 1);
    CHECK(g.b_only().size() == 1);
  }
  auto rejects = [](const std::string& text) {
    std::stringstream in(text);
    CHECK_THROWS_AS(read_edgelist(in), InputError);
  };
  rejects("");
  rejects("#multiplex-edgelist v2 n=3\n");
  rejects("#multiplex-edgelist v1 n=x\n");
  rejects("#multiplex-edgelist v1 n=3\nA 1 0\n");
  rejects("#multiplex-edgelist v1 n=3\nA 1 1\n");
  rejects("#multiplex-edgelist v1 n=3\nA 0 3\n");
  rejects("#multiplex-edgelist v1 n=3\nC 0 1\n");
  rejects("#multiplex-edgelist v1 n=3\nA 0 1\nA 0 1\n");
  rejects("#multiplex-edgelist v1 n=3\nA 0 1 2\n");
  rejects("#multiplex-edgelist v1 n=3\nA 0 -1\n");
}
