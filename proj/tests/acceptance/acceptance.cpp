// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.
//
//   mrepi_acceptance            run all criteria
//   mrepi_acceptance 2 5        run selected criteria
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mrepi/experiments.hpp"
#include "mrepi/netgen.hpp"
#include "mrepi/simulation.hpp"
#include "mrepi/theory.hpp"
#include "test_support.hpp"

using namespace mrepi;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "[x] ") + what;
  }
};

std::string fmt(const char* f, auto... args) {
  std::string out(static_cast<std::size_t>(std::snprintf(nullptr, 0, f, args...)), '\0');
  std::snprintf(out.data(), out.size() + 1, f, args...);
  return out;
}

struct Network {
  std::string name;
  MultiplexGraph graph;
};

Network build(const std::string& name, LayerSpec a, LayerSpec b, std::uint64_t seed) {
  return {name, generate_multiplex(a, b, {}, seed).graph};
}

const LayerSpec kSf{LayerKind::sf, 2000, 4.0};

// Networks of the outbreak-size and phase-diagram experiments.
std::vector<Network> sweep_networks() {
  return {build("SF-SF", kSf, kSf, 101),
          build("ER-SF", {LayerKind::er, 2000, 5.883}, kSf, 102),
          build("ER-ER", {LayerKind::er, 2000, 5.922}, {LayerKind::er, 2000, 5.965}, 103)};
}

SimConfig sim_config(std::size_t realizations, std::uint64_t seed) {
  SimConfig cfg;
  cfg.realizations = realizations;
  cfg.master_seed = seed;
  cfg.threads = 0;
  return cfg;
}

double single_threshold(const std::map<std::uint32_t, double>& pk) {
  const auto m = test::single_moments(pk);
  return m.k1 / (m.k2 - m.k1);
}

// Threshold curve as a polyline, closed on the lambda_b = 0 axis.
struct Boundary {
  MomentSet moments;
  std::vector<ThresholdPoint> polyline;

  explicit Boundary(const MultiplexGraph& g) : moments(moment_set(empirical_vector_distribution(g))) {
    polyline = threshold_curve(moments, 0.01).points;
    if (const auto end = threshold_point_a(moments, 0.0)) {
      if (polyline.empty() || *end > polyline.back().lambda_a) polyline.push_back({*end, 0.0});
    }
  }

  bool supercritical(double la, double lb) const {
    return spectral_radius(branching_matrix(moments, SpreadingRate(la, lb))) > 1.0;
  }

  double distance(double la, double lb) const {
    double best = INFINITY;
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
      const auto [ax, ay] = polyline[i];
      const auto [bx, by] = polyline[i + 1];
      const double dx = bx - ax, dy = by - ay;
      const double len = dx * dx + dy * dy;
      const double t = len == 0.0 ? 0.0 : std::clamp(((la - ax) * dx + (lb - ay) * dy) / len, 0.0, 1.0);
      best = std::min(best, std::hypot(la - ax - t * dx, lb - ay - t * dy));
    }
    if (polyline.size() == 1) best = std::hypot(la - polyline[0].lambda_a, lb - polyline[0].lambda_b);
    return best;
  }
};

// 1. Single-layer reduction of the threshold and the outbreak size.
Verdict single_network_oracle() {
  Verdict v;
  std::vector<std::pair<std::string, std::map<std::uint32_t, double>>> tables;
  tables.push_back({"ER(2000,4)", test::degree_table(gen_er(2000, 4.0, 1), 2000)});
  tables.push_back({"SF(2000,4)", test::degree_table(gen_sf(2000, 4.0, 2), 2000)});
  tables.push_back({"table", {{1, 0.25}, {2, 0.25}, {3, 0.25}, {6, 0.125}, {10, 0.125}}});
  double worst_threshold = 0.0, worst_s = 0.0;
  for (const auto& [name, pk] : tables) {
    const auto dist = VectorDegreeDistribution::single_layer(pk);
    const auto ms = moment_set(dist);
    for (double lb : {0.0, 0.5}) {
      const auto la = threshold_point_a(ms, lb);
      worst_threshold = la ? std::max(worst_threshold, std::abs(*la - single_threshold(pk))) : INFINITY;
    }
    for (double t : {0.1, 0.2, 0.35, 0.5, 0.75, 1.0}) {
      const double s = outbreak_size(dist, SpreadingRate(t, 0.3)).s;
      worst_s = std::max(worst_s, std::abs(s - test::scalar_outbreak(pk, t)));
    }
  }
  v.require(worst_threshold <= 1e-6, fmt("max |threshold - <k>/(<k^2>-<k>)| = %.2e (<= 1e-6)", worst_threshold));
  v.require(worst_s <= 1e-10, fmt("max |s - single-layer s| = %.2e (<= 1e-10)", worst_s));
  return v;
}

// 2. Curve endpoints at 1/<k> of the layers.
Verdict er_endpoints() {
  Verdict v;
  const auto net = build("ER-ER", {LayerKind::er, 2000, 2.858}, {LayerKind::er, 2000, 1.891}, 201);
  const auto ms = moment_set(empirical_vector_distribution(net.graph));
  const auto curve = threshold_curve(ms, 0.01);
  const double inv_a = 1.0 / net.graph.mean_degree_a();
  const double inv_b = 1.0 / net.graph.mean_degree_b();
  const bool has_b = !curve.points.empty() && curve.points.front().lambda_a == 0.0;
  const auto end_a = threshold_point_a(ms, 0.0);
  v.require(has_b && std::abs(curve.points.front().lambda_b - inv_b) <= 0.02,
            fmt("(0, %.4f) vs 1/<k_B> = %.4f", has_b ? curve.points.front().lambda_b : -1.0, inv_b));
  v.require(end_a && std::abs(*end_a - inv_a) <= 0.02,
            fmt("(%.4f, 0) vs 1/<k_A> = %.4f", end_a.value_or(-1.0), inv_a));
  return v;
}

const Network& er_er_network() {
  static const Network net =
      build("ER-ER", {LayerKind::er, 2000, 5.922}, {LayerKind::er, 2000, 5.965}, 103);
  return net;
}

// 3. Point values of the outbreak size and Monte Carlo agreement.
Verdict point_values() {
  Verdict v;
  const auto& g = er_er_network().graph;
  const auto dist = empirical_vector_distribution(g);
  struct Point {
    double la, lb, lo, hi;
  };
  for (const Point p : {Point{0.12, 0.12, 0.25, 0.35}, Point{0.14, 0.15, 0.40, 0.50}}) {
    const SpreadingRate rate(p.la, p.lb);
    const double s = outbreak_size(dist, rate).s;
    const auto sim = run_ensemble(g, rate, sim_config(500, 301));
    v.require(s >= p.lo && s <= p.hi, fmt("theory s(%.2f,%.2f) = %.4f in [%.2f, %.2f]", p.la, p.lb, s, p.lo, p.hi));
    v.require(std::abs(sim.mean_s - s) <= 0.03, fmt("simulated %.4f within 0.03", sim.mean_s));
  }
  return v;
}

// 4. Theory and simulation along fixed-lambda_a sections.
Verdict section_agreement() {
  Verdict v;
  const LambdaGrid grid{{0.0, 0.1, 0.2, 0.3, 0.4, 0.5}, grid_values(0.0, 0.5, 0.02)};
  for (const auto& net : sweep_networks()) {
    const Boundary boundary(net.graph);
    const auto sweep = phase_diagram(net.graph, grid, sim_config(500, 401), {});
    std::size_t checked = 0, bad = 0;
    double worst = 0.0, worst_la = 0.0, worst_lb = 0.0;
    for (const auto& row : sweep.rows) {
      if (boundary.distance(row.lambda_a, row.lambda_b) < 0.02) continue;
      ++checked;
      const double diff = std::abs(*row.s_sim - row.s_theory);
      if (diff > 0.03) ++bad;
      if (diff > worst) worst = diff, worst_la = row.lambda_a, worst_lb = row.lambda_b;
    }
    v.require(bad == 0, fmt("%s: %zu/%zu points off by > 0.03, max %.4f at (%.2f, %.2f)", net.name.c_str(), bad,
                            checked, worst, worst_la, worst_lb));
  }
  return v;
}

// 5. Sub/supercritical classification on the full grid.
Verdict classification() {
  Verdict v;
  const LambdaGrid grid{grid_values(0.0, 0.5, 0.02), grid_values(0.0, 0.5, 0.02)};
  for (const auto& net : sweep_networks()) {
    const Boundary boundary(net.graph);
    const auto sweep = phase_diagram(net.graph, grid, sim_config(500, 501), {});
    std::size_t above = 0, below = 0, bad_above = 0, bad_below = 0;
    std::string offenders;
    for (const auto& row : sweep.rows) {
      const double d = boundary.distance(row.lambda_a, row.lambda_b);
      if (d < 0.02) continue;
      const double s = *row.s_sim;
      const bool super = boundary.supercritical(row.lambda_a, row.lambda_b);
      const bool bad = super ? s <= 0.05 : s >= 0.02;
      ++(super ? above : below);
      if (!bad) continue;
      ++(super ? bad_above : bad_below);
      offenders += fmt(" (%.2f,%.2f) d=%.3f sim=%.4f theory=%.4f", row.lambda_a, row.lambda_b, d, s, row.s_theory);
    }
    v.require(bad_above == 0 && bad_below == 0, fmt("%s: above %zu/%zu bad, below %zu/%zu bad", net.name.c_str(),
                                                     bad_above, above, bad_below, below) +
                                                     offenders);
  }
  return v;
}

// 6. Multiplex outbreak with both rates under the single-layer thresholds.
Verdict cross_threshold() {
  Verdict v;
  const auto& g = er_er_network().graph;
  const double ta = single_threshold(test::degree_table(g.edges_a(), g.size()));
  const double tb = single_threshold(test::degree_table(g.edges_b(), g.size()));
  const SpreadingRate rate(0.12, 0.12);
  const double s = outbreak_size(empirical_vector_distribution(g), rate).s;
  const double sim = run_ensemble(g, rate, sim_config(500, 301)).mean_s;
  v.require(ta > 0.12 && tb > 0.12, fmt("single-layer thresholds %.4f, %.4f above 0.12", ta, tb));
  v.require(s > 0.25, fmt("theory s = %.4f > 0.25", s));
  v.require(sim > 0.25, fmt("simulated s = %.4f > 0.25", sim));
  return v;
}

StudyConfig study(StudyKind kind, LayerSpec a, LayerSpec b, std::vector<double> targets, double rate,
                  std::uint64_t seed) {
  StudyConfig c;
  c.kind = kind;
  c.spec_a = a;
  c.spec_b = b;
  c.targets = std::move(targets);
  c.rate = rate;
  c.seed = seed;
  return c;
}

// 7. Diagonal threshold across shared-edge fractions.
Verdict asn_insensitivity() {
  Verdict v;
  const LayerSpec er{LayerKind::er, 2000, 5.922};
  const std::vector<std::pair<std::string, LayerSpec>> kinds{{"SF-SF", kSf}, {"ER-ER", er}};
  for (const auto& [name, spec] : kinds) {
    const auto rows = run_study(study(StudyKind::asn, spec, spec, {0.0, 0.25, 0.5, 0.75, 1.0}, 0.2, 701));
    std::vector<double> th;
    std::string list;
    for (const auto& r : rows) {
      if (r.threshold) th.push_back(*r.threshold);
      list += fmt(" %.4f", r.threshold.value_or(NAN));
    }
    if (th.size() != rows.size()) {
      v.require(false, name + ": missing thresholds");
      continue;
    }
    const auto [lo, hi] = std::minmax_element(th.begin(), th.end());
    double mean = 0.0;
    for (double t : th) mean += t / double(th.size());
    const double spread = (*hi - *lo) / mean;
    v.require(spread < 0.15, fmt("%s: thresholds%s, spread %.1f%% of mean (< 15%%)", name.c_str(), list.c_str(),
                                 100 * spread));
  }
  return v;
}

// 8. Diagonal threshold and outbreak size across degree correlation.
Verdict ddc_ordering() {
  Verdict v;
  const std::vector<std::tuple<std::string, LayerSpec, LayerSpec>> nets{
      {"SF-SF", kSf, kSf},
      {"ER-SF", {LayerKind::er, 2000, 4.005}, kSf},
      {"ER-ER", {LayerKind::er, 2000, 5.950}, {LayerKind::er, 2000, 5.956}}};
  const double rate = 0.3;
  for (const auto& [name, a, b] : nets) {
    auto cfg = study(StudyKind::ddc, a, b, {-0.5, 0.0, 0.5}, rate, 801);
    cfg.sim = sim_config(500, 802);
    const auto rows = run_study(cfg);
    bool thresholds = true, sizes = true;
    std::string list;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      list += fmt(" [b=%.3f th=%.4f s=%.4f sim=%.4f]", r.ddc, r.threshold.value_or(NAN), r.s_theory,
                  r.s_sim.value_or(NAN));
      if (i == 0) continue;
      thresholds = thresholds && r.threshold && rows[i - 1].threshold && *r.threshold < *rows[i - 1].threshold;
      sizes = sizes && r.s_theory <= rows[i - 1].s_theory;
    }
    v.require(thresholds && sizes, fmt("%s at rate %.2f:%s", name.c_str(), rate, list.c_str()));
  }
  return v;
}

// 9. SIR final size from a random seed equals the seed's percolation cluster.
Verdict sir_percolation() {
  Verdict v;
  const auto g = test::er_er(200, 2.0, 2.0, 901);
  const auto lc = diagonal_threshold(moment_set(empirical_vector_distribution(g)));
  if (!lc) {
    v.require(false, "no diagonal threshold");
    return v;
  }
  for (const double f : {0.5, 1.0, 2.0}) {
    const double l = std::min(1.0, f * *lc);
    const SpreadingRate rate(l, l);
    auto perc = sim_config(10000, 902);
    auto sir = sim_config(10000, 903);
    sir.mode = SimMode::sir;
    const auto p = run_ensemble(g, rate, perc);
    const auto s = run_ensemble(g, rate, sir);
    const double se = std::hypot(p.seed_stderr, s.seed_stderr);
    v.require(std::abs(p.seed_mean - s.seed_mean) <= 2 * se,
              fmt("lambda %.4f: percolation %.5f, SIR %.5f, 2se %.5f", l, p.seed_mean, s.seed_mean, 2 * se));
  }
  return v;
}

// 10. Outputs independent of reruns and thread count.
Verdict determinism() {
  Verdict v;
  const LayerSpec er{LayerKind::er, 1000, 5.0}, sf{LayerKind::sf, 1000, 4.0};
  const auto g1 = generate_multiplex(er, sf, {CouplingSpec::Target::ddc, 0.3, 0.0}, 7);
  const auto g2 = generate_multiplex(er, sf, {CouplingSpec::Target::ddc, 0.3, 0.0}, 7);
  const bool same_graph = std::ranges::equal(g1.graph.edges_a(), g2.graph.edges_a()) &&
                          std::ranges::equal(g1.graph.edges_b(), g2.graph.edges_b());
  v.require(same_graph, "generate");

  const LambdaGrid grid{grid_values(0.0, 0.3, 0.1), grid_values(0.0, 0.3, 0.1)};
  auto sweep_csv = [&](unsigned threads, SimMode mode) {
    auto cfg = sim_config(200, 11);
    cfg.threads = threads;
    cfg.mode = mode;
    std::ostringstream out;
    write_sweep_csv(out, phase_diagram(g1.graph, grid, cfg, {}));
    return out.str();
  };
  for (const auto mode : {SimMode::percolation, SimMode::sir}) {
    const auto ref = sweep_csv(1, mode);
    v.require(ref == sweep_csv(1, mode) && ref == sweep_csv(4, mode) && ref == sweep_csv(7, mode),
              "sweep " + to_string(mode) + " at 1/4/7 threads");
  }
  auto study_csv = [&](unsigned threads) {
    auto cfg = study(StudyKind::asn, kSf, kSf, {0.0, 0.5}, 0.2, 3);
    cfg.sim = sim_config(100, 5);
    cfg.sim->threads = threads;
    std::ostringstream out;
    write_study_csv(out, StudyKind::asn, run_study(cfg));
    return out.str();
  };
  v.require(study_csv(1) == study_csv(3), "study at 1/3 threads");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<const char*, std::function<Verdict()>>> criteria{
      {1, {"single-network reduction", single_network_oracle}},
      {2, {"ER curve endpoints", er_endpoints}},
      {3, {"outbreak point values", point_values}},
      {4, {"theory vs simulation sections", section_agreement}},
      {5, {"sub/supercritical classification", classification}},
      {6, {"spread below single-layer thresholds", cross_threshold}},
      {7, {"ASN insensitivity", asn_insensitivity}},
      {8, {"DDC ordering", ddc_ordering}},
      {9, {"SIR/percolation equivalence", sir_percolation}},
      {10, {"determinism", determinism}},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (const auto& [id, _] : criteria) selected.push_back(id);
  }
  bool all = true;
  for (const int id : selected) {
    const auto it = criteria.find(id);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Verdict verdict;
    try {
      verdict = it->second.second();
    } catch (const std::exception& e) {
      verdict.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d (%s): %s [%.1fs] %s\n", id, it->second.first, verdict.pass ? "PASS" : "FAIL", secs,
                verdict.detail.c_str());
    std::fflush(stdout);
    all = all && verdict.pass;
  }
  return all ? 0 : 1;
}
