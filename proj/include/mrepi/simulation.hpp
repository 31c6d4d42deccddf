#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mrepi/multiplex.hpp"
#include "mrepi/theory.hpp"

namespace mrepi {

enum class SimMode { percolation, sir };

std::string to_string(SimMode mode);
SimMode parse_sim_mode(std::string_view text);

struct SimConfig {
  std::size_t realizations = 500;
  std::uint64_t master_seed = 0;
  SimMode mode = SimMode::percolation;
  /// Fraction of n separating small outbreaks from giant ones.
  double outbreak_cutoff = 0.01;
  /// Worker threads; 0 uses std::thread::hardware_concurrency(). Results do
  /// not depend on this value.
  unsigned threads = 0;
  bool keep_per_realization = false;

  void validate() const;
};

struct SimResult {
  /// Estimate compared against theory: the largest-component fraction in
  /// percolation mode, the final size conditional on exceeding the cutoff in
  /// SIR mode (0 when no realization exceeds it).
  double mean_s = 0.0;
  double stderr_s = 0.0;
  /// Mean largest-component fraction (percolation) or conditional mean final
  /// size (SIR).
  double giant_fraction_mean = 0.0;
  /// Fraction of realizations whose seeded outbreak exceeds the cutoff.
  double outbreak_probability = 0.0;
  /// Unconditional mean seeded outbreak: the component of a random seed node
  /// (percolation) or the final recovered fraction (SIR).
  double seed_mean = 0.0;
  double seed_stderr = 0.0;
  std::size_t realizations = 0;
  /// Per-realization mean_s samples, when requested.
  std::vector<double> per_realization;
};

struct PercolationOutcome {
  double largest_fraction = 0.0;
  double seed_fraction = 0.0;
  NodeId seed_node = 0;
};

/// One bond-percolation realization: each A-only, B-only and shared edge is
/// occupied independently with lambda_a, lambda_b, lambda_c. A random seed
/// node is drawn after the edges. Occupation uses one uniform per edge in a
/// fixed order, so for a fixed seed the occupied set grows with the rates.
PercolationOutcome percolate(const MultiplexGraph& g, const SpreadingRate& rate, std::uint64_t seed);

/// Largest occupied component / n.
double percolate_once(const MultiplexGraph& g, const SpreadingRate& rate, std::uint64_t seed);

/// Synchronous discrete-time SIR with recovery after one step. Each contact
/// along an edge is a single trial at that edge's class rate. Returns the
/// final recovered fraction. Throws InputError when seed_node >= n.
double sir_once(const MultiplexGraph& g, const SpreadingRate& rate, NodeId seed_node,
                std::uint64_t seed);

/// Independent realizations with seeds derive_seed(master_seed, index).
SimResult run_ensemble(const MultiplexGraph& g, const SpreadingRate& rate, const SimConfig& cfg);

/// Calls body(i) for i in [0, count) on `threads` workers (0 = hardware).
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Inclusive arithmetic grid lo, lo + step, ..., <= hi (+1e-9 slack).
std::vector<double> grid_values(double lo, double hi, double step);

struct LambdaGrid {
  std::vector<double> lambda_a;
  std::vector<double> lambda_b;
};

struct SweepRow {
  double lambda_a = 0.0;
  double lambda_b = 0.0;
  double s_theory = 0.0;
  std::optional<double> s_sim;
  double stderr_s = 0.0;
  double outbreak_prob = 0.0;
  std::size_t realizations = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool has_simulation = false;
};

struct SweepOptions {
  bool simulate = true;
  OutbreakOptions theory{};
  /// Called after each grid point with (done, total); for progress on stderr.
  std::function<void(std::size_t, std::size_t)> progress;
};

/// run_ensemble on every grid point (row-major in lambda_a), with the theory
/// outbreak size from the graph's own vector-degree distribution attached.
SweepResult phase_diagram(const MultiplexGraph& g, const LambdaGrid& grid, const SimConfig& cfg,
                          const SweepOptions& options = {});

/// `%.12g` formatting used by every CSV writer.
std::string format_number(double x);

/// lambda_a,lambda_b,s_theory[,s_sim,stderr,outbreak_prob,realizations]
void write_sweep_csv(std::ostream& out, const SweepResult& sweep,
                     const std::vector<std::string>& comments = {});

void write_curve_csv(std::ostream& out, const ThresholdCurve& curve,
                     const std::vector<std::string>& comments = {});

}  // namespace mrepi
