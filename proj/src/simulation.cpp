#include "mrepi/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "mrepi/error.hpp"
#include "mrepi/rng.hpp"

namespace mrepi {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), NodeId{0});
  }

  NodeId find(NodeId x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns the size of the merged set.
  std::uint32_t unite(NodeId a, NodeId b) {
    a = find(a);
    b = find(b);
    if (a == b) return size_[a];
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return size_[a];
  }

  std::uint32_t size_of(NodeId x) { return size_[find(x)]; }

 private:
  std::vector<NodeId> parent_;
  std::vector<std::uint32_t> size_;
};

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  double mean() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
  double stderr_of_mean() const {
    if (count < 2) return 0.0;
    const auto n = static_cast<double>(count);
    const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    return std::sqrt(var / n);
  }
};

}  // namespace

std::string to_string(SimMode mode) { return mode == SimMode::percolation ? "percolation" : "sir"; }

SimMode parse_sim_mode(std::string_view text) {
  if (text == "percolation") return SimMode::percolation;
  if (text == "sir") return SimMode::sir;
  throw InputError("unknown simulation mode '" + std::string(text) + "' (expected percolation or sir)");
}

void SimConfig::validate() const {
  if (realizations < 1) throw InputError("need at least one realization");
  if (!(outbreak_cutoff > 0.0 && outbreak_cutoff < 1.0)) {
    throw InputError("outbreak cutoff must lie in (0, 1)");
  }
}

PercolationOutcome percolate(const MultiplexGraph& g, const SpreadingRate& rate, std::uint64_t seed) {
  const std::size_t n = g.size();
  PercolationOutcome out;
  if (n == 0) return out;
  Engine rng = make_engine(seed);
  DisjointSets sets(n);
  std::uint32_t largest = 1;
  auto occupy = [&](std::span<const Edge> edges, double p) {
    for (const Edge& e : edges) {
      if (uniform01(rng) < p) largest = std::max(largest, sets.unite(e.u, e.v));
    }
  };
  occupy(g.a_only(), rate.lambda_a());
  occupy(g.b_only(), rate.lambda_b());
  occupy(g.shared(), rate.lambda_c());
  out.seed_node = static_cast<NodeId>(uniform_below(rng, n));
  const auto nd = static_cast<double>(n);
  out.largest_fraction = static_cast<double>(largest) / nd;
  out.seed_fraction = static_cast<double>(sets.size_of(out.seed_node)) / nd;
  return out;
}

double percolate_once(const MultiplexGraph& g, const SpreadingRate& rate, std::uint64_t seed) {
  return percolate(g, rate, seed).largest_fraction;
}

double sir_once(const MultiplexGraph& g, const SpreadingRate& rate, NodeId seed_node,
                std::uint64_t seed) {
  const std::size_t n = g.size();
  if (seed_node >= n) throw InputError("seed node out of range");
  enum : std::uint8_t { kSusceptible, kInfected, kRecovered };
  std::vector<std::uint8_t> state(n, kSusceptible);
  const double p[3] = {rate.lambda_a(), rate.lambda_b(), rate.lambda_c()};
  Engine rng = make_engine(seed);

  std::vector<NodeId> current{seed_node};
  std::vector<NodeId> next;
  state[seed_node] = kInfected;
  std::size_t recovered = 0;
  while (!current.empty()) {
    next.clear();
    for (const NodeId i : current) {
      for (const auto& arc : g.neighbors(i)) {
        if (state[arc.target] != kSusceptible) continue;
        if (uniform01(rng) < p[static_cast<int>(arc.kind)]) {
          state[arc.target] = kInfected;
          next.push_back(arc.target);
        }
      }
    }
    for (const NodeId i : current) state[i] = kRecovered;
    recovered += current.size();
    current.swap(next);
  }
  return static_cast<double>(recovered) / static_cast<double>(n);
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        cursor = count;
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

SimResult run_ensemble(const MultiplexGraph& g, const SpreadingRate& rate, const SimConfig& cfg) {
  cfg.validate();
  const std::size_t count = cfg.realizations;
  // Filled by index, reduced in index order: the result is independent of scheduling.
  std::vector<double> primary(count), seeded(count);
  parallel_for(count, cfg.threads, [&](std::size_t r) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, r);
    if (cfg.mode == SimMode::percolation) {
      const auto outcome = percolate(g, rate, seed);
      primary[r] = outcome.largest_fraction;
      seeded[r] = outcome.seed_fraction;
    } else {
      Engine pick = make_engine(derive_seed(seed, 1));
      const auto node = static_cast<NodeId>(uniform_below(pick, g.size()));
      const double size = sir_once(g, rate, node, derive_seed(seed, 2));
      primary[r] = size;
      seeded[r] = size;
    }
  });

  SimResult result;
  result.realizations = count;
  Moments main, conditional, seed_stats;
  std::size_t outbreaks = 0;
  for (std::size_t r = 0; r < count; ++r) {
    main.add(primary[r]);
    seed_stats.add(seeded[r]);
    if (seeded[r] > cfg.outbreak_cutoff) {
      ++outbreaks;
      conditional.add(seeded[r]);
    }
  }
  result.outbreak_probability = static_cast<double>(outbreaks) / static_cast<double>(count);
  result.seed_mean = seed_stats.mean();
  result.seed_stderr = seed_stats.stderr_of_mean();
  if (cfg.mode == SimMode::percolation) {
    result.mean_s = main.mean();
    result.stderr_s = main.stderr_of_mean();
    result.giant_fraction_mean = main.mean();
  } else {
    result.mean_s = conditional.mean();
    result.stderr_s = conditional.stderr_of_mean();
    result.giant_fraction_mean = conditional.mean();
  }
  if (cfg.keep_per_realization) result.per_realization = std::move(primary);
  return result;
}

std::vector<double> grid_values(double lo, double hi, double step) {
  if (!(step > 0.0)) throw InputError("grid step must be positive");
  if (!(hi >= lo)) throw InputError("grid upper bound below lower bound");
  std::vector<double> values;
  const auto steps = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i) values.push_back(lo + static_cast<double>(i) * step);
  return values;
}

SweepResult phase_diagram(const MultiplexGraph& g, const LambdaGrid& grid, const SimConfig& cfg,
                          const SweepOptions& options) {
  if (options.simulate) cfg.validate();
  const auto dist = empirical_vector_distribution(g);
  SweepResult sweep;
  sweep.has_simulation = options.simulate;
  const std::size_t total = grid.lambda_a.size() * grid.lambda_b.size();
  sweep.rows.reserve(total);
  for (const double la : grid.lambda_a) {
    for (const double lb : grid.lambda_b) {
      const SpreadingRate rate(la, lb);
      SweepRow row;
      row.lambda_a = la;
      row.lambda_b = lb;
      row.s_theory = outbreak_size(dist, rate, options.theory).s;
      if (options.simulate) {
        const SimResult sim = run_ensemble(g, rate, cfg);
        row.s_sim = sim.mean_s;
        row.stderr_s = sim.stderr_s;
        row.outbreak_prob = sim.outbreak_probability;
        row.realizations = sim.realizations;
      }
      sweep.rows.push_back(row);
      if (options.progress) options.progress(sweep.rows.size(), total);
    }
  }
  return sweep;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep,
                     const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << '#' << c << '\n';
  if (sweep.has_simulation) {
    out << "lambda_a,lambda_b,s_theory,s_sim,stderr,outbreak_prob,realizations\n";
  } else {
    out << "lambda_a,lambda_b,s_theory\n";
  }
  for (const SweepRow& row : sweep.rows) {
    out << format_number(row.lambda_a) << ',' << format_number(row.lambda_b) << ','
        << format_number(row.s_theory);
    if (sweep.has_simulation) {
      out << ',' << format_number(row.s_sim.value_or(0.0)) << ',' << format_number(row.stderr_s) << ','
          << format_number(row.outbreak_prob) << ',' << row.realizations;
    }
    out << '\n';
  }
}

void write_curve_csv(std::ostream& out, const ThresholdCurve& curve,
                     const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << '#' << c << '\n';
  out << "lambda_a,lambda_b\n";
  for (const auto& p : curve.points) {
    out << format_number(p.lambda_a) << ',' << format_number(p.lambda_b) << '\n';
  }
}

}  // namespace mrepi
