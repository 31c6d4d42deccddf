#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "mrepi/error.hpp"
#include "mrepi/multiplex.hpp"

namespace mrepi {

/// 1 - (1 - lambda_a)(1 - lambda_b). Throws InputError outside [0, 1].
double compose_lambda_c(double lambda_a, double lambda_b);

/// Per-route infection probabilities. lambda_c is always derived.
class SpreadingRate {
 public:
  SpreadingRate(double lambda_a, double lambda_b);

  double lambda_a() const noexcept { return lambda_a_; }
  double lambda_b() const noexcept { return lambda_b_; }
  double lambda_c() const noexcept { return compose_lambda_c_unchecked(lambda_a_, lambda_b_); }

  /// Occupation probability of an edge of the given class.
  double of(EdgeClass kind) const noexcept;

 private:
  static double compose_lambda_c_unchecked(double a, double b) noexcept {
    return 1.0 - (1.0 - a) * (1.0 - b);
  }
  double lambda_a_;
  double lambda_b_;
};

/// How the end node of a followed edge is weighted in the branching sums.
enum class ExcessWeighting {
  /// By the number of edges of the followed class, (k_A-k_C), (k_B-k_C) or
  /// k_C. This is the excess-degree law of the configuration model and
  /// reproduces the 1/<k> threshold of a single ER layer.
  edge_class,
  /// By |k_M| with the restriction clauses k_A-k_C >= 1, k_B-k_C >= 1,
  /// k_C >= 1, normalised by <k_M>, exactly as the sums are printed.
  magnitude
};

using Matrix3 = std::array<std::array<double, 3>, 3>;
using Vector3 = std::array<double, 3>;

/// <k_M>, the nine branching sums m_ij and the per-row normalisers.
/// Row/column order is (A-only, B-only, shared).
struct MomentSet {
  double mean_km = 0.0;
  Matrix3 m{};
  /// Row normalisers: <k_M> for every row under magnitude weighting,
  /// (<k_A-k_C>, <k_B-k_C>, <k_C>) under edge_class weighting.
  Vector3 norm{};
  /// Mean number of edges of each class per node.
  Vector3 class_mean{};
  ExcessWeighting weighting = ExcessWeighting::edge_class;
};

MomentSet moment_set(const VectorDegreeDistribution& dist,
                     ExcessWeighting weighting = ExcessWeighting::edge_class);

/// Branching matrix J = diag(lambda_i / norm_i) m. Rows of edge classes that
/// do not occur are zero.
Matrix3 branching_matrix(const MomentSet& moments, const SpreadingRate& rate);

/// Perron root of a non-negative 3x3 matrix, by shifted power iteration with
/// Collatz-Wielandt bounds (tolerance 1e-10, at most 10^4 iterations).
double spectral_radius(const Matrix3& j);

/// det M with M_ii = m_ii - norm_i / lambda_i, M_ij = m_ij. Requires every
/// lambda to be positive. Classes absent from the network are dropped.
double threshold_determinant(const MomentSet& moments, const SpreadingRate& rate);

/// <s> = H'(1), the mean size of small outbreaks. Throws SupercriticalError at
/// or above the threshold.
double mean_outbreak(const VectorDegreeDistribution& dist, const SpreadingRate& rate,
                     ExcessWeighting weighting = ExcessWeighting::edge_class);
double mean_outbreak(const MomentSet& moments, const SpreadingRate& rate);

inline constexpr double kThresholdTolerance = 1e-8;

/// Smallest lambda_b at which the spectral radius of J reaches 1 for the
/// given lambda_a, or nullopt when already supercritical at lambda_b = 0 or
/// still subcritical at lambda_b = 1. Throws InputError when <k_M> = 0.
std::optional<double> threshold_point(const VectorDegreeDistribution& dist, double lambda_a,
                                      ExcessWeighting weighting = ExcessWeighting::edge_class);
std::optional<double> threshold_point(const MomentSet& moments, double lambda_a);

/// Same with the roles swapped: critical lambda_a at fixed lambda_b.
std::optional<double> threshold_point_a(const MomentSet& moments, double lambda_b);

/// Critical lambda on the diagonal lambda_a = lambda_b.
std::optional<double> diagonal_threshold(const MomentSet& moments);

struct ThresholdPoint {
  double lambda_a;
  double lambda_b;
};

struct ThresholdCurve {
  std::vector<ThresholdPoint> points;
  double grid_resolution = 0.0;
};

/// Sweeps lambda_a over [0, 1] in steps of grid_resolution (in (0, 0.5]),
/// keeping the grid values that have a critical lambda_b.
ThresholdCurve threshold_curve(const VectorDegreeDistribution& dist, double grid_resolution,
                               ExcessWeighting weighting = ExcessWeighting::edge_class);
ThresholdCurve threshold_curve(const MomentSet& moments, double grid_resolution);

struct OutbreakSolution {
  double u_a = 1.0;
  double u_b = 1.0;
  double u_c = 1.0;
  double s = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, OutbreakSolution last)
      : Error(what), last_(last) {}
  const OutbreakSolution& last_iterate() const noexcept { return last_; }

 private:
  OutbreakSolution last_;
};

struct OutbreakOptions {
  double tol = 1e-12;
  std::size_t max_iter = 1'000'000;
  ExcessWeighting weighting = ExcessWeighting::edge_class;
};

/// Giant-outbreak size. Iterates the three "not reached via this edge class"
/// maps upward from u = (0, 0, 0); the maps are monotone, so the iteration
/// climbs to the least fixed point. Throws ConvergenceError (carrying the
/// last iterate) when max_iter is exhausted.
OutbreakSolution outbreak_size(const VectorDegreeDistribution& dist, const SpreadingRate& rate,
                               const OutbreakOptions& options = {});

/// Applies the three maps once; exposed for residual checks.
Vector3 outbreak_map(const VectorDegreeDistribution& dist, const SpreadingRate& rate,
                     const Vector3& u, ExcessWeighting weighting = ExcessWeighting::edge_class);

/// s = 1 - sum p_{k_M} u_a^(k_A-k_C) u_b^(k_B-k_C) u_c^k_C.
double outbreak_fraction(const VectorDegreeDistribution& dist, const Vector3& u);

}  // namespace mrepi
