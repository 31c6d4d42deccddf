#include "mrepi/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mrepi {

namespace {

void check_probability(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw InputError(std::string(name) + " = " + std::to_string(x) + " outside [0, 1]");
  }
}

struct FlatEntry {
  double a, b, c;
  double p;
  Vector3 weight;  // per-row weight of this entry, zero when the restriction fails
};

std::vector<FlatEntry> flatten(const VectorDegreeDistribution& dist, ExcessWeighting weighting) {
  std::vector<FlatEntry> flat;
  flat.reserve(dist.entries().size());
  for (const auto& [k, p] : dist.entries()) {
    if (p == 0.0) continue;
    FlatEntry e{static_cast<double>(k.a_only), static_cast<double>(k.b_only),
                static_cast<double>(k.shared), p, {}};
    if (weighting == ExcessWeighting::edge_class) {
      e.weight = {e.a, e.b, e.c};
    } else {
      const double mag = static_cast<double>(k.magnitude());
      e.weight = {k.a_only >= 1 ? mag : 0.0, k.b_only >= 1 ? mag : 0.0, k.shared >= 1 ? mag : 0.0};
    }
    flat.push_back(e);
  }
  return flat;
}

// Strongly connected components of the support graph of a 3x3 matrix.
std::vector<std::vector<int>> components(const Matrix3& j) {
  bool reach[3][3];
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) reach[r][c] = (r == c) || j[r][c] > 0.0;
  for (int k = 0; k < 3; ++k)
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) reach[r][c] = reach[r][c] || (reach[r][k] && reach[k][c]);
  std::vector<std::vector<int>> out;
  bool seen[3] = {false, false, false};
  for (int r = 0; r < 3; ++r) {
    if (seen[r]) continue;
    std::vector<int> comp;
    for (int c = r; c < 3; ++c) {
      if (reach[r][c] && reach[c][r]) {
        comp.push_back(c);
        seen[c] = true;
      }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

// Perron root of an irreducible block via power iteration on (B + I).
double irreducible_radius(const Matrix3& j, const std::vector<int>& idx) {
  const std::size_t k = idx.size();
  if (k == 1) return j[idx[0]][idx[0]];
  constexpr double kTol = 1e-10;
  constexpr int kMaxIter = 10'000;
  std::array<double, 3> x{1.0, 1.0, 1.0};
  std::array<double, 3> y{};
  double lo = 0.0, hi = 0.0;
  for (int it = 0; it < kMaxIter; ++it) {
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    double top = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
      double acc = x[r];
      for (std::size_t c = 0; c < k; ++c) acc += j[idx[r]][idx[c]] * x[c];
      y[r] = acc;
      const double ratio = acc / x[r];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      top = std::max(top, acc);
    }
    if (hi - lo <= kTol * hi) break;
    for (std::size_t r = 0; r < k; ++r) x[r] = y[r] / top;
  }
  return 0.5 * (lo + hi) - 1.0;
}

double det3(const Matrix3& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

Matrix3 identity_minus(const Matrix3& j) {
  Matrix3 a{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) a[r][c] = (r == c ? 1.0 : 0.0) - j[r][c];
  return a;
}

// Bisection for the smallest x in [0, 1] with f(x) >= 0, f non-decreasing.
std::optional<double> first_crossing(auto&& f) {
  if (f(0.0) >= 0.0) return std::nullopt;
  if (f(1.0) < 0.0) return std::nullopt;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > kThresholdTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void require_nondegenerate(const MomentSet& moments) {
  if (!(moments.mean_km > 0.0)) throw InputError("degenerate distribution: <k_M> = 0");
}

}  // namespace

double compose_lambda_c(double lambda_a, double lambda_b) {
  check_probability(lambda_a, "lambda_a");
  check_probability(lambda_b, "lambda_b");
  return 1.0 - (1.0 - lambda_a) * (1.0 - lambda_b);
}

SpreadingRate::SpreadingRate(double lambda_a, double lambda_b)
    : lambda_a_(lambda_a), lambda_b_(lambda_b) {
  check_probability(lambda_a, "lambda_a");
  check_probability(lambda_b, "lambda_b");
}

double SpreadingRate::of(EdgeClass kind) const noexcept {
  switch (kind) {
    case EdgeClass::a_only: return lambda_a_;
    case EdgeClass::b_only: return lambda_b_;
    case EdgeClass::shared: return lambda_c();
  }
  return 0.0;
}

MomentSet moment_set(const VectorDegreeDistribution& dist, ExcessWeighting weighting) {
  MomentSet out;
  out.weighting = weighting;
  out.mean_km = dist.mean_magnitude();
  for (const FlatEntry& e : flatten(dist, weighting)) {
    const Vector3 counts{e.a, e.b, e.c};
    for (int r = 0; r < 3; ++r) {
      out.class_mean[r] += counts[r] * e.p;
      if (e.weight[r] == 0.0) continue;
      const double w = e.weight[r] * e.p;
      for (int c = 0; c < 3; ++c) out.m[r][c] += w * (counts[c] - (r == c ? 1.0 : 0.0));
    }
  }
  if (weighting == ExcessWeighting::edge_class) {
    out.norm = out.class_mean;
  } else {
    out.norm = {out.mean_km, out.mean_km, out.mean_km};
  }
  return out;
}

Matrix3 branching_matrix(const MomentSet& moments, const SpreadingRate& rate) {
  const Vector3 lambda{rate.lambda_a(), rate.lambda_b(), rate.lambda_c()};
  Matrix3 j{};
  for (int r = 0; r < 3; ++r) {
    if (!(moments.norm[r] > 0.0)) continue;
    const double scale = lambda[r] / moments.norm[r];
    for (int c = 0; c < 3; ++c) j[r][c] = scale * moments.m[r][c];
  }
  return j;
}

double spectral_radius(const Matrix3& j) {
  double rho = 0.0;
  for (const auto& comp : components(j)) rho = std::max(rho, irreducible_radius(j, comp));
  return rho;
}

double threshold_determinant(const MomentSet& moments, const SpreadingRate& rate) {
  const Vector3 lambda{rate.lambda_a(), rate.lambda_b(), rate.lambda_c()};
  Matrix3 full{};
  std::vector<int> present;
  for (int r = 0; r < 3; ++r) {
    if (moments.norm[r] > 0.0) present.push_back(r);
  }
  for (int r : present) {
    if (!(lambda[r] > 0.0)) throw InputError("det M needs positive rates on every present edge class");
  }
  // Pad absent classes with an identity row/column so det3 reduces to the minor.
  for (int r = 0; r < 3; ++r) full[r][r] = 1.0;
  for (int r : present) {
    for (int c : present) full[r][c] = moments.m[r][c];
    full[r][r] -= moments.norm[r] / lambda[r];
  }
  return det3(full);
}

double mean_outbreak(const MomentSet& moments, const SpreadingRate& rate) {
  const Matrix3 j = branching_matrix(moments, rate);
  if (spectral_radius(j) >= 1.0) {
    throw SupercriticalError("mean outbreak size diverges: rate is at or above the epidemic threshold");
  }
  const Matrix3 a = identity_minus(j);
  const double det = det3(a);
  if (!(det > 0.0)) throw SupercriticalError("mean outbreak system is singular");
  const Vector3 rhs{rate.lambda_a(), rate.lambda_b(), rate.lambda_c()};
  Vector3 h{};
  for (int k = 0; k < 3; ++k) {
    Matrix3 replaced = a;
    for (int r = 0; r < 3; ++r) replaced[r][k] = rhs[r];
    h[k] = det3(replaced) / det;
    if (h[k] < 0.0) throw SupercriticalError("mean outbreak system has a negative solution");
  }
  return 1.0 + moments.class_mean[0] * h[0] + moments.class_mean[1] * h[1] +
         moments.class_mean[2] * h[2];
}

double mean_outbreak(const VectorDegreeDistribution& dist, const SpreadingRate& rate,
                     ExcessWeighting weighting) {
  return mean_outbreak(moment_set(dist, weighting), rate);
}

std::optional<double> threshold_point(const MomentSet& moments, double lambda_a) {
  check_probability(lambda_a, "lambda_a");
  require_nondegenerate(moments);
  return first_crossing([&](double lambda_b) {
    return spectral_radius(branching_matrix(moments, SpreadingRate(lambda_a, lambda_b))) - 1.0;
  });
}

std::optional<double> threshold_point(const VectorDegreeDistribution& dist, double lambda_a,
                                      ExcessWeighting weighting) {
  return threshold_point(moment_set(dist, weighting), lambda_a);
}

std::optional<double> threshold_point_a(const MomentSet& moments, double lambda_b) {
  check_probability(lambda_b, "lambda_b");
  require_nondegenerate(moments);
  return first_crossing([&](double lambda_a) {
    return spectral_radius(branching_matrix(moments, SpreadingRate(lambda_a, lambda_b))) - 1.0;
  });
}

std::optional<double> diagonal_threshold(const MomentSet& moments) {
  require_nondegenerate(moments);
  return first_crossing([&](double lambda) {
    return spectral_radius(branching_matrix(moments, SpreadingRate(lambda, lambda))) - 1.0;
  });
}

ThresholdCurve threshold_curve(const MomentSet& moments, double grid_resolution) {
  if (!(grid_resolution > 0.0 && grid_resolution <= 0.5)) {
    throw InputError("threshold grid resolution must lie in (0, 0.5]");
  }
  ThresholdCurve curve;
  curve.grid_resolution = grid_resolution;
  const auto steps = static_cast<std::size_t>(std::floor(1.0 / grid_resolution + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i) {
    const double lambda_a = std::min(1.0, static_cast<double>(i) * grid_resolution);
    if (const auto lambda_b = threshold_point(moments, lambda_a)) {
      curve.points.push_back({lambda_a, *lambda_b});
    }
  }
  return curve;
}

ThresholdCurve threshold_curve(const VectorDegreeDistribution& dist, double grid_resolution,
                               ExcessWeighting weighting) {
  return threshold_curve(moment_set(dist, weighting), grid_resolution);
}

namespace {

struct OutbreakKernel {
  std::vector<FlatEntry> entries;
  Vector3 norm{};
  Vector3 lambda{};
  ExcessWeighting weighting;

  OutbreakKernel(const VectorDegreeDistribution& dist, const SpreadingRate& rate, ExcessWeighting w)
      : entries(flatten(dist, w)), lambda{rate.lambda_a(), rate.lambda_b(), rate.lambda_c()}, weighting(w) {
    const MomentSet moments = moment_set(dist, w);
    norm = moments.norm;
  }

  Vector3 apply(const Vector3& u) const {
    Vector3 sum{};
    const bool use_logs = u[0] > 1e-100 && u[1] > 1e-100 && u[2] > 1e-100;
    if (use_logs) {
      const Vector3 logs{std::log(u[0]), std::log(u[1]), std::log(u[2])};
      for (const FlatEntry& e : entries) {
        const double full = std::exp(e.a * logs[0] + e.b * logs[1] + e.c * logs[2]);
        for (int r = 0; r < 3; ++r) {
          if (e.weight[r] != 0.0) sum[r] += e.weight[r] * e.p * full / u[r];
        }
      }
    } else {
      for (const FlatEntry& e : entries) {
        const Vector3 exps{e.a, e.b, e.c};
        for (int r = 0; r < 3; ++r) {
          if (e.weight[r] == 0.0) continue;
          double term = e.weight[r] * e.p;
          for (int c = 0; c < 3; ++c) term *= std::pow(u[c], exps[c] - (r == c ? 1.0 : 0.0));
          sum[r] += term;
        }
      }
    }
    Vector3 next{};
    for (int r = 0; r < 3; ++r) {
      if (!(norm[r] > 0.0)) {
        // Edge class absent from the network: nothing can be reached through it.
        next[r] = weighting == ExcessWeighting::edge_class ? 1.0 : 1.0 - lambda[r];
        continue;
      }
      next[r] = std::clamp(1.0 - lambda[r] + lambda[r] * sum[r] / norm[r], 0.0, 1.0);
    }
    return next;
  }
};

double residual(const OutbreakKernel& kernel, const Vector3& u) {
  const Vector3 f = kernel.apply(u);
  return std::max({std::abs(f[0] - u[0]), std::abs(f[1] - u[1]), std::abs(f[2] - u[2])});
}

Vector3 newton_polish(const OutbreakKernel& kernel, Vector3 u) {
  double res = residual(kernel, u);
  for (int step = 0; step < 8 && res > 0.0; ++step) {
    const Vector3 f = kernel.apply(u);
    Matrix3 jac{};  // d(map - identity) / du, forward differences
    for (int c = 0; c < 3; ++c) {
      Vector3 v = u;
      const double h = u[c] > 0.5 ? -1e-7 : 1e-7;
      v[c] += h;
      const Vector3 fv = kernel.apply(v);
      for (int r = 0; r < 3; ++r) jac[r][c] = (fv[r] - v[r] - (f[r] - u[r])) / h;
    }
    const double det = det3(jac);
    if (!(std::abs(det) > 1e-12)) break;
    Vector3 du{};
    for (int c = 0; c < 3; ++c) {
      Matrix3 m = jac;
      for (int r = 0; r < 3; ++r) m[r][c] = u[r] - f[r];
      du[c] = det3(m) / det;
    }
    if (!(std::max({std::abs(du[0]), std::abs(du[1]), std::abs(du[2])}) < 1e-4)) break;
    Vector3 next{};
    for (int i = 0; i < 3; ++i) next[i] = std::clamp(u[i] + du[i], 0.0, 1.0);
    const double next_res = residual(kernel, next);
    if (!(next_res < res)) break;
    u = next;
    res = next_res;
  }
  return u;
}

}  // namespace

Vector3 outbreak_map(const VectorDegreeDistribution& dist, const SpreadingRate& rate,
                     const Vector3& u, ExcessWeighting weighting) {
  return OutbreakKernel(dist, rate, weighting).apply(u);
}

double outbreak_fraction(const VectorDegreeDistribution& dist, const Vector3& u) {
  double reached_none = 0.0;
  for (const auto& [k, p] : dist.entries()) {
    reached_none += p * std::pow(u[0], k.a_only) * std::pow(u[1], k.b_only) * std::pow(u[2], k.shared);
  }
  return std::clamp(1.0 - reached_none, 0.0, 1.0);
}

OutbreakSolution outbreak_size(const VectorDegreeDistribution& dist, const SpreadingRate& rate,
                               const OutbreakOptions& options) {
  if (!(options.tol > 0.0)) throw InputError("outbreak tolerance must be positive");
  const OutbreakKernel kernel(dist, rate, options.weighting);
  Vector3 u{0.0, 0.0, 0.0};
  OutbreakSolution sol;
  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    const Vector3 next = kernel.apply(u);
    const double change = std::max({std::abs(next[0] - u[0]), std::abs(next[1] - u[1]),
                                    std::abs(next[2] - u[2])});
    u = next;
    sol.iterations = it;
    if (change < options.tol) {
      sol.converged = true;
      break;
    }
  }
  // The step-size stop overstates accuracy where the map contracts slowly;
  // a few guarded Newton steps remove that bias.
  if (sol.converged) u = newton_polish(kernel, u);
  sol.u_a = u[0];
  sol.u_b = u[1];
  sol.u_c = u[2];
  sol.s = outbreak_fraction(dist, u);
  if (!sol.converged) {
    throw ConvergenceError("outbreak fixed point did not converge in " +
                               std::to_string(options.max_iter) + " iterations",
                           sol);
  }
  return sol;
}

}  // namespace mrepi
