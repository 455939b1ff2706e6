#include "kicktop/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace kicktop {

namespace {

void parallel_for(int n, int workers, const std::function<void(int)>& body) {
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  const int count = std::min(workers, n);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& thread : pool) thread.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t k = i;
    while (k + 1 < n && values[order[k + 1]] == values[order[i]]) ++k;
    const double rank = 0.5 * static_cast<double>(i + k) + 1.0;
    for (std::size_t t = i; t <= k; ++t) ranks[order[t]] = rank;
    i = k + 1;
  }
  return ranks;
}

}  // namespace

Fig1Result run_fig1(const Fig1Options& opts) {
  const SpinSystem sys = build_spin_system(opts.j);
  const TopParameters params{opts.j, opts.kick_strength, opts.rotation_angle};
  const FloquetOperator u = build_floquet(params);
  const MeasurementScheme scheme = build_scheme(sys);

  Fig1Result result;
  result.params = params;
  result.depth = opts.depth;
  result.series_regular = entropy_series(coherent_state(sys, kRegularTheta, kRegularPhi), u,
                                         scheme, opts.depth, opts.prune_eps);
  result.series_chaotic = entropy_series(coherent_state(sys, kChaoticTheta, kChaoticPhi), u,
                                         scheme, opts.depth, opts.prune_eps);
  return result;
}

std::vector<BlochPoint> sample_octant(int n_points, std::uint64_t seed) {
  if (n_points < 1) throw std::invalid_argument("sample_octant: n_points must be >= 1");
  std::mt19937_64 rng(seed);
  const auto uniform_open = [&rng] {
    // canonical 53-bit double in (0, 1); zero draws are rejected so the
    // octant stays open
    for (;;) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u != 0.0) return u;
    }
  };

  std::vector<BlochPoint> points;
  points.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    // area-uniform: height uniform in z, azimuth uniform in (0, pi/2)
    const double z = -uniform_open();
    const double azimuth = uniform_open() * (std::numbers::pi / 2.0);
    const double rho = std::sqrt(1.0 - z * z);
    points.push_back({rho * std::cos(azimuth), rho * std::sin(azimuth), z});
  }
  return points;
}

SweepResult run_fig2(const SweepOptions& opts) {
  if (opts.n_points < 1) throw std::invalid_argument("run_fig2: n_points must be >= 1");
  const SpinSystem sys = build_spin_system(opts.j);
  const TopParameters params{opts.j, opts.kick_strength, opts.rotation_angle};
  const FloquetOperator u = build_floquet(params);
  const MeasurementScheme scheme = build_scheme(sys);
  const BlochPoint fixed_point_dir =
      coherent_mean(sys, coherent_state(sys, kFixedPointTheta, kFixedPointPhi));

  // sampling happens up front in serial so the worker count cannot change
  // which points are evaluated
  const std::vector<BlochPoint> points = sample_octant(opts.n_points, opts.seed);

  SweepResult result;
  result.seed = opts.seed;
  result.n_points = opts.n_points;
  result.records.resize(static_cast<std::size_t>(opts.n_points));
  std::vector<double> pruned(static_cast<std::size_t>(opts.n_points), 0.0);

  parallel_for(opts.n_points, opts.workers, [&](int i) {
    const BlochPoint p = points[static_cast<std::size_t>(i)];
    const SphereAngles angles = point_to_angles(p);
    const PureState psi = coherent_state(sys, angles.theta, angles.phi);
    const EntropySeries series = entropy_series(psi, u, scheme, opts.depth, opts.prune_eps);
    const RateEstimate rate = rate_estimate(series, RateMethod::endpoint);
    result.records[static_cast<std::size_t>(i)] = {
        p, angles.theta, angles.phi, angular_distance(p, fixed_point_dir), rate.r_tilde};
    pruned[static_cast<std::size_t>(i)] = series.pruned_mass.empty() ? 0.0 : series.pruned_mass.back();
  });

  result.pruned_mass_total = std::accumulate(pruned.begin(), pruned.end(), 0.0);

  // quartile bins partition the records by angle, lowest quartile first
  const std::size_t n = result.records.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return result.records[a].angle_from_fixed_point < result.records[b].angle_from_fixed_point;
  });
  for (std::size_t bin = 0; bin < 4; ++bin) {
    const std::size_t lo = bin * n / 4;
    const std::size_t hi = (bin + 1) * n / 4;
    double sum = 0.0;
    for (std::size_t k = lo; k < hi; ++k) sum += result.records[order[k]].r_tilde;
    result.quartile_means[bin] =
        hi > lo ? sum / static_cast<double>(hi - lo) : std::numeric_limits<double>::quiet_NaN();
  }

  std::vector<double> angles(n), rates(n);
  for (std::size_t i = 0; i < n; ++i) {
    angles[i] = result.records[i].angle_from_fixed_point;
    rates[i] = result.records[i].r_tilde;
  }
  result.rank_correlation = rank_correlation(angles, rates);
  return result;
}

double linearity_diagnostic(const EntropySeries& series) {
  const std::vector<double>& v = series.values;
  if (v.size() < 6) {
    throw std::invalid_argument("linearity_diagnostic: need at least 6 points");
  }
  const std::size_t begin = v.size() / 2;
  const double m = static_cast<double>(v.size() - begin);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = begin; i < v.size(); ++i) {
    const double x = static_cast<double>(i + 1);
    sx += x;
    sy += v[i];
    sxx += x * x;
    sxy += x * v[i];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / m;
  double ss_res = 0.0, ss_tot = 0.0;
  const double mean = sy / m;
  for (std::size_t i = begin; i < v.size(); ++i) {
    const double x = static_cast<double>(i + 1);
    ss_res += (v[i] - (intercept + slope * x)) * (v[i] - (intercept + slope * x));
    ss_tot += (v[i] - mean) * (v[i] - mean);
  }
  if (ss_tot == 0.0) return 1.0;  // flat series: the fit is exact
  return std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
}

double rank_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("rank_correlation: length mismatch");
  if (a.size() < 2) throw std::invalid_argument("rank_correlation: need at least 2 samples");
  const std::vector<double> ra = midranks(a);
  const std::vector<double> rb = midranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;  // constant input has no ordering
  return std::clamp(cov / std::sqrt(va * vb), -1.0, 1.0);
}

}  // namespace kicktop
