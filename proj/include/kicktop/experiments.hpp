#pragma once

#include "kicktop/chaos_metrics.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace kicktop {

// Coherent-state angles used by the two stock experiments: one state deep
// in the regular island around the elliptic fixed point of the classical
// map, one in the chaotic sea.
inline constexpr double kRegularTheta = 2.25;
inline constexpr double kRegularPhi = 0.63;
inline constexpr double kChaoticTheta = 1.64;
inline constexpr double kChaoticPhi = 1.50;
inline constexpr double kFixedPointTheta = 2.25;
inline constexpr double kFixedPointPhi = 0.63;

// Seeded generator used for all sampling: std::mt19937_64 with uniforms
// taken as 53-bit canonical doubles, so sequences are identical across
// platforms.
inline constexpr char kRngAlgorithm[] = "mt19937_64/canonical53";

struct Fig1Options {
  double j = 18.0;
  int depth = 15;  // record length N
  double kick_strength = 3.0;
  double rotation_angle = std::numbers::pi / 2.0;
  double prune_eps = 0.0;
};

// Entropy growth for the regular and chaotic initial states.
struct Fig1Result {
  EntropySeries series_regular;
  EntropySeries series_chaotic;
  TopParameters params;
  int depth = 0;
};

Fig1Result run_fig1(const Fig1Options& opts = {});

// n_points draws, uniform in surface area, strictly inside the octant
// x > 0, y > 0, z < 0. Same seed, same sequence.
std::vector<BlochPoint> sample_octant(int n_points, std::uint64_t seed);

struct SweepRecord {
  BlochPoint point;
  double theta = 0.0;
  double phi = 0.0;
  double angle_from_fixed_point = 0.0;  // radians, in [0, pi]
  double r_tilde = 0.0;                 // bits/measurement, in (0, 1]
};

struct SweepOptions {
  int n_points = 500;
  double j = 18.0;
  int depth = 15;
  std::uint64_t seed = 0;
  double kick_strength = 3.0;
  double rotation_angle = std::numbers::pi / 2.0;
  double prune_eps = 0.0;
  int workers = 1;  // per-point parallelism; output independent of the count
};

struct SweepResult {
  std::vector<SweepRecord> records;  // in sample order
  std::uint64_t seed = 0;
  int n_points = 0;
  std::array<double, 4> quartile_means{};  // mean r_tilde per angle quartile
  double rank_correlation = 0.0;           // angle vs r_tilde, in [-1, 1]
  double pruned_mass_total = 0.0;
};

// Entropy rate of every sampled coherent state against its angular
// distance from the elliptic fixed point direction.
SweepResult run_fig2(const SweepOptions& opts = {});

// R^2 of a least-squares line through the second half of the series.
// A flat second half fits its horizontal line exactly and scores 1.
// Needs at least 6 points.
double linearity_diagnostic(const EntropySeries& series);

// Spearman rank correlation with midranks for ties.
double rank_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace kicktop
