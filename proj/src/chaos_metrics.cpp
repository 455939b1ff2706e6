#include "kicktop/chaos_metrics.hpp"

#include "kicktop/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace kicktop {

double shannon_entropy(std::span<const double> probabilities) {
  double total = 0.0;
  double entropy = 0.0;
  for (const double p : probabilities) {
    if (p < -1e-12) {
      throw std::invalid_argument("shannon_entropy: negative probability " + g17(p));
    }
    if (p <= 0.0) continue;  // 0 log2 0 = 0
    entropy -= p * std::log2(p);
    total += p;
  }
  if (total > 1.0 + 1e-9) {
    throw std::invalid_argument("shannon_entropy: probabilities sum to " + g17(total));
  }
  return std::max(entropy, 0.0);
}

double shannon_entropy(const HistoryDistribution& dist) {
  return shannon_entropy(std::span<const double>(dist.probabilities));
}

namespace {

// entropy of the distribution renormalized to its surviving mass
double renormalized_entropy(std::span<const double> probabilities) {
  double total = 0.0;
  for (const double p : probabilities) {
    if (p > 0.0) total += p;
  }
  if (total <= 0.0) return 0.0;
  double entropy = 0.0;
  for (const double p : probabilities) {
    if (p <= 0.0) continue;
    const double q = p / total;
    entropy -= q * std::log2(q);
  }
  return std::max(entropy, 0.0);
}

}  // namespace

EntropySeries entropy_series(const PureState& psi0, const FloquetOperator& u,
                             const MeasurementScheme& scheme, int depth, double prune_eps) {
  if (depth < 1) throw std::invalid_argument("entropy_series: depth must be >= 1");
  EntropySeries series;
  series.values.reserve(static_cast<std::size_t>(depth));
  series.pruned_mass.reserve(static_cast<std::size_t>(depth));

  BranchLayer layer = initial_layer(psi0);
  std::vector<double> probs;
  for (int n = 1; n <= depth; ++n) {
    layer = step(layer, u, scheme, prune_eps);
    probs.resize(static_cast<std::size_t>(layer.count()));
    for (Eigen::Index c = 0; c < layer.count(); ++c) {
      probs[static_cast<std::size_t>(c)] = layer.vectors.col(c).squaredNorm();
    }
    series.values.push_back(layer.pruned_mass > 0.0 ? renormalized_entropy(probs)
                                                    : shannon_entropy(probs));
    series.pruned_mass.push_back(layer.pruned_mass);
  }
  return series;
}

RateEstimate rate_estimate(const EntropySeries& series, RateMethod method) {
  if (series.values.empty()) throw std::invalid_argument("rate_estimate: empty series");
  const int n = static_cast<int>(series.values.size());

  RateEstimate estimate;
  estimate.method = method;
  if (method == RateMethod::endpoint) {
    estimate.n_used = n;
    estimate.r_tilde = std::clamp(series.values.back() / n, 0.0, 1.0);
    return estimate;
  }

  // least-squares slope over the second half (whole series when too short)
  std::size_t begin = series.values.size() / 2;
  if (series.values.size() - begin < 2) begin = 0;
  const std::size_t count = series.values.size() - begin;
  estimate.n_used = static_cast<int>(count);
  if (count < 2) {
    estimate.r_tilde = 0.0;
    return estimate;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = begin; i < series.values.size(); ++i) {
    const double x = static_cast<double>(i + 1);
    const double y = series.values[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(count);
  estimate.r_tilde = std::clamp((m * sxy - sx * sy) / (m * sxx - sx * sx), 0.0, 1.0);
  return estimate;
}

RateBoundReport rate_lower_bound_report(const RateEstimate& estimate) {
  char buffer[128];
  std::snprintf(buffer, sizeof buffer,
                "average information production rate R_bar >= %g bits/measurement",
                estimate.r_tilde);
  return {estimate.r_tilde, buffer};
}

void write_entropy_csv(std::ostream& out, const EntropySeries& series) {
  out << "n,H_n_bits,pruned_mass\n";
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    out << (i + 1) << ',' << g17(series.values[i]) << ',' << g17(series.pruned_mass[i]) << '\n';
  }
}

}  // namespace kicktop
