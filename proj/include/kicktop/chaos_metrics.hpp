#pragma once

#include "kicktop/measurement_record.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace kicktop {

// H_n in bits for n = 1..N, with the probability mass dropped by pruning
// at each depth. For a binary record 0 <= H_n <= n and H_n is
// nondecreasing in n.
struct EntropySeries {
  std::vector<double> values;
  std::vector<double> pruned_mass;
};

// -sum p log2 p with 0 log2 0 = 0. Entries within 1e-12 below zero count
// as zero; anything more negative is rejected, as is total mass above
// 1 + 1e-9.
double shannon_entropy(std::span<const double> probabilities);
double shannon_entropy(const HistoryDistribution& dist);

// Entropy of the record distribution at every depth 1..depth. When pruning
// dropped mass at a depth, the entropy there is taken over the surviving
// mass renormalized; without pruning it is the plain record entropy.
EntropySeries entropy_series(const PureState& psi0, const FloquetOperator& u,
                             const MeasurementScheme& scheme, int depth, double prune_eps = 0.0);

enum class RateMethod { endpoint, slope };

// Bits of record entropy gained per measurement.
struct RateEstimate {
  double r_tilde = 0.0;
  int n_used = 0;
  RateMethod method = RateMethod::endpoint;
};

// endpoint: H_N / N. slope: least-squares slope of H_n over the second
// half of the series (diagnostic only). Both clamped to [0, 1].
RateEstimate rate_estimate(const EntropySeries& series, RateMethod method);

// The record entropy rate bounds the average information production rate
// from below; this just formats that statement for reports.
struct RateBoundReport {
  double lower_bound = 0.0;
  std::string statement;
};

RateBoundReport rate_lower_bound_report(const RateEstimate& estimate);

// CSV: header "n,H_n_bits,pruned_mass", 17 significant digits.
void write_entropy_csv(std::ostream& out, const EntropySeries& series);

}  // namespace kicktop
