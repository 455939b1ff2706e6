#pragma once

#include "kicktop/kicked_top.hpp"
#include "kicktop/spin_algebra.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace kicktop {

// Binary projective measurement splitting the jz eigenbasis at m = 0:
// the + outcome projects onto m >= 0, the - outcome onto m < 0.
// Projectors are diagonal; only the 0/1 diagonals are stored.
struct MeasurementScheme {
  Eigen::VectorXd plus_mask;
  Eigen::VectorXd minus_mask;
};

MeasurementScheme build_scheme(const SpinSystem& sys);

// Dense diagonal projector matrices, mostly useful for checks.
Eigen::MatrixXd plus_projector(const MeasurementScheme& scheme);
Eigen::MatrixXd minus_projector(const MeasurementScheme& scheme);

// All unnormalized post-measurement branches at one record depth.
// Column c of `vectors` belongs to histories[c]; its squared norm is the
// probability of that history. Histories are bit sequences with + -> 1,
// - -> 0 and the first measurement in the most significant bit, kept in
// ascending order. Branches whose vector is exactly zero are never stored:
// they are not states and carry no probability.
struct BranchLayer {
  int depth = 0;
  std::vector<std::uint64_t> histories;
  Matrix vectors;            // dim x branch count
  double pruned_mass = 0.0;  // total probability dropped by pruning so far

  Eigen::Index count() const { return vectors.cols(); }
  double total_mass() const { return vectors.squaredNorm(); }
};

// Depth-0 layer holding just psi0 under the empty history.
BranchLayer initial_layer(const PureState& psi0);

// One kick followed by one measurement: every branch v splits into
// P+ U v and P- U v. Children with squared norm below prune_eps are
// dropped and their mass added to pruned_mass. The record length is
// capped at 63 outcomes by the history encoding.
BranchLayer step(const BranchLayer& layer, const FloquetOperator& u,
                 const MeasurementScheme& scheme, double prune_eps = 0.0);

// Probabilities of all surviving histories at one depth.
struct HistoryDistribution {
  int depth = 0;
  std::vector<std::uint64_t> histories;  // ascending
  std::vector<double> probabilities;
  double pruned_mass = 0.0;
};

HistoryDistribution layer_distribution(const BranchLayer& layer);

// Probability of one history; 0 for histories that left the tree.
double probability_of(const HistoryDistribution& dist, std::uint64_t history);

// Evolves psi0 for `depth` periods and returns the distribution at every
// depth 1..depth. The depth-n distribution is the marginal of the depth-N
// one over the first n outcomes.
std::vector<HistoryDistribution> history_distribution(const PureState& psi0,
                                                      const FloquetOperator& u,
                                                      const MeasurementScheme& scheme, int depth,
                                                      double prune_eps = 0.0);

// || P_{z_N} U ... P_{z_1} U psi0 ||^2 for one explicit outcome sequence
// (entries 0 or 1, first measurement first). Empty history gives 1.
double single_history_probability(const PureState& psi0, const FloquetOperator& u,
                                  const MeasurementScheme& scheme,
                                  const std::vector<int>& history);

// "+-+" style rendering, first measurement first.
std::string history_to_string(std::uint64_t history, int depth);
std::vector<int> parse_history(const std::string& text);

// CSV dump: header "history,probability", one +/- string per row,
// probabilities with 17 significant digits.
void write_history_csv(std::ostream& out, const HistoryDistribution& dist);

}  // namespace kicktop
