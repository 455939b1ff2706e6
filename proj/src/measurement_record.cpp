#include "kicktop/measurement_record.hpp"

#include "kicktop/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace kicktop {

MeasurementScheme build_scheme(const SpinSystem& sys) {
  MeasurementScheme scheme;
  scheme.plus_mask = Eigen::VectorXd::Zero(sys.dim);
  scheme.minus_mask = Eigen::VectorXd::Zero(sys.dim);
  for (int i = 0; i < sys.dim; ++i) {
    const double m = sys.j - i;  // exact for half-integer j
    if (m >= 0.0) {
      scheme.plus_mask(i) = 1.0;
    } else {
      scheme.minus_mask(i) = 1.0;
    }
  }
  return scheme;
}

Eigen::MatrixXd plus_projector(const MeasurementScheme& scheme) {
  return scheme.plus_mask.asDiagonal();
}

Eigen::MatrixXd minus_projector(const MeasurementScheme& scheme) {
  return scheme.minus_mask.asDiagonal();
}

BranchLayer initial_layer(const PureState& psi0) {
  if (std::abs(psi0.amplitudes.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("initial_layer: initial state is not normalized");
  }
  BranchLayer layer;
  layer.depth = 0;
  layer.histories = {0};
  layer.vectors = psi0.amplitudes;
  layer.pruned_mass = 0.0;
  return layer;
}

BranchLayer step(const BranchLayer& layer, const FloquetOperator& u,
                 const MeasurementScheme& scheme, double prune_eps) {
  if (prune_eps < 0.0) throw std::invalid_argument("step: prune_eps must be >= 0");
  if (layer.vectors.rows() != u.matrix.cols()) {
    throw std::invalid_argument("step: layer/operator dimension mismatch");
  }
  if (layer.vectors.rows() != scheme.plus_mask.size()) {
    throw std::invalid_argument("step: layer/scheme dimension mismatch");
  }
  if (layer.depth >= 63) {
    throw std::invalid_argument("step: history encoding supports at most 63 outcomes");
  }

  const Eigen::Index dim = layer.vectors.rows();
  const Eigen::Index parents = layer.vectors.cols();
  // one dense product for the whole layer; branching happens on the result
  const Matrix evolved = u.matrix * layer.vectors;

  BranchLayer next;
  next.depth = layer.depth + 1;
  next.pruned_mass = layer.pruned_mass;
  next.histories.reserve(2 * static_cast<std::size_t>(parents));
  std::vector<std::pair<Eigen::Index, int>> kept;  // (parent column, outcome bit)
  kept.reserve(2 * static_cast<std::size_t>(parents));

  for (Eigen::Index c = 0; c < parents; ++c) {
    double weight[2] = {0.0, 0.0};
    for (Eigen::Index i = 0; i < dim; ++i) {
      weight[scheme.plus_mask(i) > 0.5 ? 1 : 0] += std::norm(evolved(i, c));
    }
    for (int bit = 0; bit < 2; ++bit) {
      if (weight[bit] == 0.0 || weight[bit] < prune_eps) {
        next.pruned_mass += weight[bit];
        continue;
      }
      kept.emplace_back(c, bit);
      next.histories.push_back((layer.histories[c] << 1) | static_cast<std::uint64_t>(bit));
    }
  }

  next.vectors = Matrix::Zero(dim, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const auto [c, bit] = kept[k];
    const Eigen::VectorXd& mask = bit ? scheme.plus_mask : scheme.minus_mask;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (mask(i) > 0.5) next.vectors(i, static_cast<Eigen::Index>(k)) = evolved(i, c);
    }
  }
  return next;
}

HistoryDistribution layer_distribution(const BranchLayer& layer) {
  HistoryDistribution dist;
  dist.depth = layer.depth;
  dist.histories = layer.histories;
  dist.pruned_mass = layer.pruned_mass;
  dist.probabilities.resize(layer.histories.size());
  for (Eigen::Index c = 0; c < layer.count(); ++c) {
    dist.probabilities[static_cast<std::size_t>(c)] = layer.vectors.col(c).squaredNorm();
  }
  return dist;
}

double probability_of(const HistoryDistribution& dist, std::uint64_t history) {
  const auto it = std::lower_bound(dist.histories.begin(), dist.histories.end(), history);
  if (it == dist.histories.end() || *it != history) return 0.0;
  return dist.probabilities[static_cast<std::size_t>(it - dist.histories.begin())];
}

std::vector<HistoryDistribution> history_distribution(const PureState& psi0,
                                                      const FloquetOperator& u,
                                                      const MeasurementScheme& scheme, int depth,
                                                      double prune_eps) {
  if (depth < 1) throw std::invalid_argument("history_distribution: depth must be >= 1");
  if (depth > 63) throw std::invalid_argument("history_distribution: depth must be <= 63");
  std::vector<HistoryDistribution> result;
  result.reserve(static_cast<std::size_t>(depth));
  BranchLayer layer = initial_layer(psi0);
  for (int n = 1; n <= depth; ++n) {
    layer = step(layer, u, scheme, prune_eps);
    result.push_back(layer_distribution(layer));
  }
  return result;
}

double single_history_probability(const PureState& psi0, const FloquetOperator& u,
                                  const MeasurementScheme& scheme,
                                  const std::vector<int>& history) {
  if (psi0.amplitudes.size() != u.matrix.cols() ||
      psi0.amplitudes.size() != scheme.plus_mask.size()) {
    throw std::invalid_argument("single_history_probability: dimension mismatch");
  }
  Vector v = psi0.amplitudes;
  for (const int bit : history) {
    if (bit != 0 && bit != 1) {
      throw std::invalid_argument("single_history_probability: history entries must be 0 or 1");
    }
    v = u.matrix * v;
    const Eigen::VectorXd& mask = bit ? scheme.plus_mask : scheme.minus_mask;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (mask(i) < 0.5) v(i) = Complex(0.0, 0.0);
    }
  }
  return v.squaredNorm();
}

std::string history_to_string(std::uint64_t history, int depth) {
  if (depth < 0 || depth > 63) throw std::invalid_argument("history_to_string: bad depth");
  std::string text(static_cast<std::size_t>(depth), '-');
  for (int i = 0; i < depth; ++i) {
    if ((history >> (depth - 1 - i)) & 1ULL) text[static_cast<std::size_t>(i)] = '+';
  }
  return text;
}

std::vector<int> parse_history(const std::string& text) {
  std::vector<int> bits;
  bits.reserve(text.size());
  for (const char c : text) {
    if (c == '+') {
      bits.push_back(1);
    } else if (c == '-') {
      bits.push_back(0);
    } else {
      throw std::invalid_argument(std::string("parse_history: unexpected character '") + c +
                                  "', expected '+' or '-'");
    }
  }
  return bits;
}

void write_history_csv(std::ostream& out, const HistoryDistribution& dist) {
  out << "history,probability\n";
  for (std::size_t i = 0; i < dist.histories.size(); ++i) {
    out << history_to_string(dist.histories[i], dist.depth) << ',' << g17(dist.probabilities[i])
        << '\n';
  }
}

}  // namespace kicktop
