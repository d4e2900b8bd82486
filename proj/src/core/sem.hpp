#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/dataset.hpp"

namespace labelbias {

class GaussianSystem;

// Parameters of the five-node arrest/behavior model: alpha is the direct
// neighborhood->arrest weight, beta the neighborhood->behavior weight, gamma
// the behavior->arrest weight, and delta the covariance of the two behavior
// noise terms. Exogenous variances are chosen so every node has variance 1,
// which bounds the admissible region.
struct StylizedParams {
  double alpha = 0.4;
  double beta = 0.0;
  double gamma = 0.4;
  double delta = 0.4;

  double sigma_z2() const { return 1.0; }
  double sigma_b2() const { return 1.0 - beta * beta; }
  double sigma_a2() const {
    return 1.0 - alpha * alpha - gamma * gamma - 2.0 * alpha * beta * gamma;
  }

  // Throws invalid_params when any variance expression or bound fails
  // (boundary values pass, with 1e-12 slack).
  void validate() const;
  bool is_valid() const;
};

// Linear structural equation model over named nodes: each node equals the
// weighted sum of its parents plus an exogenous noise term. Bidirected edges
// carry exogenous covariances; directed edges must form a DAG.
class LinearSem {
 public:
  struct DirectedEdge {
    int from, to;
    double weight;
  };
  struct BidirectedEdge {
    int a, b;
    double cov;
  };

  explicit LinearSem(std::vector<std::string> nodes);

  void add_edge(const std::string& from, const std::string& to, double weight);
  void add_bidirected(const std::string& a, const std::string& b, double cov);
  void set_exo_variance(const std::string& node, double variance);

  size_t num_nodes() const { return nodes_.size(); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  int node_index(const std::string& name) const;  // throws when unknown
  const std::vector<DirectedEdge>& directed_edges() const { return directed_; }
  const std::vector<BidirectedEdge>& bidirected_edges() const { return bidirected_; }
  double exo_variance(int node) const { return exo_var_[static_cast<size_t>(node)]; }

  // Full invariant check: DAG, nonnegative exogenous variances, bidirected
  // covariances within the Cauchy-Schwarz bound. Throws on violation.
  void validate() const;

  // Stable topological order (ties broken by node index).
  std::vector<int> topological_order() const;

 private:
  std::vector<std::string> nodes_;
  std::unordered_map<std::string, int> index_;
  std::vector<DirectedEdge> directed_;
  std::vector<BidirectedEdge> bidirected_;
  std::vector<double> exo_var_;
};

// The five-node model with exogenous variances standardizing every node.
LinearSem build_stylized(const StylizedParams& params);

// Model-implied joint law: solves the structural system for the covariance
// of all nodes (mean zero).
GaussianSystem implied_covariance(const LinearSem& sem);

// Covariance of two nodes by path enumeration: sum over collider-free paths
// (at most one bidirected edge) of the product of edge weights. Requires all
// implied node variances to equal 1 (throws not_standardized otherwise);
// independent of the matrix route above except for that check.
double trek_covariance(const LinearSem& sem, const std::string& a, const std::string& b);

// n i.i.d. draws from the joint law, generated node by node in topological
// order. Columns come out in topological order. Deterministic given seed.
Dataset sample(const LinearSem& sem, int64_t n, uint64_t seed);

}  // namespace labelbias
