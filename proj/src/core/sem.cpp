#include "core/sem.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <queue>

#include "core/common.hpp"
#include "core/gaussian.hpp"
#include "core/rng.hpp"
#include "core/text.hpp"

namespace labelbias {

namespace {
constexpr double kBoundTol = 1e-12;
}

void StylizedParams::validate() const {
  for (double v : {alpha, beta, gamma, delta}) {
    if (!std::isfinite(v) || v < -kBoundTol || v > 1.0 + kBoundTol) {
      fail(ErrorCode::invalid_params,
           "stylized parameters must lie in [0, 1]; got alpha=" + format_double(alpha) +
               " beta=" + format_double(beta) + " gamma=" + format_double(gamma) +
               " delta=" + format_double(delta));
    }
  }
  if (sigma_b2() < -kBoundTol) {
    fail(ErrorCode::invalid_params,
         "behavior noise variance 1 - beta^2 is negative (= " + format_double(sigma_b2()) + ")");
  }
  if (delta > sigma_b2() + kBoundTol) {
    fail(ErrorCode::invalid_params,
         "delta must satisfy beta^2 + delta <= 1; got beta=" + format_double(beta) +
             " delta=" + format_double(delta));
  }
  if (sigma_a2() < -kBoundTol) {
    fail(ErrorCode::invalid_params,
         "arrest noise variance 1 - alpha^2 - gamma^2 - 2*alpha*beta*gamma is negative (= " +
             format_double(sigma_a2()) + ")");
  }
}

bool StylizedParams::is_valid() const {
  try {
    validate();
    return true;
  } catch (const Error&) {
    return false;
  }
}

LinearSem::LinearSem(std::vector<std::string> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) fail(ErrorCode::invalid_argument, "SEM needs at least one node");
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i], static_cast<int>(i)).second) {
      fail(ErrorCode::invalid_argument, "duplicate node name: " + nodes_[i]);
    }
  }
  exo_var_.assign(nodes_.size(), 1.0);
}

int LinearSem::node_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) fail(ErrorCode::invalid_argument, "unknown node: " + name);
  return it->second;
}

void LinearSem::add_edge(const std::string& from, const std::string& to, double weight) {
  int f = node_index(from), t = node_index(to);
  if (f == t) fail(ErrorCode::invalid_argument, "self-loop on node " + from);
  for (const auto& e : directed_) {
    if (e.from == f && e.to == t) {
      fail(ErrorCode::invalid_argument, "duplicate edge " + from + " -> " + to);
    }
  }
  directed_.push_back({f, t, weight});
}

void LinearSem::add_bidirected(const std::string& a, const std::string& b, double cov) {
  int ia = node_index(a), ib = node_index(b);
  if (ia == ib) fail(ErrorCode::invalid_argument, "bidirected self-loop on node " + a);
  for (const auto& e : bidirected_) {
    if ((e.a == ia && e.b == ib) || (e.a == ib && e.b == ia)) {
      fail(ErrorCode::invalid_argument, "duplicate bidirected edge " + a + " <-> " + b);
    }
  }
  bidirected_.push_back({ia, ib, cov});
}

void LinearSem::set_exo_variance(const std::string& node, double variance) {
  exo_var_[static_cast<size_t>(node_index(node))] = variance;
}

std::vector<int> LinearSem::topological_order() const {
  size_t n = nodes_.size();
  std::vector<int> indegree(n, 0);
  for (const auto& e : directed_) ++indegree[static_cast<size_t>(e.to)];
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(static_cast<int>(i));
  }
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (const auto& e : directed_) {
      if (e.from == v && --indegree[static_cast<size_t>(e.to)] == 0) ready.push(e.to);
    }
  }
  if (order.size() != n) {
    fail(ErrorCode::invalid_params, "directed edges contain a cycle; SEM must be a DAG");
  }
  return order;
}

void LinearSem::validate() const {
  topological_order();
  for (size_t i = 0; i < exo_var_.size(); ++i) {
    if (!std::isfinite(exo_var_[i]) || exo_var_[i] < -kBoundTol) {
      fail(ErrorCode::invalid_params,
           "exogenous variance of " + nodes_[i] + " is negative (= " + format_double(exo_var_[i]) + ")");
    }
  }
  for (const auto& e : bidirected_) {
    double bound = std::sqrt(std::max(0.0, exo_variance(e.a)) * std::max(0.0, exo_variance(e.b)));
    if (std::abs(e.cov) > bound + kBoundTol) {
      fail(ErrorCode::invalid_params,
           "bidirected covariance between " + nodes_[static_cast<size_t>(e.a)] + " and " +
               nodes_[static_cast<size_t>(e.b)] + " exceeds sqrt of variance product (" +
               format_double(e.cov) + " vs bound " + format_double(bound) + ")");
    }
  }
}

LinearSem build_stylized(const StylizedParams& params) {
  params.validate();
  LinearSem sem({"Z", "B0", "B1", "A0", "A1"});
  sem.add_edge("Z", "B0", params.beta);
  sem.add_edge("Z", "B1", params.beta);
  sem.add_edge("Z", "A0", params.alpha);
  sem.add_edge("Z", "A1", params.alpha);
  sem.add_edge("B0", "A0", params.gamma);
  sem.add_edge("B1", "A1", params.gamma);
  sem.add_bidirected("B0", "B1", params.delta);
  sem.set_exo_variance("Z", params.sigma_z2());
  sem.set_exo_variance("B0", std::max(0.0, params.sigma_b2()));
  sem.set_exo_variance("B1", std::max(0.0, params.sigma_b2()));
  sem.set_exo_variance("A0", std::max(0.0, params.sigma_a2()));
  sem.set_exo_variance("A1", std::max(0.0, params.sigma_a2()));
  return sem;
}

namespace {

Eigen::MatrixXd exogenous_covariance(const LinearSem& sem) {
  auto n = static_cast<Eigen::Index>(sem.num_nodes());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) s(i, i) = std::max(0.0, sem.exo_variance(static_cast<int>(i)));
  for (const auto& e : sem.bidirected_edges()) {
    s(e.a, e.b) = e.cov;
    s(e.b, e.a) = e.cov;
  }
  return s;
}

}  // namespace

GaussianSystem implied_covariance(const LinearSem& sem) {
  sem.validate();
  auto n = static_cast<Eigen::Index>(sem.num_nodes());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : sem.directed_edges()) w(e.from, e.to) = e.weight;
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - w.transpose();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  // A DAG always yields an invertible system; guard anyway.
  if (std::abs(lu.determinant()) < 1e-12) {
    fail(ErrorCode::singular_system, "structural system is singular");
  }
  Eigen::MatrixXd minv = lu.inverse();
  Eigen::MatrixXd sigma = minv * exogenous_covariance(sem) * minv.transpose();
  sigma = ((sigma + sigma.transpose()) * 0.5).eval();
  return GaussianSystem(sem.nodes(), Eigen::VectorXd::Zero(n), sigma);
}

namespace {

// One step of the collider-free path walk. `mark_head` says whether the edge
// we arrived by points into the current node; leaving through another
// head-marked edge would make the node a collider.
struct PathWalker {
  const LinearSem& sem;
  int target;
  std::vector<bool> visited;
  double total = 0.0;

  PathWalker(const LinearSem& s, int target_node)
      : sem(s), target(target_node), visited(s.num_nodes(), false) {}

  void walk(int node, bool arrived_by_head, bool used_bidirected, double product) {
    if (node == target) {
      total += product;
      return;
    }
    visited[static_cast<size_t>(node)] = true;
    for (const auto& e : sem.directed_edges()) {
      if (e.from == node && !visited[static_cast<size_t>(e.to)]) {
        // leave through a tail: never a collider
        walk(e.to, true, used_bidirected, product * e.weight);
      }
      if (e.to == node && !visited[static_cast<size_t>(e.from)] && !arrived_by_head) {
        // traverse against the arrow; forbidden after arriving head-first
        walk(e.from, false, used_bidirected, product * e.weight);
      }
    }
    if (!arrived_by_head && !used_bidirected) {
      for (const auto& e : sem.bidirected_edges()) {
        if (e.a == node && !visited[static_cast<size_t>(e.b)]) walk(e.b, true, true, product * e.cov);
        if (e.b == node && !visited[static_cast<size_t>(e.a)]) walk(e.a, true, true, product * e.cov);
      }
    }
    visited[static_cast<size_t>(node)] = false;
  }
};

}  // namespace

double trek_covariance(const LinearSem& sem, const std::string& a, const std::string& b) {
  sem.validate();
  GaussianSystem implied = implied_covariance(sem);
  for (size_t i = 0; i < sem.num_nodes(); ++i) {
    double v = implied.covariance(sem.nodes()[i], sem.nodes()[i]);
    if (std::abs(v - 1.0) > 1e-9) {
      fail(ErrorCode::not_standardized,
           "node " + sem.nodes()[i] + " has implied variance " + format_double(v) +
               "; the path product rule requires unit variances");
    }
  }
  int ia = sem.node_index(a), ib = sem.node_index(b);
  if (ia == ib) return 1.0;  // unit variance just verified
  PathWalker walker(sem, ib);
  walker.walk(ia, false, false, 1.0);
  return walker.total;
}

namespace {

// Transform from i.i.d. standard normals (in topological order) to exogenous
// noise with the requested covariance. Bidirected edges couple nodes through
// small Cholesky / spectral blocks; everything else is a plain sqrt scale.
Eigen::MatrixXd noise_transform(const LinearSem& sem, const std::vector<int>& topo) {
  size_t n = sem.num_nodes();
  std::vector<int> pos(n);  // node -> position in topo order
  for (size_t i = 0; i < n; ++i) pos[static_cast<size_t>(topo[i])] = static_cast<int>(i);

  // Union-find over bidirected components.
  std::vector<int> parent(n);
  for (size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)];
    return x;
  };
  for (const auto& e : sem.bidirected_edges()) parent[static_cast<size_t>(find(e.a))] = find(e.b);

  std::vector<std::vector<int>> groups(n);
  for (size_t i = 0; i < n; ++i) groups[static_cast<size_t>(find(static_cast<int>(i)))].push_back(static_cast<int>(i));

  Eigen::MatrixXd exo = exogenous_covariance(sem);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (auto& members : groups) {
    if (members.empty()) continue;
    std::sort(members.begin(), members.end(),
              [&](int x, int y) { return pos[static_cast<size_t>(x)] < pos[static_cast<size_t>(y)]; });
    auto k = static_cast<Eigen::Index>(members.size());
    if (k == 1) {
      int v = members[0];
      t(v, v) = std::sqrt(std::max(0.0, exo(v, v)));
      continue;
    }
    Eigen::MatrixXd block(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) {
        block(r, c) = exo(members[static_cast<size_t>(r)], members[static_cast<size_t>(c)]);
      }
    }
    Eigen::MatrixXd factor;
    if (k == 2) {
      // closed-form Cholesky; tolerates the perfectly correlated boundary
      double va = block(0, 0), vb = block(1, 1), c = block(0, 1);
      factor = Eigen::MatrixXd::Zero(2, 2);
      double l11 = std::sqrt(std::max(0.0, va));
      factor(0, 0) = l11;
      factor(1, 0) = l11 > 0.0 ? c / l11 : 0.0;
      factor(1, 1) = std::sqrt(std::max(0.0, vb - factor(1, 0) * factor(1, 0)));
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
      Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
      factor = es.eigenvectors() * ev.asDiagonal();
    }
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) {
        t(members[static_cast<size_t>(r)], members[static_cast<size_t>(c)]) = factor(r, c);
      }
    }
  }
  return t;
}

}  // namespace

Dataset sample(const LinearSem& sem, int64_t n, uint64_t seed) {
  sem.validate();
  if (n < 1) fail(ErrorCode::invalid_argument, "sample size must be >= 1");
  std::vector<int> topo = sem.topological_order();
  size_t nn = sem.num_nodes();
  Eigen::MatrixXd t = noise_transform(sem, topo);

  // parents[v] in edge insertion order
  std::vector<std::vector<std::pair<int, double>>> parents(nn);
  for (const auto& e : sem.directed_edges()) parents[static_cast<size_t>(e.to)].push_back({e.from, e.weight});

  std::vector<std::string> colnames;
  colnames.reserve(nn);
  for (int v : topo) colnames.push_back(sem.nodes()[static_cast<size_t>(v)]);
  Dataset out(colnames);

  Rng rng(seed);
  Eigen::VectorXd z(static_cast<Eigen::Index>(nn));
  std::vector<double> x(nn), row(nn);
  for (int64_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < nn; ++j) z(static_cast<Eigen::Index>(topo[j])) = rng.normal();
    Eigen::VectorXd u = t * z;
    for (size_t j = 0; j < nn; ++j) {
      int v = topo[j];
      double value = u(v);
      for (const auto& [p, w] : parents[static_cast<size_t>(v)]) value += w * x[static_cast<size_t>(p)];
      x[static_cast<size_t>(v)] = value;
      row[j] = value;
    }
    out.append_row(row);
  }
  return out;
}

}  // namespace labelbias
