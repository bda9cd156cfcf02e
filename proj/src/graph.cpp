#include "bswarm/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>

#include "bswarm/error.hpp"

namespace bswarm {

namespace {

std::string pair_text(int i, int j) { return "(" + std::to_string(i) + ", " + std::to_string(j) + ")"; }

}  // namespace

bool is_connected(const std::vector<std::vector<int>>& neighbors) {
  if (neighbors.empty()) return false;
  std::vector<char> seen(neighbors.size(), 0);
  std::deque<int> frontier{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop_front();
    for (int v : neighbors[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++reached;
        frontier.push_back(v);
      }
    }
  }
  return reached == neighbors.size();
}

Graph Graph::build(int n, std::span<const Edge> edges, Connectivity connectivity) {
  if (n < 2) throw GraphError(GraphError::Kind::InvalidSize, "graph needs at least 2 nodes, got " + std::to_string(n));

  Graph g;
  g.n_ = n;
  g.neighbors_.assign(static_cast<std::size_t>(n), {});
  g.adjacency_ = Matrix::Zero(n, n);

  std::set<Edge> seen;
  for (const auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw GraphError(GraphError::Kind::NodeOutOfRange, "edge " + pair_text(i, j) + " references a node outside [0, " +
                                                             std::to_string(n) + ")",
                       {i, j});
    if (i == j) throw GraphError(GraphError::Kind::SelfLoop, "self-loop " + pair_text(i, j), {i, j});
    const Edge key{std::min(i, j), std::max(i, j)};
    if (!seen.insert(key).second)
      throw GraphError(GraphError::Kind::DuplicateEdge, "duplicate edge " + pair_text(i, j), {i, j});
    g.edges_.emplace_back(i, j);
    g.adjacency_(i, j) = 1.0;
    g.adjacency_(j, i) = 1.0;
    g.neighbors_[static_cast<std::size_t>(i)].push_back(j);
    g.neighbors_[static_cast<std::size_t>(j)].push_back(i);
  }
  for (auto& list : g.neighbors_) std::sort(list.begin(), list.end());

  g.degree_ = Matrix::Zero(n, n);
  g.degree_.diagonal() = g.adjacency_.rowwise().sum();
  g.laplacian_ = g.degree_ - g.adjacency_;

  // Incoming links grouped by destination, sources ascending.
  for (int v = 0; v < n; ++v)
    for (int u : g.neighbors_[static_cast<std::size_t>(v)]) g.directed_.emplace_back(u, v);
  g.incidence_ = Matrix::Zero(n, static_cast<Eigen::Index>(g.directed_.size()));
  for (std::size_t col = 0; col < g.directed_.size(); ++col) {
    const auto [u, v] = g.directed_[col];
    g.incidence_(u, static_cast<Eigen::Index>(col)) = -1.0;
    g.incidence_(v, static_cast<Eigen::Index>(col)) = 1.0;
  }

  g.spectrum_ = jacobi_eigen(g.laplacian_);
  g.connected_ = is_connected(g.neighbors_);
  if (connectivity == Connectivity::Require && !g.connected_)
    throw GraphError(GraphError::Kind::NotConnected, "graph is not connected");
  return g;
}

Matrix projector_M(int n) {
  return Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
}

Matrix projector_M(const Graph& g) { return projector_M(g.n()); }

ProjectorCheck verify_projector_identities(const Graph& g, double tol) {
  const Matrix m = projector_M(g);
  const Matrix& l = g.laplacian();
  const Matrix& b = g.incidence();
  const Matrix bbt = b * b.transpose();
  const Matrix btb = b.transpose() * b;

  ProjectorCheck out;
  out.laplacian_form = max_abs(l * pseudo_inverse_symmetric(l) - m);
  out.bbt_form = max_abs(bbt * pseudo_inverse_symmetric(bbt) - m);
  out.btb_form = max_abs(b * pseudo_inverse_symmetric(btb) * b.transpose() - m);
  out.max_deviation = std::max({out.laplacian_form, out.bbt_form, out.btb_form});
  out.ok = out.max_deviation <= tol;
  return out;
}

double algebraic_connectivity(const Graph& g) { return g.lambda2(); }

}  // namespace bswarm
