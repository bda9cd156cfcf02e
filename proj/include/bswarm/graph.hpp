#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bswarm/linalg.hpp"
#include "bswarm/types.hpp"

namespace bswarm {

using Edge = std::pair<int, int>;

/// Undirected, unweighted sensor topology together with every derived matrix
/// the consensus analysis uses. Immutable after construction.
///
/// Each undirected edge {i, j} becomes two directed edges i->j and j->i. The
/// incidence matrix has one column per directed edge (u->v) with -1 at row u
/// and +1 at row v; columns are grouped by destination node ascending, then
/// by source ascending. With this convention B * B^T == 2 * L exactly.
class Graph {
 public:
  enum class Connectivity { Require, Allow };

  /// Throws GraphError on n < 2, out-of-range nodes, self-loops, duplicate
  /// pairs (either orientation) and, unless `Allow` is passed, on a
  /// disconnected topology.
  static Graph build(int n, std::span<const Edge> edges,
                     Connectivity connectivity = Connectivity::Require);

  int n() const noexcept { return n_; }
  /// Undirected edges in input order.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  /// Directed edges in incidence column order.
  const std::vector<Edge>& directed_edges() const noexcept { return directed_; }
  const std::vector<std::vector<int>>& neighbors() const noexcept { return neighbors_; }

  const Matrix& adjacency() const noexcept { return adjacency_; }
  const Matrix& degree() const noexcept { return degree_; }
  const Matrix& laplacian() const noexcept { return laplacian_; }
  const Matrix& incidence() const noexcept { return incidence_; }
  const SymmetricEigen& spectrum() const noexcept { return spectrum_; }

  /// Second-smallest Laplacian eigenvalue, clamped at 0.
  double lambda2() const noexcept { return spectrum_.values(1) > 0.0 ? spectrum_.values(1) : 0.0; }
  /// Breadth-first traversal result (authoritative).
  bool connected() const noexcept { return connected_; }
  /// lambda2 > 1e-9 (diagnostic cross-check of `connected()`).
  bool spectrally_connected() const noexcept { return lambda2() > 1e-9; }

 private:
  Graph() = default;

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<Edge> directed_;
  std::vector<std::vector<int>> neighbors_;
  Matrix adjacency_, degree_, laplacian_, incidence_;
  SymmetricEigen spectrum_;
  bool connected_ = false;
};

/// M = I_n - (1/n) 1 1^T, the projector onto zero-mean vectors.
Matrix projector_M(int n);
Matrix projector_M(const Graph& g);

struct ProjectorCheck {
  bool ok = false;
  double max_deviation = 0.0;
  double laplacian_form = 0.0;   // ||L L^+ - M||_max
  double bbt_form = 0.0;         // ||B B^T (B B^T)^+ - M||_max
  double btb_form = 0.0;         // ||B (B^T B)^+ B^T - M||_max
};

/// Compares the three pseudo-inverse expressions of the zero-mean projector
/// against the direct formula.
ProjectorCheck verify_projector_identities(const Graph& g, double tol);

/// Second-smallest Laplacian eigenvalue; ~0 for disconnected graphs.
double algebraic_connectivity(const Graph& g);

/// Breadth-first connectivity test on an adjacency list.
bool is_connected(const std::vector<std::vector<int>>& neighbors);

}  // namespace bswarm
