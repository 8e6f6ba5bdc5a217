#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gsparse/graph.hpp"

namespace gsparse {

// Coarse sparsifier with quality factor C: (1/C) * K <= K_tilde <= K in the
// resistance (Loewner) order.
struct CoarseSparsifier {
  WeightedGraph graph;
  double quality = 1.0;
};

// Solve (L + gamma*I + diag(extra))x = b with preconditioned CG (Jacobi),
// relative tolerance 1e-8, at most 10n iterations. When the operator is a pure
// Laplacian (gamma = 0, no extra diagonal) b must be mean-zero per connected
// component and the returned x is too. Throws NotConverged / NonZeroSum.
Eigen::VectorXd solve_laplacian(const WeightedGraph& g, const Eigen::VectorXd& b,
                                const Eigen::VectorXd* extra_diag = nullptr);

// JL resistance embedding M = (1/sqrt(q)) Q Bt K+, built from q Laplacian
// solves. Q's +-1 entries are generated per existing row of Bt only, from
// k-wise hashing; the C(n,2)-column matrix is never materialized.
class ResistanceEmbedding {
 public:
  ResistanceEmbedding() = default;
  ResistanceEmbedding(const CoarseSparsifier& k, uint32_t q_jl, uint64_t seed);

  uint32_t q() const { return uint32_t(M_.rows()); }
  // ||M (chi_u - chi_v)||^2, approx R_uv on the coarse graph
  double pair_norm2(VertexId u, VertexId v) const {
    return u == v ? 0.0 : (M_.col(u) - M_.col(v)).squaredNorm();
  }
  double vector_norm2(const DemandVector& d) const { return (M_ * d).squaredNorm(); }
  const Eigen::MatrixXd& rows() const { return M_; }
  uint64_t source_fingerprint() const { return fingerprint_; }

 private:
  Eigen::MatrixXd M_;  // q x n
  uint64_t fingerprint_ = 0;
};

// Result of merging a vertex set P into one supernode (contracted id 0);
// remaining vertices keep their relative order at ids 1..n-|P|.
struct Contraction {
  WeightedGraph graph;        // gamma moved into `diag`
  Eigen::VectorXd diag;       // per-vertex regularizer, supernode gets gamma*|P|
  std::vector<VertexId> map;  // original vertex id -> contracted id
  VertexId supernode = 0;
};

Contraction contract(const WeightedGraph& g, const std::vector<VertexId>& P);

// phi = K+ (chi_src - chi_snk); phi(src) - phi(snk) is the (regularized)
// effective resistance up to solver tolerance.
Eigen::VectorXd potentials(const WeightedGraph& g, VertexId src, VertexId snk,
                           const Eigen::VectorXd* extra_diag = nullptr);

// lift a contracted potential vector back to the original vertex set
Eigen::VectorXd expand_potentials(const Contraction& c, const Eigen::VectorXd& x);

uint64_t weighted_graph_fingerprint(const WeightedGraph& g);

}  // namespace gsparse
