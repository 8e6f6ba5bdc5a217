#pragma once

#include <cstdint>
#include <map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gsparse/errors.hpp"

namespace gsparse {

using VertexId = uint32_t;

// Canonical unordered pair over a fixed vertex set [0, n).
// linear_index is the colexicographic pair index v*(v-1)/2 + u for u < v,
// a bijection with [0, C(n,2)).
struct EdgeKey {
  VertexId u = 0;
  VertexId v = 0;
  uint64_t linear_index = 0;

  bool operator==(const EdgeKey& o) const { return linear_index == o.linear_index; }
  bool operator<(const EdgeKey& o) const { return linear_index < o.linear_index; }
};

EdgeKey make_edge(VertexId a, VertexId b);
EdgeKey edge_from_index(uint64_t idx);

inline uint64_t pair_index(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return uint64_t(b) * (b - 1) / 2 + a;
}

inline uint64_t num_pairs(uint32_t n) { return uint64_t(n) * (n - 1) / 2; }

// Simple unweighted graph over a fixed vertex set.
class Graph {
 public:
  explicit Graph(uint32_t n) : n_(n), degree_(n, 0) {}

  uint32_t n() const { return n_; }
  size_t num_edges() const { return edges_.size(); }
  bool has_edge(const EdgeKey& e) const { return edges_.count(e.linear_index) > 0; }
  uint32_t degree(VertexId v) const { return degree_[v]; }

  // insert of an existing edge / delete of an absent edge is a hard error
  void insert(const EdgeKey& e);
  void erase(const EdgeKey& e);

  std::vector<EdgeKey> edges() const;  // sorted by linear index

 private:
  uint32_t n_;
  std::unordered_set<uint64_t> edges_;
  std::vector<uint32_t> degree_;
};

// Weighted graph plus optional gamma*I regularizer (K = B^T W B + gamma*I).
struct WeightedGraph {
  uint32_t n = 0;
  std::map<uint64_t, double> edges;  // linear index -> weight > 0
  double gamma = 0.0;

  WeightedGraph() = default;
  explicit WeightedGraph(uint32_t n_, double gamma_ = 0.0) : n(n_), gamma(gamma_) {}

  void add_edge(VertexId a, VertexId b, double w);
  double weight(VertexId a, VertexId b) const;  // 0 if absent
  size_t num_edges() const { return edges.size(); }

  static WeightedGraph from_graph(const Graph& g, double w = 1.0, double gamma = 0.0);
};

using DemandVector = Eigen::VectorXd;

// zero-sum tolerance for demand vectors
inline constexpr double kTauZero = 1e-9;

// chi_u - chi_v as (vertex, value) pairs; +1 at the smaller endpoint
std::vector<std::pair<VertexId, double>> incidence_row(const EdgeKey& e);

Eigen::MatrixXd laplacian(const WeightedGraph& g);

struct DemandTerm {
  VertexId s;
  VertexId t;
  double alpha;  // > 0, flow s -> t
};

// Decomposes a zero-sum demand into <= n-1 pair demands with
// sum(alpha) = ||sigma||_1 / 2, by repeatedly pairing the
// smallest-magnitude nonzero entry with an opposite-sign entry.
std::vector<DemandTerm> decompose_demand(const DemandVector& sigma);

// Edge-list text format: one "u v" pair per line, 0-based.
Graph read_edge_list(std::istream& in, uint32_t n);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace gsparse
