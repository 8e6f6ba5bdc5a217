#pragma once

#include <optional>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "gsparse/graph.hpp"

namespace gsparse {

class HeavyHitterSketch;  // sketch.hpp

// Ground-truth reference implementations. Dense, O(n^3) by design;
// used only by tests and the CLI verify mode.

struct PseudoInverse {
  Eigen::MatrixXd pinv;
  uint64_t source_fingerprint = 0;
};

// Moore-Penrose pseudoinverse via dense eigendecomposition,
// eigenvalue cutoff 1e-9 * lambda_max.
PseudoInverse pseudo_inverse(const Eigen::MatrixXd& K);

// Infinite resistance is a distinct variant, never a float sentinel.
struct ResistanceValue {
  bool finite = true;
  double value = 0.0;
};

ResistanceValue exact_effective_resistance(const WeightedGraph& g, VertexId u, VertexId v);

// True iff all generalized eigenvalues of (L_H, L_G) restricted to
// range(L_G) lie in [1-eps, 1+eps] (tolerance 1e-8), and H adds no
// energy outside range(L_G).
bool is_spectral_sparsifier(const WeightedGraph& g, const WeightedGraph& h, double eps);

// Minimum u-v cut for e = (u,v), via max-flow (Dinic).
int exact_edge_connectivity(const Graph& g, const EdgeKey& e);

// Pair connectivity without requiring (u,v) to be an edge.
int pair_connectivity(const Graph& g, VertexId u, VertexId v);

// Baseline decoder: for every ordered pair, point-queries the heavy-hitter
// sketch against potentials computed from the coarse sparsifier.
// quality_c is the coarse approximation factor.
std::set<EdgeKey> heavy_edges_brute_force(const HeavyHitterSketch& sk,
                                          const WeightedGraph& coarse, double beta,
                                          double quality_c);

// Recursive low-resistance-diameter decomposition (test-oracle quality;
// the sparse-cut step is a Fiedler-vector sweep cut).
std::vector<std::vector<VertexId>> decompose(const Graph& h, uint32_t d_min, double r_diam);

// Offline leverage-score sampling sparsifier (reference sampler).
WeightedGraph offline_sparsify(const WeightedGraph& g, double eps, double c_prime,
                               uint64_t seed);

// Connected components; component id per vertex.
std::vector<int> components(const Graph& g);
std::vector<int> weighted_components(const WeightedGraph& g);

// max over pairs within each set of exact effective resistance
ResistanceValue resistance_diameter(const WeightedGraph& g, const std::vector<VertexId>& set);

}  // namespace gsparse
