#pragma once

#include <optional>
#include <set>
#include <vector>

#include "gsparse/graph.hpp"
#include "gsparse/resistance.hpp"
#include "gsparse/sketch.hpp"

namespace gsparse {

enum class Variant { Brute, N32, BallCarve };

enum class NodeKind { Sparsify, HeavyEdges };

struct TreeNode {
  NodeKind kind = NodeKind::Sparsify;
  int i = 0;    // sampling level
  int ell = 0;  // regularization level
  int parent = -1;
  double rate = 1.0;  // sampling rate relative to parent
  std::vector<int> children;
};

struct GlobalParams {
  uint32_t n = 0;
  Variant variant = Variant::BallCarve;
  double eps = 0.5;
  double gamma_base = 0;  // the coarse factor; n32 forces 2
  double c_prime = 1.0;
  double lambda_u = 0;
  double lambda_l = 0;
  int Lambda = 1;
  uint32_t d_threshold = 0;
  uint32_t lambda_threshold = 0;
  double beta = 0;   // default: 1/(500 c' eps^-2 gamma_base^3 log2 n)
  uint32_t q_jl = 0;

  // resolves all defaults; overrides of 0 pick the formula value clamped to n/4
  static GlobalParams make(uint32_t n, double eps, double gamma_base, Variant v,
                           uint32_t d_override = 0, uint32_t lambda_override = 0,
                           double beta_override = 0, uint32_t qjl_override = 0,
                           double c_prime = 1.0);

  double gamma_of(int ell) const;   // lambda_u / gamma_base^ell
  double beta_value() const { return beta; }
  double coarse_quality() const;    // gamma_base*(1+eps)/(1-eps)
  double eta_of(double quality) const;  // 0.5*sqrt(beta/(3*quality))
};

std::vector<double> gamma_schedule(const GlobalParams& p);  // ell = 0..Lambda

// recursion tree for the ballcarve variant; root is (Sparsify, 0, Lambda+1)
std::vector<TreeNode> build_tree(const GlobalParams& p);

// stack node specs matching the variant's sketch layout; for BallCarve the
// stack indices coincide with tree indices, otherwise one node per sampling
// level j = 0..Lambda at rate gamma_base^-j
std::vector<StackNodeSpec> stack_layout(const GlobalParams& p,
                                        const std::vector<TreeNode>& tree);

struct Partitioning {
  std::vector<std::vector<VertexId>> parts;
  std::vector<VertexId> centers;
  std::vector<VertexId> leftover;  // not part of the contract; kept for tests
};

// Removes `removed` from the node's own sketches, splits into components via
// the spanning-forest sketch, then greedily carves embedded-resistance balls
// of radius r around centers in ascending vertex order. Components whose
// embedded radius from the scanned center is <= r/2 are skipped whole.
Partitioning ball_carving(SketchStack& stack, size_t node, const std::set<EdgeKey>& removed,
                          double r, const ResistanceEmbedding& emb);

// mutable per-run state shared by the recursive decoders
struct DecodeContext {
  GlobalParams params;
  std::vector<TreeNode> tree;
  SketchStack* stack = nullptr;
  uint64_t seed = 0;
  std::vector<std::optional<WeightedGraph>> sparsify_cache;
};

// Algorithm: peel low-degree vertices exactly, recurse for a coarse
// sparsifier, collect low-connectivity edges, ball-carve, then decode heavy
// hitters of potential vectors per partition. Returns a superset of the
// beta-heavy edges of the node's graph (w.h.p.).
std::set<EdgeKey> heavy_edges(DecodeContext& ctx, int node, double beta);

// recursive leverage-score reweighting; returns B^T W B + gamma I as a graph
WeightedGraph sparsify(DecodeContext& ctx, int node);

// simpler pipeline: per-level peel + low-connectivity edges, then the
// regularization chain with the same reweighting rule
WeightedGraph sparsify_n32(SketchStack& stack, const GlobalParams& p, uint64_t seed);

// baseline: per-level brute-force heavy-edge decoding from the heavy-hitter
// sketches, same chain and reweighting
WeightedGraph sparsify_brute(SketchStack& stack, const GlobalParams& p, uint64_t seed);

WeightedGraph scale_weighted(const WeightedGraph& g, double factor);

}  // namespace gsparse
