#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "gsparse/graph.hpp"
#include "gsparse/prg.hpp"

namespace gsparse {

struct EdgeUpdate {
  EdgeKey e;
  int delta = +1;  // +1 insert, -1 delete
};

// ---------------------------------------------------------------------------
// l0-sampler cell: signed count, index-weighted sum, and a fingerprint over
// GF(2^61-1) used both for the one-sparse test and the zero test.
struct SketchCell {
  int64_t count = 0;
  int64_t index_sum = 0;
  uint64_t fp = 0;

  bool operator==(const SketchCell& o) const {
    return count == o.count && index_sum == o.index_sum && fp == o.fp;
  }
};

struct SfConfig {
  uint32_t rounds = 0;  // fresh sampler copies, one per Boruvka round
  uint32_t levels = 0;  // geometric subsampling levels
  uint32_t reps = 2;    // samplers per (round, level)

  static SfConfig defaults(uint32_t n, uint64_t universe);
};

// AGM-style spanning forest sketch: per-vertex l0-sampler banks over the
// edge-indicator vector, linear in updates, decoded by Boruvka rounds.
class SpanningForestSketch {
 public:
  SpanningForestSketch() = default;
  SpanningForestSketch(uint32_t n, SfConfig cfg, uint64_t seed);

  void update(const EdgeKey& e, int delta);
  std::set<EdgeKey> spanning_forest() const;  // throws DecodeFailure
  bool is_zero() const;
  uint32_t n() const { return n_; }

  void serialize(std::vector<uint8_t>& out) const;

 private:
  const SketchCell* vertex_cells(VertexId v) const;
  uint32_t cell_count() const { return cfg_.rounds * cfg_.levels * cfg_.reps; }
  int level_of(uint64_t idx, uint32_t round, uint32_t rep) const;
  uint64_t fp_base(uint32_t round, uint32_t rep) const;

  uint32_t n_ = 0;
  uint64_t universe_ = 0;
  SfConfig cfg_;
  uint64_t seed_ = 0;
  std::vector<std::vector<SketchCell>> cells_;  // lazily sized per vertex
};

// Exact k-sparse recovery of per-vertex incidence columns (IBLT-style peeling).
class SparseRecoverySketch {
 public:
  SparseRecoverySketch() = default;
  SparseRecoverySketch(uint32_t n, uint32_t capacity, uint64_t seed, uint32_t tables = 4);

  void update(const EdgeKey& e, int delta);
  // exact neighbor set of v; caller must ensure deg(v) <= capacity
  std::set<EdgeKey> recover(VertexId v) const;  // throws DecodeFailure
  uint32_t capacity() const { return capacity_; }

  void serialize(std::vector<uint8_t>& out) const;

 private:
  uint32_t n_ = 0;
  uint32_t capacity_ = 0;
  uint32_t tables_ = 4;
  uint32_t buckets_ = 0;
  uint64_t seed_ = 0;
  std::vector<std::vector<SketchCell>> cells_;  // per vertex, lazily sized
};

struct HhConfig {
  uint32_t buckets = 256;  // power of two
  uint32_t reps = 3;
  bool dyadic = true;  // keep internal dyadic levels for fast decode

  static HhConfig for_eta(double eta, uint64_t universe);
};

// l2 heavy hitters over the C(n,2)-dim edge vector, maintained as S*B so it
// can be right-multiplied by a potential vector. Dyadic CountSketch layout:
// exact top level with `buckets` nodes, hashed levels below it down to leaves.
class HeavyHitterSketch {
 public:
  HeavyHitterSketch() = default;
  HeavyHitterSketch(uint32_t n, HhConfig cfg, uint64_t seed);

  void update(const EdgeKey& e, int delta);

  // all edges whose entry in B*phi is estimated >= eta * ||B*phi||_2
  std::set<EdgeKey> decode(const Eigen::VectorXd& phi, double eta) const;

  // point-query support (used by the brute-force baseline)
  const Eigen::MatrixXd& leaf_rows() const { return levels_.back().rows; }
  double norm_estimate(const Eigen::VectorXd& leaf_y) const;
  double point_estimate(const Eigen::VectorXd& leaf_y, uint64_t idx) const;

  void serialize(std::vector<uint8_t>& out) const;

 private:
  struct Level {
    uint32_t depth = 0;  // tree level; nodes are idx >> (leaf_depth - depth)
    bool hashed = false;
    uint32_t buckets = 0;
    uint32_t reps = 1;
    Eigen::MatrixXd rows;  // (reps*buckets) x n, integer-valued
  };

  int sign(uint32_t rep, uint64_t idx) const;
  uint32_t bucket(uint32_t level_pos, uint32_t rep, uint64_t node) const;

  uint32_t n_ = 0;
  uint64_t universe_ = 0;
  uint32_t leaf_depth_ = 0;
  HhConfig cfg_;
  uint64_t seed_ = 0;
  std::vector<Level> levels_;
};

// ---------------------------------------------------------------------------
// Stack of sketches indexed by recursion-tree (or per-level) nodes.

struct StackNodeSpec {
  int parent = -1;          // parent stack node; -1 for roots
  double rate = 1.0;        // sampling rate relative to parent
  bool wants_forest = false;
  bool wants_flc = false;
  bool wants_recovery = false;
  bool wants_heavy = false;
};

struct BankConfig {
  SfConfig sf;
  uint32_t sr_capacity = 8;
  uint32_t flc_lambda = 2;   // lambda the FLC bank is built for
  uint32_t flc_reps = 0;     // 0: min(200*lambda*ceil(log2 n), flc_rep_cap)
  uint32_t flc_rep_cap = 1200;
  HhConfig hh;
  bool debug_shadow = false;  // maintain exact edge sets, validate updates
};

class SketchStack {
 public:
  SketchStack(uint32_t n, std::vector<StackNodeSpec> nodes, const BankConfig& cfg,
              uint64_t seed);

  uint32_t n() const { return n_; }
  size_t num_nodes() const { return specs_.size(); }
  const BankConfig& config() const { return cfg_; }

  bool member(size_t node, const EdgeKey& e) const;  // composed sampling
  void apply_update(const EdgeUpdate& upd);

  // subtract edges from every sketch in the subtree rooted at `node`
  void subtract_edges(size_t node, const std::set<EdgeKey>& edges);
  // subtract only from node's own sketches (ball-carving working view)
  void subtract_edges_local(size_t node, const std::set<EdgeKey>& edges);

  int64_t degree(size_t node, VertexId v) const { return degrees_[node][v]; }
  const std::vector<int64_t>& degrees(size_t node) const { return degrees_[node]; }
  int64_t edge_count(size_t node) const { return edge_count_[node]; }

  std::set<EdgeKey> spanning_forest(size_t node) const;
  std::set<EdgeKey> find_low_connectivity_edges(size_t node, uint32_t lambda) const;
  std::set<EdgeKey> sparse_recover_neighbors(size_t node, VertexId v, uint32_t k) const;
  std::set<EdgeKey> heavy_hitter_decode(size_t node, const Eigen::VectorXd& phi,
                                        double eta) const;
  const HeavyHitterSketch& heavy(size_t node) const { return heavy_[node]; }

  const std::set<uint64_t>& shadow_edges(size_t node) const { return shadow_[node]; }

  void serialize(std::vector<uint8_t>& out) const;
  bool state_equals(const SketchStack& other) const;

 private:
  void apply_at(size_t node, const EdgeKey& e, int delta);
  void apply_rec(size_t node, const EdgeKey& e, int delta);

  uint32_t n_ = 0;
  std::vector<StackNodeSpec> specs_;
  BankConfig cfg_;
  uint64_t seed_ = 0;
  std::vector<KWiseHash> member_hash_;
  std::vector<std::vector<int>> children_;
  std::vector<SpanningForestSketch> forest_;
  std::vector<std::vector<SpanningForestSketch>> flc_;
  std::vector<std::vector<KWiseHash>> flc_salt_;
  std::vector<SparseRecoverySketch> recovery_;
  std::vector<HeavyHitterSketch> heavy_;
  std::vector<std::vector<int64_t>> degrees_;
  std::vector<int64_t> edge_count_;
  std::vector<std::set<uint64_t>> shadow_;  // debug only
};

uint32_t flc_rep_count(uint32_t n, uint32_t lambda, uint32_t cap);

}  // namespace gsparse
