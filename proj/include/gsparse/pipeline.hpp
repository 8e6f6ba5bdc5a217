#pragma once

#include <memory>
#include <ostream>
#include <string>

#include "gsparse/decode.hpp"
#include "gsparse/graph.hpp"
#include "gsparse/stream.hpp"

namespace gsparse {

struct RunConfig {
  uint32_t n = 0;
  double eps = 0.5;
  double gamma_base = 0;  // 0 = default schedule
  Variant variant = Variant::BallCarve;
  uint64_t seed = 1;
  uint32_t q_jl = 0;
  uint32_t d_threshold = 0;
  uint32_t lambda_threshold = 0;
  double beta = 0;
  double c_prime = 1.0;
  bool verify = false;
};

struct RunReport {
  uint64_t sketch_bytes = 0;
  double decode_ms = 0;
  size_t edge_count = 0;
  bool verify_ran = false;
  bool verified = false;
};

// Single-pass sketch maintenance plus decode for one configured run.
class Engine {
 public:
  explicit Engine(const RunConfig& cfg);

  const GlobalParams& params() const { return params_; }
  const std::vector<TreeNode>& tree() const { return tree_; }
  SketchStack& stack() { return *stack_; }
  const Graph& exact() const { return exact_; }

  // validates multiplicity against the exact shadow graph; throws
  // StreamViolation (line number attached by the caller)
  void apply(bool insert, VertexId u, VertexId v);

  WeightedGraph decode();

  std::vector<uint8_t> checkpoint_bytes() const;

 private:
  RunConfig cfg_;
  GlobalParams params_;
  std::vector<TreeNode> tree_;
  std::unique_ptr<SketchStack> stack_;
  Graph exact_;
  uint64_t sketch_seed_ = 0;
};

// feed a parsed stream through the engine, then decode; fills the report
WeightedGraph run_stream(Engine& engine, const StreamData& stream, RunReport* report);

// "u v w" lines ordered by linear edge index
void write_sparsifier(std::ostream& out, const WeightedGraph& g);

}  // namespace gsparse
