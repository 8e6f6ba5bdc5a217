#include "gsparse/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "gsparse/checkpoint.hpp"
#include "gsparse/oracles.hpp"
#include "gsparse/prg.hpp"

namespace gsparse {

namespace {

uint32_t ceil_pow2(uint64_t x) {
  uint32_t r = 0;
  while ((uint64_t(1) << r) < x) ++r;
  return r;
}

BankConfig bank_for(const GlobalParams& p) {
  BankConfig bank;
  bank.sf = SfConfig::defaults(p.n, num_pairs(p.n));
  bank.sr_capacity = std::max<uint32_t>(p.d_threshold, 8);
  bank.flc_lambda = std::max<uint32_t>(p.lambda_threshold, 1);
  bank.hh.reps = 3;
  bank.hh.dyadic = false;
  uint64_t exact = uint64_t(1) << ceil_pow2(std::max<uint64_t>(num_pairs(p.n), 2));
  bank.hh.buckets = uint32_t(std::min<uint64_t>(exact, 2048));
  return bank;
}

}  // namespace

Engine::Engine(const RunConfig& cfg)
    : cfg_(cfg),
      params_(GlobalParams::make(cfg.n, cfg.eps, cfg.gamma_base, cfg.variant,
                                 cfg.d_threshold, cfg.lambda_threshold, cfg.beta, cfg.q_jl,
                                 cfg.c_prime)),
      exact_(cfg.n) {
  if (params_.variant == Variant::BallCarve) tree_ = build_tree(params_);
  // all sketch randomness is rooted in the expander-chain generator's output,
  // so the sketches are a fixed linear map of the update stream
  PrgChain chain(PrgParams{}, cfg.seed);
  sketch_seed_ = mix64(chain.word(0), chain.word(1), chain.word(2));
  stack_ = std::make_unique<SketchStack>(cfg.n, stack_layout(params_, tree_),
                                         bank_for(params_), sketch_seed_);
}

void Engine::apply(bool insert, VertexId u, VertexId v) {
  EdgeKey e = make_edge(u, v);
  if (insert)
    exact_.insert(e);  // throws on duplicate
  else
    exact_.erase(e);  // throws on absent
  stack_->apply_update(EdgeUpdate{e, insert ? +1 : -1});
}

WeightedGraph Engine::decode() {
  switch (params_.variant) {
    case Variant::BallCarve: {
      DecodeContext ctx;
      ctx.params = params_;
      ctx.tree = tree_;
      ctx.stack = stack_.get();
      ctx.seed = mix64(sketch_seed_, 0xDECULL);
      return sparsify(ctx, 0);
    }
    case Variant::N32:
      return sparsify_n32(*stack_, params_, mix64(sketch_seed_, 0xDECULL));
    case Variant::Brute:
      return sparsify_brute(*stack_, params_, mix64(sketch_seed_, 0xDECULL));
  }
  throw DecodeFailure("unknown variant");
}

std::vector<uint8_t> Engine::checkpoint_bytes() const {
  return encode_checkpoint(params_, cfg_.seed, *stack_);
}

WeightedGraph run_stream(Engine& engine, const StreamData& stream, RunReport* report) {
  for (const auto& upd : stream.updates) {
    try {
      engine.apply(upd.insert, upd.u, upd.v);
    } catch (const StreamViolation& e) {
      throw StreamViolation(e.what(), upd.line);
    }
  }
  if (report) report->sketch_bytes = engine.checkpoint_bytes().size();

  auto t0 = std::chrono::steady_clock::now();
  WeightedGraph out = engine.decode();
  auto t1 = std::chrono::steady_clock::now();

  if (report) {
    report->decode_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    report->edge_count = out.edges.size();
  }
  return out;
}

void write_sparsifier(std::ostream& out, const WeightedGraph& g) {
  out.precision(17);
  for (const auto& [idx, w] : g.edges) {
    EdgeKey e = edge_from_index(idx);
    out << e.u << ' ' << e.v << ' ' << w << '\n';
  }
}

}  // namespace gsparse
