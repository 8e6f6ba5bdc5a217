#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gsparse/errors.hpp"
#include "gsparse/hashing.hpp"

namespace gsparse {

using BitString = std::vector<uint8_t>;  // one byte per bit, values 0/1

// Locally computable extractor substitute: y (and the output index) select
// nsel width-w blocks of x; a k-wise inner hash of each block's bits is
// XOR-folded into the output bit. Deterministic, and each output bit touches
// only nsel*w positions of x. Not claimed to meet an information-theoretic
// extraction guarantee; see README.
struct ExtractorSpec {
  uint64_t N = 0;     // input bits
  uint32_t t = 16;    // seed bits (<= 64)
  uint64_t m = 0;     // output bits
  uint32_t block_w = 4;
  uint32_t nsel = 4;
};

using BitReader = std::function<int(uint64_t)>;

int extract_bit(const ExtractorSpec& spec, const BitReader& x, uint64_t y_bits, uint64_t j);
BitString extract(const ExtractorSpec& spec, const BitString& x, const BitString& y);

uint64_t pack_bits(const BitString& bits, uint64_t offset, uint32_t count);

struct PrgParams {
  uint64_t S = 1 << 10;  // space parameter
  double q = 1.8;        // output length exponent: R = ceil(S^q) bits
  uint32_t t = 16;
  uint32_t block_w = 4;
  uint32_t nsel = 4;
  int omega_override = -1;  // chain depth; default ceil(q/0.9)
};

struct NzLevel {
  ExtractorSpec spec;
  uint64_t out_bits = 0;   // R_i: bits this level produces
  uint64_t blocks = 0;     // ceil(R_i / m)
  uint64_t need_bits = 0;  // N + blocks*t consumed from the level above
};

// Multilevel Nisan-Zuckerman style generator. Level 0 is the consumer-facing
// output; level omega reads the true seed. Each level's X is the prefix of the
// level above's output and its per-block seeds Y_j follow contiguously.
class PrgChain {
 public:
  PrgChain(const PrgParams& params, uint64_t seed);
  PrgChain(const PrgParams& params, int omega, BitString seed_bits);

  int omega() const { return omega_; }
  const std::vector<NzLevel>& levels() const { return levels_; }
  uint64_t output_bits() const { return levels_.front().out_bits; }
  uint64_t seed_bits_len() const { return seed_len_; }

  // random access; counter (if given) accumulates true-seed bit touches
  int bit(uint64_t index, uint64_t* seed_touches = nullptr) const;

  // memoized sequential expansion of the level-0 output prefix
  const BitString& expand(uint64_t nbits);

  // full materialized output of an intermediate level (1..omega+1)
  const BitString& level_bits(int level);

  // 64 expanded output bits starting at bit 64*i (little-endian)
  uint64_t word(uint64_t i);

 private:
  void build(const PrgParams& params, int omega);
  int raw_bit(int level, uint64_t index, uint64_t* seed_touches) const;

  std::vector<NzLevel> levels_;
  int omega_ = 0;
  uint64_t seed_ = 0;
  uint64_t seed_len_ = 0;
  BitString explicit_seed_;   // optional: directly supplied seed bits
  bool has_explicit_ = false;
  std::vector<BitString> cache_;  // cache_[i] = materialized level i (1..omega+1)
  BitString out_cache_;           // level-0 prefix
};

enum class HashKind { Pairwise, KWise };

// Limited-independence family whose coefficients are read from PrgChain output.
class HashFamily {
 public:
  HashFamily() = default;
  HashFamily(PrgChain& chain, uint64_t word_offset, HashKind kind, unsigned k = 2);

  uint64_t eval(uint64_t key) const { return hash_.eval(key); }
  bool bernoulli(uint64_t key, double p) const { return hash_.bernoulli(key, p); }
  unsigned k() const { return hash_.k(); }

 private:
  KWiseHash hash_;
};

}  // namespace gsparse
