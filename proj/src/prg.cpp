#include "gsparse/prg.hpp"

#include <cmath>

namespace gsparse {

uint64_t pack_bits(const BitString& bits, uint64_t offset, uint32_t count) {
  uint64_t out = 0;
  for (uint32_t i = 0; i < count; ++i)
    if (bits[offset + i]) out |= uint64_t(1) << i;
  return out;
}

int extract_bit(const ExtractorSpec& spec, const BitReader& x, uint64_t y_bits, uint64_t j) {
  const uint64_t nb = spec.N / spec.block_w ? spec.N / spec.block_w : 1;
  uint64_t base = mix64(y_bits, 0xE7ULL, j);
  KWiseHash sel(mix64(base, 1), 4);
  uint64_t acc = mix64(base, 2);  // y/index fold
  for (uint32_t c = 0; c < spec.nsel; ++c) {
    uint64_t blk = sel.eval(c) % nb;
    KWiseHash inner(mix64(base, 3 + c), 8);
    for (uint32_t b = 0; b < spec.block_w; ++b) {
      uint64_t pos = (blk * spec.block_w + b) % spec.N;
      if (x(pos)) acc ^= inner.eval(b);
    }
  }
  return int(acc & 1);
}

BitString extract(const ExtractorSpec& spec, const BitString& x, const BitString& y) {
  if (x.size() != spec.N || y.size() != spec.t)
    throw LengthMismatch("extractor input lengths do not match spec");
  uint64_t y_bits = pack_bits(y, 0, spec.t);
  BitString out(spec.m);
  BitReader rd = [&](uint64_t pos) { return int(x[pos]); };
  for (uint64_t j = 0; j < spec.m; ++j) out[j] = uint8_t(extract_bit(spec, rd, y_bits, j));
  return out;
}

void PrgChain::build(const PrgParams& params, int omega) {
  omega_ = omega;
  levels_.resize(omega + 1);
  uint64_t R = uint64_t(std::ceil(std::pow(double(params.S), params.q)));
  for (int i = 0; i <= omega; ++i) {
    uint64_t Si = params.S;
    for (int j = 0; j < i; ++j) Si *= 9;
    NzLevel& lv = levels_[i];
    lv.spec.N = 8 * Si;
    lv.spec.t = params.t;
    lv.spec.m = Si;
    lv.spec.block_w = params.block_w;
    lv.spec.nsel = params.nsel;
    lv.out_bits = R;
    lv.blocks = (R + Si - 1) / Si;
    lv.need_bits = lv.spec.N + lv.blocks * params.t;
    R = lv.need_bits;
  }
  seed_len_ = levels_[omega].need_bits;
  cache_.assign(omega + 2, BitString{});
}

PrgChain::PrgChain(const PrgParams& params, uint64_t seed) : seed_(seed) {
  int omega = params.omega_override >= 0 ? params.omega_override
                                         : int(std::ceil(params.q / 0.9));
  build(params, omega);
}

PrgChain::PrgChain(const PrgParams& params, int omega, BitString seed_bits)
    : explicit_seed_(std::move(seed_bits)), has_explicit_(true) {
  build(params, omega);
  if (explicit_seed_.size() < seed_len_)
    throw LengthMismatch("explicit seed shorter than chain requirement");
}

int PrgChain::raw_bit(int level, uint64_t index, uint64_t* seed_touches) const {
  if (level == omega_ + 1) {
    if (seed_touches) ++*seed_touches;
    if (has_explicit_) return int(explicit_seed_[index]);
    return int((mix64(seed_, index >> 6) >> (index & 63)) & 1);
  }
  const NzLevel& lv = levels_[level];
  uint64_t block = index / lv.spec.m;
  uint64_t off = index % lv.spec.m;
  uint64_t y_bits = 0;
  uint64_t y_base = lv.spec.N + block * lv.spec.t;
  for (uint32_t i = 0; i < lv.spec.t; ++i)
    if (raw_bit(level + 1, y_base + i, seed_touches)) y_bits |= uint64_t(1) << i;
  BitReader rd = [&](uint64_t pos) { return raw_bit(level + 1, pos, seed_touches); };
  return extract_bit(lv.spec, rd, y_bits, off);
}

int PrgChain::bit(uint64_t index, uint64_t* seed_touches) const {
  if (index >= output_bits()) throw IndexOutOfRange("prg index beyond output length");
  return raw_bit(0, index, seed_touches);
}

const BitString& PrgChain::level_bits(int level) {
  BitString& c = cache_[level];
  uint64_t need = level == omega_ + 1 ? seed_len_ : levels_[level].need_bits;
  // need_bits of level i is what level i-1 consumes; cache_[i] holds level i's
  // own output, whose length is levels_[i-1].need_bits
  if (level >= 1 && level <= omega_) need = levels_[level - 1].need_bits;
  if (c.size() >= need) return c;
  c.resize(need);
  if (level == omega_ + 1) {
    for (uint64_t i = 0; i < need; ++i)
      c[i] = has_explicit_ ? explicit_seed_[i]
                           : uint8_t((mix64(seed_, i >> 6) >> (i & 63)) & 1);
    return c;
  }
  const BitString& up = level_bits(level + 1);
  const NzLevel& lv = levels_[level];
  BitReader rd = [&](uint64_t pos) { return int(up[pos]); };
  for (uint64_t j = 0; j < need; ++j) {
    uint64_t block = j / lv.spec.m;
    uint64_t y_bits = pack_bits(up, lv.spec.N + block * lv.spec.t, lv.spec.t);
    c[j] = uint8_t(extract_bit(lv.spec, rd, y_bits, j % lv.spec.m));
  }
  return c;
}

const BitString& PrgChain::expand(uint64_t nbits) {
  if (nbits > output_bits()) throw IndexOutOfRange("expansion beyond output length");
  if (out_cache_.size() >= nbits) return out_cache_;
  const BitString& up = level_bits(1);
  const NzLevel& lv = levels_[0];
  uint64_t old = out_cache_.size();
  out_cache_.resize(nbits);
  BitReader rd = [&](uint64_t pos) { return int(up[pos]); };
  for (uint64_t j = old; j < nbits; ++j) {
    uint64_t block = j / lv.spec.m;
    uint64_t y_bits = pack_bits(up, lv.spec.N + block * lv.spec.t, lv.spec.t);
    out_cache_[j] = uint8_t(extract_bit(lv.spec, rd, y_bits, j % lv.spec.m));
  }
  return out_cache_;
}

uint64_t PrgChain::word(uint64_t i) {
  const BitString& bits = expand((i + 1) * 64);
  return pack_bits(bits, i * 64, 64);
}

HashFamily::HashFamily(PrgChain& chain, uint64_t word_offset, HashKind kind, unsigned k) {
  unsigned deg = kind == HashKind::Pairwise ? 2 : (k ? k : 2);
  std::vector<uint64_t> coeffs(deg);
  for (unsigned i = 0; i < deg; ++i) coeffs[i] = chain.word(word_offset + i);
  hash_ = KWiseHash(std::move(coeffs));
}

}  // namespace gsparse
