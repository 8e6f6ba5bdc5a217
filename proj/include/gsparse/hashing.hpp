#pragma once

#include <cstdint>
#include <vector>

namespace gsparse {

// Mersenne prime field 2^61 - 1, enough headroom for exact modular
// arithmetic with __int128 and collision-free fingerprints at our scales.
inline constexpr uint64_t kMersenne61 = (uint64_t(1) << 61) - 1;

inline uint64_t mod61(unsigned __int128 x) {
  uint64_t lo = uint64_t(x & kMersenne61);
  uint64_t hi = uint64_t(x >> 61);
  uint64_t r = lo + hi;
  if (r >= kMersenne61) r -= kMersenne61;
  // hi can itself exceed the modulus for products of large operands
  while (r >= kMersenne61) r -= kMersenne61;
  return r;
}

inline uint64_t mulmod61(uint64_t a, uint64_t b) {
  return mod61((unsigned __int128)a * b);
}

inline uint64_t addmod61(uint64_t a, uint64_t b) {
  uint64_t r = a + b;
  if (r >= kMersenne61) r -= kMersenne61;
  return r;
}

inline uint64_t powmod61(uint64_t base, uint64_t exp) {
  uint64_t r = 1;
  base %= kMersenne61;
  while (exp) {
    if (exp & 1) r = mulmod61(r, base);
    base = mulmod61(base, base);
    exp >>= 1;
  }
  return r;
}

// Allocation-free k-wise polynomial hash with coefficients derived from
// `seed`; equivalent to KWiseHash(seed, k).eval(key) up to coefficient choice.
inline uint64_t poly_hash(uint64_t seed, unsigned k, uint64_t key);

// splitmix64 finalizer; used to derive independent sub-seeds.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t mix64(uint64_t a, uint64_t b) { return mix64(a ^ mix64(b)); }
inline uint64_t mix64(uint64_t a, uint64_t b, uint64_t c) {
  return mix64(a ^ mix64(b ^ mix64(c)));
}

inline uint64_t poly_hash(uint64_t seed, unsigned k, uint64_t key) {
  uint64_t x = key % kMersenne61;
  uint64_t acc = 0;
  for (unsigned i = k; i-- > 0;) {
    acc = addmod61(mulmod61(acc, x), mix64(seed, 0x70517ULL + i) % kMersenne61);
  }
  return acc;
}

inline bool poly_bernoulli(uint64_t seed, unsigned k, uint64_t key, double p) {
  return double(poly_hash(seed, k, key)) < p * double(kMersenne61);
}

// k-wise independent polynomial hash over GF(2^61 - 1).
class KWiseHash {
 public:
  KWiseHash() = default;
  KWiseHash(uint64_t seed, unsigned k) {
    coeffs_.resize(k ? k : 1);
    for (unsigned i = 0; i < coeffs_.size(); ++i) {
      // rejection-free: mix output reduced mod p is close enough to uniform
      coeffs_[i] = mix64(seed, 0x5eedc0ffeeULL + i) % kMersenne61;
    }
    if (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.back() = 1;
  }

  explicit KWiseHash(std::vector<uint64_t> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(1);
    for (auto& c : coeffs_) c %= kMersenne61;
    if (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.back() = 1;
  }

  // value uniform in [0, 2^61 - 1)
  uint64_t eval(uint64_t key) const {
    uint64_t x = key % kMersenne61;
    uint64_t acc = 0;
    for (size_t i = coeffs_.size(); i-- > 0;) {
      acc = addmod61(mulmod61(acc, x), coeffs_[i]);
    }
    return acc;
  }

  // Bernoulli(p) wrapper; marginal within 1/|field| of p.
  bool bernoulli(uint64_t key, double p) const {
    return double(eval(key)) < p * double(kMersenne61);
  }

  double uniform(uint64_t key) const {
    return double(eval(key)) / double(kMersenne61);
  }

  unsigned k() const { return unsigned(coeffs_.size()); }

 private:
  std::vector<uint64_t> coeffs_;
};

}  // namespace gsparse
