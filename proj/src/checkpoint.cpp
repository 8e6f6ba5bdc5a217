#include "gsparse/checkpoint.hpp"

#include <cstring>

namespace gsparse {

namespace {

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

void put_f64(std::vector<uint8_t>& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u64(out, bits);
}

}  // namespace

std::vector<uint8_t> encode_checkpoint(const GlobalParams& p, uint64_t seed,
                                       const SketchStack& stack) {
  std::vector<uint8_t> out;
  const char magic[8] = {'G', 'S', 'P', 'C', 'K', '0', '0', '1'};
  out.insert(out.end(), magic, magic + 8);
  put_u64(out, p.n);
  put_u64(out, uint64_t(p.variant));
  put_u64(out, seed);
  put_u64(out, uint64_t(p.Lambda));
  put_f64(out, p.eps);
  put_f64(out, p.gamma_base);
  put_f64(out, p.beta);
  put_u64(out, p.d_threshold);
  put_u64(out, p.lambda_threshold);
  put_u64(out, p.q_jl);
  put_u64(out, stack.num_nodes());
  stack.serialize(out);
  return out;
}

}  // namespace gsparse
