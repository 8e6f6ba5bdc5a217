#pragma once

#include <vector>

#include "gsparse/decode.hpp"
#include "gsparse/sketch.hpp"

namespace gsparse {

// Deterministic binary snapshot of the full sketch state; identical
// (seed, config, stream-as-multiset) runs produce byte-identical blobs.
std::vector<uint8_t> encode_checkpoint(const GlobalParams& p, uint64_t seed,
                                       const SketchStack& stack);

}  // namespace gsparse
