#pragma once

#include <istream>
#include <vector>

#include "gsparse/graph.hpp"

namespace gsparse {

struct StreamUpdate {
  bool insert = true;
  VertexId u = 0, v = 0;
  long line = -1;
};

struct StreamData {
  uint32_t n = 0;
  uint64_t declared_count = 0;
  std::vector<StreamUpdate> updates;
};

// Text format: header line "<n> <count>", then "+ u v" / "- u v" lines,
// 0-based vertex ids; '#' starts a comment line; blank lines ignored.
// Throws StreamViolation carrying the offending line number.
StreamData parse_stream(std::istream& in);

}  // namespace gsparse
