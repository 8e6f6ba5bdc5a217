#include "gsparse/stream.hpp"

#include <sstream>
#include <string>

namespace gsparse {

namespace {

bool blank_or_comment(const std::string& s) {
  for (char c : s) {
    if (c == '#') return true;
    if (!isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

StreamData parse_stream(std::istream& in) {
  StreamData data;
  std::string raw;
  long line_no = 0;
  bool have_header = false;

  while (std::getline(in, raw)) {
    ++line_no;
    if (blank_or_comment(raw)) continue;
    std::istringstream ls(raw);
    if (!have_header) {
      long long n = -1, count = -1;
      if (!(ls >> n >> count) || n < 0 || count < 0)
        throw StreamViolation("malformed header, expected '<n> <count>'", line_no);
      std::string extra;
      if (ls >> extra) throw StreamViolation("trailing tokens after header", line_no);
      data.n = uint32_t(n);
      data.declared_count = uint64_t(count);
      have_header = true;
      continue;
    }
    std::string op;
    long long u = -1, v = -1;
    if (!(ls >> op >> u >> v) || (op != "+" && op != "-"))
      throw StreamViolation("malformed update, expected '+ u v' or '- u v'", line_no);
    std::string extra;
    if (ls >> extra) throw StreamViolation("trailing tokens after update", line_no);
    if (u < 0 || v < 0 || u >= (long long)data.n || v >= (long long)data.n)
      throw StreamViolation("vertex id out of range", line_no);
    if (u == v) throw StreamViolation("self loop", line_no);
    data.updates.push_back(StreamUpdate{op == "+", VertexId(u), VertexId(v), line_no});
  }
  if (!have_header) throw StreamViolation("missing header line", line_no);
  return data;
}

}  // namespace gsparse
