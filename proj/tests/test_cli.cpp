#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string bin() {
  const char* p = std::getenv("GSPARSE_BIN");
  REQUIRE(p != nullptr);
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

RunResult run(const std::string& args) {
  static int counter = 0;
  std::string o = "/tmp/gsparse_cli_" + std::to_string(counter) + ".out";
  std::string e = "/tmp/gsparse_cli_" + std::to_string(counter) + ".err";
  ++counter;
  int rc = std::system((bin() + " " + args + " >" + o + " 2>" + e).c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(o);
  r.err = slurp(e);
  return r;
}

const char* kTriangle = "3 3\n+ 0 1\n+ 1 2\n+ 0 2\n";

}  // namespace

TEST_CASE("triangle stream verifies and reports") {
  spit("/tmp/gsparse_tri.txt", kTriangle);
  auto r = run("/tmp/gsparse_tri.txt --variant n32 --verify");
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("verify=pass") != std::string::npos);
  CHECK(r.err.find("sketch_bytes=") != std::string::npos);
  CHECK(r.err.find("decode_ms=") != std::string::npos);
  CHECK(r.err.find("edges=3") != std::string::npos);
  // three unit-weight edges back
  std::istringstream is(r.out);
  int lines = 0;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 3);
}

TEST_CASE("empty stream produces an empty sparsifier") {
  spit("/tmp/gsparse_empty.txt", "5 0\n");
  auto r = run("/tmp/gsparse_empty.txt --variant n32 --verify");
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
}

TEST_CASE("comments and blank lines are ignored") {
  spit("/tmp/gsparse_comment.txt", "# header next\n3 3\n\n+ 0 1\n# middle\n+ 1 2\n+ 0 2\n");
  auto r = run("/tmp/gsparse_comment.txt --variant n32 --verify");
  CHECK(r.exit_code == 0);
}

TEST_CASE("stream violations exit 2 with the offending line") {
  spit("/tmp/gsparse_dup.txt", "4 3\n+ 0 1\n+ 0 1\n+ 1 2\n");
  auto r = run("/tmp/gsparse_dup.txt --variant n32");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);

  spit("/tmp/gsparse_absent.txt", "4 2\n+ 0 1\n- 2 3\n");
  auto r2 = run("/tmp/gsparse_absent.txt --variant n32");
  CHECK(r2.exit_code == 2);
  CHECK(r2.err.find("line 3") != std::string::npos);

  spit("/tmp/gsparse_badhdr.txt", "oops\n+ 0 1\n");
  CHECK(run("/tmp/gsparse_badhdr.txt --variant n32").exit_code == 2);

  spit("/tmp/gsparse_loop.txt", "4 1\n+ 2 2\n");
  CHECK(run("/tmp/gsparse_loop.txt --variant n32").exit_code == 2);

  spit("/tmp/gsparse_range.txt", "4 1\n+ 0 9\n");
  CHECK(run("/tmp/gsparse_range.txt --variant n32").exit_code == 2);
}

TEST_CASE("unknown variant and n mismatch are stream-level errors") {
  spit("/tmp/gsparse_tri2.txt", kTriangle);
  CHECK(run("/tmp/gsparse_tri2.txt --variant bogus").exit_code == 2);
  CHECK(run("/tmp/gsparse_tri2.txt --variant n32 --n 5").exit_code == 2);
  CHECK(run("/tmp/gsparse_tri2.txt --variant n32 --n 3").exit_code == 0);
}

TEST_CASE("same seed and stream give byte-identical output and checkpoint") {
  std::ostringstream s;
  s << "12 66\n";
  for (int v = 1; v < 12; ++v)
    for (int u = 0; u < v; ++u) s << "+ " << u << ' ' << v << "\n";
  spit("/tmp/gsparse_k12.txt", s.str());
  auto a = run("/tmp/gsparse_k12.txt --variant n32 --seed 5 --checkpoint /tmp/gsparse_ck_a");
  auto b = run("/tmp/gsparse_k12.txt --variant n32 --seed 5 --checkpoint /tmp/gsparse_ck_b");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
  CHECK(slurp("/tmp/gsparse_ck_a") == slurp("/tmp/gsparse_ck_b"));
  auto c = run("/tmp/gsparse_k12.txt --variant n32 --seed 6");
  CHECK(c.exit_code == 0);
}

TEST_CASE("reported sketch_bytes equals the checkpoint length") {
  spit("/tmp/gsparse_tri3.txt", kTriangle);
  auto r = run("/tmp/gsparse_tri3.txt --variant n32 --checkpoint /tmp/gsparse_ck_c");
  CHECK(r.exit_code == 0);
  auto pos = r.err.find("sketch_bytes=");
  REQUIRE(pos != std::string::npos);
  size_t reported = std::stoull(r.err.substr(pos + 13));
  CHECK(reported == slurp("/tmp/gsparse_ck_c").size());
}

TEST_CASE("output goes to --out sorted by edge index") {
  spit("/tmp/gsparse_tri4.txt", kTriangle);
  auto r = run("/tmp/gsparse_tri4.txt --variant n32 --out /tmp/gsparse_out.txt");
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  std::istringstream is(slurp("/tmp/gsparse_out.txt"));
  long prev = -1;
  unsigned u, v;
  double w;
  int count = 0;
  while (is >> u >> v >> w) {
    long idx = long(v) * (long(v) - 1) / 2 + u;
    CHECK(idx > prev);
    prev = idx;
    CHECK(u < v);
    CHECK(w > 0);
    ++count;
  }
  CHECK(count == 3);
}

TEST_CASE("built-in selftest passes") {
  auto r = run("--selftest");
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("selftest: all passed") != std::string::npos);
}
