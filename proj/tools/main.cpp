#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "gsparse/oracles.hpp"
#include "gsparse/pipeline.hpp"

using namespace gsparse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitStream = 2;
constexpr int kExitDecode = 3;
constexpr int kExitVerify = 4;

Variant parse_variant(const std::string& s) {
  if (s == "brute") return Variant::Brute;
  if (s == "n32") return Variant::N32;
  if (s == "ballcarve") return Variant::BallCarve;
  throw CLI::ValidationError("--variant", "expected brute, n32 or ballcarve");
}

std::string render_output(const WeightedGraph& g) {
  std::ostringstream os;
  write_sparsifier(os, g);
  return os.str();
}

int run_once(const RunConfig& cfg, const StreamData& stream, const std::string& out_path,
             const std::string& checkpoint_path, bool quiet = false) {
  Engine engine(cfg);
  RunReport report;
  WeightedGraph sparsifier;
  try {
    sparsifier = run_stream(engine, stream, &report);
  } catch (const StreamViolation& e) {
    std::cerr << "stream error at line " << e.line << ": " << e.what() << "\n";
    return kExitStream;
  } catch (const std::runtime_error& e) {
    std::cerr << "decode error: " << e.what() << "\n";
    return kExitDecode;
  }

  if (!checkpoint_path.empty()) {
    auto bytes = engine.checkpoint_bytes();
    std::ofstream f(checkpoint_path, std::ios::binary);
    f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!f) {
      std::cerr << "cannot write checkpoint " << checkpoint_path << "\n";
      return kExitDecode;
    }
  }

  std::string text = render_output(sparsifier);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    f << text;
    if (!f) {
      std::cerr << "cannot write " << out_path << "\n";
      return kExitDecode;
    }
  }

  bool ok = true;
  if (cfg.verify) {
    report.verify_ran = true;
    report.verified =
        is_spectral_sparsifier(WeightedGraph::from_graph(engine.exact()), sparsifier, cfg.eps);
    ok = report.verified;
  }
  if (!quiet) {
    std::cerr << "sketch_bytes=" << report.sketch_bytes << " decode_ms=" << report.decode_ms
              << " edges=" << report.edge_count;
    if (report.verify_ran) std::cerr << " verify=" << (report.verified ? "pass" : "fail");
    std::cerr << "\n";
  }
  return ok ? kExitOk : kExitVerify;
}

StreamData make_stream(uint32_t n, const std::vector<std::pair<VertexId, VertexId>>& edges) {
  StreamData s;
  s.n = n;
  s.declared_count = edges.size();
  for (auto [u, v] : edges) s.updates.push_back(StreamUpdate{true, u, v, -1});
  return s;
}

int selftest() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& name) {
    std::cerr << (ok ? "pass " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  // determinism: same seed, same stream, byte-identical output and checkpoint
  {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId v = 1; v < 10; ++v)
      for (VertexId u = 0; u < v; ++u) edges.push_back({u, v});
    StreamData s = make_stream(10, edges);
    RunConfig cfg;
    cfg.n = 10;
    cfg.variant = Variant::N32;
    cfg.seed = 7;
    cfg.q_jl = 32;
    cfg.d_threshold = 3;
    cfg.lambda_threshold = 3;
    Engine a(cfg), b(cfg);
    RunReport ra, rb;
    std::string oa = render_output(run_stream(a, s, &ra));
    std::string ob = render_output(run_stream(b, s, &rb));
    check(oa == ob && a.checkpoint_bytes() == b.checkpoint_bytes(), "determinism");
  }

  // stream-order independence of the sketch state
  {
    std::vector<std::pair<VertexId, VertexId>> edges = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    StreamData fwd = make_stream(6, edges);
    std::reverse(edges.begin(), edges.end());
    StreamData rev = make_stream(6, edges);
    RunConfig cfg;
    cfg.n = 6;
    cfg.variant = Variant::N32;
    cfg.seed = 11;
    Engine a(cfg), b(cfg);
    run_stream(a, fwd, nullptr);
    run_stream(b, rev, nullptr);
    check(a.stack().state_equals(b.stack()), "linearity under reordering");
  }

  // verification on a clique, all variants
  for (Variant v : {Variant::Brute, Variant::N32, Variant::BallCarve}) {
    uint32_t n = 16;
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId b2 = 1; b2 < n; ++b2)
      for (VertexId a2 = 0; a2 < b2; ++a2) edges.push_back({a2, b2});
    StreamData s = make_stream(n, edges);
    RunConfig cfg;
    cfg.n = n;
    cfg.eps = 0.5;
    cfg.variant = v;
    cfg.seed = 3;
    cfg.q_jl = 64;
    cfg.d_threshold = 4;
    cfg.lambda_threshold = 4;
    cfg.beta = 0.05;
    if (v != Variant::N32) cfg.gamma_base = double(n) * n * n / 4.0;
    Engine e(cfg);
    WeightedGraph out = run_stream(e, s, nullptr);
    bool ok = is_spectral_sparsifier(WeightedGraph::from_graph(e.exact()), out, cfg.eps);
    const char* name = v == Variant::Brute ? "verify brute K16"
                       : v == Variant::N32 ? "verify n32 K16"
                                           : "verify ballcarve K16";
    check(ok, name);
  }

  std::cerr << (failures ? "selftest: FAILURES\n" : "selftest: all passed\n");
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear-sketch spectral sparsifier for dynamic graph streams"};

  RunConfig cfg;
  std::string variant_str = "ballcarve";
  std::string stream_path = "-";
  std::string out_path;
  std::string checkpoint_path;
  bool do_selftest = false;
  long long n_flag = -1;

  app.add_option("stream", stream_path, "update stream file ('-' for stdin)");
  app.add_option("--n", n_flag, "vertex count (must match the stream header)");
  app.add_option("--eps", cfg.eps, "target approximation 1+-eps")->check(CLI::PositiveNumber);
  app.add_option("--gamma-base", cfg.gamma_base, "coarse refinement factor (default n^(1/loglog n); n32 pins 2)");
  app.add_option("--variant", variant_str, "brute | n32 | ballcarve");
  app.add_option("--seed", cfg.seed, "generator seed");
  app.add_option("--qjl", cfg.q_jl, "embedding rows (default 400*ceil(log2 n))");
  app.add_option("--d-threshold", cfg.d_threshold, "degree peel threshold override");
  app.add_option("--lambda-threshold", cfg.lambda_threshold, "connectivity threshold override");
  app.add_option("--beta", cfg.beta, "heavy-edge resistance threshold override");
  app.add_flag("--verify", cfg.verify, "check the output against the exact graph");
  app.add_option("--out", out_path, "sparsifier output path (default stdout)");
  app.add_option("--checkpoint", checkpoint_path, "binary sketch snapshot path");
  app.add_flag("--selftest", do_selftest, "run the built-in property checks and exit");

  CLI11_PARSE(app, argc, argv);

  if (do_selftest) return selftest();

  try {
    cfg.variant = parse_variant(variant_str);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitStream;
  }

  StreamData stream;
  try {
    if (stream_path == "-") {
      stream = parse_stream(std::cin);
    } else {
      std::ifstream f(stream_path);
      if (!f) throw StreamViolation("cannot open stream file: " + stream_path);
      stream = parse_stream(f);
    }
  } catch (const StreamViolation& e) {
    std::cerr << "stream error at line " << e.line << ": " << e.what() << "\n";
    return kExitStream;
  }

  if (n_flag >= 0 && uint32_t(n_flag) != stream.n) {
    std::cerr << "stream error at line 1: --n disagrees with the stream header\n";
    return kExitStream;
  }
  cfg.n = stream.n;

  return run_once(cfg, stream, out_path, checkpoint_path);
}
