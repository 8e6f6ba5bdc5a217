#include "gsparse/decode.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "gsparse/hashing.hpp"
#include "gsparse/oracles.hpp"

namespace gsparse {

GlobalParams GlobalParams::make(uint32_t n, double eps, double gamma_base, Variant v,
                                uint32_t d_override, uint32_t lambda_override,
                                double beta_override, uint32_t qjl_override,
                                double c_prime) {
  GlobalParams p;
  p.n = n;
  p.variant = v;
  p.eps = eps;
  p.c_prime = c_prime;
  p.lambda_u = 2.0 * n;
  p.lambda_l = 8.0 / (double(n) * double(n));
  const double ln = std::log2(std::max<double>(n, 2));

  if (v == Variant::N32) {
    p.gamma_base = 2.0;
  } else if (gamma_base > 1.0) {
    p.gamma_base = gamma_base;
  } else {
    double delta = 1.0 / std::max(1.0, std::log2(std::max(2.0, ln)));
    p.gamma_base = std::max(2.0, std::pow(double(n), delta));
  }

  double ratio = p.lambda_u / p.lambda_l;  // n^3/4
  p.Lambda = std::max(1, int(std::ceil(std::log(ratio) / std::log(p.gamma_base) - 1e-9)));

  p.beta = beta_override > 0
               ? beta_override
               : (eps * eps) / (500.0 * c_prime * std::pow(p.gamma_base, 3.0) * ln);

  const double cap = std::max(1.0, double(n) / 4.0);
  if (d_override) {
    p.d_threshold = d_override;
  } else {
    double formula = v == Variant::N32 ? std::sqrt(double(n)) * ln * ln / p.beta
                                       : std::pow(double(n), 0.4) * ln * ln;
    p.d_threshold = uint32_t(std::max(1.0, std::min(formula, cap)));
  }
  if (lambda_override) {
    p.lambda_threshold = lambda_override;
  } else {
    double formula =
        v == Variant::N32 ? 200.0 * std::sqrt(double(n)) : double(p.d_threshold);
    p.lambda_threshold = uint32_t(std::max(1.0, std::min(formula, cap)));
  }
  p.q_jl = qjl_override ? qjl_override : uint32_t(400.0 * std::ceil(ln));
  return p;
}

double GlobalParams::gamma_of(int ell) const {
  return lambda_u / std::pow(gamma_base, double(ell));
}

double GlobalParams::coarse_quality() const {
  return gamma_base * (1.0 + eps) / (1.0 - eps);
}

double GlobalParams::eta_of(double quality) const {
  return 0.5 * std::sqrt(beta / (3.0 * quality));
}

std::vector<double> gamma_schedule(const GlobalParams& p) {
  std::vector<double> out;
  for (int ell = 0; ell <= p.Lambda; ++ell) out.push_back(p.gamma_of(ell));
  return out;
}

std::vector<TreeNode> build_tree(const GlobalParams& p) {
  std::vector<TreeNode> tree;
  std::function<void(NodeKind, int, int, int, double)> add = [&](NodeKind k, int i, int ell,
                                                                 int parent, double rate) {
    int id = int(tree.size());
    tree.push_back(TreeNode{k, i, ell, parent, rate, {}});
    if (parent >= 0) tree[parent].children.push_back(id);
    if (k == NodeKind::Sparsify) {
      for (int q = 1; q <= p.Lambda - i + 1; ++q)
        add(NodeKind::HeavyEdges, i + q - 1, ell + q - 1, id,
            std::pow(p.gamma_base, double(1 - q)));
      if (ell > 0) add(NodeKind::Sparsify, i, ell - 1, id, 1.0);
    } else if (ell > 0) {
      add(NodeKind::Sparsify, i, ell - 1, id, 1.0);
    }
  };
  add(NodeKind::Sparsify, 0, p.Lambda + 1, -1, 1.0);
  return tree;
}

std::vector<StackNodeSpec> stack_layout(const GlobalParams& p,
                                        const std::vector<TreeNode>& tree) {
  std::vector<StackNodeSpec> specs;
  if (p.variant == Variant::BallCarve) {
    specs.reserve(tree.size());
    for (const auto& tn : tree) {
      StackNodeSpec s;
      s.parent = tn.parent;
      s.rate = tn.rate;
      if (tn.kind == NodeKind::HeavyEdges)
        s.wants_forest = s.wants_flc = s.wants_recovery = s.wants_heavy = true;
      specs.push_back(s);
    }
  } else {
    for (int j = 0; j <= p.Lambda; ++j) {
      StackNodeSpec s;
      s.rate = std::pow(p.gamma_base, -double(j));
      if (p.variant == Variant::N32)
        s.wants_flc = s.wants_recovery = true;
      else
        s.wants_heavy = true;
      specs.push_back(s);
    }
  }
  return specs;
}

WeightedGraph scale_weighted(const WeightedGraph& g, double factor) {
  WeightedGraph out{g.n};
  out.gamma = g.gamma * factor;
  for (const auto& [idx, w] : g.edges) out.edges[idx] = w * factor;
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(b)] = find(a); }
};

std::set<EdgeKey> peel_low_degree(SketchStack& st, size_t node, uint32_t d) {
  std::set<EdgeKey> peeled;
  bool progress = true;
  while (progress) {
    progress = false;
    for (VertexId v = 0; v < st.n(); ++v) {
      int64_t deg = st.degree(node, v);
      if (deg <= 0 || deg >= int64_t(d)) continue;
      auto edges = st.sparse_recover_neighbors(node, v, d);
      if (edges.empty()) continue;
      st.subtract_edges(node, edges);
      peeled.insert(edges.begin(), edges.end());
      progress = true;
    }
  }
  return peeled;
}

void reweight_into(std::map<uint64_t, double>& W, const std::set<EdgeKey>& Ej, int i, int j,
                   const GlobalParams& p, const ResistanceEmbedding& emb) {
  const double hi = std::pow(p.gamma_base, double(i - j));
  const double lo = std::pow(p.gamma_base, double(i - j - 1));
  const double w = std::pow(p.gamma_base, double(j - i));
  const double lg = std::log2(std::max<double>(p.n, 2));
  for (const auto& e : Ej) {
    double rp = 2.0 * emb.pair_norm2(e.u, e.v);
    double pp = std::min(1.0, p.c_prime * rp * lg / (p.eps * p.eps));
    bool take = j == p.Lambda ? pp <= hi : (pp > lo && pp <= hi);
    if (take) W[e.linear_index] = w;
  }
}

int sparsify_child(const std::vector<TreeNode>& tree, int node) {
  for (int c : tree[node].children)
    if (tree[c].kind == NodeKind::Sparsify) return c;
  throw DecodeFailure("recursion tree node lacks a refinement child");
}

// heavy-hitter decode of potential vectors for one carved partition
void decode_partition(SketchStack& st, size_t node, const WeightedGraph& coarse,
                      const std::vector<VertexId>& part, double eta,
                      std::set<EdgeKey>& out) {
  Contraction c = contract(coarse, part);
  const uint32_t m = c.graph.n;
  std::vector<char> inside(coarse.n, 0);
  for (VertexId v : part) inside[v] = 1;

  if (c.diag.minCoeff() > 0) {
    Eigen::MatrixXd K = laplacian(c.graph);
    K.diagonal() += c.diag;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(K);
    Eigen::MatrixXd Kinv = ldlt.solve(Eigen::MatrixXd::Identity(m, m));
    for (VertexId v = 0; v < coarse.n; ++v) {
      if (inside[v]) continue;
      Eigen::VectorXd x = Kinv.col(0) - Kinv.col(c.map[v]);
      auto found = st.heavy_hitter_decode(node, expand_potentials(c, x), eta);
      out.insert(found.begin(), found.end());
    }
  } else {
    for (VertexId v = 0; v < coarse.n; ++v) {
      if (inside[v]) continue;
      try {
        Eigen::VectorXd x = potentials(c.graph, 0, c.map[v], &c.diag);
        auto found = st.heavy_hitter_decode(node, expand_potentials(c, x), eta);
        out.insert(found.begin(), found.end());
      } catch (const NonZeroSum&) {
        // different component, infinite resistance: nothing to decode
      }
    }
  }
}

}  // namespace

Partitioning ball_carving(SketchStack& stack, size_t node, const std::set<EdgeKey>& removed,
                          double r, const ResistanceEmbedding& emb) {
  stack.subtract_edges_local(node, removed);
  const uint32_t n = stack.n();
  Partitioning out;
  if (n == 0) return out;

  auto forest = stack.spanning_forest(node);
  UnionFind uf(n);
  for (const auto& e : forest) uf.unite(int(e.u), int(e.v));

  std::vector<char> active(n, 1);
  for (VertexId u = 0; u < n; ++u) {
    if (!active[u]) continue;
    int root = uf.find(int(u));
    std::vector<VertexId> comp;
    double mx = 0.0;
    for (VertexId v = 0; v < n; ++v)
      if (active[v] && uf.find(int(v)) == root) {
        comp.push_back(v);
        if (v != u) mx = std::max(mx, emb.pair_norm2(u, v));
      }
    if (mx <= r / 2) {
      for (VertexId v : comp) {
        active[v] = 0;
        out.leftover.push_back(v);
      }
      continue;
    }
    std::vector<VertexId> part{u};
    for (VertexId v = 0; v < n; ++v)
      if (v != u && active[v] && emb.pair_norm2(u, v) <= r) part.push_back(v);
    for (VertexId v : part) active[v] = 0;
    std::sort(part.begin(), part.end());
    out.parts.push_back(std::move(part));
    out.centers.push_back(u);
  }
  return out;
}

std::set<EdgeKey> heavy_edges(DecodeContext& ctx, int node, double beta) {
  const TreeNode& tn = ctx.tree[node];
  if (tn.kind != NodeKind::HeavyEdges) throw DecodeFailure("heavy_edges on a refinement node");
  const GlobalParams& p = ctx.params;
  SketchStack& st = *ctx.stack;

  std::set<EdgeKey> out = peel_low_degree(st, size_t(node), p.d_threshold);
  if (st.edge_count(size_t(node)) == 0) return out;

  CoarseSparsifier coarse;
  if (tn.ell == 0) {
    coarse.graph = WeightedGraph{p.n};
    coarse.graph.gamma = p.lambda_u;
    coarse.quality = p.gamma_base;
  } else {
    coarse.graph = scale_weighted(sparsify(ctx, sparsify_child(ctx.tree, node)),
                                  1.0 / (p.gamma_base * (1.0 + p.eps)));
    coarse.quality = p.coarse_quality();
  }

  uint32_t lam = std::min(p.lambda_threshold, st.config().flc_lambda);
  auto estar = st.find_low_connectivity_edges(size_t(node), lam);
  out.insert(estar.begin(), estar.end());

  ResistanceEmbedding emb(coarse, p.q_jl, mix64(ctx.seed, 0xBA11ULL, uint64_t(node)));
  Partitioning parts = ball_carving(st, size_t(node), estar, beta / 6.0, emb);

  const double eta = p.eta_of(coarse.quality);
  for (const auto& part : parts.parts)
    decode_partition(st, size_t(node), coarse.graph, part, eta, out);
  return out;
}

WeightedGraph sparsify(DecodeContext& ctx, int node) {
  if (ctx.sparsify_cache.empty()) ctx.sparsify_cache.resize(ctx.tree.size());
  if (ctx.sparsify_cache[node]) return *ctx.sparsify_cache[node];
  const TreeNode& tn = ctx.tree[node];
  if (tn.kind != NodeKind::Sparsify) throw DecodeFailure("sparsify on a heavy-edges node");
  const GlobalParams& p = ctx.params;

  CoarseSparsifier coarse;
  if (tn.ell == 0) {
    coarse.graph = WeightedGraph{p.n};
    coarse.graph.gamma = p.lambda_u;
    coarse.quality = p.gamma_base;
  } else {
    coarse.graph = scale_weighted(sparsify(ctx, sparsify_child(ctx.tree, node)),
                                  1.0 / (p.gamma_base * (1.0 + p.eps)));
    coarse.quality = p.coarse_quality();
  }
  ResistanceEmbedding emb(coarse, p.q_jl, mix64(ctx.seed, 0x5BAACEULL, uint64_t(node)));

  WeightedGraph out{p.n};
  out.gamma = tn.ell - tn.i == p.Lambda + 1 ? 0.0 : p.gamma_of(tn.ell);
  for (int c : tn.children) {
    if (ctx.tree[c].kind != NodeKind::HeavyEdges) continue;
    auto ej = heavy_edges(ctx, c, p.beta);
    reweight_into(out.edges, ej, tn.i, ctx.tree[c].i, p, emb);
  }
  ctx.sparsify_cache[node] = out;
  return out;
}

WeightedGraph sparsify_n32(SketchStack& stack, const GlobalParams& p, uint64_t seed) {
  // Per-level heavy-edge candidates are independent of the coarse chain here
  // (peeling plus low-connectivity edges only), so compute them once.
  std::vector<std::set<EdgeKey>> ej(p.Lambda + 1);
  for (int j = 0; j <= p.Lambda; ++j) {
    ej[j] = peel_low_degree(stack, size_t(j), p.d_threshold);
    if (stack.edge_count(size_t(j)) == 0) continue;
    uint32_t lam = std::min(p.lambda_threshold, stack.config().flc_lambda);
    auto estar = stack.find_low_connectivity_edges(size_t(j), lam);
    ej[j].insert(estar.begin(), estar.end());
  }

  WeightedGraph prev{p.n};
  for (int ell = 0; ell <= p.Lambda + 1; ++ell) {
    CoarseSparsifier coarse;
    if (ell == 0) {
      coarse.graph = WeightedGraph{p.n};
      coarse.graph.gamma = p.lambda_u;
      coarse.quality = p.gamma_base;
    } else {
      coarse.graph = scale_weighted(prev, 1.0 / (p.gamma_base * (1.0 + p.eps)));
      coarse.quality = p.coarse_quality();
    }
    ResistanceEmbedding emb(coarse, p.q_jl, mix64(seed, 0x632ULL, uint64_t(ell)));
    WeightedGraph out{p.n};
    out.gamma = ell == p.Lambda + 1 ? 0.0 : p.gamma_of(ell);
    for (int j = 0; j <= p.Lambda; ++j) reweight_into(out.edges, ej[j], 0, j, p, emb);
    prev = std::move(out);
  }
  return prev;
}

WeightedGraph sparsify_brute(SketchStack& stack, const GlobalParams& p, uint64_t seed) {
  WeightedGraph prev{p.n};
  for (int ell = 0; ell <= p.Lambda + 1; ++ell) {
    CoarseSparsifier coarse;
    if (ell == 0) {
      coarse.graph = WeightedGraph{p.n};
      coarse.graph.gamma = p.lambda_u;
      coarse.quality = p.gamma_base;
    } else {
      coarse.graph = scale_weighted(prev, 1.0 / (p.gamma_base * (1.0 + p.eps)));
      coarse.quality = p.coarse_quality();
    }
    ResistanceEmbedding emb(coarse, p.q_jl, mix64(seed, 0xB07ULL, uint64_t(ell)));
    WeightedGraph out{p.n};
    out.gamma = ell == p.Lambda + 1 ? 0.0 : p.gamma_of(ell);
    for (int j = 0; j <= p.Lambda; ++j) {
      auto ej = heavy_edges_brute_force(stack.heavy(size_t(j)), coarse.graph, p.beta,
                                        coarse.quality);
      reweight_into(out.edges, ej, 0, j, p, emb);
    }
    prev = std::move(out);
  }
  return prev;
}

}  // namespace gsparse
