#include "gsparse/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <queue>

#include "gsparse/hashing.hpp"
#include "gsparse/sketch.hpp"

namespace gsparse {

namespace {

uint64_t matrix_fingerprint(const Eigen::MatrixXd& m) {
  uint64_t h = 0x6f7261636c65ULL;
  for (long j = 0; j < m.cols(); ++j)
    for (long i = 0; i < m.rows(); ++i) {
      uint64_t bits;
      double v = m(i, j);
      static_assert(sizeof(bits) == sizeof(v));
      std::memcpy(&bits, &v, sizeof(bits));
      h = mix64(h ^ bits);
    }
  return h;
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[b] = a;
    return true;
  }
};

// Dinic max-flow on unit-capacity digraph (each undirected edge becomes
// two directed arcs of capacity 1).
struct Dinic {
  struct Arc {
    int to, rev;
    int cap;
  };
  std::vector<std::vector<Arc>> adj;
  std::vector<int> level, iter;

  explicit Dinic(int n) : adj(n), level(n), iter(n) {}

  void add_undirected(int a, int b) {
    adj[a].push_back({b, int(adj[b].size()), 1});
    adj[b].push_back({a, int(adj[a].size()) - 1, 1});
  }

  bool bfs(int s, int t) {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (const auto& a : adj[v])
        if (a.cap > 0 && level[a.to] < 0) {
          level[a.to] = level[v] + 1;
          q.push(a.to);
        }
    }
    return level[t] >= 0;
  }

  int dfs(int v, int t, int f) {
    if (v == t) return f;
    for (int& i = iter[v]; i < int(adj[v].size()); ++i) {
      Arc& a = adj[v][i];
      if (a.cap > 0 && level[v] < level[a.to]) {
        int d = dfs(a.to, t, std::min(f, a.cap));
        if (d > 0) {
          a.cap -= d;
          adj[a.to][a.rev].cap += d;
          return d;
        }
      }
    }
    return 0;
  }

  int max_flow(int s, int t) {
    int flow = 0;
    while (bfs(s, t)) {
      std::fill(iter.begin(), iter.end(), 0);
      while (int f = dfs(s, t, 1 << 30)) flow += f;
    }
    return flow;
  }
};

}  // namespace

PseudoInverse pseudo_inverse(const Eigen::MatrixXd& K) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
  const auto& vals = es.eigenvalues();
  double lmax = vals.cwiseAbs().maxCoeff();
  double cutoff = 1e-9 * std::max(lmax, 1e-300);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(vals.size());
  for (long i = 0; i < vals.size(); ++i)
    if (vals[i] > cutoff) inv[i] = 1.0 / vals[i];
  PseudoInverse out;
  out.pinv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
  out.source_fingerprint = matrix_fingerprint(K);
  return out;
}

ResistanceValue exact_effective_resistance(const WeightedGraph& g, VertexId u, VertexId v) {
  if (u == v) return {true, 0.0};
  if (g.gamma == 0.0) {
    auto comp = weighted_components(g);
    if (comp[u] != comp[v]) return {false, 0.0};
  }
  auto P = pseudo_inverse(laplacian(g));
  double r = P.pinv(u, u) + P.pinv(v, v) - 2.0 * P.pinv(u, v);
  return {true, r};
}

bool is_spectral_sparsifier(const WeightedGraph& g, const WeightedGraph& h, double eps) {
  if (g.n != h.n) throw DimensionMismatch("sparsifier vertex counts differ");
  const double tol = 1e-8;
  Eigen::MatrixXd Lg = laplacian(g);
  Eigen::MatrixXd Lh = laplacian(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Lg);
  double lmax = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  double cutoff = 1e-9 * lmax;
  std::vector<long> keep;
  for (long i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] > cutoff) keep.push_back(i);
  if (keep.empty()) {
    // L_g = 0: h must be (numerically) zero too
    return Lh.cwiseAbs().maxCoeff() <= tol;
  }
  Eigen::MatrixXd V(g.n, keep.size());
  for (size_t j = 0; j < keep.size(); ++j) V.col(j) = es.eigenvectors().col(keep[j]);
  // H must not add energy outside range(L_g)
  Eigen::MatrixXd P = V * V.transpose();
  double off = (Lh - P * Lh * P).cwiseAbs().maxCoeff();
  if (off > tol * std::max(1.0, Lh.cwiseAbs().maxCoeff())) return false;

  Eigen::MatrixXd A = V.transpose() * Lh * V;
  Eigen::VectorXd d(keep.size());
  for (size_t j = 0; j < keep.size(); ++j) d[j] = es.eigenvalues()[keep[j]];
  Eigen::VectorXd dinv_sqrt = d.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd W = dinv_sqrt.asDiagonal() * A * dinv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(W);
  double lo = es2.eigenvalues().minCoeff();
  double hi = es2.eigenvalues().maxCoeff();
  return lo >= 1.0 - eps - tol && hi <= 1.0 + eps + tol;
}

int pair_connectivity(const Graph& g, VertexId u, VertexId v) {
  Dinic flow(g.n());
  for (const auto& e : g.edges()) flow.add_undirected(int(e.u), int(e.v));
  return flow.max_flow(int(u), int(v));
}

int exact_edge_connectivity(const Graph& g, const EdgeKey& e) {
  if (!g.has_edge(e)) throw EdgeAbsent("edge not in graph");
  return pair_connectivity(g, e.u, e.v);
}

std::set<EdgeKey> heavy_edges_brute_force(const HeavyHitterSketch& sk,
                                          const WeightedGraph& coarse, double beta,
                                          double quality_c) {
  std::set<EdgeKey> out;
  const uint32_t n = coarse.n;
  if (n < 2) return out;
  if (sk.leaf_rows().size() == 0) return out;  // sketch never saw an update
  double eta = 0.5 * std::sqrt(beta / (3.0 * std::max(quality_c, 1.0)));
  auto P = pseudo_inverse(laplacian(coarse));
  // leaf-level sketch rows right-multiplied by K^+ once; each pair's
  // sketched potential vector is then a column difference
  Eigen::MatrixXd G = sk.leaf_rows() * P.pinv;
  Eigen::VectorXd y(G.rows());
  for (VertexId u = 0; u + 1 < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      y = G.col(u) - G.col(v);
      double norm = sk.norm_estimate(y);
      if (norm <= 0.0) continue;
      double est = std::abs(sk.point_estimate(y, pair_index(u, v)));
      if (est >= 2.0 * eta * norm) out.insert(make_edge(u, v));
    }
  }
  return out;
}

namespace {

std::vector<std::vector<VertexId>> decompose_inner(const Graph& h,
                                                   const std::vector<VertexId>& verts,
                                                   uint32_t d_min, double r_diam) {
  std::vector<std::vector<VertexId>> out;
  if (verts.empty()) return out;

  // induced adjacency over `verts`
  std::vector<int> local(h.n(), -1);
  for (size_t i = 0; i < verts.size(); ++i) local[verts[i]] = int(i);
  auto induced_edges = [&](const std::vector<VertexId>& vs) {
    std::vector<int> loc(h.n(), -1);
    for (size_t i = 0; i < vs.size(); ++i) loc[vs[i]] = int(i);
    std::vector<std::pair<int, int>> es;
    for (const auto& e : h.edges())
      if (loc[e.u] >= 0 && loc[e.v] >= 0) es.push_back({loc[e.u], loc[e.v]});
    return es;
  };

  // step 1: peel low-degree vertices into singletons
  std::vector<VertexId> active = verts;
  bool changed = true;
  while (changed) {
    changed = false;
    auto es = induced_edges(active);
    std::vector<int> deg(active.size(), 0);
    for (auto [a, b] : es) {
      ++deg[a];
      ++deg[b];
    }
    std::vector<VertexId> next;
    for (size_t i = 0; i < active.size(); ++i) {
      if (deg[i] < int(d_min)) {
        out.push_back({active[i]});
        changed = true;
      } else {
        next.push_back(active[i]);
      }
    }
    active.swap(next);
  }
  if (active.empty()) return out;
  if (active.size() == 1) {
    out.push_back(active);
    return out;
  }

  auto es = induced_edges(active);
  const size_t m = active.size();
  WeightedGraph wg{uint32_t(m)};
  for (auto [a, b] : es) wg.add_edge(VertexId(a), VertexId(b), 1.0);

  // step 2-3: exact resistance diameter of the induced subgraph
  auto comp = weighted_components(wg);
  bool connected = true;
  for (size_t i = 1; i < m; ++i)
    if (comp[i] != comp[0]) connected = false;
  double diam = 0.0;
  if (connected) {
    auto P = pseudo_inverse(laplacian(wg));
    for (size_t a = 0; a + 1 < m; ++a)
      for (size_t b = a + 1; b < m; ++b)
        diam = std::max(diam, P.pinv(a, a) + P.pinv(b, b) - 2 * P.pinv(a, b));
    if (diam <= r_diam) {
      out.push_back(active);
      return out;
    }
  }

  // step 4: sweep cut along the Fiedler vector (or component split)
  std::vector<VertexId> U, Uc;
  if (!connected) {
    for (size_t i = 0; i < m; ++i)
      (comp[i] == comp[0] ? U : Uc).push_back(active[i]);
  } else {
    Eigen::MatrixXd L = laplacian(wg);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esv(L);
    Eigen::VectorXd f = esv.eigenvectors().col(1);  // Fiedler vector
    std::vector<size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return f[a] < f[b]; });
    // best-conductance prefix
    std::vector<int> side(m, 1);
    std::vector<double> wdeg(m, 0.0);
    double vol_total = 0.0;
    for (auto [a, b] : es) {
      wdeg[a] += 1;
      wdeg[b] += 1;
      vol_total += 2;
    }
    double best = -1.0;
    size_t best_k = 1;
    double vol = 0.0, cut = 0.0;
    std::vector<char> in_prefix(m, 0);
    // recompute cut incrementally
    std::vector<std::vector<int>> adj(m);
    for (auto [a, b] : es) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    for (size_t k = 0; k + 1 < m; ++k) {
      size_t x = order[k];
      vol += wdeg[x];
      for (int nb : adj[x]) cut += in_prefix[nb] ? -1.0 : 1.0;
      in_prefix[x] = 1;
      double phi = cut / std::max(1.0, std::min(vol, vol_total - vol));
      if (best < 0 || phi < best) {
        best = phi;
        best_k = k + 1;
      }
    }
    for (size_t k = 0; k < m; ++k) side[order[k]] = k < best_k ? 0 : 1;
    for (size_t i = 0; i < m; ++i) (side[i] == 0 ? U : Uc).push_back(active[i]);
  }
  auto left = decompose_inner(h, U, d_min, r_diam);
  auto right = decompose_inner(h, Uc, d_min, r_diam);
  out.insert(out.end(), left.begin(), left.end());
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

}  // namespace

std::vector<std::vector<VertexId>> decompose(const Graph& h, uint32_t d_min, double r_diam) {
  for (VertexId v = 0; v < h.n(); ++v)
    if (h.degree(v) < 10 * d_min)
      throw DegreeTooLow("decompose requires min degree >= 10*d_min");
  std::vector<VertexId> all(h.n());
  std::iota(all.begin(), all.end(), 0);
  return decompose_inner(h, all, d_min, r_diam);
}

WeightedGraph offline_sparsify(const WeightedGraph& g, double eps, double c_prime,
                               uint64_t seed) {
  WeightedGraph out(g.n, g.gamma);
  if (g.edges.empty()) return out;
  auto P = pseudo_inverse(laplacian(g));
  double logn = std::log2(std::max<uint32_t>(g.n, 2));
  KWiseHash coin(mix64(seed, 0x0ff11e), 8);
  for (const auto& [idx, w] : g.edges) {
    EdgeKey e = edge_from_index(idx);
    double r = P.pinv(e.u, e.u) + P.pinv(e.v, e.v) - 2 * P.pinv(e.u, e.v);
    double p = std::min(1.0, c_prime * logn * r * w / (eps * eps));
    if (coin.bernoulli(idx, p)) out.edges[idx] = w / p;
  }
  return out;
}

std::vector<int> components(const Graph& g) {
  UnionFind uf(g.n());
  for (const auto& e : g.edges()) uf.unite(int(e.u), int(e.v));
  std::vector<int> out(g.n());
  for (uint32_t v = 0; v < g.n(); ++v) out[v] = uf.find(int(v));
  return out;
}

std::vector<int> weighted_components(const WeightedGraph& g) {
  UnionFind uf(g.n);
  for (const auto& [idx, w] : g.edges) {
    (void)w;
    EdgeKey e = edge_from_index(idx);
    uf.unite(int(e.u), int(e.v));
  }
  std::vector<int> out(g.n);
  for (uint32_t v = 0; v < g.n; ++v) out[v] = uf.find(int(v));
  return out;
}

ResistanceValue resistance_diameter(const WeightedGraph& g, const std::vector<VertexId>& set) {
  ResistanceValue out{true, 0.0};
  for (size_t a = 0; a + 1 < set.size(); ++a)
    for (size_t b = a + 1; b < set.size(); ++b) {
      auto r = exact_effective_resistance(g, set[a], set[b]);
      if (!r.finite) return {false, 0.0};
      out.value = std::max(out.value, r.value);
    }
  return out;
}

}  // namespace gsparse
