#include "gsparse/resistance.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <numeric>

#include "gsparse/hashing.hpp"

namespace gsparse {

namespace {

constexpr double kTauSolve = 1e-8;

struct EdgeArrays {
  std::vector<VertexId> u, v;
  std::vector<double> w;
};

EdgeArrays edge_arrays(const WeightedGraph& g) {
  EdgeArrays a;
  a.u.reserve(g.edges.size());
  a.v.reserve(g.edges.size());
  a.w.reserve(g.edges.size());
  for (const auto& [idx, w] : g.edges) {
    EdgeKey e = edge_from_index(idx);
    a.u.push_back(e.u);
    a.v.push_back(e.v);
    a.w.push_back(w);
  }
  return a;
}

std::vector<int> graph_components(uint32_t n, const EdgeArrays& a) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  };
  for (size_t i = 0; i < a.u.size(); ++i) {
    int ru = find(int(a.u[i])), rv = find(int(a.v[i]));
    if (ru != rv) p[rv] = ru;
  }
  for (uint32_t i = 0; i < n; ++i) p[i] = find(int(i));
  return p;
}

void project_component_means(Eigen::VectorXd& x, const std::vector<int>& comp) {
  const int n = int(x.size());
  std::vector<double> sum(n, 0.0);
  std::vector<int> cnt(n, 0);
  for (int i = 0; i < n; ++i) {
    sum[comp[i]] += x[i];
    ++cnt[comp[i]];
  }
  for (int i = 0; i < n; ++i) x[i] -= sum[comp[i]] / cnt[comp[i]];
}

}  // namespace

Eigen::VectorXd solve_laplacian(const WeightedGraph& g, const Eigen::VectorXd& b,
                                const Eigen::VectorXd* extra_diag) {
  const uint32_t n = g.n;
  if (uint32_t(b.size()) != n) throw DimensionMismatch("rhs length != vertex count");
  EdgeArrays a = edge_arrays(g);

  Eigen::VectorXd diag = Eigen::VectorXd::Constant(n, g.gamma);
  if (extra_diag) {
    if (uint32_t(extra_diag->size()) != n)
      throw DimensionMismatch("extra diagonal length != vertex count");
    diag += *extra_diag;
  }
  for (size_t i = 0; i < a.w.size(); ++i) {
    diag[a.u[i]] += a.w[i];
    diag[a.v[i]] += a.w[i];
  }
  bool regularized = g.gamma > 0 || (extra_diag && extra_diag->minCoeff() > 0);

  auto apply = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = diag.cwiseProduct(x);
    for (size_t i = 0; i < a.w.size(); ++i) {
      y[a.u[i]] -= a.w[i] * x[a.v[i]];
      y[a.v[i]] -= a.w[i] * x[a.u[i]];
    }
    return y;
  };

  std::vector<int> comp;
  Eigen::VectorXd rhs = b;
  if (!regularized) {
    comp = graph_components(n, a);
    // pure Laplacian: rhs must be orthogonal to 1 per component
    std::vector<double> csum(n, 0.0), cabs(n, 0.0);
    for (uint32_t i = 0; i < n; ++i) {
      csum[comp[i]] += b[i];
      cabs[comp[i]] += std::abs(b[i]);
    }
    for (uint32_t i = 0; i < n; ++i)
      if (std::abs(csum[comp[i]]) > kTauZero * std::max(1.0, cabs[comp[i]]))
        throw NonZeroSum("laplacian rhs has nonzero component sum");
    project_component_means(rhs, comp);
  }

  Eigen::VectorXd precond(n);
  for (uint32_t i = 0; i < n; ++i) precond[i] = diag[i] > 0 ? 1.0 / diag[i] : 1.0;

  const double bnorm = rhs.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (bnorm == 0.0) return x;

  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z = precond.cwiseProduct(r);
  if (!regularized) project_component_means(z, comp);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  const int max_iters = 10 * int(n) + 20;
  for (int it = 0; it < max_iters; ++it) {
    if (r.norm() <= kTauSolve * bnorm) {
      if (!regularized) project_component_means(x, comp);
      return x;
    }
    Eigen::VectorXd Ap = apply(p);
    double pAp = p.dot(Ap);
    if (pAp <= 0) throw NotConverged("pcg: operator not positive on search direction");
    double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    z = precond.cwiseProduct(r);
    if (!regularized) project_component_means(z, comp);
    double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  if (r.norm() <= kTauSolve * bnorm) {
    if (!regularized) project_component_means(x, comp);
    return x;
  }
  throw NotConverged("pcg: iteration cap reached");
}

uint64_t weighted_graph_fingerprint(const WeightedGraph& g) {
  uint64_t h = mix64(uint64_t(g.n), 0xF17ULL);
  uint64_t gb;
  static_assert(sizeof(double) == 8);
  std::memcpy(&gb, &g.gamma, 8);
  h = mix64(h, gb);
  for (const auto& [idx, w] : g.edges) {
    uint64_t wb;
    std::memcpy(&wb, &w, 8);
    h = mix64(h, idx, wb);
  }
  return h;
}

ResistanceEmbedding::ResistanceEmbedding(const CoarseSparsifier& k, uint32_t q_jl,
                                         uint64_t seed) {
  const WeightedGraph& g = k.graph;
  const uint32_t n = g.n;
  if (g.edges.empty() && g.gamma <= 0)
    throw DimensionMismatch("embedding needs edges or a regularizer");
  fingerprint_ = weighted_graph_fingerprint(g);

  unsigned kw = 8;
  for (uint32_t t = n; t > 1; t >>= 1) ++kw;  // ~ log n wise
  const double sqrt_gamma = g.gamma > 0 ? std::sqrt(g.gamma) : 0.0;
  const uint64_t universe = num_pairs(n);

  M_.resize(q_jl, n);
  for (uint32_t i = 0; i < q_jl; ++i) {
    KWiseHash sgn(mix64(seed, 0x1B5ULL, i), kw);
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    for (const auto& [idx, w] : g.edges) {
      EdgeKey e = edge_from_index(idx);
      double s = (sgn.eval(idx) & 1) ? 1.0 : -1.0;
      double c = s * std::sqrt(w);
      row[e.u] += c;
      row[e.v] -= c;
    }
    if (sqrt_gamma > 0)
      for (VertexId v = 0; v < n; ++v) {
        double s = (sgn.eval(universe + v) & 1) ? 1.0 : -1.0;
        row[v] += s * sqrt_gamma;
      }
    M_.row(i) = solve_laplacian(g, row).transpose() / std::sqrt(double(q_jl));
  }
}

Contraction contract(const WeightedGraph& g, const std::vector<VertexId>& P) {
  if (P.empty()) throw DimensionMismatch("contraction of an empty set");
  Contraction c;
  c.supernode = 0;
  c.map.assign(g.n, 0);
  std::vector<char> in_p(g.n, 0);
  for (VertexId v : P) in_p[v] = 1;
  VertexId next = 1;
  for (VertexId v = 0; v < g.n; ++v)
    if (!in_p[v]) c.map[v] = next++;
  const uint32_t m = next;

  c.graph = WeightedGraph{m};
  c.diag = Eigen::VectorXd::Zero(m);
  for (VertexId v = 0; v < g.n; ++v) c.diag[c.map[v]] += g.gamma;
  for (const auto& [idx, w] : g.edges) {
    EdgeKey e = edge_from_index(idx);
    VertexId cu = c.map[e.u], cv = c.map[e.v];
    if (cu == cv) continue;
    uint64_t ci = pair_index(std::min(cu, cv), std::max(cu, cv));
    c.graph.edges[ci] += w;
  }
  return c;
}

Eigen::VectorXd potentials(const WeightedGraph& g, VertexId src, VertexId snk,
                           const Eigen::VectorXd* extra_diag) {
  if (src == snk) throw DimensionMismatch("potentials: source equals sink");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(g.n);
  b[src] = 1.0;
  b[snk] = -1.0;
  return solve_laplacian(g, b, extra_diag);
}

Eigen::VectorXd expand_potentials(const Contraction& c, const Eigen::VectorXd& x) {
  Eigen::VectorXd phi(c.map.size());
  for (size_t v = 0; v < c.map.size(); ++v) phi[v] = x[c.map[v]];
  return phi;
}

}  // namespace gsparse
