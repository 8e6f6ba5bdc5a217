#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "gsparse/decode.hpp"
#include "gsparse/oracles.hpp"
#include "gsparse/resistance.hpp"
#include "gsparse/sketch.hpp"

using namespace gsparse;

namespace {

WeightedGraph path_graph(uint32_t k) {
  WeightedGraph g{k};
  for (VertexId v = 0; v + 1 < k; ++v) g.add_edge(v, v + 1, 1.0);
  return g;
}

WeightedGraph cycle_graph(uint32_t k) {
  WeightedGraph g = path_graph(k);
  g.add_edge(0, k - 1, 1.0);
  return g;
}

WeightedGraph clique_graph(uint32_t k) {
  WeightedGraph g{k};
  for (VertexId v = 1; v < k; ++v)
    for (VertexId u = 0; u < v; ++u) g.add_edge(u, v, 1.0);
  return g;
}

WeightedGraph random_connected(std::mt19937_64& rng, uint32_t n, double p) {
  WeightedGraph g{n};
  std::vector<VertexId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (uint32_t i = 1; i < n; ++i) g.add_edge(perm[i - 1], perm[i], 1.0);
  std::uniform_real_distribution<double> unif(0, 1);
  for (VertexId v = 1; v < n; ++v)
    for (VertexId u = 0; u < v; ++u)
      if (g.weight(u, v) == 0 && unif(rng) < p) g.add_edge(u, v, 1.0);
  return g;
}

Graph to_unweighted(const WeightedGraph& g) {
  Graph out(g.n);
  for (const auto& [idx, w] : g.edges) out.insert(edge_from_index(idx));
  return out;
}

double res(const WeightedGraph& g, VertexId u, VertexId v) {
  auto r = exact_effective_resistance(g, u, v);
  REQUIRE(r.finite);
  return r.value;
}

}  // namespace

TEST_CASE("pseudoinverse identity K K+ K = K and symmetry") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 5; ++t) {
    auto g = random_connected(rng, 10, 0.4);
    Eigen::MatrixXd L = laplacian(g);
    auto P = pseudo_inverse(L);
    CHECK((L * P.pinv * L - L).norm() <= 1e-6 * L.norm());
    CHECK((P.pinv - P.pinv.transpose()).norm() <= 1e-9 * (1 + P.pinv.norm()));
  }
}

TEST_CASE("closed-form resistances: paths, cycles, cliques") {
  CHECK(res(path_graph(3), 0, 2) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(res(clique_graph(3), 0, 1) == doctest::Approx(2.0 / 3).epsilon(1e-8));
  CHECK(res(clique_graph(5), 0, 1) == doctest::Approx(0.4).epsilon(1e-8));
  for (uint32_t k : {3u, 5u, 9u, 14u}) {
    CHECK(res(path_graph(k), 0, k - 1) == doctest::Approx(double(k - 1)).epsilon(1e-8));
    CHECK(res(cycle_graph(k), 0, 1) == doctest::Approx(double(k - 1) / k).epsilon(1e-8));
    CHECK(res(clique_graph(k), 0, 1) == doctest::Approx(2.0 / k).epsilon(1e-8));
  }
}

TEST_CASE("infinite resistance across components; zero with regularizer") {
  WeightedGraph g{4};
  g.add_edge(0, 1, 1.0);
  g.add_edge(2, 3, 1.0);
  CHECK_FALSE(exact_effective_resistance(g, 0, 2).finite);
  g.gamma = 0.5;
  auto r = exact_effective_resistance(g, 0, 2);
  CHECK(r.finite);
  CHECK(r.value > 0);
  CHECK(exact_effective_resistance(g, 1, 1).value == 0.0);
}

TEST_CASE("resistance is a metric on connected graphs") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    uint32_t n = 5 + uint32_t(rng() % 26);
    auto g = random_connected(rng, n, 0.25);
    auto P = pseudo_inverse(laplacian(g));
    auto R = [&](VertexId a, VertexId b) {
      return P.pinv(a, a) + P.pinv(b, b) - 2 * P.pinv(a, b);
    };
    VertexId a = VertexId(rng() % n), b = VertexId(rng() % n), c = VertexId(rng() % n);
    CHECK(R(a, b) == doctest::Approx(R(b, a)).epsilon(1e-9));
    if (a != b) CHECK(R(a, b) > 0);
    CHECK(R(a, a) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(R(a, c) <= R(a, b) + R(b, c) + 1e-9);
  }
}

TEST_CASE("deleting a non-bridge edge never decreases any resistance") {
  std::mt19937_64 rng(3);
  for (uint32_t n : {6u, 9u, 12u}) {
    auto g = random_connected(rng, n, 0.4);
    auto ug = to_unweighted(g);
    auto base = pseudo_inverse(laplacian(g));
    for (const auto& [idx, w] : g.edges) {
      EdgeKey e = edge_from_index(idx);
      if (pair_connectivity(ug, e.u, e.v) < 2) continue;  // bridge
      WeightedGraph h = g;
      h.edges.erase(idx);
      auto P = pseudo_inverse(laplacian(h));
      for (VertexId b = 1; b < n; ++b)
        for (VertexId a = 0; a < b; ++a) {
          double r0 = base.pinv(a, a) + base.pinv(b, b) - 2 * base.pinv(a, b);
          double r1 = P.pinv(a, a) + P.pinv(b, b) - 2 * P.pinv(a, b);
          REQUIRE(r1 >= r0 - 1e-8);
        }
    }
  }
}

TEST_CASE("unit-flow energy identity") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    auto g = random_connected(rng, 10, 0.4);
    VertexId u = VertexId(rng() % 10), v = VertexId(rng() % 10);
    if (u == v) continue;
    double r = res(g, u, v);
    auto P = pseudo_inverse(laplacian(g));
    Eigen::VectorXd b = Eigen::VectorXd::Zero(10);
    b[u] = 1;
    b[v] = -1;
    Eigen::VectorXd phi = P.pinv * b / r;  // unit potential gap
    CHECK(phi[u] - phi[v] == doctest::Approx(1.0).epsilon(1e-6));
    double energy = 0;
    for (const auto& [idx, w] : g.edges) {
      EdgeKey e = edge_from_index(idx);
      energy += w * (phi[e.u] - phi[e.v]) * (phi[e.u] - phi[e.v]);
    }
    CHECK(energy == doctest::Approx(1.0 / r).epsilon(1e-6));
  }
}

TEST_CASE("regularized energy identity with the algebraic gamma term") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    auto g = random_connected(rng, 8, 0.4);
    g.gamma = 0.3;
    VertexId u = 0, v = 7;
    auto P = pseudo_inverse(laplacian(g));
    Eigen::VectorXd b = Eigen::VectorXd::Zero(8);
    b[u] = 1;
    b[v] = -1;
    double r = b.dot(P.pinv * b);
    Eigen::VectorXd phi = P.pinv * b / r;
    double energy = 0;
    for (const auto& [idx, w] : g.edges) {
      EdgeKey e = edge_from_index(idx);
      energy += w * (phi[e.u] - phi[e.v]) * (phi[e.u] - phi[e.v]);
    }
    // gamma * I quadratic form, written via the mean split gamma*(||phi - mean||^2
    // + n*mean^2) to mirror the complete-graph identity
    Eigen::VectorXd centered = phi.array() - phi.mean();
    energy += g.gamma * (centered.squaredNorm() + 8 * phi.mean() * phi.mean());
    CHECK(energy == doctest::Approx(1.0 / r).epsilon(1e-6));
  }
}

TEST_CASE("cross-pair potentials are bounded by the pair resistance") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    uint32_t n = 8 + uint32_t(rng() % 8);
    auto g = random_connected(rng, n, 0.35);
    auto P = pseudo_inverse(laplacian(g));
    for (int s = 0; s < 30; ++s) {
      VertexId u = VertexId(rng() % n), v = VertexId(rng() % n);
      VertexId a = VertexId(rng() % n), b = VertexId(rng() % n);
      if (u == v) continue;
      Eigen::VectorXd buv = Eigen::VectorXd::Zero(n), bab = Eigen::VectorXd::Zero(n);
      buv[u] = 1;
      buv[v] = -1;
      bab[a] = 1;
      bab[b] = -1;
      double r = buv.dot(P.pinv * buv);
      CHECK(std::abs(buv.dot(P.pinv * bab)) <= r + 1e-9);
    }
  }
}

TEST_CASE("spectral sparsifier check: identity, scaling, sampled") {
  auto g = clique_graph(10);
  CHECK(is_spectral_sparsifier(g, g, 0.01));
  CHECK_FALSE(is_spectral_sparsifier(g, scale_weighted(g, 2.0), 0.5));
  WeightedGraph other{9};
  CHECK_THROWS_AS(is_spectral_sparsifier(g, other, 0.5), DimensionMismatch);

  int good = 0;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    auto h = offline_sparsify(g, 0.5, 1.0, seed);
    if (is_spectral_sparsifier(g, h, 0.5)) ++good;
  }
  CHECK(good >= 45);
}

TEST_CASE("sparsifier check rejects energy outside the base row span") {
  WeightedGraph g{4};
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 2, 1.0);  // vertex 3 isolated
  WeightedGraph h = g;
  h.add_edge(2, 3, 1.0);
  CHECK_FALSE(is_spectral_sparsifier(g, h, 0.9));
  CHECK(is_spectral_sparsifier(g, g, 0.1));
}

TEST_CASE("edge connectivity oracle") {
  // two triangles joined by one bridge
  Graph g(6);
  g.insert(make_edge(0, 1));
  g.insert(make_edge(1, 2));
  g.insert(make_edge(0, 2));
  g.insert(make_edge(3, 4));
  g.insert(make_edge(4, 5));
  g.insert(make_edge(3, 5));
  g.insert(make_edge(2, 3));
  CHECK(exact_edge_connectivity(g, make_edge(2, 3)) == 1);
  CHECK(exact_edge_connectivity(g, make_edge(0, 1)) == 2);
  CHECK_THROWS_AS(exact_edge_connectivity(g, make_edge(0, 5)), EdgeAbsent);

  Graph k4(4);
  for (VertexId v = 1; v < 4; ++v)
    for (VertexId u = 0; u < v; ++u) k4.insert(make_edge(u, v));
  CHECK(exact_edge_connectivity(k4, make_edge(0, 1)) == 3);

  Graph c4(4);
  c4.insert(make_edge(0, 1));
  c4.insert(make_edge(1, 2));
  c4.insert(make_edge(2, 3));
  c4.insert(make_edge(0, 3));
  CHECK(exact_edge_connectivity(c4, make_edge(0, 1)) == 2);
}

TEST_CASE("brute-force heavy edge decoder") {
  auto run = [](const WeightedGraph& g, double beta) {
    HhConfig hh;
    hh.buckets = 2048;
    hh.dyadic = false;
    HeavyHitterSketch sk(g.n, hh, 99);
    for (const auto& [idx, w] : g.edges) sk.update(edge_from_index(idx), +1);
    // an exact coarse stand-in at quality 2
    return heavy_edges_brute_force(sk, scale_weighted(g, 0.5), beta, 2.0);
  };

  WeightedGraph star{6};
  for (VertexId v = 1; v < 6; ++v) star.add_edge(0, v, 1.0);
  auto found = run(star, 0.5);
  for (VertexId v = 1; v < 6; ++v) CHECK(found.count(make_edge(0, v)) == 1);

  auto k20 = clique_graph(20);
  auto f2 = run(k20, 0.5);
  for (const auto& e : f2) CHECK(k20.weight(e.u, e.v) > 0);  // superset vacuous, well formed

  WeightedGraph empty{5};
  HhConfig hh;
  HeavyHitterSketch sk(5, hh, 1);
  CHECK(heavy_edges_brute_force(sk, scale_weighted(clique_graph(5), 0.5), 0.5, 2.0).empty());
}

TEST_CASE("low-diameter decomposition oracle") {
  // two K10 cliques joined by a single bridge: the bridge forces a cut
  Graph g(20);
  for (int blk = 0; blk < 2; ++blk)
    for (VertexId v = 1; v < 10; ++v)
      for (VertexId u = 0; u < v; ++u)
        g.insert(make_edge(VertexId(blk * 10) + u, VertexId(blk * 10) + v));
  g.insert(make_edge(4, 14));
  auto parts = decompose(g, 0, 0.5);
  size_t big = 0;
  WeightedGraph wg = WeightedGraph::from_graph(g);
  for (const auto& p : parts) {
    if (p.size() < 2) continue;
    ++big;
    // induced resistance diameter within budget
    auto d = resistance_diameter(wg, p);
    REQUIRE(d.finite);
    CHECK(d.value <= 0.5 + 1e-9);
  }
  CHECK(big == 2);

  Graph k10(10);
  for (VertexId v = 1; v < 10; ++v)
    for (VertexId u = 0; u < v; ++u) k10.insert(make_edge(u, v));
  auto single = decompose(k10, 0, 1.0);
  CHECK(single.size() == 1);
  CHECK(single[0].size() == 10);

  CHECK_THROWS_AS(decompose(k10, 2, 1.0), DegreeTooLow);
}

TEST_CASE("contracting a low-diameter set keeps far vertices far") {
  std::mt19937_64 rng(8);
  for (uint32_t n : {8u, 10u, 12u}) {
    for (int t = 0; t < 6; ++t) {
      auto g = random_connected(rng, n, 0.35);
      auto P = pseudo_inverse(laplacian(g));
      auto R = [&](VertexId a, VertexId b) {
        return P.pinv(a, a) + P.pinv(b, b) - 2 * P.pinv(a, b);
      };
      VertexId center = VertexId(rng() % n);
      // grow a resistance ball around the center
      std::vector<std::pair<double, VertexId>> byr;
      for (VertexId v = 0; v < n; ++v)
        if (v != center) byr.push_back({R(center, v), v});
      std::sort(byr.begin(), byr.end());
      std::vector<VertexId> C{center};
      for (size_t k = 0; k < byr.size() / 3; ++k) C.push_back(byr[k].second);
      double beta = 0;
      for (VertexId a : C)
        for (VertexId b : C) beta = std::max(beta, R(a, b));
      if (beta <= 0) continue;
      Contraction c = contract(g, C);
      for (VertexId v = 0; v < n; ++v) {
        if (std::find(C.begin(), C.end(), v) != C.end()) continue;
        double ruv = R(center, v);
        if (ruv < beta) continue;
        auto rh = exact_effective_resistance(c.graph, c.supernode, c.map[v]);
        REQUIRE(rh.finite);
        double bound = ruv * (1 - beta / ruv) * (1 - beta / ruv);
        REQUIRE(rh.value >= bound - 1e-8);
      }
    }
  }
}

TEST_CASE("resistance balls transfer between dominated graphs") {
  std::mt19937_64 rng(9);
  const double Gamma = 4.0;
  for (int t = 0; t < 10; ++t) {
    auto g = random_connected(rng, 10, 0.4);
    WeightedGraph gt = g;  // weights shrunk by factors in [1, Gamma]
    for (auto& [idx, w] : gt.edges) w /= 1.0 + (Gamma - 1.0) * (double(rng() % 1000) / 1000.0);
    auto Pg = pseudo_inverse(laplacian(g));
    auto Pt = pseudo_inverse(laplacian(gt));
    auto R = [](const PseudoInverse& P, VertexId a, VertexId b) {
      return P.pinv(a, a) + P.pinv(b, b) - 2 * P.pinv(a, b);
    };
    double r = 0.8;
    for (VertexId u = 0; u < 10; ++u)
      for (VertexId v = 0; v < 10; ++v) {
        if (u == v) continue;
        CHECK(R(Pt, u, v) <= Gamma * R(Pg, u, v) + 1e-9);
        if (R(Pg, u, v) <= r / Gamma) CHECK(R(Pt, u, v) <= r + 1e-9);
      }
  }
}
