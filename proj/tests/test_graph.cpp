#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "gsparse/graph.hpp"

using namespace gsparse;

TEST_CASE("edge key canonical form and colex index") {
  EdgeKey e = make_edge(3, 1);
  CHECK(e.u == 1);
  CHECK(e.v == 3);
  CHECK(e.linear_index == uint64_t(3) * 2 / 2 + 1);
  CHECK(make_edge(0, 1).linear_index == 0);
  CHECK(make_edge(0, 2).linear_index == 1);
  CHECK(make_edge(1, 2).linear_index == 2);
  CHECK_THROWS_AS(make_edge(4, 4), StreamViolation);
}

TEST_CASE("linear index round-trips over all pairs n=60") {
  const uint32_t n = 60;
  uint64_t expect = 0;
  for (VertexId v = 1; v < n; ++v)
    for (VertexId u = 0; u < v; ++u) {
      EdgeKey e = make_edge(u, v);
      CHECK(e.linear_index == expect);
      EdgeKey back = edge_from_index(expect);
      CHECK(back.u == u);
      CHECK(back.v == v);
      ++expect;
    }
  CHECK(expect == num_pairs(n));
}

TEST_CASE("incidence row definition") {
  auto r = incidence_row(make_edge(0, 1));
  REQUIRE(r.size() == 2);
  CHECK(r[0].first == 0);
  CHECK(r[0].second == 1.0);
  CHECK(r[1].first == 1);
  CHECK(r[1].second == -1.0);

  auto r2 = incidence_row(make_edge(1, 2));
  CHECK(r2[0].first == 1);
  CHECK(r2[0].second == 1.0);
  CHECK(r2[1].first == 2);
  CHECK(r2[1].second == -1.0);

  double dot = 0;
  for (auto [v, x] : r) dot += x;  // against the all-ones vector
  CHECK(dot == 0.0);
}

TEST_CASE("graph insert/erase and stream errors") {
  Graph g(4);
  g.insert(make_edge(0, 1));
  g.insert(make_edge(1, 2));
  CHECK(g.degree(1) == 2);
  CHECK_THROWS_AS(g.insert(make_edge(1, 0)), StreamViolation);
  CHECK_THROWS_AS(g.erase(make_edge(2, 3)), StreamViolation);
  g.erase(make_edge(0, 1));
  CHECK(g.degree(0) == 0);
  CHECK(g.num_edges() == 1);
}

TEST_CASE("laplacian of K3 and gamma-only graph") {
  WeightedGraph k3(3);
  k3.add_edge(0, 1, 1);
  k3.add_edge(0, 2, 1);
  k3.add_edge(1, 2, 1);
  auto L = laplacian(k3);
  for (int i = 0; i < 3; ++i) CHECK(L(i, i) == doctest::Approx(2.0));
  CHECK(L(0, 1) == doctest::Approx(-1.0));
  CHECK(L(1, 2) == doctest::Approx(-1.0));

  WeightedGraph reg(2, 0.5);
  auto L2 = laplacian(reg);
  CHECK(L2(0, 0) == doctest::Approx(0.5));
  CHECK(L2(1, 1) == doctest::Approx(0.5));
  CHECK(L2(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("laplacian PSD and nullspace on random graphs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    uint32_t n = 8;
    WeightedGraph g(n);
    for (VertexId u = 0; u < n; ++u)
      for (VertexId v = u + 1; v < n; ++v)
        if (rng() % 2) g.add_edge(u, v, 1.0 + double(rng() % 100) / 50);
    double gamma = trial % 2 ? 0.25 : 0.0;
    g.gamma = gamma;
    auto L = laplacian(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    CHECK(((L * ones) - gamma * ones).norm() == doctest::Approx(0.0).epsilon(1e-9));

    // L equals sum of w_e b_e b_e^T + gamma I, entrywise
    Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [idx, w] : g.edges) {
      EdgeKey e = edge_from_index(idx);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
      for (auto [vtx, val] : incidence_row(e)) b[vtx] = val;
      rebuilt += w * b * b.transpose();
    }
    rebuilt.diagonal().array() += gamma;
    CHECK((rebuilt - L).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("decompose_demand base cases") {
  DemandVector s1(3);
  s1 << 1, -1, 0;
  auto d1 = decompose_demand(s1);
  REQUIRE(d1.size() == 1);
  CHECK(d1[0].s == 0);
  CHECK(d1[0].t == 1);
  CHECK(d1[0].alpha == doctest::Approx(1.0));

  DemandVector s2 = DemandVector::Zero(3);
  CHECK(decompose_demand(s2).empty());

  DemandVector s3(3);
  s3 << 2, -1, -1;
  auto d3 = decompose_demand(s3);
  double total = 0;
  DemandVector recon = DemandVector::Zero(3);
  for (const auto& t : d3) {
    CHECK(t.alpha > 0);
    total += t.alpha;
    recon[t.s] += t.alpha;
    recon[t.t] -= t.alpha;
  }
  CHECK(total == doctest::Approx(2.0));
  CHECK((recon - s3).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-12));

  DemandVector bad(2);
  bad << 1, 0;
  CHECK_THROWS_AS(decompose_demand(bad), NonZeroSum);
}

TEST_CASE("decompose_demand round-trips on 1000 random zero-sum vectors") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 2 + int(rng() % 12);
    DemandVector s(n);
    for (int i = 0; i < n; ++i) s[i] = gauss(rng);
    s.array() -= s.mean();
    auto terms = decompose_demand(s);
    CHECK(int(terms.size()) <= n - 1);
    DemandVector recon = DemandVector::Zero(n);
    double total = 0;
    for (const auto& t : terms) {
      recon[t.s] += t.alpha;
      recon[t.t] -= t.alpha;
      total += t.alpha;
    }
    REQUIRE((recon - s).cwiseAbs().maxCoeff() < 1e-9);
    REQUIRE(std::abs(total - s.cwiseAbs().sum() / 2) < 1e-9);
  }
}

TEST_CASE("edge list io") {
  Graph g(5);
  g.insert(make_edge(0, 1));
  g.insert(make_edge(3, 2));
  std::stringstream ss;
  write_edge_list(ss, g);
  Graph back = read_edge_list(ss, 5);
  CHECK(back.num_edges() == 2);
  CHECK(back.has_edge(make_edge(2, 3)));
}
