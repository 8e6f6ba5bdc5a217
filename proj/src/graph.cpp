#include "gsparse/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace gsparse {

EdgeKey make_edge(VertexId a, VertexId b) {
  if (a == b) throw StreamViolation("self-loop edge (" + std::to_string(a) + ")");
  EdgeKey e;
  e.u = std::min(a, b);
  e.v = std::max(a, b);
  e.linear_index = pair_index(e.u, e.v);
  return e;
}

EdgeKey edge_from_index(uint64_t idx) {
  // invert idx = v(v-1)/2 + u with 0 <= u < v
  auto v = VertexId((1.0 + std::sqrt(1.0 + 8.0 * double(idx))) / 2.0);
  while (uint64_t(v) * (v - 1) / 2 > idx) --v;
  while (uint64_t(v + 1) * v / 2 <= idx) ++v;
  auto u = VertexId(idx - uint64_t(v) * (v - 1) / 2);
  return make_edge(u, v);
}

void Graph::insert(const EdgeKey& e) {
  if (e.v >= n_) throw StreamViolation("vertex out of range");
  if (!edges_.insert(e.linear_index).second)
    throw StreamViolation("duplicate insert of edge (" + std::to_string(e.u) + "," +
                          std::to_string(e.v) + ")");
  ++degree_[e.u];
  ++degree_[e.v];
}

void Graph::erase(const EdgeKey& e) {
  if (e.v >= n_) throw StreamViolation("vertex out of range");
  if (edges_.erase(e.linear_index) == 0)
    throw StreamViolation("delete of absent edge (" + std::to_string(e.u) + "," +
                          std::to_string(e.v) + ")");
  --degree_[e.u];
  --degree_[e.v];
}

std::vector<EdgeKey> Graph::edges() const {
  std::vector<uint64_t> idx(edges_.begin(), edges_.end());
  std::sort(idx.begin(), idx.end());
  std::vector<EdgeKey> out;
  out.reserve(idx.size());
  for (uint64_t i : idx) out.push_back(edge_from_index(i));
  return out;
}

void WeightedGraph::add_edge(VertexId a, VertexId b, double w) {
  if (w <= 0.0) throw StreamViolation("non-positive edge weight");
  edges[pair_index(a, b)] += w;
}

double WeightedGraph::weight(VertexId a, VertexId b) const {
  auto it = edges.find(pair_index(a, b));
  return it == edges.end() ? 0.0 : it->second;
}

WeightedGraph WeightedGraph::from_graph(const Graph& g, double w, double gamma) {
  WeightedGraph out(g.n(), gamma);
  for (const auto& e : g.edges()) out.edges[e.linear_index] = w;
  return out;
}

std::vector<std::pair<VertexId, double>> incidence_row(const EdgeKey& e) {
  return {{e.u, +1.0}, {e.v, -1.0}};
}

Eigen::MatrixXd laplacian(const WeightedGraph& g) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(g.n, g.n);
  for (const auto& [idx, w] : g.edges) {
    EdgeKey e = edge_from_index(idx);
    L(e.u, e.u) += w;
    L(e.v, e.v) += w;
    L(e.u, e.v) -= w;
    L(e.v, e.u) -= w;
  }
  if (g.gamma != 0.0) L.diagonal().array() += g.gamma;
  return L;
}

std::vector<DemandTerm> decompose_demand(const DemandVector& sigma) {
  const auto n = sigma.size();
  if (std::abs(sigma.sum()) > kTauZero)
    throw NonZeroSum("demand vector does not sum to zero");

  Eigen::VectorXd s = sigma;
  std::vector<DemandTerm> out;
  for (long step = 0; step < n; ++step) {
    // smallest-magnitude nonzero entry
    long imin = -1;
    for (long i = 0; i < n; ++i) {
      if (std::abs(s[i]) <= kTauZero) continue;
      if (imin < 0 || std::abs(s[i]) < std::abs(s[imin])) imin = i;
    }
    if (imin < 0) break;
    // largest-magnitude opposite-sign entry (deterministic tiebreak by index)
    long jmax = -1;
    for (long i = 0; i < n; ++i) {
      if (i == imin || std::abs(s[i]) <= kTauZero) continue;
      if (s[i] * s[imin] < 0 && (jmax < 0 || std::abs(s[i]) > std::abs(s[jmax]))) jmax = i;
    }
    if (jmax < 0) break;  // residual is numerical noise
    double alpha = std::abs(s[imin]);
    if (s[imin] > 0) {
      out.push_back({VertexId(imin), VertexId(jmax), alpha});
      s[jmax] += alpha;
    } else {
      out.push_back({VertexId(jmax), VertexId(imin), alpha});
      s[jmax] -= alpha;
    }
    s[imin] = 0.0;
  }
  return out;
}

Graph read_edge_list(std::istream& in, uint32_t n) {
  Graph g(n);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    VertexId a, b;
    if (ls >> a >> b) g.insert(make_edge(a, b));
  }
  return g;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (const auto& e : g.edges()) out << e.u << " " << e.v << "\n";
}

}  // namespace gsparse
