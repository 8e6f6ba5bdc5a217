#include "gsparse/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

namespace gsparse {

namespace {

constexpr unsigned kPairwise = 2;
constexpr unsigned kInner = 8;

uint32_t ceil_log2(uint64_t x) {
  uint32_t r = 0;
  while ((uint64_t(1) << r) < x) ++r;
  return r;
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

void put_i64(std::vector<uint8_t>& out, int64_t v) { put_u64(out, uint64_t(v)); }

void put_f64(std::vector<uint8_t>& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u64(out, bits);
}

void cell_add(SketchCell& c, int64_t s, uint64_t idx, uint64_t zpow) {
  c.count += s;
  c.index_sum += s * int64_t(idx);
  c.fp = addmod61(c.fp, s > 0 ? zpow : kMersenne61 - zpow);
}

bool cell_zero(const SketchCell& c) {
  return c.count == 0 && c.index_sum == 0 && c.fp == 0;
}

// returns recovered index if the cell holds exactly one +-1 entry
bool one_sparse(const SketchCell& c, uint64_t universe, uint64_t z, uint64_t* idx_out,
                int* sign_out) {
  if (c.count != 1 && c.count != -1) return false;
  int64_t idx = c.index_sum * c.count;
  if (idx < 0 || uint64_t(idx) >= universe) return false;
  uint64_t zpow = powmod61(z, uint64_t(idx));
  uint64_t want = c.count > 0 ? zpow : kMersenne61 - zpow;
  if (c.fp != want) return false;
  *idx_out = uint64_t(idx);
  *sign_out = int(c.count);
  return true;
}

double median_abs(std::vector<double>& v) {
  for (auto& x : v) x = std::abs(x);
  size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[mid];
}

double median_signed(std::vector<double> v) {
  size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[mid];
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

}  // namespace

// ---------------------------------------------------------------------------
// SpanningForestSketch

SfConfig SfConfig::defaults(uint32_t n, uint64_t universe) {
  SfConfig c;
  c.rounds = ceil_log2(std::max<uint64_t>(n, 2)) + 4;
  c.levels = ceil_log2(std::max<uint64_t>(universe, 2)) + 2;
  c.reps = 2;
  return c;
}

SpanningForestSketch::SpanningForestSketch(uint32_t n, SfConfig cfg, uint64_t seed)
    : n_(n), universe_(num_pairs(n)), cfg_(cfg), seed_(seed), cells_(n) {}

int SpanningForestSketch::level_of(uint64_t idx, uint32_t round, uint32_t rep) const {
  uint64_t h = poly_hash(mix64(seed_, 0x11ULL, round * cfg_.reps + rep), kPairwise, idx);
  int lvl = 0;
  while (lvl + 1 < int(cfg_.levels) && h < (kMersenne61 >> (lvl + 1))) ++lvl;
  return lvl;
}

uint64_t SpanningForestSketch::fp_base(uint32_t, uint32_t) const {
  return 2 + mix64(seed_, 0x22ULL) % (kMersenne61 - 3);
}

void SpanningForestSketch::update(const EdgeKey& e, int delta) {
  uint64_t idx = e.linear_index;
  uint64_t z = fp_base(0, 0);
  uint64_t zpow = powmod61(z, idx);
  for (int side = 0; side < 2; ++side) {
    VertexId v = side == 0 ? e.u : e.v;
    int64_t s = int64_t(delta) * (side == 0 ? 1 : -1);
    auto& vc = cells_[v];
    if (vc.empty()) vc.resize(cell_count());
    for (uint32_t round = 0; round < cfg_.rounds; ++round)
      for (uint32_t rep = 0; rep < cfg_.reps; ++rep) {
        int top = level_of(idx, round, rep);
        for (int j = 0; j <= top; ++j)
          cell_add(vc[(round * cfg_.levels + j) * cfg_.reps + rep], s, idx, zpow);
      }
  }
}

const SketchCell* SpanningForestSketch::vertex_cells(VertexId v) const {
  return cells_[v].empty() ? nullptr : cells_[v].data();
}

bool SpanningForestSketch::is_zero() const {
  for (const auto& vc : cells_)
    for (const auto& c : vc)
      if (!cell_zero(c)) return false;
  return true;
}

std::set<EdgeKey> SpanningForestSketch::spanning_forest() const {
  std::set<EdgeKey> forest;
  if (n_ == 0) return forest;
  UnionFind uf(n_);
  uint64_t z = fp_base(0, 0);
  const uint32_t per_round = cfg_.levels * cfg_.reps;
  std::vector<SketchCell> sum(per_round);

  for (uint32_t round = 0; round < cfg_.rounds; ++round) {
    // group vertices by component
    std::vector<std::vector<VertexId>> comp_members(n_);
    for (VertexId v = 0; v < n_; ++v) comp_members[uf.find(int(v))].push_back(v);

    bool any_nonzero = false;
    std::vector<EdgeKey> merges;
    for (VertexId root = 0; root < n_; ++root) {
      const auto& members = comp_members[root];
      if (members.empty()) continue;
      std::fill(sum.begin(), sum.end(), SketchCell{});
      bool nonzero = false;
      for (VertexId v : members) {
        const SketchCell* vc = vertex_cells(v);
        if (!vc) continue;
        const SketchCell* base = vc + round * per_round;
        for (uint32_t i = 0; i < per_round; ++i) {
          const SketchCell& c = base[i];
          if (cell_zero(c)) continue;
          sum[i].count += c.count;
          sum[i].index_sum += c.index_sum;
          sum[i].fp = addmod61(sum[i].fp, c.fp);
          nonzero = true;
        }
      }
      for (uint32_t i = 0; i < per_round; ++i)
        if (!cell_zero(sum[i])) nonzero = true;
      if (!nonzero) continue;
      any_nonzero = true;
      // try sparse levels first
      for (int j = int(cfg_.levels) - 1; j >= 0; --j) {
        bool got = false;
        for (uint32_t rep = 0; rep < cfg_.reps && !got; ++rep) {
          const SketchCell& c = sum[uint32_t(j) * cfg_.reps + rep];
          uint64_t idx;
          int sgn;
          if (one_sparse(c, universe_, z, &idx, &sgn)) {
            EdgeKey e = edge_from_index(idx);
            bool in_u = uf.find(int(e.u)) == int(root);
            bool in_v = uf.find(int(e.v)) == int(root);
            if (in_u != in_v) {
              merges.push_back(e);
              got = true;
            }
          }
        }
        if (got) break;
      }
    }
    if (!any_nonzero) return forest;  // every component has no outgoing edges
    for (const auto& e : merges)
      if (uf.unite(int(e.u), int(e.v))) forest.insert(e);
  }

  // rounds exhausted: succeed only if nothing remained to merge
  std::vector<SketchCell> total((size_t(cfg_.rounds)) * per_round);
  std::vector<std::vector<VertexId>> comp_members(n_);
  for (VertexId v = 0; v < n_; ++v) comp_members[uf.find(int(v))].push_back(v);
  for (VertexId root = 0; root < n_; ++root) {
    const auto& members = comp_members[root];
    if (members.size() < 1) continue;
    SketchCell agg{};
    for (VertexId v : members) {
      const SketchCell* vc = vertex_cells(v);
      if (!vc) continue;
      // level-0 cell of the last round is a rate-1 sum of all cut edges
      const SketchCell& c = vc[(size_t(cfg_.rounds - 1) * cfg_.levels) * cfg_.reps];
      agg.count += c.count;
      agg.index_sum += c.index_sum;
      agg.fp = addmod61(agg.fp, c.fp);
    }
    if (!cell_zero(agg)) throw DecodeFailure("spanning forest rounds exhausted");
  }
  return forest;
}

void SpanningForestSketch::serialize(std::vector<uint8_t>& out) const {
  put_u64(out, n_);
  put_u64(out, cfg_.rounds);
  put_u64(out, cfg_.levels);
  put_u64(out, cfg_.reps);
  for (VertexId v = 0; v < n_; ++v) {
    const SketchCell* vc = vertex_cells(v);
    // an allocated-but-cancelled bank is the same state as a never-touched one
    bool live = false;
    if (vc)
      for (uint32_t i = 0; i < cell_count() && !live; ++i)
        live = !(vc[i] == SketchCell{});
    out.push_back(live ? 1 : 0);
    if (!live) continue;
    for (uint32_t i = 0; i < cell_count(); ++i) {
      put_i64(out, vc[i].count);
      put_i64(out, vc[i].index_sum);
      put_u64(out, vc[i].fp);
    }
  }
}

// ---------------------------------------------------------------------------
// SparseRecoverySketch

SparseRecoverySketch::SparseRecoverySketch(uint32_t n, uint32_t capacity, uint64_t seed,
                                           uint32_t tables)
    : n_(n),
      capacity_(capacity),
      tables_(tables),
      buckets_(2 * capacity + 8),
      seed_(seed),
      cells_(n) {}

void SparseRecoverySketch::update(const EdgeKey& e, int delta) {
  uint64_t idx = e.linear_index;
  uint64_t z = 2 + mix64(seed_, 0x33ULL) % (kMersenne61 - 3);
  uint64_t zpow = powmod61(z, idx);
  for (int side = 0; side < 2; ++side) {
    VertexId v = side == 0 ? e.u : e.v;
    int64_t s = int64_t(delta) * (side == 0 ? 1 : -1);
    auto& vc = cells_[v];
    if (vc.empty()) vc.resize(size_t(tables_) * buckets_);
    for (uint32_t t = 0; t < tables_; ++t) {
      uint64_t b = poly_hash(mix64(seed_, 0x44ULL, t), kInner, idx) % buckets_;
      cell_add(vc[size_t(t) * buckets_ + b], s, idx, zpow);
    }
  }
}

std::set<EdgeKey> SparseRecoverySketch::recover(VertexId v) const {
  std::set<EdgeKey> out;
  if (cells_[v].empty()) return out;
  std::vector<SketchCell> work = cells_[v];
  uint64_t z = 2 + mix64(seed_, 0x33ULL) % (kMersenne61 - 3);
  uint64_t universe = num_pairs(n_);

  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t i = 0; i < work.size(); ++i) {
      uint64_t idx;
      int sgn;
      if (!one_sparse(work[i], universe, z, &idx, &sgn)) continue;
      EdgeKey e = edge_from_index(idx);
      if (e.u != v && e.v != v) throw DecodeFailure("sparse recovery: foreign edge");
      int expect = e.u == v ? 1 : -1;
      if (sgn != expect) throw DecodeFailure("sparse recovery: sign mismatch");
      if (!out.insert(e).second) throw DecodeFailure("sparse recovery: repeated edge");
      uint64_t zpow = powmod61(z, idx);
      for (uint32_t t = 0; t < tables_; ++t) {
        uint64_t b = poly_hash(mix64(seed_, 0x44ULL, t), kInner, idx) % buckets_;
        cell_add(work[size_t(t) * buckets_ + b], -sgn, idx, zpow);
      }
      progress = true;
    }
  }
  for (const auto& c : work)
    if (!cell_zero(c)) throw DecodeFailure("sparse recovery: residual mass");
  return out;
}

void SparseRecoverySketch::serialize(std::vector<uint8_t>& out) const {
  put_u64(out, n_);
  put_u64(out, capacity_);
  put_u64(out, tables_);
  put_u64(out, buckets_);
  for (VertexId v = 0; v < n_; ++v) {
    const auto& vc = cells_[v];
    bool live = false;
    for (const auto& c : vc)
      if (!(c == SketchCell{})) live = true;
    out.push_back(live ? 1 : 0);
    if (!live) continue;
    for (const auto& c : vc) {
      put_i64(out, c.count);
      put_i64(out, c.index_sum);
      put_u64(out, c.fp);
    }
  }
}

// ---------------------------------------------------------------------------
// HeavyHitterSketch

HhConfig HhConfig::for_eta(double eta, uint64_t universe) {
  HhConfig c;
  double want = 8.0 / std::max(eta * eta, 1e-12);
  uint64_t b = 16;
  while (b < uint64_t(want) && b < (uint64_t(1) << ceil_log2(std::max<uint64_t>(universe, 2))))
    b <<= 1;
  c.buckets = uint32_t(std::min<uint64_t>(b, 1u << 20));
  return c;
}

HeavyHitterSketch::HeavyHitterSketch(uint32_t n, HhConfig cfg, uint64_t seed)
    : n_(n), universe_(num_pairs(n)), cfg_(cfg), seed_(seed) {
  leaf_depth_ = ceil_log2(std::max<uint64_t>(universe_, 2));
  uint32_t d0 = 0;
  while ((uint64_t(1) << (d0 + 1)) <= cfg_.buckets && d0 + 1 <= leaf_depth_) ++d0;
  auto add_level = [&](uint32_t depth) {
    Level lv;
    lv.depth = depth;
    uint64_t nodes = uint64_t(1) << depth;
    lv.hashed = nodes > cfg_.buckets;
    lv.buckets = lv.hashed ? cfg_.buckets : uint32_t(nodes);
    lv.reps = lv.hashed ? cfg_.reps : 1;
    // rows allocated on first update; empty nodes stay cheap
    levels_.push_back(std::move(lv));
  };
  if (cfg_.dyadic) {
    for (uint32_t d = d0; d <= leaf_depth_; ++d) add_level(d);
  } else {
    add_level(leaf_depth_);
  }
}

int HeavyHitterSketch::sign(uint32_t rep, uint64_t idx) const {
  return (poly_hash(mix64(seed_, 0x55ULL, rep), kInner, idx) & 1) ? 1 : -1;
}

uint32_t HeavyHitterSketch::bucket(uint32_t level_pos, uint32_t rep, uint64_t node) const {
  return uint32_t(poly_hash(mix64(seed_, 0x66ULL, level_pos * 131 + rep), kInner, node) %
                  levels_[level_pos].buckets);
}

void HeavyHitterSketch::update(const EdgeKey& e, int delta) {
  uint64_t idx = e.linear_index;
  for (size_t lp = 0; lp < levels_.size(); ++lp) {
    Level& lv = levels_[lp];
    if (lv.rows.size() == 0)
      lv.rows = Eigen::MatrixXd::Zero(size_t(lv.reps) * lv.buckets, n_);
    uint64_t node = idx >> (leaf_depth_ - lv.depth);
    for (uint32_t r = 0; r < lv.reps; ++r) {
      uint32_t b = lv.hashed ? bucket(uint32_t(lp), r, node) : uint32_t(node);
      double s = double(delta) * (lv.hashed ? sign(r, idx) : 1);
      size_t row = size_t(r) * lv.buckets + b;
      lv.rows(row, e.u) += s;
      lv.rows(row, e.v) -= s;
    }
  }
}

double HeavyHitterSketch::norm_estimate(const Eigen::VectorXd& leaf_y) const {
  const Level& lv = levels_.back();
  if (!lv.hashed) return leaf_y.norm();
  std::vector<double> est(lv.reps);
  for (uint32_t r = 0; r < lv.reps; ++r)
    est[r] = leaf_y.segment(size_t(r) * lv.buckets, lv.buckets).norm();
  return median_signed(std::move(est));
}

double HeavyHitterSketch::point_estimate(const Eigen::VectorXd& leaf_y, uint64_t idx) const {
  const Level& lv = levels_.back();
  if (!lv.hashed) return idx < uint64_t(leaf_y.size()) ? leaf_y[long(idx)] : 0.0;
  std::vector<double> est(lv.reps);
  size_t lp = levels_.size() - 1;
  for (uint32_t r = 0; r < lv.reps; ++r)
    est[r] = sign(r, idx) * leaf_y[size_t(r) * lv.buckets + bucket(uint32_t(lp), r, idx)];
  return median_signed(std::move(est));
}

std::set<EdgeKey> HeavyHitterSketch::decode(const Eigen::VectorXd& phi, double eta) const {
  std::set<EdgeKey> out;
  if (universe_ == 0 || levels_.back().rows.size() == 0) return out;
  std::vector<Eigen::VectorXd> y(levels_.size());
  for (size_t lp = 0; lp < levels_.size(); ++lp) y[lp] = levels_[lp].rows * phi;

  double norm = norm_estimate(y.back());
  if (norm <= 1e-14) return out;
  const double thr_final = eta * norm;
  const double thr_descend = 0.5 * eta * norm;

  auto estimate = [&](size_t lp, uint64_t node) {
    const Level& lv = levels_[lp];
    if (!lv.hashed) return std::abs(y[lp][long(node)]);
    std::vector<double> est(lv.reps);
    for (uint32_t r = 0; r < lv.reps; ++r)
      est[r] = y[lp][size_t(r) * lv.buckets + bucket(uint32_t(lp), r, node)];
    return median_abs(est);
  };

  const size_t cap = std::max<size_t>(2048, size_t(8) * cfg_.buckets);
  std::vector<uint64_t> frontier;
  {
    const Level& first = levels_.front();
    uint64_t nodes = uint64_t(1) << first.depth;
    uint64_t limit_shift = leaf_depth_ - first.depth;
    for (uint64_t v = 0; v < nodes; ++v) {
      if ((v << limit_shift) >= universe_) break;
      if (estimate(0, v) >= thr_descend) frontier.push_back(v);
    }
  }
  for (size_t lp = 1; lp < levels_.size(); ++lp) {
    std::vector<uint64_t> next;
    uint64_t limit_shift = leaf_depth_ - levels_[lp].depth;
    for (uint64_t parent : frontier) {
      for (uint64_t child = parent * 2; child <= parent * 2 + 1; ++child) {
        if ((child << limit_shift) >= universe_) continue;
        if (estimate(lp, child) >= thr_descend) next.push_back(child);
      }
    }
    if (next.size() > cap) {
      std::nth_element(next.begin(), next.begin() + cap, next.end(),
                       [&](uint64_t a, uint64_t b) { return estimate(lp, a) > estimate(lp, b); });
      next.resize(cap);
      std::sort(next.begin(), next.end());
    }
    frontier.swap(next);
  }
  // frontier now holds candidate leaf indices (when only one level exists and
  // it is hashed, fall back to enumerating the universe)
  if (levels_.size() == 1 && levels_.front().hashed) {
    frontier.clear();
    for (uint64_t idx = 0; idx < universe_; ++idx) frontier.push_back(idx);
  }
  for (uint64_t idx : frontier) {
    if (idx >= universe_) continue;
    double est = std::abs(point_estimate(y.back(), idx));
    if (est >= thr_final) out.insert(edge_from_index(idx));
  }
  return out;
}

void HeavyHitterSketch::serialize(std::vector<uint8_t>& out) const {
  put_u64(out, n_);
  put_u64(out, cfg_.buckets);
  put_u64(out, cfg_.reps);
  put_u64(out, cfg_.dyadic ? 1 : 0);
  for (const auto& lv : levels_) {
    put_u64(out, lv.depth);
    bool live = lv.rows.size() != 0 && !(lv.rows.array() == 0.0).all();
    out.push_back(live ? 1 : 0);
    if (!live) continue;
    for (long j = 0; j < lv.rows.cols(); ++j)
      for (long i = 0; i < lv.rows.rows(); ++i) put_f64(out, lv.rows(i, j));
  }
}

// ---------------------------------------------------------------------------
// SketchStack

uint32_t flc_rep_count(uint32_t n, uint32_t lambda, uint32_t cap) {
  uint64_t formula = uint64_t(200) * lambda * std::max<uint32_t>(ceil_log2(std::max<uint32_t>(n, 2)), 1);
  if (cap == 0) cap = UINT32_MAX;
  return uint32_t(std::max<uint64_t>(16, std::min<uint64_t>(formula, cap)));
}

SketchStack::SketchStack(uint32_t n, std::vector<StackNodeSpec> nodes, const BankConfig& cfg,
                         uint64_t seed)
    : n_(n), specs_(std::move(nodes)), cfg_(cfg), seed_(seed) {
  const size_t m = specs_.size();
  children_.resize(m);
  member_hash_.resize(m);
  forest_.resize(m);
  flc_.resize(m);
  flc_salt_.resize(m);
  recovery_.resize(m);
  heavy_.resize(m);
  degrees_.assign(m, std::vector<int64_t>(n_, 0));
  edge_count_.assign(m, 0);
  shadow_.resize(m);

  SfConfig sf = cfg_.sf.rounds ? cfg_.sf : SfConfig::defaults(n_, num_pairs(n_));
  SfConfig flc_sf = sf;
  flc_sf.reps = 1;  // bank repetitions substitute for per-level repetitions

  for (size_t a = 0; a < m; ++a) {
    const auto& spec = specs_[a];
    if (spec.parent >= 0) {
      if (size_t(spec.parent) >= a)
        throw DimensionMismatch("stack nodes must be parent-ordered");
      children_[spec.parent].push_back(int(a));
    }
    uint64_t node_seed = mix64(seed_, 0xA11ULL, a);
    if (spec.rate < 1.0) member_hash_[a] = KWiseHash(mix64(node_seed, 1), kPairwise);
    if (spec.wants_forest) forest_[a] = SpanningForestSketch(n_, sf, mix64(node_seed, 2));
    if (spec.wants_flc) {
      uint32_t reps = cfg_.flc_reps ? cfg_.flc_reps
                                    : flc_rep_count(n_, cfg_.flc_lambda, cfg_.flc_rep_cap);
      flc_[a].reserve(reps);
      flc_salt_[a].reserve(reps);
      for (uint32_t r = 0; r < reps; ++r) {
        flc_[a].emplace_back(n_, flc_sf, mix64(node_seed, 3, r));
        flc_salt_[a].emplace_back(mix64(node_seed, 4, r), kPairwise);
      }
    }
    if (spec.wants_recovery)
      recovery_[a] = SparseRecoverySketch(n_, cfg_.sr_capacity, mix64(node_seed, 5));
    if (spec.wants_heavy) heavy_[a] = HeavyHitterSketch(n_, cfg_.hh, mix64(node_seed, 6));
  }
}

bool SketchStack::member(size_t node, const EdgeKey& e) const {
  int a = int(node);
  while (a >= 0) {
    const auto& spec = specs_[a];
    if (spec.rate < 1.0 && !member_hash_[a].bernoulli(e.linear_index, spec.rate))
      return false;
    a = spec.parent;
  }
  return true;
}

void SketchStack::apply_at(size_t node, const EdgeKey& e, int delta) {
  if (cfg_.debug_shadow) {
    bool ok = delta > 0 ? shadow_[node].insert(e.linear_index).second
                        : shadow_[node].erase(e.linear_index) == 1;
    if (!ok) throw StreamViolation("sketch update drives edge multiplicity outside {0,1}");
  }
  degrees_[node][e.u] += delta;
  degrees_[node][e.v] += delta;
  edge_count_[node] += delta;
  const auto& spec = specs_[node];
  if (spec.wants_forest) forest_[node].update(e, delta);
  if (spec.wants_flc) {
    double rate = 1.0 / (10.0 * std::max<uint32_t>(cfg_.flc_lambda, 1));
    for (size_t r = 0; r < flc_[node].size(); ++r)
      if (flc_salt_[node][r].bernoulli(e.linear_index, rate)) flc_[node][r].update(e, delta);
  }
  if (spec.wants_recovery) recovery_[node].update(e, delta);
  if (spec.wants_heavy) heavy_[node].update(e, delta);
}

void SketchStack::apply_rec(size_t node, const EdgeKey& e, int delta) {
  const auto& spec = specs_[node];
  if (spec.rate < 1.0 && !member_hash_[node].bernoulli(e.linear_index, spec.rate)) return;
  apply_at(node, e, delta);
  for (int c : children_[node]) apply_rec(size_t(c), e, delta);
}

void SketchStack::apply_update(const EdgeUpdate& upd) {
  for (size_t a = 0; a < specs_.size(); ++a)
    if (specs_[a].parent < 0) apply_rec(a, upd.e, upd.delta);
}

void SketchStack::subtract_edges(size_t node, const std::set<EdgeKey>& edges) {
  for (const auto& e : edges) apply_rec(node, e, -1);
}

void SketchStack::subtract_edges_local(size_t node, const std::set<EdgeKey>& edges) {
  for (const auto& e : edges) apply_at(node, e, -1);
}

std::set<EdgeKey> SketchStack::spanning_forest(size_t node) const {
  return forest_[node].spanning_forest();
}

std::set<EdgeKey> SketchStack::find_low_connectivity_edges(size_t node,
                                                           uint32_t lambda) const {
  if (lambda > cfg_.flc_lambda)
    throw DimensionMismatch("low-connectivity bank built for smaller lambda");
  std::set<EdgeKey> out;
  size_t failures = 0;
  for (const auto& sk : flc_[node]) {
    try {
      auto forest = sk.spanning_forest();
      out.insert(forest.begin(), forest.end());
    } catch (const DecodeFailure&) {
      ++failures;
    }
  }
  if (failures * 5 > flc_[node].size() && !flc_[node].empty())
    throw DecodeFailure("low-connectivity bank: too many sampler failures");
  return out;
}

std::set<EdgeKey> SketchStack::sparse_recover_neighbors(size_t node, VertexId v,
                                                        uint32_t k) const {
  int64_t deg = degrees_[node][v];
  if (deg > int64_t(k) || k > recovery_[node].capacity())
    throw CapacityExceeded("vertex degree exceeds recovery capacity");
  auto out = recovery_[node].recover(v);
  if (int64_t(out.size()) != deg)
    throw DecodeFailure("sparse recovery cardinality mismatch");
  return out;
}

std::set<EdgeKey> SketchStack::heavy_hitter_decode(size_t node, const Eigen::VectorXd& phi,
                                                   double eta) const {
  return heavy_[node].decode(phi, eta);
}

void SketchStack::serialize(std::vector<uint8_t>& out) const {
  put_u64(out, n_);
  put_u64(out, specs_.size());
  for (size_t a = 0; a < specs_.size(); ++a) {
    put_u64(out, uint64_t(a));
    put_i64(out, edge_count_[a]);
    for (auto d : degrees_[a]) put_i64(out, d);
    const auto& spec = specs_[a];
    if (spec.wants_forest) forest_[a].serialize(out);
    if (spec.wants_flc)
      for (const auto& sk : flc_[a]) sk.serialize(out);
    if (spec.wants_recovery) recovery_[a].serialize(out);
    if (spec.wants_heavy) heavy_[a].serialize(out);
  }
}

bool SketchStack::state_equals(const SketchStack& other) const {
  std::vector<uint8_t> a, b;
  serialize(a);
  other.serialize(b);
  return a == b;
}

}  // namespace gsparse
