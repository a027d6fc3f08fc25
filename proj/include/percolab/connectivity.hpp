/*
   Copyright 2026 The percolab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "percolab/bond_config.hpp"
#include "percolab/lattice.hpp"
#include "percolab/matcher.hpp"

namespace percolab {

class UnionFind {
 public:
  explicit UnionFind(std::int64_t n) : parent_(static_cast<size_t>(n)), rank_(static_cast<size_t>(n), 0) {
    for (std::int64_t i = 0; i < n; ++i) parent_[static_cast<size_t>(i)] = static_cast<std::int32_t>(i);
  }

  std::int32_t find(std::int32_t x) {
    while (parent_[static_cast<size_t>(x)] != x) {
      parent_[static_cast<size_t>(x)] = parent_[static_cast<size_t>(parent_[static_cast<size_t>(x)])];
      x = parent_[static_cast<size_t>(x)];
    }
    return x;
  }

  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[static_cast<size_t>(a)] < rank_[static_cast<size_t>(b)]) std::swap(a, b);
    parent_[static_cast<size_t>(b)] = a;
    if (rank_[static_cast<size_t>(a)] == rank_[static_cast<size_t>(b)]) ++rank_[static_cast<size_t>(a)];
  }

  bool same(std::int32_t a, std::int32_t b) { return find(a) == find(b); }
  std::int64_t size() const { return static_cast<std::int64_t>(parent_.size()); }

 private:
  std::vector<std::int32_t> parent_;
  std::vector<std::uint8_t> rank_;
};

struct ClusterStats {
  std::int64_t components = 0;
  std::int64_t largest = 0;
  std::map<std::int64_t, std::int64_t> size_histogram;
};

/// Union-find over the vertices of the whole window: open base edges plus
/// extra (enhancement) edges merge components alike. Extra edges must have
/// both endpoints inside the window; anything else is an upstream margin bug.
class ClusterIndex {
 public:
  ClusterIndex(const BondConfig& cfg, const EdgeIndexer& ix,
               const std::vector<VertexPair>* extra = nullptr)
      : domain_(cfg.domain), uf_(domain_vertex_count(cfg.domain)) {
    for (std::int64_t e = 0; e < ix.edge_count(); ++e) {
      if (!cfg.is_open(e)) continue;
      auto [a, b] = ix.endpoints(e);
      uf_.unite(rank_of(a), rank_of(b));
    }
    if (extra) {
      for (const auto& pr : *extra) {
        if (!vertex_in_domain(pr.u) || !vertex_in_domain(pr.v))
          throw std::invalid_argument(
              "cluster index: extra edge endpoint outside the window (margin bug upstream)");
        uf_.unite(rank_of(pr.u), rank_of(pr.v));
      }
    }
  }

  bool connected(const Coord& a, const Coord& b) { return uf_.same(rank_of(a), rank_of(b)); }

  ClusterStats stats() {
    std::map<std::int32_t, std::int64_t> sizes;
    std::int64_t n = uf_.size();
    for (std::int64_t i = 0; i < n; ++i) ++sizes[uf_.find(static_cast<std::int32_t>(i))];
    ClusterStats st;
    st.components = static_cast<std::int64_t>(sizes.size());
    for (const auto& [root, sz] : sizes) {
      st.largest = std::max(st.largest, sz);
      ++st.size_histogram[sz];
    }
    return st;
  }

 private:
  std::int32_t rank_of(const Coord& v) const {
    return static_cast<std::int32_t>(std::visit(
        [&](const auto& d) { return d.vertex_rank(v); }, domain_));
  }
  bool vertex_in_domain(const Coord& v) const {
    if (const Box* b = std::get_if<Box>(&domain_)) return b->contains(v);
    const Torus& t = std::get<Torus>(domain_);
    return t.reduce(v) == v;
  }

  Domain domain_;
  UnionFind uf_;
};

inline ClusterIndex build_index(const BondConfig& cfg, const EdgeIndexer& ix) {
  return ClusterIndex(cfg, ix);
}
inline ClusterIndex build_index(const EnhancedGraph& g, const EdgeIndexer& ix) {
  return ClusterIndex(*g.base, ix, &g.extra);
}

namespace connect_detail {

/// Union-find restricted to a rectangle: only edges (base or extra) with both
/// endpoints inside `rect` participate, matching the definition of a crossing
/// as a path of open edges in the rectangle itself.
inline UnionFind rect_union_find(const BondConfig& cfg, const EdgeIndexer& ix, const Box& rect,
                                 const std::vector<VertexPair>* extra) {
  const Box* dom = std::get_if<Box>(&cfg.domain);
  if (!dom) throw std::invalid_argument("crossing/one-arm queries require a box window");
  if (!dom->contains_box(rect))
    throw std::invalid_argument("rectangle exceeds the sampled window");
  UnionFind uf(rect.vertex_count());
  for (std::int64_t r = 0; r < rect.vertex_count(); ++r) {
    Coord v = rect.vertex_at(r);
    for (int axis = 0; axis < rect.dim; ++axis) {
      Coord w = v + unit_coord(axis);
      if (!rect.contains(w)) continue;
      std::int32_t id = ix.index_of(Edge{v, axis});
      if (id < 0 || !cfg.is_open(id)) continue;
      uf.unite(static_cast<std::int32_t>(r), static_cast<std::int32_t>(rect.vertex_rank(w)));
    }
  }
  if (extra) {
    for (const auto& pr : *extra) {
      if (!dom->contains(pr.u) || !dom->contains(pr.v))
        throw std::invalid_argument(
            "crossing: extra edge endpoint outside the window (margin bug upstream)");
      if (!rect.contains(pr.u) || !rect.contains(pr.v)) continue;
      uf.unite(static_cast<std::int32_t>(rect.vertex_rank(pr.u)),
               static_cast<std::int32_t>(rect.vertex_rank(pr.v)));
    }
  }
  return uf;
}

inline bool face_crossing(UnionFind& uf, const Box& rect, int axis) {
  // roots on the lo face, then scan the hi face
  std::vector<std::int32_t> lo_roots;
  Box lo_face = rect;
  lo_face.hi[axis] = lo_face.lo[axis];
  for (std::int64_t r = 0; r < lo_face.vertex_count(); ++r)
    lo_roots.push_back(uf.find(static_cast<std::int32_t>(rect.vertex_rank(lo_face.vertex_at(r)))));
  std::sort(lo_roots.begin(), lo_roots.end());
  lo_roots.erase(std::unique(lo_roots.begin(), lo_roots.end()), lo_roots.end());
  Box hi_face = rect;
  hi_face.lo[axis] = hi_face.hi[axis];
  for (std::int64_t r = 0; r < hi_face.vertex_count(); ++r) {
    std::int32_t root = uf.find(static_cast<std::int32_t>(rect.vertex_rank(hi_face.vertex_at(r))));
    if (std::binary_search(lo_roots.begin(), lo_roots.end(), root)) return true;
  }
  return false;
}

}  // namespace connect_detail

/// Horizontal crossing: axis 0; vertical: axis 1. True iff the two faces of
/// `rect` orthogonal to the axis are joined by open (base or extra) edges
/// lying inside `rect`.
inline bool crossing(const BondConfig& cfg, const EdgeIndexer& ix, const Box& rect, int axis,
                     const std::vector<VertexPair>* extra = nullptr) {
  if (axis < 0 || axis >= rect.dim) throw std::invalid_argument("crossing: bad axis");
  UnionFind uf = connect_detail::rect_union_find(cfg, ix, rect, extra);
  return connect_detail::face_crossing(uf, rect, axis);
}

inline bool crossing(const EnhancedGraph& g, const EdgeIndexer& ix, const Box& rect, int axis) {
  return crossing(*g.base, ix, rect, axis, &g.extra);
}

/// One-arm event: the origin is joined to the boundary of L_k by open edges
/// inside L_k.
inline bool one_arm(const BondConfig& cfg, const EdgeIndexer& ix, int k,
                    const std::vector<VertexPair>* extra = nullptr) {
  if (k < 1) throw std::invalid_argument("one_arm: radius must be >= 1");
  int dim = domain_dim(cfg.domain);
  Box ball = Box::lambda(dim, k);
  UnionFind uf = connect_detail::rect_union_find(cfg, ix, ball, extra);
  Coord origin{0, 0, 0};
  std::int32_t origin_root = uf.find(static_cast<std::int32_t>(ball.vertex_rank(origin)));
  for (std::int64_t r = 0; r < ball.vertex_count(); ++r) {
    Coord v = ball.vertex_at(r);
    if (linf_norm(v, dim) != k) continue;
    if (uf.find(static_cast<std::int32_t>(r)) == origin_root) return true;
  }
  return false;
}

inline bool one_arm(const EnhancedGraph& g, const EdgeIndexer& ix, int k) {
  return one_arm(*g.base, ix, k, &g.extra);
}

inline ClusterStats cluster_stats(const BondConfig& cfg, const EdgeIndexer& ix,
                                  const std::vector<VertexPair>* extra = nullptr) {
  ClusterIndex idx(cfg, ix, extra);
  return idx.stats();
}

// Crossing/one-arm in the truncated enhanced graph without materializing the
// deduplicated extra-edge set: activations are matched in the rectangle's
// activation margin and their enhanced edges are united into the rectangle's
// union-find directly (duplicates are harmless there). Equivalent to
// enhance() + crossing(), measurably cheaper on large windows.

inline bool crossing_enhanced(const BondConfig& cfg, const EdgeIndexer& ix,
                              const EnhancementFamily& fam, int truncation, const Box& rect,
                              int axis, WindowMode mode = WindowMode::strict) {
  if (axis < 0 || axis >= rect.dim) throw std::invalid_argument("crossing: bad axis");
  MatchQuery q;
  q.level_hi = truncation;
  q.anchor_box = rect.expanded(fam.max_footprint(0, truncation));
  q.mode = mode;
  std::vector<Activation> acts = match_activations(cfg, ix, fam, q);
  UnionFind uf = connect_detail::rect_union_find(cfg, ix, rect, nullptr);
  const auto& rots = rotations(fam.dim);
  for (const auto& a : acts) {
    const Enhancement& m = fam.members[static_cast<size_t>(a.member)];
    const Rotation& g = rots[static_cast<size_t>(a.rot)];
    for (const auto& se : m.s_edges) {
      VertexPair p = transform_pair(g, a.t, se);
      if (!rect.contains(p.u) || !rect.contains(p.v)) continue;
      uf.unite(static_cast<std::int32_t>(rect.vertex_rank(p.u)),
               static_cast<std::int32_t>(rect.vertex_rank(p.v)));
    }
  }
  return connect_detail::face_crossing(uf, rect, axis);
}

inline bool one_arm_enhanced(const BondConfig& cfg, const EdgeIndexer& ix,
                             const EnhancementFamily& fam, int truncation, int k,
                             WindowMode mode = WindowMode::strict) {
  if (k < 1) throw std::invalid_argument("one_arm: radius must be >= 1");
  int dim = domain_dim(cfg.domain);
  Box ball = Box::lambda(dim, k);
  MatchQuery q;
  q.level_hi = truncation;
  q.anchor_box = ball.expanded(fam.max_footprint(0, truncation));
  q.mode = mode;
  std::vector<Activation> acts = match_activations(cfg, ix, fam, q);
  UnionFind uf = connect_detail::rect_union_find(cfg, ix, ball, nullptr);
  const auto& rots = rotations(fam.dim);
  for (const auto& a : acts) {
    const Enhancement& m = fam.members[static_cast<size_t>(a.member)];
    const Rotation& g = rots[static_cast<size_t>(a.rot)];
    for (const auto& se : m.s_edges) {
      VertexPair p = transform_pair(g, a.t, se);
      if (!ball.contains(p.u) || !ball.contains(p.v)) continue;
      uf.unite(static_cast<std::int32_t>(ball.vertex_rank(p.u)),
               static_cast<std::int32_t>(ball.vertex_rank(p.v)));
    }
  }
  Coord origin{0, 0, 0};
  std::int32_t origin_root = uf.find(static_cast<std::int32_t>(ball.vertex_rank(origin)));
  for (std::int64_t r = 0; r < ball.vertex_count(); ++r) {
    if (linf_norm(ball.vertex_at(r), dim) != k) continue;
    if (uf.find(static_cast<std::int32_t>(r)) == origin_root) return true;
  }
  return false;
}

}  // namespace percolab
