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

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "percolab/bond_config.hpp"
#include "percolab/enhancement.hpp"
#include "percolab/lattice.hpp"

namespace percolab {

/// One placement of a family member: member index, rotation index (into
/// rotations(dim)), and the anchor translation t. The placed pattern is
/// g(T)+t / g(S)+t, and the anchor sits at t since g fixes the origin.
struct Activation {
  int member = 0;
  int rot = 0;
  Coord t{0, 0, 0};

  bool operator==(const Activation& o) const = default;
  auto operator<=>(const Activation& o) const = default;
};

/// strict: the caller guarantees (and we verify) that every candidate
/// placement fits inside the domain, so nothing is silently truncated.
/// windowed: placements whose T does not fully fit are excluded, which
/// under-approximates the infinite-volume graph near the boundary.
enum class WindowMode { strict, windowed };

struct MatchQuery {
  int level_lo = 0;
  int level_hi = INT_MAX;
  Box anchor_box;             // anchors restricted to this box (ignored on whole torus)
  bool whole_torus = false;   // torus domains: admit every anchor
  WindowMode mode = WindowMode::strict;
};

namespace match_detail {

struct PlacedMember {
  int member;
  int rot;
  Coord pivot_u, pivot_v;                 // rotated endpoints of the canonical pivot edge of T
  std::vector<VertexPair> rest_t;         // rotated remaining T edges
};

/// Pre-rotate every member once per query; matching then only translates.
inline std::vector<PlacedMember> prepare(const EnhancementFamily& fam, int level_lo,
                                         int level_hi) {
  std::vector<PlacedMember> out;
  const auto& rots = rotations(fam.dim);
  for (int mi = 0; mi < static_cast<int>(fam.members.size()); ++mi) {
    const Enhancement& m = fam.members[static_cast<size_t>(mi)];
    if (m.level < level_lo || m.level > level_hi) continue;
    for (int gi = 0; gi < static_cast<int>(rots.size()); ++gi) {
      const Rotation& g = rots[static_cast<size_t>(gi)];
      PlacedMember pm;
      pm.member = mi;
      pm.rot = gi;
      const VertexPair& pivot = m.t_edges.front();  // canonical: first in sorted order
      pm.pivot_u = g.apply(pivot.u);
      pm.pivot_v = g.apply(pivot.v);
      for (size_t i = 1; i < m.t_edges.size(); ++i)
        pm.rest_t.push_back(transform_pair(g, Coord{0, 0, 0}, m.t_edges[i]));
      out.push_back(std::move(pm));
    }
  }
  return out;
}

inline bool anchor_admissible(const MatchQuery& q, const Torus* torus, const Coord& t) {
  if (torus && q.whole_torus) return true;
  return q.anchor_box.contains(t);
}

}  // namespace match_detail

/// Strict-mode margin check: every anchor in the search box must be able to
/// host any member footprint without leaving the domain.
inline void check_match_margin(const EdgeIndexer& ix, const EnhancementFamily& fam,
                               const MatchQuery& q) {
  int footprint = fam.max_footprint(q.level_lo, q.level_hi);
  if (const Box* dom = std::get_if<Box>(&ix.domain())) {
    if (q.whole_torus) throw std::invalid_argument("match: whole_torus query on a box domain");
    Box needed = q.anchor_box.expanded(footprint);
    if (!dom->contains_box(needed))
      throw std::invalid_argument(
          "match: insufficient domain margin (need anchor box expanded by footprint radius " +
          std::to_string(footprint) + " inside the window)");
  } else {
    const Torus& t = std::get<Torus>(ix.domain());
    for (const auto& m : fam.members)
      if (m.level >= q.level_lo && m.level <= q.level_hi && m.footprint_radius > t.m)
        throw std::invalid_argument("match: member '" + m.name +
                                    "' is not well-defined on the torus (radius exceeds m)");
  }
}

/// Enumerate every activation (member, rotation, anchor) whose placed T is
/// fully open and whose anchor lies in the query box. Scans open edges and
/// solves for the translation that maps the member's pivot edge onto each,
/// so the cost is proportional to the number of open edges, not to the
/// anchor volume. Output is sorted canonically. With `early_exit` the first
/// verified activation is returned alone.
inline std::vector<Activation> match_activations(const BondConfig& cfg, const EdgeIndexer& ix,
                                                 const EnhancementFamily& fam,
                                                 const MatchQuery& q, bool early_exit = false) {
  if (fam.dim != domain_dim(cfg.domain))
    throw std::invalid_argument("match: family dimension != domain dimension");
  if (q.mode == WindowMode::strict) check_match_margin(ix, fam, q);
  const Torus* torus = std::get_if<Torus>(&ix.domain());
  auto placed = match_detail::prepare(fam, q.level_lo, q.level_hi);
  std::vector<Activation> found;

  auto edge_open = [&](const VertexPair& pr) -> int {
    // 1 open, 0 closed, -1 not representable in the window
    std::int32_t id = ix.index_of_pair(pr);
    if (id < 0) return -1;
    return cfg.is_open(id) ? 1 : 0;
  };

  for (std::int64_t e = 0; e < ix.edge_count(); ++e) {
    if (!cfg.is_open(e)) continue;
    auto [ea, eb] = ix.endpoints(e);
    for (const auto& pm : placed) {
      for (int orient = 0; orient < 2; ++orient) {
        const Coord& u = orient == 0 ? ea : eb;
        const Coord& v = orient == 0 ? eb : ea;
        Coord t = u - pm.pivot_u;
        if (torus) {
          // the placed pivot must equal this edge after reduction
          if (torus->reduce(pm.pivot_v + t) != v) continue;
          t = torus->reduce(t);
        } else {
          if (pm.pivot_v + t != v) continue;
        }
        if (!match_detail::anchor_admissible(q, torus, t)) continue;
        bool ok = true;
        for (const auto& rest : pm.rest_t) {
          int state = edge_open(VertexPair(rest.u + t, rest.v + t));
          if (state != 1) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        // Placements with a T edge outside a box window are rejected above
        // via the -1 lookup, which is exactly the windowed-mode exclusion
        // rule; strict mode has already guaranteed they cannot occur.
        found.push_back(Activation{pm.member, pm.rot, t});
        if (early_exit) return found;
      }
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

inline bool any_activation(const BondConfig& cfg, const EdgeIndexer& ix,
                           const EnhancementFamily& fam, const MatchQuery& q) {
  return !match_activations(cfg, ix, fam, q, /*early_exit=*/true).empty();
}

/// Number of activations after merging records that place identical (T, S)
/// sets (stabilizer duplicates of symmetric patterns).
inline std::int64_t dedup_activation_count(const EnhancementFamily& fam,
                                           const std::vector<Activation>& acts) {
  std::vector<std::pair<std::vector<VertexPair>, std::vector<VertexPair>>> keys;
  const auto& rots = rotations(fam.dim);
  for (const auto& a : acts) {
    const Enhancement& m = fam.members[static_cast<size_t>(a.member)];
    const Rotation& g = rots[static_cast<size_t>(a.rot)];
    std::vector<VertexPair> t_set, s_set;
    for (const auto& e : m.t_edges) t_set.push_back(transform_pair(g, a.t, e));
    for (const auto& e : m.s_edges) s_set.push_back(transform_pair(g, a.t, e));
    std::sort(t_set.begin(), t_set.end());
    std::sort(s_set.begin(), s_set.end());
    keys.emplace_back(std::move(t_set), std::move(s_set));
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return static_cast<std::int64_t>(keys.size());
}

/// A bond configuration together with the extra edges contributed by the
/// activations of levels <= `level`: the finite-window realization of the
/// truncated enhanced graph.
struct EnhancedGraph {
  const BondConfig* base = nullptr;
  std::vector<Activation> activations;
  std::vector<VertexPair> extra;  // union of placed S edges, deduplicated
  int level = -1;                 // truncation level (-1: no enhancements)
};

inline EnhancedGraph enhance(const BondConfig& cfg, const EdgeIndexer& ix,
                             const EnhancementFamily& fam, int k_max, const Box& search_box,
                             WindowMode mode = WindowMode::strict) {
  MatchQuery q;
  q.level_lo = 0;
  q.level_hi = k_max;
  q.anchor_box = search_box;
  q.mode = mode;
  EnhancedGraph g;
  g.base = &cfg;
  g.level = k_max;
  g.activations = match_activations(cfg, ix, fam, q);
  const auto& rots = rotations(fam.dim);
  const Torus* torus = std::get_if<Torus>(&ix.domain());
  for (const auto& a : g.activations) {
    const Enhancement& m = fam.members[static_cast<size_t>(a.member)];
    const Rotation& rot = rots[static_cast<size_t>(a.rot)];
    for (const auto& e : m.s_edges) {
      VertexPair p = transform_pair(rot, a.t, e);
      if (torus) p = VertexPair(torus->reduce(p.u), torus->reduce(p.v));
      g.extra.push_back(p);
    }
  }
  std::sort(g.extra.begin(), g.extra.end());
  g.extra.erase(std::unique(g.extra.begin(), g.extra.end()), g.extra.end());
  return g;
}

// ---- event detectors --------------------------------------------------------

struct GkOptions {
  double anchor_scale = 1.0;           // anchor box L_{ceil(scale * 2^k)}
  WindowMode mode = WindowMode::strict;
};

/// Event G_k: some level-k member is activated with anchor in L_{2^k}
/// (or the rescaled anchor box). Strict mode requires the window to contain
/// L_{3*2^k}, which always covers anchor box + member footprint.
inline bool detect_gk(const BondConfig& cfg, const EdgeIndexer& ix, const EnhancementFamily& fam,
                      int k, const GkOptions& opts = {}) {
  if (k < 0) throw std::invalid_argument("detect_gk: level must be >= 0");
  if (!fam.has_level(k)) return false;
  int scale = 1 << k;
  int anchor_half = static_cast<int>(std::ceil(opts.anchor_scale * scale));
  const Box* dom = std::get_if<Box>(&cfg.domain);
  if (!dom) throw std::invalid_argument("detect_gk: requires a box domain");
  if (opts.mode == WindowMode::strict) {
    int needed = std::max(3 * scale, anchor_half + fam.max_footprint(k, k));
    if (!dom->contains_box(Box::lambda(fam.dim, needed)))
      throw std::invalid_argument("detect_gk: domain must contain L_" + std::to_string(needed));
  }
  MatchQuery q;
  q.level_lo = k;
  q.level_hi = k;
  q.anchor_box = Box::lambda(fam.dim, anchor_half);
  q.mode = opts.mode;
  return any_activation(cfg, ix, fam, q);
}

/// Event J_{k,l}: some level-k member is activated anywhere on the torus
/// T_{l*2^k}.
inline bool detect_jkl(const BondConfig& cfg, const EdgeIndexer& ix, const EnhancementFamily& fam,
                       int k, int l) {
  if (l < 3) throw std::invalid_argument("detect_jkl: l must be >= 3");
  const Torus* torus = std::get_if<Torus>(&cfg.domain);
  if (!torus) throw std::invalid_argument("detect_jkl: requires a torus domain");
  if (torus->m != l * (1 << k))
    throw std::invalid_argument("detect_jkl: torus diameter must equal l * 2^k");
  for (const auto& m : fam.members)
    if (m.level == k && m.radius > torus->m)
      throw std::invalid_argument("detect_jkl: member '" + m.name +
                                  "' radius exceeds the torus diameter");
  if (!fam.has_level(k)) return false;
  MatchQuery q;
  q.level_lo = k;
  q.level_hi = k;
  q.whole_torus = true;
  return any_activation(cfg, ix, fam, q);
}

/// Event L_n: some member (any level) is activated with anchor in L_{n/2}.
/// Requires every member radius >= n.
inline bool detect_ln(const BondConfig& cfg, const EdgeIndexer& ix, const EnhancementFamily& fam,
                      int n, WindowMode mode = WindowMode::strict) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("detect_ln: n must be even and >= 2");
  for (const auto& m : fam.members)
    if (m.radius < n)
      throw std::invalid_argument("detect_ln: member '" + m.name + "' has radius below n");
  if (!std::holds_alternative<Box>(cfg.domain))
    throw std::invalid_argument("detect_ln: requires a box domain");
  MatchQuery q;
  q.anchor_box = Box::lambda(fam.dim, n / 2);
  q.mode = mode;
  return any_activation(cfg, ix, fam, q);
}

}  // namespace percolab
