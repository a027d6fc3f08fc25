// Test-only oracles, deliberately independent of the library's production
// algorithms: the matcher oracle tries every placement, connectivity is a
// plain BFS, and event probabilities are computed by exhaustive enumeration
// over all edge configurations of a window.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "percolab/bond_config.hpp"
#include "percolab/enhancement.hpp"
#include "percolab/lattice.hpp"
#include "percolab/matcher.hpp"

namespace percolab::testing {

/// Brute-force matcher: every (member, rotation, anchor) combination in the
/// given anchor box, each placed T edge checked directly.
inline std::vector<Activation> naive_match(const BondConfig& cfg, const EdgeIndexer& ix,
                                           const EnhancementFamily& fam, int level_lo,
                                           int level_hi, const Box& anchor_box,
                                           bool whole_torus = false) {
  std::vector<Activation> out;
  const auto& rots = rotations(fam.dim);
  const Torus* torus = std::get_if<Torus>(&ix.domain());
  std::vector<Coord> anchors;
  if (torus && whole_torus) {
    for (std::int64_t r = 0; r < torus->vertex_count(); ++r) anchors.push_back(torus->vertex_at(r));
  } else {
    for (std::int64_t r = 0; r < anchor_box.vertex_count(); ++r)
      anchors.push_back(anchor_box.vertex_at(r));
  }
  for (int mi = 0; mi < static_cast<int>(fam.members.size()); ++mi) {
    const Enhancement& m = fam.members[static_cast<size_t>(mi)];
    if (m.level < level_lo || m.level > level_hi) continue;
    for (int gi = 0; gi < static_cast<int>(rots.size()); ++gi) {
      const Rotation& g = rots[static_cast<size_t>(gi)];
      for (const Coord& t0 : anchors) {
        Coord t = torus ? torus->reduce(t0) : t0;
        bool all_open = true;
        for (const auto& te : m.t_edges) {
          VertexPair placed = transform_pair(g, t, te);
          std::int32_t id = ix.index_of_pair(placed);
          if (id < 0 || !cfg.is_open(id)) {
            all_open = false;
            break;
          }
        }
        if (all_open) out.push_back(Activation{mi, gi, t});
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// BFS connectivity between two vertex sets using open edges inside `rect`.
inline bool bfs_connected(const BondConfig& cfg, const EdgeIndexer& ix, const Box& rect,
                          const std::vector<Coord>& from, const std::vector<Coord>& to,
                          const std::vector<VertexPair>* extra = nullptr) {
  std::set<Coord> target(to.begin(), to.end());
  std::set<Coord> seen;
  std::queue<Coord> frontier;
  std::map<Coord, std::vector<Coord>> extra_adj;
  if (extra) {
    for (const auto& e : *extra) {
      if (rect.contains(e.u) && rect.contains(e.v)) {
        extra_adj[e.u].push_back(e.v);
        extra_adj[e.v].push_back(e.u);
      }
    }
  }
  for (const auto& s : from) {
    if (!rect.contains(s)) continue;
    if (seen.insert(s).second) frontier.push(s);
  }
  while (!frontier.empty()) {
    Coord v = frontier.front();
    frontier.pop();
    if (target.count(v)) return true;
    for (int axis = 0; axis < rect.dim; ++axis) {
      for (int dir : {-1, 1}) {
        Coord w = v;
        w[axis] += dir;
        if (!rect.contains(w)) continue;
        Edge e{dir > 0 ? v : w, axis};
        std::int32_t id = ix.index_of(e);
        if (id < 0 || !cfg.is_open(id)) continue;
        if (seen.insert(w).second) frontier.push(w);
      }
    }
    auto it = extra_adj.find(v);
    if (it != extra_adj.end())
      for (const auto& w : it->second)
        if (seen.insert(w).second) frontier.push(w);
  }
  return false;
}

inline std::vector<Coord> face_vertices(const Box& rect, int axis, bool hi) {
  Box face = rect;
  if (hi)
    face.lo[axis] = face.hi[axis];
  else
    face.hi[axis] = face.lo[axis];
  std::vector<Coord> out;
  for (std::int64_t r = 0; r < face.vertex_count(); ++r) out.push_back(face.vertex_at(r));
  return out;
}

inline bool bfs_crossing(const BondConfig& cfg, const EdgeIndexer& ix, const Box& rect, int axis,
                         const std::vector<VertexPair>* extra = nullptr) {
  return bfs_connected(cfg, ix, rect, face_vertices(rect, axis, false),
                       face_vertices(rect, axis, true), extra);
}

/// Exact event probability: sum of p^(open) q^(closed) over all 2^E
/// configurations of the window, with the event evaluated by a caller-chosen
/// predicate (so the whole pipeline under test stays out of the oracle).
inline double enumerate_probability(const EdgeIndexer& ix, double p,
                                    const std::function<bool(const BondConfig&)>& event) {
  std::int64_t ecount = ix.edge_count();
  if (ecount > 24) throw std::invalid_argument("oracle enumeration cap exceeded");
  BondConfig cfg;
  cfg.domain = ix.domain();
  cfg.p = p;
  cfg.open.assign(static_cast<size_t>(ecount), 0);
  std::vector<double> pow_p(static_cast<size_t>(ecount) + 1, 1.0);
  std::vector<double> pow_q(static_cast<size_t>(ecount) + 1, 1.0);
  for (std::int64_t i = 1; i <= ecount; ++i) {
    pow_p[static_cast<size_t>(i)] = pow_p[static_cast<size_t>(i - 1)] * p;
    pow_q[static_cast<size_t>(i)] = pow_q[static_cast<size_t>(i - 1)] * (1.0 - p);
  }
  double prob = 0.0;
  for (std::uint64_t mask = 0; mask < (1ull << ecount); ++mask) {
    int pop = 0;
    for (std::int64_t e = 0; e < ecount; ++e) {
      int bit = static_cast<int>((mask >> e) & 1);
      cfg.open[static_cast<size_t>(e)] = static_cast<std::uint8_t>(bit);
      pop += bit;
    }
    if (event(cfg)) prob += pow_p[static_cast<size_t>(pop)] * pow_q[static_cast<size_t>(ecount - pop)];
  }
  return prob;
}

/// Random configuration for property tests (independent of the library's
/// sampling path).
inline BondConfig random_config(const EdgeIndexer& ix, double p, std::uint64_t seed,
                                std::uint64_t trial) {
  BondConfig cfg;
  cfg.domain = ix.domain();
  cfg.p = p;
  cfg.seed = seed;
  cfg.trial = trial;
  cfg.open.resize(static_cast<size_t>(ix.edge_count()));
  for (std::int64_t e = 0; e < ix.edge_count(); ++e)
    cfg.open[static_cast<size_t>(e)] =
        counter_unit(seed ^ 0x5ca1ab1eull, 7, trial, static_cast<std::uint64_t>(e)) < p ? 1 : 0;
  return cfg;
}

}  // namespace percolab::testing
