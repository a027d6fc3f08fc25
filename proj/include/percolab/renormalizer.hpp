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
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "percolab/connectivity.hpp"
#include "percolab/estimator.hpp"
#include "percolab/lattice.hpp"
#include "percolab/matcher.hpp"
#include "percolab/parallel.hpp"

namespace percolab {

/// Renormalized site process: sites are tiles of a tiling by translates of
/// L_{2*2^k}; a site is open iff its long horizontal rectangle R1 and long
/// vertical rectangle R2 (translates of L_{6*2^k,2*2^k} and L_{2*2^k,6*2^k}
/// centered at the tile center) are both crossed in the truncated enhanced
/// graph.
struct RenormSpec {
  int k = 1;
  double p = 0.6;
  const EnhancementFamily* family = nullptr;  // null: base percolation
  int truncation = -1;                        // typically k-1 when a family is set
  int grid_half = 2;                          // sites range over [-g, g]^2
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
};

namespace renorm_detail {

inline int scale(const RenormSpec& s) { return 1 << s.k; }
inline int site_spacing(const RenormSpec& s) { return 4 * scale(s); }

inline Coord site_center(const RenormSpec& s, int sx, int sy) {
  return make_coord(sx * site_spacing(s), sy * site_spacing(s));
}

inline Box r1_rect(const RenormSpec& s, int sx, int sy) {
  return Box::lambda2(6 * scale(s), 2 * scale(s)).translated(site_center(s, sx, sy));
}
inline Box r2_rect(const RenormSpec& s, int sx, int sy) {
  return Box::lambda2(2 * scale(s), 6 * scale(s)).translated(site_center(s, sx, sy));
}

inline int enhancement_margin(const RenormSpec& s) {
  if (!s.family || s.truncation < 0) return 0;
  return 2 * s.family->max_footprint(0, s.truncation);
}

inline Box window(const RenormSpec& s) {
  int ext = s.grid_half * site_spacing(s) + 6 * scale(s) + enhancement_margin(s);
  return Box::lambda(2, ext);
}

/// Anchor search box for the whole-window enhancement pass: anchors must keep
/// every member footprint inside the window.
inline Box search_box(const RenormSpec& s) {
  if (!s.family || s.truncation < 0) return window(s);
  return window(s).expanded(-s.family->max_footprint(0, s.truncation));
}

}  // namespace renorm_detail

struct RenormPairStat {
  int dx = 0, dy = 0;         // site displacement class, canonical half-plane
  int distance = 0;           // l-inf
  double max_abs_corr = 0.0;  // worst Pearson correlation over pairs in the class
  std::int64_t pair_count = 0;
};

struct RenormResult {
  RenormSpec spec;
  int sites_per_side = 0;
  std::vector<std::int64_t> site_open_count;  // row-major over [-g,g]^2
  std::int64_t center_h_count = 0;            // H(R1) at the center site
  std::int64_t center_v_count = 0;            // V(R2) at the center site
  std::int64_t center_open_count = 0;
  std::vector<RenormPairStat> pair_stats;
  int dependence_range = 0;  // exact, from realized dependency footprints
  bool range_exceeds_two = false;
  double far_corr_worst = 0.0;  // max |corr| over pairs beyond the range
  double far_corr_bound = 0.0;  // 4/sqrt(N)
  bool far_pairs_within_noise = true;

  double site_freq(int sx, int sy) const {
    int side = sites_per_side;
    size_t idx = static_cast<size_t>((sx + spec.grid_half) * side + (sy + spec.grid_half));
    return static_cast<double>(site_open_count[idx]) / static_cast<double>(spec.trials);
  }
};

/// Exact set of base edges that can influence a site's state: the edges of
/// R1 and R2 themselves, plus the placed activation patterns g(T)+t of every
/// placement whose enhanced set g(S)+t contributes an edge lying inside R1
/// or R2. Returned as a bitmask over the window's canonical edge ids.
inline std::vector<std::uint8_t> site_dependency_edges(const RenormSpec& spec,
                                                       const EdgeIndexer& ix, int sx, int sy) {
  std::vector<std::uint8_t> dep(static_cast<size_t>(ix.edge_count()), 0);
  Box rects[2] = {renorm_detail::r1_rect(spec, sx, sy), renorm_detail::r2_rect(spec, sx, sy)};
  auto in_some_rect = [&](const VertexPair& pr) {
    for (const Box& r : rects)
      if (r.contains(pr.u) && r.contains(pr.v)) return true;
    return false;
  };
  for (const Box& r : rects) {
    for (std::int64_t vr = 0; vr < r.vertex_count(); ++vr) {
      Coord v = r.vertex_at(vr);
      for (int axis = 0; axis < 2; ++axis) {
        Coord w = v + unit_coord(axis);
        if (!r.contains(w)) continue;
        std::int32_t id = ix.index_of(Edge{v, axis});
        if (id >= 0) dep[static_cast<size_t>(id)] = 1;
      }
    }
  }
  if (!spec.family || spec.truncation < 0) return dep;
  const auto& rots = rotations(2);
  Box sb = renorm_detail::search_box(spec);
  for (const auto& m : spec.family->members) {
    if (m.level > spec.truncation) continue;
    for (const Box& r : rects) {
      Box anchors = r.expanded(m.footprint_radius);
      for (std::int64_t ar = 0; ar < anchors.vertex_count(); ++ar) {
        Coord t = anchors.vertex_at(ar);
        if (!sb.contains(t)) continue;
        for (const auto& g : rots) {
          bool touches = false;
          for (const auto& se : m.s_edges) {
            if (in_some_rect(transform_pair(g, t, se))) {
              touches = true;
              break;
            }
          }
          if (!touches) continue;
          for (const auto& te : m.t_edges) {
            VertexPair placed = transform_pair(g, t, te);
            std::int32_t id = ix.index_of_pair(placed);
            if (id >= 0) dep[static_cast<size_t>(id)] = 1;
          }
        }
      }
    }
  }
  return dep;
}

/// Largest l-inf site displacement at which two dependency footprints share
/// an edge. Sites farther apart than this are driven by disjoint sets of
/// base edges and hence independent.
inline int dependence_range(const RenormSpec& spec) {
  EdgeIndexer ix(renorm_detail::window(spec));
  int g = spec.grid_half;
  std::map<std::pair<int, int>, std::vector<std::uint8_t>> deps;
  for (int sx = -g; sx <= g; ++sx)
    for (int sy = -g; sy <= g; ++sy)
      deps[{sx, sy}] = site_dependency_edges(spec, ix, sx, sy);
  int range = 0;
  for (auto it = deps.begin(); it != deps.end(); ++it) {
    for (auto jt = std::next(it); jt != deps.end(); ++jt) {
      int dist = std::max(std::abs(it->first.first - jt->first.first),
                          std::abs(it->first.second - jt->first.second));
      if (dist <= range) continue;
      const auto& a = it->second;
      const auto& b = jt->second;
      for (size_t e = 0; e < a.size(); ++e) {
        if (a[e] && b[e]) {
          range = dist;
          break;
        }
      }
    }
  }
  return range;
}

/// Per-trial site grid: open(s) = H(R1(s)) and V(R2(s)) in the truncated
/// enhanced graph.
inline void renorm_sites_for_trial(const RenormSpec& spec, const EdgeIndexer& ix,
                                   std::uint64_t trial, BondConfig& scratch,
                                   std::vector<std::uint8_t>& sites,
                                   std::vector<std::uint8_t>* h_flags = nullptr,
                                   std::vector<std::uint8_t>* v_flags = nullptr) {
  threshold_into(scratch, ix, UniformField{spec.seed, trial}, spec.p);
  const std::vector<VertexPair>* extra = nullptr;
  EnhancedGraph eg;
  if (spec.family && spec.truncation >= 0) {
    eg = enhance(scratch, ix, *spec.family, spec.truncation, renorm_detail::search_box(spec));
    extra = &eg.extra;
  }
  int g = spec.grid_half;
  int side = 2 * g + 1;
  sites.assign(static_cast<size_t>(side) * side, 0);
  if (h_flags) h_flags->assign(sites.size(), 0);
  if (v_flags) v_flags->assign(sites.size(), 0);
  for (int sx = -g; sx <= g; ++sx) {
    for (int sy = -g; sy <= g; ++sy) {
      size_t idx = static_cast<size_t>((sx + g) * side + (sy + g));
      bool h = crossing(scratch, ix, renorm_detail::r1_rect(spec, sx, sy), 0, extra);
      bool v = crossing(scratch, ix, renorm_detail::r2_rect(spec, sx, sy), 1, extra);
      if (h_flags) (*h_flags)[idx] = h;
      if (v_flags) (*v_flags)[idx] = v;
      sites[idx] = (h && v) ? 1 : 0;
    }
  }
}

inline RenormResult renorm_field(const RenormSpec& spec, const Parallel& par = Parallel(1)) {
  if (spec.grid_half < 0) throw std::invalid_argument("renorm: grid_half must be >= 0");
  if (spec.trials <= 0) throw std::invalid_argument("renorm: trial count must be positive");
  check_probability(spec.p);
  EdgeIndexer ix(renorm_detail::window(spec));
  if (spec.family && spec.truncation >= 0) {
    // Margin sanity: the search box must still cover every rectangle's
    // activation-relevant anchors.
    Box sb = renorm_detail::search_box(spec);
    int foot = spec.family->max_footprint(0, spec.truncation);
    int g = spec.grid_half;
    if (!sb.contains_box(renorm_detail::r1_rect(spec, g, g).expanded(foot)) ||
        !sb.contains_box(renorm_detail::r2_rect(spec, g, g).expanded(foot)))
      throw std::invalid_argument("renorm: window too small for the enhancement margin");
  }
  int g = spec.grid_half;
  int side = 2 * g + 1;
  size_t n_sites = static_cast<size_t>(side) * side;
  size_t center = static_cast<size_t>(g * side + g);
  struct Acc {
    std::vector<std::int64_t> open;
    std::vector<std::int64_t> joint;  // flattened upper-triangular pair joints
    std::int64_t center_h = 0, center_v = 0, center_open = 0;
    BondConfig scratch;
    std::vector<std::uint8_t> sites, h_flags, v_flags;
  };
  size_t n_pairs = n_sites * (n_sites + 1) / 2;
  Acc total = par.run<Acc>(
      static_cast<std::uint64_t>(spec.trials),
      [&](std::uint64_t trial, Acc& acc) {
        if (acc.open.empty()) {
          acc.open.assign(n_sites, 0);
          acc.joint.assign(n_pairs, 0);
        }
        renorm_sites_for_trial(spec, ix, trial, acc.scratch, acc.sites, &acc.h_flags,
                               &acc.v_flags);
        for (size_t i = 0; i < n_sites; ++i)
          if (acc.sites[i]) ++acc.open[i];
        size_t pair_idx = 0;
        for (size_t i = 0; i < n_sites; ++i)
          for (size_t j = i; j < n_sites; ++j, ++pair_idx)
            if (acc.sites[i] && acc.sites[j]) ++acc.joint[pair_idx];
        acc.center_h += acc.h_flags[center];
        acc.center_v += acc.v_flags[center];
        acc.center_open += acc.sites[center];
      },
      [&](Acc& a, const Acc& b) {
        if (a.open.empty()) {
          a.open.assign(n_sites, 0);
          a.joint.assign(n_pairs, 0);
        }
        if (!b.open.empty()) {
          for (size_t i = 0; i < n_sites; ++i) a.open[i] += b.open[i];
          for (size_t i = 0; i < n_pairs; ++i) a.joint[i] += b.joint[i];
        }
        a.center_h += b.center_h;
        a.center_v += b.center_v;
        a.center_open += b.center_open;
      });

  RenormResult res;
  res.spec = spec;
  res.sites_per_side = side;
  res.site_open_count = total.open;
  res.center_h_count = total.center_h;
  res.center_v_count = total.center_v;
  res.center_open_count = total.center_open;
  res.dependence_range = dependence_range(spec);
  res.range_exceeds_two = res.dependence_range > 2;

  auto site_xy = [&](size_t idx) {
    return std::pair<int, int>{static_cast<int>(idx) / side - g, static_cast<int>(idx) % side - g};
  };
  std::map<std::pair<int, int>, RenormPairStat> classes;
  double n = static_cast<double>(spec.trials);
  size_t pair_idx = 0;
  for (size_t i = 0; i < n_sites; ++i) {
    for (size_t j = i; j < n_sites; ++j, ++pair_idx) {
      if (i == j) continue;
      auto [xi, yi] = site_xy(i);
      auto [xj, yj] = site_xy(j);
      int dx = xj - xi, dy = yj - yi;
      if (dx < 0 || (dx == 0 && dy < 0)) {
        dx = -dx;
        dy = -dy;
      }
      double a = static_cast<double>(total.open[i]);
      double b = static_cast<double>(total.open[j]);
      double joint = static_cast<double>(total.joint[pair_idx]);
      double var_a = a * (n - a) / n;
      double var_b = b * (n - b) / n;
      double corr = 0.0;
      if (var_a > 0 && var_b > 0) corr = (joint - a * b / n) / std::sqrt(var_a * var_b);
      auto& cls = classes[{dx, dy}];
      cls.dx = dx;
      cls.dy = dy;
      cls.distance = std::max(std::abs(dx), std::abs(dy));
      cls.max_abs_corr = std::max(cls.max_abs_corr, std::abs(corr));
      ++cls.pair_count;
    }
  }
  for (const auto& [key, cls] : classes) res.pair_stats.push_back(cls);
  res.far_corr_bound = 4.0 / std::sqrt(n);
  for (const auto& cls : res.pair_stats)
    if (cls.distance > res.dependence_range)
      res.far_corr_worst = std::max(res.far_corr_worst, cls.max_abs_corr);
  res.far_pairs_within_noise = res.far_corr_worst <= res.far_corr_bound;
  return res;
}

// ---- empirical domination probe -------------------------------------------------

using SiteFieldSampler = std::function<void(std::uint64_t trial, std::vector<std::uint8_t>& sites)>;

namespace renorm_detail {

inline bool site_grid_crossing(const std::vector<std::uint8_t>& sites, int side, int lo, int hi,
                               int axis) {
  // crossing of the sub-block [lo,hi]^2 by a nearest-neighbor path of open sites
  int n = hi - lo + 1;
  if (n <= 0) return false;
  UnionFind uf(static_cast<std::int64_t>(n) * n);
  auto at = [&](int x, int y) { return sites[static_cast<size_t>(x) * side + y] != 0; };
  auto id = [&](int x, int y) { return static_cast<std::int32_t>((x - lo) * n + (y - lo)); };
  for (int x = lo; x <= hi; ++x) {
    for (int y = lo; y <= hi; ++y) {
      if (!at(x, y)) continue;
      if (x + 1 <= hi && at(x + 1, y)) uf.unite(id(x, y), id(x + 1, y));
      if (y + 1 <= hi && at(x, y + 1)) uf.unite(id(x, y), id(x, y + 1));
    }
  }
  for (int a = lo; a <= hi; ++a) {
    for (int b = lo; b <= hi; ++b) {
      bool open_a = axis == 0 ? at(lo, a) : at(a, lo);
      bool open_b = axis == 0 ? at(hi, b) : at(b, hi);
      if (!open_a || !open_b) continue;
      std::int32_t ra = axis == 0 ? id(lo, a) : id(a, lo);
      std::int32_t rb = axis == 0 ? id(hi, b) : id(b, hi);
      if (uf.same(ra, rb)) return true;
    }
  }
  return false;
}

}  // namespace renorm_detail

struct FunctionalStat {
  std::string name;
  double field_freq = 0.0;
  double bern_freq = 0.0;
  double pooled_se = 0.0;
  double deficit = 0.0;  // bern - field; positive deficit is evidence against domination
  bool safe = true;      // deficit <= 3 pooled se
};

struct DominationReport {
  double r = 0.0;
  std::vector<FunctionalStat> functionals;
  bool dominates = true;
};

/// Compare increasing functionals (block site-crossings at two scales) of a
/// site field against iid Bernoulli(r) sites. An empirical probe: it can
/// refute domination at 3 sigma, never certify it.
inline DominationReport domination_probe(const SiteFieldSampler& sampler, int side, double r,
                                         std::int64_t n_trials, std::uint64_t seed,
                                         const Parallel& par = Parallel(1)) {
  check_probability(r);
  if (side < 1) throw std::invalid_argument("domination_probe: side must be >= 1");
  if (n_trials <= 0) throw std::invalid_argument("domination_probe: trial count positive");
  struct Func {
    std::string name;
    int lo, hi, axis;
  };
  std::vector<Func> funcs;
  funcs.push_back({"H-full", 0, side - 1, 0});
  funcs.push_back({"V-full", 0, side - 1, 1});
  if (side >= 3) {
    funcs.push_back({"H-core", 1, side - 2, 0});
    funcs.push_back({"V-core", 1, side - 2, 1});
  }
  std::uint64_t bern_seed = derive_seed(seed, "bernoulli-comparison");
  struct Acc {
    std::vector<std::int64_t> field_hits, bern_hits;
    std::vector<std::uint8_t> sites, bern;
  };
  size_t n_sites = static_cast<size_t>(side) * side;
  Acc total = par.run<Acc>(
      static_cast<std::uint64_t>(n_trials),
      [&](std::uint64_t trial, Acc& acc) {
        if (acc.field_hits.empty()) {
          acc.field_hits.assign(funcs.size(), 0);
          acc.bern_hits.assign(funcs.size(), 0);
        }
        sampler(trial, acc.sites);
        if (acc.sites.size() != n_sites)
          throw std::invalid_argument("domination_probe: sampler grid size mismatch");
        acc.bern.assign(n_sites, 0);
        for (size_t i = 0; i < n_sites; ++i)
          acc.bern[i] = counter_unit(bern_seed, kStreamSites, trial, i) < r ? 1 : 0;
        for (size_t f = 0; f < funcs.size(); ++f) {
          if (renorm_detail::site_grid_crossing(acc.sites, side, funcs[f].lo, funcs[f].hi,
                                                funcs[f].axis))
            ++acc.field_hits[f];
          if (renorm_detail::site_grid_crossing(acc.bern, side, funcs[f].lo, funcs[f].hi,
                                                funcs[f].axis))
            ++acc.bern_hits[f];
        }
      },
      [&](Acc& a, const Acc& b) {
        if (a.field_hits.empty()) {
          a.field_hits.assign(funcs.size(), 0);
          a.bern_hits.assign(funcs.size(), 0);
        }
        if (!b.field_hits.empty())
          for (size_t f = 0; f < funcs.size(); ++f) {
            a.field_hits[f] += b.field_hits[f];
            a.bern_hits[f] += b.bern_hits[f];
          }
      });
  DominationReport rep;
  rep.r = r;
  double n = static_cast<double>(n_trials);
  for (size_t f = 0; f < funcs.size(); ++f) {
    FunctionalStat st;
    st.name = funcs[f].name;
    st.field_freq = static_cast<double>(total.field_hits[f]) / n;
    st.bern_freq = static_cast<double>(total.bern_hits[f]) / n;
    st.deficit = st.bern_freq - st.field_freq;
    st.pooled_se = std::sqrt(st.field_freq * (1 - st.field_freq) / n +
                             st.bern_freq * (1 - st.bern_freq) / n);
    st.safe = st.deficit <= 3.0 * st.pooled_se;
    if (!st.safe) rep.dominates = false;
    rep.functionals.push_back(st);
  }
  return rep;
}

/// Largest density r in the grid at which no functional shows a 3 sigma
/// deficit.
inline double largest_safe_density(const SiteFieldSampler& sampler, int side,
                                   const std::vector<double>& r_grid, std::int64_t n_trials,
                                   std::uint64_t seed, const Parallel& par = Parallel(1)) {
  double best = 0.0;
  for (double r : r_grid) {
    DominationReport rep = domination_probe(sampler, side, r, n_trials, seed, par);
    if (rep.dominates) best = std::max(best, r);
  }
  return best;
}

/// Sampler adapter for the renormalized field itself. Stateless per call, so
/// safe to share across workers.
inline SiteFieldSampler renorm_sampler(const RenormSpec& spec) {
  auto ix = std::make_shared<EdgeIndexer>(renorm_detail::window(spec));
  return [spec, ix](std::uint64_t trial, std::vector<std::uint8_t>& sites) {
    BondConfig scratch;
    renorm_sites_for_trial(spec, *ix, trial, scratch, sites);
  };
}

}  // namespace percolab
