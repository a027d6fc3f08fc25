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
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "percolab/lattice.hpp"

namespace percolab {

/// An enhancement is a pair (T, S): an activation pattern T of
/// nearest-neighbor edges and an enhanced edge set S, both anchored at the
/// origin. Wherever a rotated translate of T is fully open, the matching
/// translate of S is added to the graph. S edges may be long range; T edges
/// never are.
struct Enhancement {
  std::string name;
  int dim = 2;
  std::vector<VertexPair> t_edges;  // sorted, canonical
  std::vector<VertexPair> s_edges;  // sorted, canonical

  // Derived at construction:
  std::vector<Coord> s_vertices;
  int diameter = 0;          // l-inf diameter of the vertex set of S
  int level = 0;             // k with 2^k <= diameter < 2^(k+1)
  int radius = 0;            // smallest n with S inside L_n
  int footprint_radius = 0;  // smallest n with T and S inside L_n (matching margin)
};

/// Dyadic level: k with 2^k <= diam < 2^(k+1). The half-open convention makes
/// the levels a partition, so every member lands in exactly one level.
inline int level_of_diameter(int diam) {
  if (diam <= 0) throw std::invalid_argument("enhancement level: diameter must be >= 1");
  int k = 0;
  while ((2 << k) <= diam) ++k;  // smallest k with diam < 2^(k+1)
  return k;
}

namespace detail {

inline std::vector<Coord> vertex_set(const std::vector<VertexPair>& edges) {
  std::vector<Coord> vs;
  for (const auto& e : edges) {
    vs.push_back(e.u);
    vs.push_back(e.v);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

inline int vertex_diameter(const std::vector<Coord>& vs, int dim) {
  int d = 0;
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j) d = std::max(d, linf_dist(vs[i], vs[j], dim));
  return d;
}

inline int vertex_radius(const std::vector<Coord>& vs, int dim) {
  int r = 0;
  for (const auto& v : vs) r = std::max(r, linf_norm(v, dim));
  return r;
}

inline std::vector<VertexPair> sorted_unique(std::vector<VertexPair> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace detail

struct FamilyOptions {
  bool symmetrize = false;   // close the member list under reflections
  double relaxed_c = 0.0;    // > 0 accepts T not contained in S, provided
                             // diam(T u S) <= relaxed_c * diam(S)
};

/// Build one member and derive its level/radius data. Throws on any load-time
/// invariant violation.
inline Enhancement make_enhancement(std::string name, int dim, std::vector<VertexPair> t_edges,
                                    std::vector<VertexPair> s_edges,
                                    const FamilyOptions& opts = {}) {
  Enhancement e;
  e.name = std::move(name);
  e.dim = dim;
  e.t_edges = detail::sorted_unique(std::move(t_edges));
  e.s_edges = detail::sorted_unique(std::move(s_edges));
  if (e.s_edges.empty()) throw std::invalid_argument("enhancement '" + e.name + "': S is empty");
  if (e.t_edges.empty()) throw std::invalid_argument("enhancement '" + e.name + "': T is empty");
  for (const auto& t : e.t_edges)
    if (!t.is_nearest_neighbor(dim))
      throw std::invalid_argument("enhancement '" + e.name +
                                  "': T contains a non-nearest-neighbor edge");
  e.s_vertices = detail::vertex_set(e.s_edges);
  Coord origin{0, 0, 0};
  if (!std::binary_search(e.s_vertices.begin(), e.s_vertices.end(), origin))
    throw std::invalid_argument("enhancement '" + e.name + "': the origin is not a vertex of S");
  bool t_in_s = std::includes(e.s_edges.begin(), e.s_edges.end(), e.t_edges.begin(),
                              e.t_edges.end());
  std::vector<Coord> all_vertices = detail::vertex_set(e.s_edges);
  {
    auto tv = detail::vertex_set(e.t_edges);
    all_vertices.insert(all_vertices.end(), tv.begin(), tv.end());
    std::sort(all_vertices.begin(), all_vertices.end());
    all_vertices.erase(std::unique(all_vertices.begin(), all_vertices.end()),
                       all_vertices.end());
  }
  e.diameter = detail::vertex_diameter(e.s_vertices, dim);
  if (!t_in_s) {
    if (opts.relaxed_c <= 0.0)
      throw std::invalid_argument("enhancement '" + e.name + "': T is not a subset of S");
    int union_diam = detail::vertex_diameter(all_vertices, dim);
    if (union_diam > opts.relaxed_c * e.diameter)
      throw std::invalid_argument("enhancement '" + e.name +
                                  "': diam(T u S) exceeds relaxed_c * diam(S)");
  }
  e.level = level_of_diameter(e.diameter);
  e.radius = detail::vertex_radius(e.s_vertices, dim);
  e.footprint_radius = detail::vertex_radius(all_vertices, dim);
  return e;
}

inline int level_of(const Enhancement& e) { return e.level; }

/// True iff there is a rotation g and translation t with g(T)+t = T' and
/// g(S)+t = S' as edge sets. Members of a family must be pairwise
/// non-congruent.
inline bool congruent(const Enhancement& a, const Enhancement& b) {
  if (a.dim != b.dim) return false;
  if (a.t_edges.size() != b.t_edges.size() || a.s_edges.size() != b.s_edges.size()) return false;
  auto bbox_min = [&](const std::vector<VertexPair>& edges) {
    Coord mn{INT32_MAX, INT32_MAX, INT32_MAX};
    for (const auto& e : edges)
      for (int i = 0; i < a.dim; ++i) mn[i] = std::min({mn[i], e.u[i], e.v[i]});
    for (int i = a.dim; i < 3; ++i) mn[i] = 0;
    return mn;
  };
  Coord target = bbox_min(b.s_edges);
  for (const auto& g : rotations(a.dim)) {
    std::vector<VertexPair> rs;
    rs.reserve(a.s_edges.size());
    for (const auto& e : a.s_edges) rs.push_back(transform_pair(g, Coord{0, 0, 0}, e));
    Coord t = target - bbox_min(rs);
    bool ok = true;
    std::vector<VertexPair> placed;
    placed.reserve(rs.size());
    for (const auto& e : rs) placed.push_back(VertexPair(e.u + t, e.v + t));
    std::sort(placed.begin(), placed.end());
    if (placed != b.s_edges) continue;
    std::vector<VertexPair> pt;
    pt.reserve(a.t_edges.size());
    for (const auto& e : a.t_edges) pt.push_back(transform_pair(g, t, e));
    std::sort(pt.begin(), pt.end());
    if (pt == b.t_edges) return true;
    (void)ok;
  }
  return false;
}

/// True iff S is a connected subgraph of the nearest-neighbor graph.
inline bool s_is_planar_connected(const Enhancement& e) {
  for (const auto& ed : e.s_edges)
    if (!ed.is_nearest_neighbor(e.dim)) return false;
  if (e.s_vertices.empty()) return false;
  std::map<Coord, std::vector<Coord>> adj;
  for (const auto& ed : e.s_edges) {
    adj[ed.u].push_back(ed.v);
    adj[ed.v].push_back(ed.u);
  }
  std::set<Coord> seen;
  std::vector<Coord> stack{e.s_vertices.front()};
  seen.insert(e.s_vertices.front());
  while (!stack.empty()) {
    Coord v = stack.back();
    stack.pop_back();
    for (const auto& w : adj[v])
      if (seen.insert(w).second) stack.push_back(w);
  }
  return seen.size() == e.s_vertices.size();
}

/// True iff S contains every nearest-neighbor edge of the full box L_m,
/// m = floor(c * radius).
inline bool member_is_rotund(const Enhancement& e, double c) {
  int m = static_cast<int>(c * e.radius);
  if (m < 0) return false;
  std::set<VertexPair> s_set(e.s_edges.begin(), e.s_edges.end());
  Box box = Box::lambda(e.dim, m);
  for (std::int64_t r = 0; r < box.vertex_count(); ++r) {
    Coord v = box.vertex_at(r);
    for (int axis = 0; axis < e.dim; ++axis) {
      Coord w = v + unit_coord(axis);
      if (!box.contains(w)) continue;
      if (!s_set.count(VertexPair(v, w))) return false;
    }
  }
  return true;
}

struct EnhancementFamily {
  int dim = 2;
  bool symmetrized = false;
  bool planar_connected = false;
  std::optional<double> rotund_c;
  std::vector<Enhancement> members;

  int max_level() const {
    int k = -1;
    for (const auto& m : members) k = std::max(k, m.level);
    return k;
  }

  bool has_level(int k) const {
    for (const auto& m : members)
      if (m.level == k) return true;
    return false;
  }

  /// Largest matching footprint over members with level in [lo, hi].
  int max_footprint(int level_lo, int level_hi) const {
    int r = 0;
    for (const auto& m : members)
      if (m.level >= level_lo && m.level <= level_hi) r = std::max(r, m.footprint_radius);
    return r;
  }

  int min_radius() const {
    int r = INT32_MAX;
    for (const auto& m : members) r = std::min(r, m.radius);
    return members.empty() ? 0 : r;
  }

  int max_radius() const {
    int r = 0;
    for (const auto& m : members) r = std::max(r, m.radius);
    return r;
  }
};

/// Validate cross-member invariants. Called by every construction path.
inline void validate_family(const EnhancementFamily& fam) {
  for (size_t i = 0; i < fam.members.size(); ++i) {
    for (size_t j = i + 1; j < fam.members.size(); ++j) {
      if (congruent(fam.members[i], fam.members[j]))
        throw std::invalid_argument("family: members '" + fam.members[i].name + "' and '" +
                                    fam.members[j].name + "' are congruent");
    }
  }
  if (fam.planar_connected) {
    if (fam.dim != 2)
      throw std::invalid_argument("family: planar_connected requires dim 2");
    for (const auto& m : fam.members)
      if (!s_is_planar_connected(m))
        throw std::invalid_argument("family: member '" + m.name +
                                    "' has S not connected in the nearest-neighbor graph");
  }
  if (fam.rotund_c) {
    if (*fam.rotund_c <= 0.0 || *fam.rotund_c > 1.0)
      throw std::invalid_argument("family: rotund_c must lie in (0,1]");
    for (const auto& m : fam.members)
      if (!member_is_rotund(m, *fam.rotund_c))
        throw std::invalid_argument("family: member '" + m.name + "' fails the rotund check");
  }
}

/// Close the member list under reflections. Reflected copies that are
/// congruent (rotation + translation) to an existing member are skipped, so
/// the operation is idempotent.
inline EnhancementFamily symmetrize(const EnhancementFamily& fam) {
  EnhancementFamily out = fam;
  for (const auto& m : fam.members) {
    for (const auto& g : reflections(fam.dim)) {
      std::vector<VertexPair> rt, rs;
      for (const auto& e : m.t_edges) rt.push_back(transform_pair(g, Coord{0, 0, 0}, e));
      for (const auto& e : m.s_edges) rs.push_back(transform_pair(g, Coord{0, 0, 0}, e));
      Enhancement cand = make_enhancement(m.name + "_r", fam.dim, std::move(rt), std::move(rs),
                                          FamilyOptions{false, 1e9});
      bool dup = false;
      for (const auto& existing : out.members)
        if (congruent(cand, existing)) {
          dup = true;
          break;
        }
      if (!dup) out.members.push_back(std::move(cand));
      break;  // one reflection generates the whole det(-1) coset together with rotations
    }
  }
  out.symmetrized = true;
  validate_family(out);
  return out;
}

inline EnhancementFamily make_family(int dim, std::vector<Enhancement> members,
                                     bool planar_connected = false,
                                     std::optional<double> rotund_c = std::nullopt) {
  EnhancementFamily fam;
  fam.dim = dim;
  fam.members = std::move(members);
  fam.planar_connected = planar_connected;
  fam.rotund_c = rotund_c;
  validate_family(fam);
  return fam;
}

// ---- family file ------------------------------------------------------------
//
// {
//   "dim": 2, "symmetrized": false, "planar_connected": true, "rotund_c": 0.5,
//   "members": [
//     {"name": "bar", "T": [[[0,0],[1,0]]], "S": [[[0,0],[1,0]], [[1,0],[2,0]]]}
//   ]
// }

inline EnhancementFamily parse_family(const nlohmann::json& j, const FamilyOptions& opts = {}) {
  if (!j.is_object()) throw std::invalid_argument("family file: top level must be an object");
  EnhancementFamily fam;
  fam.dim = j.at("dim").get<int>();
  if (fam.dim < 2 || fam.dim > 3) throw std::invalid_argument("family file: dim must be 2 or 3");
  fam.symmetrized = j.value("symmetrized", false);
  fam.planar_connected = j.value("planar_connected", false);
  if (j.contains("rotund_c")) fam.rotund_c = j.at("rotund_c").get<double>();
  auto parse_vertex = [&](const nlohmann::json& v) {
    if (!v.is_array() || static_cast<int>(v.size()) != fam.dim)
      throw std::invalid_argument("family file: vertex must be a list of dim coordinates");
    Coord c{0, 0, 0};
    for (int i = 0; i < fam.dim; ++i) c[i] = v.at(static_cast<size_t>(i)).get<int>();
    return c;
  };
  auto parse_edges = [&](const nlohmann::json& arr) {
    std::vector<VertexPair> out;
    for (const auto& e : arr) {
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("family file: edge must be a pair of vertices");
      out.emplace_back(parse_vertex(e.at(0)), parse_vertex(e.at(1)));
    }
    return out;
  };
  for (const auto& m : j.at("members")) {
    fam.members.push_back(make_enhancement(m.at("name").get<std::string>(), fam.dim,
                                           parse_edges(m.at("T")), parse_edges(m.at("S")),
                                           opts));
  }
  validate_family(fam);
  if (opts.symmetrize && !fam.symmetrized) fam = symmetrize(fam);
  return fam;
}

inline EnhancementFamily load_family(const std::string& json_text,
                                     const FamilyOptions& opts = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& err) {
    throw std::invalid_argument(std::string("family file: ") + err.what());
  }
  return parse_family(j, opts);
}

inline nlohmann::json family_to_json(const EnhancementFamily& fam) {
  nlohmann::json j;
  j["dim"] = fam.dim;
  j["symmetrized"] = fam.symmetrized;
  j["planar_connected"] = fam.planar_connected;
  if (fam.rotund_c) j["rotund_c"] = *fam.rotund_c;
  auto vertex_json = [&](const Coord& c) {
    nlohmann::json v = nlohmann::json::array();
    for (int i = 0; i < fam.dim; ++i) v.push_back(c[i]);
    return v;
  };
  auto edges_json = [&](const std::vector<VertexPair>& edges) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : edges) arr.push_back({vertex_json(e.u), vertex_json(e.v)});
    return arr;
  };
  j["members"] = nlohmann::json::array();
  for (const auto& m : fam.members) {
    j["members"].push_back(
        {{"name", m.name}, {"T", edges_json(m.t_edges)}, {"S", edges_json(m.s_edges)}});
  }
  return j;
}

}  // namespace percolab
