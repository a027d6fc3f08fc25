// Enhancement families shared by the unit and acceptance suites.
#pragma once

#include <vector>

#include "percolab/enhancement.hpp"

namespace percolab::testing {

inline VertexPair vpair(int x1, int y1, int x2, int y2) {
  return VertexPair(make_coord(x1, y1), make_coord(x2, y2));
}

inline std::vector<VertexPair> horizontal_path(int from, int len) {
  std::vector<VertexPair> out;
  for (int i = 0; i < len; ++i) out.push_back(vpair(from + i, 0, from + i + 1, 0));
  return out;
}

/// Two level-1 members with tiny footprints: a centered bar (radius 1) and a
/// hook (radius 2). Small enough that the windowed G_1 event fits on the
/// 12-edge window L_1.
inline EnhancementFamily small_g1_family() {
  Enhancement bar =
      make_enhancement("bar", 2, horizontal_path(-1, 2), horizontal_path(-1, 2));
  Enhancement hook = make_enhancement(
      "hook", 2,
      {vpair(0, 0, 1, 0), vpair(1, 0, 2, 0), vpair(2, 0, 2, 1)},
      {vpair(0, 0, 1, 0), vpair(1, 0, 2, 0), vpair(2, 0, 2, 1)});
  return make_family(2, {bar, hook}, /*planar_connected=*/true);
}

/// Members at levels 1 and 2 for the torus sandwich runs: activation needs
/// three specific open edges, which keeps the event probabilities away from
/// 0 and 1 over a useful range of p.
inline EnhancementFamily sandwich_family() {
  Enhancement lvl1 = make_enhancement(
      "elbow3", 2, {vpair(0, 0, 1, 0), vpair(1, 0, 2, 0), vpair(2, 0, 2, 1)},
      {vpair(0, 0, 1, 0), vpair(1, 0, 2, 0), vpair(2, 0, 2, 1)});
  Enhancement lvl2 = make_enhancement(
      "sparse4", 2, {vpair(0, 0, 1, 0), vpair(2, 0, 3, 0), vpair(3, 0, 4, 0)},
      horizontal_path(0, 4));
  return make_family(2, {lvl1, lvl2});
}

/// Levels 0, 1, 2 with genuinely growing enhanced sets; exercises truncation
/// monotonicity.
inline EnhancementFamily three_level_family() {
  Enhancement lvl0 = make_enhancement("edge", 2, {vpair(0, 0, 1, 0)},
                                      {vpair(0, 0, 1, 0), vpair(0, 0, 0, 1)});
  Enhancement lvl1 =
      make_enhancement("bar2", 2, {vpair(0, 0, 1, 0), vpair(1, 0, 2, 0)},
                       horizontal_path(0, 2));
  Enhancement lvl2 = make_enhancement(
      "bar4", 2, {vpair(0, 0, 1, 0), vpair(3, 0, 4, 0)}, horizontal_path(0, 4));
  return make_family(2, {lvl0, lvl1, lvl2});
}

/// Plus-shaped member of radius r: full box L_1 at the center plus four
/// straight arms. Rotund with c = 1/r, and any activation anchored within
/// L_{r/2} lays a full-width open cross through the rectangle L_{r/4, r}.
inline Enhancement plus_member(const std::string& name, int r, int t_edges = 3) {
  std::vector<VertexPair> s;
  Box center = Box::lambda(2, 1);
  for (std::int64_t vr = 0; vr < center.vertex_count(); ++vr) {
    Coord v = center.vertex_at(vr);
    for (int axis = 0; axis < 2; ++axis) {
      Coord w = v + unit_coord(axis);
      if (center.contains(w)) s.push_back(VertexPair(v, w));
    }
  }
  for (int i = 1; i < r; ++i) {
    s.push_back(vpair(i, 0, i + 1, 0));
    s.push_back(vpair(-i - 1, 0, -i, 0));
    s.push_back(VertexPair(make_coord(0, i), make_coord(0, i + 1)));
    s.push_back(VertexPair(make_coord(0, -i - 1), make_coord(0, -i)));
  }
  std::vector<VertexPair> t;
  for (int i = 0; i < t_edges; ++i) t.push_back(vpair(-1 + i, 0, i, 0));
  return make_enhancement(name, 2, t, s);
}

/// Rotund family for the activation-to-crossing runs at a fixed radius n.
inline EnhancementFamily rotund_family(int n) {
  return make_family(2, {plus_member("plus" + std::to_string(n), n)},
                     /*planar_connected=*/true, /*rotund_c=*/1.0 / n);
}

/// Single level-0 member whose enhanced set adds one diagonal chord across an
/// open corner. Cheap to match, so it suits the renormalized-field runs.
inline EnhancementFamily corner_family() {
  Enhancement corner = make_enhancement(
      "corner", 2, {vpair(0, 0, 1, 0), vpair(0, 0, 0, 1)},
      {vpair(0, 0, 1, 0), vpair(0, 0, 0, 1), vpair(1, 0, 0, 1)});
  return make_family(2, {corner});
}

}  // namespace percolab::testing
