#include <catch2/catch_amalgamated.hpp>

#include "percolab/matcher.hpp"
#include "support/oracles.hpp"

using namespace percolab;
using percolab::testing::naive_match;
using percolab::testing::random_config;

namespace {

VertexPair vp(int x1, int y1, int x2, int y2) {
  return VertexPair(make_coord(x1, y1), make_coord(x2, y2));
}

std::vector<VertexPair> hpath(int from, int len) {
  std::vector<VertexPair> out;
  for (int i = 0; i < len; ++i) out.push_back(vp(from + i, 0, from + i + 1, 0));
  return out;
}

// Asymmetric hook (trivial rotation stabilizer): T = S.
EnhancementFamily hook_family() {
  Enhancement hook = make_enhancement(
      "hook", 2, {vp(0, 0, 1, 0), vp(1, 0, 1, 1)}, {vp(0, 0, 1, 0), vp(1, 0, 1, 1)});
  return make_family(2, {hook});
}

// Symmetric bar centered at the origin: stabilizer of order 2.
EnhancementFamily bar_family() {
  Enhancement bar = make_enhancement("bar", 2, hpath(-1, 2), hpath(-1, 2));
  return make_family(2, {bar});
}

// Two-level family used by truncation tests: a level-0 edge member whose S
// adds a long-range chord, and a level-1 bar.
EnhancementFamily two_level_family() {
  Enhancement lvl0 = make_enhancement("edge", 2, {vp(0, 0, 1, 0)},
                                      {vp(0, 0, 1, 0), vp(0, 1, 1, 0), vp(0, 0, 0, 1)});
  Enhancement lvl1 =
      make_enhancement("bar2", 2, {vp(0, 0, 1, 0), vp(1, 0, 2, 0)}, hpath(0, 2));
  return make_family(2, {lvl0, lvl1});
}

MatchQuery all_query(const Box& anchors) {
  MatchQuery q;
  q.anchor_box = anchors;
  q.mode = WindowMode::windowed;
  return q;
}

}  // namespace

TEST_CASE("empty configuration yields no activations") {
  EnhancementFamily fam = hook_family();
  EdgeIndexer ix(Box::lambda(2, 3));
  BondConfig cfg = sample(ix, 0.0, 1, 0);
  CHECK(match_activations(cfg, ix, fam, all_query(Box::lambda(2, 2))).empty());
}

TEST_CASE("full configuration: orbit count is rotations x anchors") {
  // 5x5 window (L_2), anchors chosen so every rotated hook fits
  EnhancementFamily fam = hook_family();
  EdgeIndexer ix(Box::lambda(2, 2));
  BondConfig cfg = sample(ix, 1.0, 1, 0);
  Box anchors = Box::lambda(2, 1);
  MatchQuery q;
  q.anchor_box = anchors;
  q.mode = WindowMode::strict;  // footprint 1 around L_1 fits in L_2
  auto acts = match_activations(cfg, ix, fam, q);
  auto oracle = naive_match(cfg, ix, fam, 0, INT_MAX, anchors);
  CHECK(acts == oracle);
  CHECK(acts.size() == 4 * 9);  // |rotation orbit| = 4, V = 9 anchors
  CHECK(dedup_activation_count(fam, acts) == 4 * 9);  // no stabilizer duplicates
}

TEST_CASE("symmetric patterns keep stabilizer records but dedupe placements") {
  EnhancementFamily fam = bar_family();
  EdgeIndexer ix(Box::lambda(2, 2));
  BondConfig cfg = sample(ix, 1.0, 1, 0);
  MatchQuery q;
  q.anchor_box = Box::lambda(2, 1);
  q.mode = WindowMode::strict;
  auto acts = match_activations(cfg, ix, fam, q);
  CHECK(acts.size() == 4 * 9);  // records keep both stabilizer elements
  CHECK(dedup_activation_count(fam, acts) == 2 * 9);  // placed sets coincide in pairs
}

TEST_CASE("config with exactly one translate of T") {
  EnhancementFamily fam = hook_family();
  EdgeIndexer ix(Box::lambda(2, 3));  // 7x7 window
  BondConfig cfg = sample(ix, 0.0, 1, 0);
  // open exactly the hook translated by (1,-1): edges (1,-1)-(2,-1), (2,-1)-(2,0)
  cfg.open[static_cast<size_t>(ix.index_of(Edge{make_coord(1, -1), 0}))] = 1;
  cfg.open[static_cast<size_t>(ix.index_of(Edge{make_coord(2, -1), 1}))] = 1;
  auto acts = match_activations(cfg, ix, fam, all_query(Box::lambda(2, 3)));
  auto oracle = naive_match(cfg, ix, fam, 0, INT_MAX, Box::lambda(2, 3));
  CHECK(acts == oracle);
  REQUIRE(acts.size() == 1);
  CHECK(acts[0].t == make_coord(1, -1));
  CHECK(acts[0].rot == 0);
}

TEST_CASE("matcher equals the naive matcher on random windows up to 9x9") {
  EnhancementFamily fam = two_level_family();
  for (int rep = 0; rep < 60; ++rep) {
    int half = 1 + rep % 4;  // windows from 3x3 to 9x9
    EdgeIndexer ix(Box::lambda(2, half));
    BondConfig cfg = random_config(ix, 0.45, 900 + rep, rep);
    Box anchors = Box::lambda(2, half);
    auto acts = match_activations(cfg, ix, fam, all_query(anchors));
    auto oracle = naive_match(cfg, ix, fam, 0, INT_MAX, anchors);
    CHECK(acts == oracle);
  }
}

TEST_CASE("matcher equals the naive matcher on the torus") {
  EnhancementFamily fam = two_level_family();
  EdgeIndexer ix(Torus(2, 3));
  for (int rep = 0; rep < 40; ++rep) {
    BondConfig cfg = random_config(ix, 0.4, 4242, rep);
    MatchQuery q;
    q.whole_torus = true;
    auto acts = match_activations(cfg, ix, fam, q);
    auto oracle = naive_match(cfg, ix, fam, 0, INT_MAX, Box{}, /*whole_torus=*/true);
    CHECK(acts == oracle);
  }
}

TEST_CASE("activation equivariance under lattice rotations") {
  EnhancementFamily fam = hook_family();
  EdgeIndexer ix(Box::lambda(2, 4));
  const auto& rots = rotations(2);
  for (int rep = 0; rep < 25; ++rep) {
    BondConfig cfg = random_config(ix, 0.5, 31 + rep, rep);
    for (size_t gi = 1; gi < rots.size(); ++gi) {
      const Rotation& g0 = rots[gi];
      // rotate the configuration
      BondConfig rcfg = cfg;
      std::fill(rcfg.open.begin(), rcfg.open.end(), 0);
      for (std::int64_t e = 0; e < ix.edge_count(); ++e) {
        if (!cfg.is_open(e)) continue;
        Edge re = rotate_edge(g0, ix.edge_at(e));
        rcfg.open[static_cast<size_t>(ix.index_of(re))] = 1;
      }
      auto base = match_activations(cfg, ix, fam, all_query(Box::lambda(2, 4)));
      auto rotated = match_activations(rcfg, ix, fam, all_query(Box::lambda(2, 4)));
      // map the base activations through g0 and compare
      std::vector<Activation> mapped;
      for (const auto& a : base) {
        Rotation comp = g0.compose(rots[static_cast<size_t>(a.rot)]);
        int ci = -1;
        for (size_t i = 0; i < rots.size(); ++i)
          if (rots[i] == comp) ci = static_cast<int>(i);
        REQUIRE(ci >= 0);
        mapped.push_back(Activation{a.member, ci, g0.apply(a.t)});
      }
      std::sort(mapped.begin(), mapped.end());
      CHECK(mapped == rotated);
    }
  }
}

TEST_CASE("torus matching is translation equivariant, trial by trial") {
  EnhancementFamily fam = two_level_family();
  Torus torus(2, 4);
  EdgeIndexer ix(torus);
  Coord shift = make_coord(3, -2);
  for (int rep = 0; rep < 50; ++rep) {
    BondConfig cfg = random_config(ix, 0.4, 777, rep);
    BondConfig shifted = cfg;
    std::fill(shifted.open.begin(), shifted.open.end(), 0);
    for (std::int64_t e = 0; e < ix.edge_count(); ++e) {
      if (!cfg.is_open(e)) continue;
      Edge se{torus.reduce(ix.edge_at(e).a + shift), ix.edge_at(e).axis};
      shifted.open[static_cast<size_t>(ix.index_of(se))] = 1;
    }
    MatchQuery q;
    q.whole_torus = true;
    auto base = match_activations(cfg, ix, fam, q);
    auto moved = match_activations(shifted, ix, fam, q);
    REQUIRE(base.size() == moved.size());
    std::vector<Activation> mapped;
    for (const auto& a : base) mapped.push_back(Activation{a.member, a.rot, torus.reduce(a.t + shift)});
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == moved);
  }
}

TEST_CASE("enhance collects the union of placed enhanced sets") {
  EnhancementFamily fam = two_level_family();
  EdgeIndexer ix(Box::lambda(2, 4));
  BondConfig cfg = sample(ix, 0.0, 1, 0);
  // a single activation of the level-0 member at the origin
  cfg.open[static_cast<size_t>(ix.index_of(Edge{make_coord(0, 0), 0}))] = 1;
  EnhancedGraph g = enhance(cfg, ix, fam, 0, Box::lambda(2, 3));
  // identity placement plus the rot180 placement anchored at (1,0)
  REQUIRE(g.activations.size() == 2);
  // extra edges: union over both placements of the 3-edge S
  CHECK(g.extra.size() == 5);
  std::int64_t beyond_t = 0;
  for (const auto& e : g.extra) {
    std::int32_t id = ix.index_of_pair(e);
    if (id < 0 || !cfg.is_open(id)) ++beyond_t;
  }
  CHECK(beyond_t == 4);  // 2 new edges per placement, no overlap
}

TEST_CASE("no activations leaves the graph equal to its base") {
  EnhancementFamily fam = hook_family();
  EdgeIndexer ix(Box::lambda(2, 3));
  BondConfig cfg = sample(ix, 0.0, 5, 0);
  EnhancedGraph g = enhance(cfg, ix, fam, INT_MAX, Box::lambda(2, 2));
  CHECK(g.extra.empty());
  CHECK(g.activations.empty());
}

TEST_CASE("truncation monotonicity: extra edges are nested in the level cap") {
  EnhancementFamily fam = two_level_family();
  EdgeIndexer ix(Box::lambda(2, 5));
  Box search = Box::lambda(2, 3);
  for (int rep = 0; rep < 100; ++rep) {
    BondConfig cfg = random_config(ix, 0.5, 606, rep);
    EnhancedGraph g0 = enhance(cfg, ix, fam, 0, search);
    EnhancedGraph g1 = enhance(cfg, ix, fam, 1, search);
    CHECK(std::includes(g1.extra.begin(), g1.extra.end(), g0.extra.begin(), g0.extra.end()));
    CHECK(g0.activations.size() <= g1.activations.size());
  }
}

TEST_CASE("strict mode rejects insufficient margins; windowed mode excludes") {
  EnhancementFamily fam = hook_family();
  EdgeIndexer ix(Box::lambda(2, 2));
  BondConfig cfg = sample(ix, 1.0, 1, 0);
  MatchQuery strict;
  strict.anchor_box = Box::lambda(2, 2);  // footprint 1 around L_2 leaves L_2: too big
  strict.mode = WindowMode::strict;
  CHECK_THROWS_AS(match_activations(cfg, ix, fam, strict), std::invalid_argument);
  MatchQuery windowed = strict;
  windowed.mode = WindowMode::windowed;
  auto acts = match_activations(cfg, ix, fam, windowed);
  auto oracle = naive_match(cfg, ix, fam, 0, INT_MAX, Box::lambda(2, 2));
  CHECK(acts == oracle);
}

TEST_CASE("detect_gk matches its definition and preconditions") {
  EnhancementFamily fam = two_level_family();  // has level 1
  EdgeIndexer small(Box::lambda(2, 3));
  BondConfig cfg_small = sample(small, 1.0, 1, 0);
  CHECK_THROWS_AS(detect_gk(cfg_small, small, fam, 1), std::invalid_argument);  // needs L_6
  GkOptions windowed;
  windowed.mode = WindowMode::windowed;
  CHECK(detect_gk(cfg_small, small, fam, 1, windowed));

  EdgeIndexer ix(Box::lambda(2, 6));
  BondConfig full = sample(ix, 1.0, 1, 0);
  CHECK(detect_gk(full, ix, fam, 1));
  BondConfig empty = sample(ix, 0.0, 1, 0);
  CHECK_FALSE(detect_gk(empty, ix, fam, 1));
  CHECK_FALSE(detect_gk(full, ix, fam, 2));  // no level-2 member

  // anchor box rescaling: a lone bar anchored at (2,0) sits outside L_{2}
  // scaled by 1/2 but inside the default box
  BondConfig lone = sample(ix, 0.0, 1, 0);
  lone.open[static_cast<size_t>(ix.index_of(Edge{make_coord(2, 0), 0}))] = 1;
  lone.open[static_cast<size_t>(ix.index_of(Edge{make_coord(3, 0), 0}))] = 1;
  CHECK(detect_gk(lone, ix, fam, 1));
  GkOptions half_scale;
  half_scale.anchor_scale = 0.5;
  CHECK_FALSE(detect_gk(lone, ix, fam, 1, half_scale));
}

TEST_CASE("detect_jkl preconditions and torus containment of gk") {
  EnhancementFamily fam = two_level_family();
  EdgeIndexer ix(Torus(2, 6));
  BondConfig cfg = sample(ix, 1.0, 1, 0);
  CHECK(detect_jkl(cfg, ix, fam, 1, 3));
  CHECK_THROWS_AS(detect_jkl(cfg, ix, fam, 1, 2), std::invalid_argument);   // l < 3
  CHECK_THROWS_AS(detect_jkl(cfg, ix, fam, 2, 3), std::invalid_argument);   // m mismatch
  BondConfig empty = sample(ix, 0.0, 1, 0);
  CHECK_FALSE(detect_jkl(empty, ix, fam, 1, 3));

  // whenever the window event holds for a config embedded in the torus, the
  // torus event holds for the embedded config
  EdgeIndexer win(Box::lambda(2, 6));
  Torus torus(2, 6);
  for (int rep = 0; rep < 40; ++rep) {
    BondConfig wcfg = random_config(win, 0.35, 11, rep);
    BondConfig tcfg = sample(ix, 0.0, 1, 0);
    for (std::int64_t e = 0; e < win.edge_count(); ++e) {
      if (!wcfg.is_open(e)) continue;
      const Edge& ed = win.edge_at(e);
      std::int32_t id = ix.index_of(Edge{torus.reduce(ed.a), ed.axis});
      // interior edges of L_6 map injectively into T_6 away from the seam
      if (id >= 0) tcfg.open[static_cast<size_t>(id)] = 1;
    }
    GkOptions opts;
    opts.mode = WindowMode::windowed;
    if (detect_gk(wcfg, win, fam, 1, opts)) CHECK(detect_jkl(tcfg, ix, fam, 1, 3));
  }
}

TEST_CASE("detect_ln preconditions and behavior") {
  // member with radius 4 >= n = 4: plus-shaped S
  std::vector<VertexPair> plus;
  for (int i = -4; i < 4; ++i) {
    plus.push_back(vp(i, 0, i + 1, 0));
    plus.push_back(VertexPair(make_coord(0, i), make_coord(0, i + 1)));
  }
  Enhancement cross = make_enhancement("plus", 2, {vp(0, 0, 1, 0)}, plus);
  EnhancementFamily fam = make_family(2, {cross});
  EdgeIndexer ix(Box::lambda(2, 6));
  BondConfig full = sample(ix, 1.0, 1, 0);
  CHECK(detect_ln(full, ix, fam, 4));
  BondConfig empty = sample(ix, 0.0, 1, 0);
  CHECK_FALSE(detect_ln(empty, ix, fam, 4));
  CHECK_THROWS_AS(detect_ln(full, ix, fam, 10), std::invalid_argument);  // radius < n
  CHECK_THROWS_AS(detect_ln(full, ix, fam, 5), std::invalid_argument);   // odd n
}

TEST_CASE("three-dimensional matching agrees with the naive matcher") {
  // a bent pattern in d=3; all 24 rotations exercised
  Enhancement bend = make_enhancement(
      "bend3d", 3,
      {VertexPair(make_coord(0, 0, 0), make_coord(1, 0, 0)),
       VertexPair(make_coord(1, 0, 0), make_coord(1, 0, 1))},
      {VertexPair(make_coord(0, 0, 0), make_coord(1, 0, 0)),
       VertexPair(make_coord(1, 0, 0), make_coord(1, 0, 1)),
       VertexPair(make_coord(0, 0, 0), make_coord(1, 0, 1))});
  EnhancementFamily fam = make_family(3, {bend});
  EdgeIndexer ix(Box::lambda(3, 2));
  for (int rep = 0; rep < 25; ++rep) {
    BondConfig cfg = random_config(ix, 0.35, 888, rep);
    MatchQuery q;
    q.anchor_box = Box::lambda(3, 2);
    q.mode = WindowMode::windowed;
    auto fast = match_activations(cfg, ix, fam, q);
    auto oracle = naive_match(cfg, ix, fam, 0, INT_MAX, Box::lambda(3, 2));
    CHECK(fast == oracle);
  }
  // full configuration: every placement of the two-edge pattern
  BondConfig full = sample(ix, 1.0, 1, 0);
  MatchQuery q;
  q.anchor_box = Box::lambda(3, 1);
  q.mode = WindowMode::strict;
  auto acts = match_activations(full, ix, fam, q);
  CHECK(acts == naive_match(full, ix, fam, 0, INT_MAX, Box::lambda(3, 1)));
  CHECK(acts.size() == 24 * 27);  // trivial stabilizer: the full orbit at each anchor
}
