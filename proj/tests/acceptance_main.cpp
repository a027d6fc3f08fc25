// Acceptance suite: one check per shipped guarantee, each printed as a
// single PASS/FAIL line. Exhaustive-enumeration oracles and the brute-force
// matcher live in tests/support and stay independent of the production
// algorithms they vet. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "percolab/percolab.hpp"
#include "support/families.hpp"
#include "support/oracles.hpp"
#include "support/renorm_oracle.hpp"

using namespace percolab;
namespace pt = percolab::testing;

namespace {

int g_failures = 0;
std::chrono::steady_clock::time_point g_start;

double elapsed_s() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - g_start).count();
}

void report(int id, bool pass, const std::string& what) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

// --- 1: enumeration oracle vs Monte Carlo on 12-edge windows ------------------

void criterion_1(const Parallel& par) {
  auto t0 = std::chrono::steady_clock::now();
  const double p = 0.5;
  const std::int64_t n_mc = 100000;
  EdgeIndexer ix(Box::lambda(2, 1));
  EnhancementFamily fam = pt::small_g1_family();
  bool ok = true;
  std::string detail;

  struct Item {
    std::string name;
    EventSpec spec;
    std::function<bool(const BondConfig&)> oracle_event;
  };
  std::vector<Item> items;
  items.push_back({"H(L_1)", crossing_event(Box::lambda(2, 1), 0),
                   [&](const BondConfig& c) { return pt::bfs_crossing(c, ix, Box::lambda(2, 1), 0); }});
  items.push_back({"V(L_1)", crossing_event(Box::lambda(2, 1), 1),
                   [&](const BondConfig& c) { return pt::bfs_crossing(c, ix, Box::lambda(2, 1), 1); }});
  items.push_back({"onearm k=1", onearm_event(1), [&](const BondConfig& c) {
                     std::vector<Coord> to;
                     Box b = Box::lambda(2, 1);
                     for (std::int64_t r = 0; r < b.vertex_count(); ++r)
                       if (linf_norm(b.vertex_at(r), 2) == 1) to.push_back(b.vertex_at(r));
                     return pt::bfs_connected(c, ix, b, {make_coord(0, 0)}, to);
                   }});
  items.push_back({"G_1 (12-edge window)",
                   gk_event(fam, 1, 1.0, 0, WindowMode::windowed, Box::lambda(2, 1)),
                   [&](const BondConfig& c) {
                     return !pt::naive_match(c, ix, fam, 1, 1, Box::lambda(2, 2)).empty();
                   }});

  for (const auto& item : items) {
    double oracle = pt::enumerate_probability(ix, p, item.oracle_event);
    Estimate lib = enumerate_event(item.spec, p);
    Estimate mc = estimate_event(item.spec, p, n_mc, derive_seed(42, item.name), par);
    bool exact_agree = std::abs(lib.p_hat - oracle) < 1e-12;
    bool mc_agree = std::abs(mc.p_hat - oracle) <= 3.0 * mc.se + 1e-15;
    if (!exact_agree || !mc_agree) {
      ok = false;
      detail += " " + item.name + " oracle=" + fmt(oracle) + " lib=" + fmt(lib.p_hat) +
                " mc=" + fmt(mc.p_hat) + " se=" + fmt(mc.se);
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 60.0) {
    ok = false;
    detail += " runtime " + fmt(secs) + "s >= 60s";
  }
  report(1, ok, "enumeration oracle = Monte Carlo (3 se, N=1e5) on 12-edge windows, " +
                    fmt(secs) + "s" + detail);
}

// --- 2: torus sandwich ---------------------------------------------------------

void criterion_2(const Parallel& par) {
  auto t0 = std::chrono::steady_clock::now();
  EnhancementFamily fam = pt::sandwich_family();
  bool ok = true;
  std::string detail;
  for (int k : {1, 2}) {
    for (int l : {3, 4}) {
      for (double p : {0.2, 0.4, 0.6}) {
        auto [lower, upper] = verify_sandwich(fam, k, l, p, 10000, derive_seed(7, "c2"), par);
        if (lower.verdict == Verdict::violated || upper.verdict == Verdict::violated) {
          ok = false;
          detail += " (k=" + std::to_string(k) + ",l=" + std::to_string(l) + ",p=" + fmt(p) +
                    ": slack " + fmt(lower.slack) + "/" + fmt(upper.slack) + ")";
        }
      }
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 300.0) {
    ok = false;
    detail += " runtime " + fmt(secs) + "s >= 300s";
  }
  report(2, ok,
         "torus sandwich P(gk) <= P(jkl) <= 1-(1-P(gk))^(l^d) over the k,l,p grid (N=1e4), " +
             fmt(secs) + "s" + detail);
}

// --- 3: one-arm to crossing ----------------------------------------------------

void criterion_3(const Parallel& par) {
  bool ok = true;
  std::string detail;
  for (int k : {2, 4}) {
    for (int j : {2, 3}) {
      for (double p : {0.5, 0.6}) {
        InequalityReport rep = verify_onearm(p, k, j, 10000, derive_seed(11, "c3"), par);
        if (rep.verdict == Verdict::violated) {
          ok = false;
          detail += " (k=" + std::to_string(k) + ",j=" + std::to_string(j) + ",p=" + fmt(p) +
                    ": slack " + fmt(rep.slack) + ")";
        }
      }
    }
  }
  report(3, ok, "one-arm bound P(H(L_{jk,2k})) >= (P(arm_k)/8)^(2j) over the k,j,p grid (N=1e4)" +
                    detail);
}

// --- 4: activation-to-crossing bound ---------------------------------------------

void criterion_4(const Parallel& par) {
  bool ok = true;
  std::string detail;
  for (int n : {8, 16}) {
    EnhancementFamily fam = pt::rotund_family(n);
    for (double p : {0.3, 0.5}) {
      InequalityReport rep = verify_occupancy(fam, n, p, 10000, derive_seed(13, "c4"), par);
      if (rep.verdict == Verdict::violated) {
        ok = false;
        detail +=
            " (n=" + std::to_string(n) + ",p=" + fmt(p) + ": slack " + fmt(rep.slack) + ")";
      }
    }
  }
  report(4, ok,
         "activation-to-crossing bound P(H(L_{n/4,n})) >= P(ln)/4, rotund family (N=1e4)" +
             detail);
}

// --- 5: exact monotonicity across a p grid ----------------------------------------

void criterion_5(const Parallel& par) {
  const std::vector<double> grid{0.2, 0.45, 0.7};
  const std::int64_t n = 10000;
  EnhancementFamily small = pt::small_g1_family();
  EnhancementFamily sandwich = pt::sandwich_family();
  EnhancementFamily three = pt::three_level_family();
  EnhancementFamily rotund8 = pt::rotund_family(8);
  std::vector<std::pair<std::string, EventSpec>> events;
  events.emplace_back("H(L_4)", crossing_event(Box::lambda(2, 4), 0));
  events.emplace_back("H(L_2) in P_1", crossing_event(Box::lambda(2, 2), 0, &three, 1));
  events.emplace_back("onearm k=3", onearm_event(3));
  events.emplace_back("G_1", gk_event(small, 1));
  events.emplace_back("J_{1,3}", jkl_event(sandwich, 1, 3));
  events.emplace_back("L_8", ln_event(rotund8, 8));
  std::uint64_t violations = 0;
  for (const auto& [name, spec] : events) {
    SweepResult sw = sweep_event(spec, grid, n, derive_seed(17, name), par);
    violations += sw.monotonicity_violations;
  }
  report(5, violations == 0,
         "coupled increasing events nondecreasing across the p grid on every one of 1e4 "
         "trials (violations: " +
             std::to_string(violations) + ")");
}

// --- 6: truncation monotonicity -----------------------------------------------------

void criterion_6(const Parallel& par) {
  EnhancementFamily fam = pt::three_level_family();
  EdgeIndexer ix(Box::lambda(2, 8));
  Box search = Box::lambda(2, 4);
  std::uint64_t bad = par.run<std::uint64_t>(
      10000,
      [&](std::uint64_t trial, std::uint64_t& acc) {
        BondConfig cfg = sample(ix, 0.5, derive_seed(19, "c6"), trial);
        EnhancedGraph g0 = enhance(cfg, ix, fam, 0, search);
        EnhancedGraph g1 = enhance(cfg, ix, fam, 1, search);
        EnhancedGraph g2 = enhance(cfg, ix, fam, 2, search);
        bool nested01 =
            std::includes(g1.extra.begin(), g1.extra.end(), g0.extra.begin(), g0.extra.end());
        bool nested12 =
            std::includes(g2.extra.begin(), g2.extra.end(), g1.extra.begin(), g1.extra.end());
        if (!nested01 || !nested12) ++acc;
      },
      [](std::uint64_t& a, const std::uint64_t& b) { a += b; });
  report(6, bad == 0,
         "truncated enhanced edge sets nested for j <= k on every one of 1e4 configurations "
         "(violations: " +
             std::to_string(bad) + ")");
}

// --- 7: matcher equals the brute-force matcher ----------------------------------------

void criterion_7(const Parallel& par) {
  EnhancementFamily three = pt::three_level_family();
  EnhancementFamily small = pt::small_g1_family();
  std::uint64_t mismatches = par.run<std::uint64_t>(
      1000,
      [&](std::uint64_t trial, std::uint64_t& acc) {
        int half = 2 + static_cast<int>(trial % 3);  // 5x5 .. 9x9 windows
        double p = 0.25 + 0.25 * static_cast<double>(trial % 3);
        const EnhancementFamily& fam = trial % 2 == 0 ? three : small;
        EdgeIndexer ix(Box::lambda(2, half));
        BondConfig cfg = sample(ix, p, derive_seed(23, "c7"), trial);
        MatchQuery q;
        q.anchor_box = Box::lambda(2, half);
        q.mode = WindowMode::windowed;
        auto fast = match_activations(cfg, ix, fam, q);
        auto oracle = pt::naive_match(cfg, ix, fam, 0, INT_MAX, Box::lambda(2, half));
        if (fast != oracle) ++acc;
      },
      [](std::uint64_t& a, const std::uint64_t& b) { a += b; });
  report(7, mismatches == 0,
         "pattern matcher equals the all-placements matcher on 1e3 random windows <= 9x9 "
         "(mismatches: " +
             std::to_string(mismatches) + ")");
}

// --- 8: self-duality anchor ------------------------------------------------------------

void criterion_8(const Parallel& par) {
  // (n+1) x n vertex rectangles crossed the long way at p = 1/2
  Estimate tiny = enumerate_event(
      crossing_event(Box::bounds(2, make_coord(0, 0), make_coord(2, 1)), 0), 0.5);
  Estimate next = enumerate_event(
      crossing_event(Box::bounds(2, make_coord(0, 0), make_coord(3, 2)), 0), 0.5);
  Estimate mc = estimate_event(
      crossing_event(Box::bounds(2, make_coord(0, 0), make_coord(16, 15)), 0), 0.5, 100000,
      derive_seed(29, "c8"), par);
  bool exact_ok = std::abs(tiny.p_hat - 0.5) < 1e-12 && std::abs(next.p_hat - 0.5) < 1e-12;
  bool mc_ok = std::abs(mc.p_hat - 0.5) <= 3.0 * mc.se;
  report(8, exact_ok && mc_ok,
         "self-duality: P(H) = 1/2 exactly by enumeration (3x2, 4x3) and within 3 se at "
         "17x16, N=1e5 (mc=" +
             fmt(mc.p_hat) + ", se=" + fmt(mc.se) + ")");
}

// --- 9: tile coupling of the dense source with a Poisson process ---------------------------

void criterion_9(const Parallel&) {
  auto t0 = std::chrono::steady_clock::now();
  BlankedBlockPoisson src;
  src.mu_per_tile = 12.0;
  src.blank_prob = 1e-5;
  const double lambda = 1.0;
  const std::int64_t n = 10000;
  TileGrid inner = TileGrid::centered(2, 8);  // 16x16 unit tiles
  TileGrid outer = inner.expanded(2);
  double occupancy = src.tile_occupancy();
  PoissonMarginalAccum accum(inner);
  std::int64_t failures = 0, cert_breaks = 0, grid_checks = 0;
  for (std::int64_t t = 0; t < n; ++t) {
    CoupleOutcome out = couple_lss(src, inner, 2, lambda, derive_seed(31, "c9"),
                                   static_cast<std::uint64_t>(t));
    accum.add(out.y);
    if (!out.success) {
      ++failures;
      continue;
    }
    // certificate D(Y,1) in U' in D(X,1): re-derive the tile-geometry chain
    for (const auto& y : out.y.pts) {
      auto tile = inner.tile_of(y);
      if (!out.u[static_cast<size_t>(inner.rank(tile))]) ++cert_breaks;
      for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy) {
          std::array<int, 3> nb{tile[0] + dx, tile[1] + dy, 0};
          if (outer.contains_tile(nb) && !out.u_prime[static_cast<size_t>(outer.rank(nb))])
            ++cert_breaks;
        }
    }
    if (t % 500 == 0) {  // independent dense-grid oracle on a subsample
      ++grid_checks;
      if (!couple_containment_on_grid(out, inner, 2, 0.2)) ++cert_breaks;
    }
  }
  auto marg = accum.finish(lambda);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = occupancy >= 0.99 && cert_breaks == 0 && failures < n / 100 && marg.pass &&
            secs < 300.0;
  report(9, ok,
         "tile coupling: certificate on 100% of successes (breaks: " +
             std::to_string(cert_breaks) + ", grid oracles: " + std::to_string(grid_checks) +
             "), failures " + std::to_string(failures) + "/" + std::to_string(n) +
             " < 1%, Y marginal Poisson within 3 se (" + (marg.pass ? "pass" : "fail") +
             "), occupancy " + fmt(occupancy) + ", " + fmt(secs) + "s");
}

// --- 10: renormalized site field ------------------------------------------------------

void criterion_10(const Parallel& par) {
  EnhancementFamily fam = pt::corner_family();
  RenormSpec spec;
  spec.k = 1;
  spec.p = 0.60;  // keeps the site probability away from 1, where rare-event
                  // coincidences dominate the pair-correlation statistic
  spec.family = &fam;
  spec.truncation = 0;
  spec.grid_half = 2;
  spec.trials = 10000;
  spec.seed = derive_seed(37, "c10");
  RenormResult res = renorm_field(spec, par);

  int oracle_range = pt::renorm_range_oracle(spec);
  bool range_ok = res.dependence_range == oracle_range;

  double n = static_cast<double>(spec.trials);
  double corr_bound = 4.0 / std::sqrt(n);
  double worst_far_corr = 0.0;
  for (const auto& ps : res.pair_stats)
    if (ps.distance > res.dependence_range)
      worst_far_corr = std::max(worst_far_corr, ps.max_abs_corr);
  bool corr_ok = worst_far_corr <= corr_bound;

  double ph = static_cast<double>(res.center_h_count) / n;
  double pv = static_cast<double>(res.center_v_count) / n;
  double po = static_cast<double>(res.center_open_count) / n;
  double delta_hat = std::max(1.0 - ph, 1.0 - pv);
  double bound = (1.0 - delta_hat) * (1.0 - delta_hat);
  double se = std::sqrt(po * (1 - po) / n) +
              2.0 * (1.0 - delta_hat) * std::sqrt(delta_hat * (1 - delta_hat) / n);
  bool fkg_ok = po >= bound - 3.0 * se;

  report(10, range_ok && corr_ok && fkg_ok,
         "renormalizer: range " + std::to_string(res.dependence_range) + " = footprint oracle " +
             std::to_string(oracle_range) + "; |corr| beyond range " + fmt(worst_far_corr) +
             " <= " + fmt(corr_bound) + "; P(site open) " + fmt(po) + " >= (1-delta)^2 " +
             fmt(bound) + " - 3 se");
}

}  // namespace

int main() {
  g_start = std::chrono::steady_clock::now();
  Parallel par(0);
  criterion_1(par);
  criterion_2(par);
  criterion_3(par);
  criterion_4(par);
  criterion_5(par);
  criterion_6(par);
  criterion_7(par);
  criterion_8(par);
  criterion_9(par);
  criterion_10(par);
  std::printf("%d/10 criteria passed in %.1fs\n", 10 - g_failures, elapsed_s());
  return g_failures;
}
