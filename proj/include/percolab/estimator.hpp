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

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "percolab/bond_config.hpp"
#include "percolab/connectivity.hpp"
#include "percolab/enhancement.hpp"
#include "percolab/lattice.hpp"
#include "percolab/matcher.hpp"
#include "percolab/parallel.hpp"
#include "percolab/rng.hpp"

namespace percolab {

// ---- events -----------------------------------------------------------------

struct CrossingEvent {
  Box rect;
  int axis = 0;  // 0: horizontal (faces orthogonal to e1), 1: vertical
};
struct OneArmEvent {
  int radius = 1;
};
struct GkEvent {
  int k = 0;
  double anchor_scale = 1.0;
};
struct JklEvent {
  int k = 0;
  int l = 3;
};
struct LnEvent {
  int n = 2;
};
struct EdgeOpenEvent {
  Edge e;
};

using EventKind =
    std::variant<CrossingEvent, OneArmEvent, GkEvent, JklEvent, LnEvent, EdgeOpenEvent>;

/// A fully specified measurable event: what to test, on which window, and in
/// which graph (base percolation, or the enhanced graph truncated at a
/// level). All events here are increasing in p.
struct EventSpec {
  EventKind kind;
  Domain window;
  const EnhancementFamily* family = nullptr;
  int truncation = -1;  // -1: base graph; k >= 0: enhancements of level <= k
  WindowMode mode = WindowMode::strict;

  bool enhanced() const { return family != nullptr && truncation >= 0; }

  std::string name() const {
    if (std::holds_alternative<CrossingEvent>(kind))
      return std::get<CrossingEvent>(kind).axis == 0 ? "H" : "V";
    if (std::holds_alternative<OneArmEvent>(kind)) return "onearm";
    if (std::holds_alternative<GkEvent>(kind)) return "gk";
    if (std::holds_alternative<JklEvent>(kind)) return "jkl";
    if (std::holds_alternative<LnEvent>(kind)) return "ln";
    return "edge";
  }
};

// Builders compute the window a query needs: the event's own geometry plus
// activation margins when the event lives in an enhanced graph.

inline EventSpec crossing_event(Box rect, int axis, const EnhancementFamily* family = nullptr,
                                int truncation = -1, int extra_margin = 0,
                                WindowMode mode = WindowMode::strict) {
  EventSpec s;
  s.kind = CrossingEvent{rect, axis};
  s.family = family;
  s.truncation = truncation;
  s.mode = mode;
  int pad = extra_margin;
  if (family && truncation >= 0) pad += 2 * family->max_footprint(0, truncation);
  s.window = rect.expanded(pad);
  return s;
}

inline EventSpec onearm_event(int radius, int dim = 2, const EnhancementFamily* family = nullptr,
                              int truncation = -1, int extra_margin = 0) {
  EventSpec s;
  s.kind = OneArmEvent{radius};
  s.family = family;
  s.truncation = truncation;
  int pad = extra_margin;
  if (family && truncation >= 0) pad += 2 * family->max_footprint(0, truncation);
  s.window = Box::lambda(family ? family->dim : dim, radius + pad);
  return s;
}

inline EventSpec gk_event(const EnhancementFamily& family, int k, double anchor_scale = 1.0,
                          int extra_margin = 0, WindowMode mode = WindowMode::strict,
                          std::optional<Box> window_override = std::nullopt) {
  EventSpec s;
  s.kind = GkEvent{k, anchor_scale};
  s.family = &family;
  s.truncation = k;
  s.mode = mode;
  if (window_override) {
    s.window = *window_override;
  } else {
    int scale = 1 << k;
    int anchor_half = static_cast<int>(std::ceil(anchor_scale * scale));
    int needed = std::max(3 * scale, anchor_half + family.max_footprint(k, k)) + extra_margin;
    s.window = Box::lambda(family.dim, needed);
  }
  return s;
}

inline EventSpec jkl_event(const EnhancementFamily& family, int k, int l) {
  EventSpec s;
  s.kind = JklEvent{k, l};
  s.family = &family;
  s.truncation = k;
  s.window = Torus(family.dim, l * (1 << k));
  return s;
}

inline EventSpec ln_event(const EnhancementFamily& family, int n, int extra_margin = 0,
                          WindowMode mode = WindowMode::strict) {
  EventSpec s;
  s.kind = LnEvent{n};
  s.family = &family;
  s.truncation = family.max_level();
  s.mode = mode;
  s.window = Box::lambda(family.dim, n / 2 + family.max_footprint(0, INT_MAX) + extra_margin);
  return s;
}

inline EventSpec edge_open_event(Edge e, Domain window) {
  EventSpec s;
  s.kind = EdgeOpenEvent{e};
  s.window = std::move(window);
  return s;
}

/// Evaluate the event on one sampled configuration.
inline bool evaluate_event(const EventSpec& spec, const EdgeIndexer& ix, const BondConfig& cfg) {
  if (const auto* ev = std::get_if<CrossingEvent>(&spec.kind)) {
    if (!spec.enhanced()) return crossing(cfg, ix, ev->rect, ev->axis);
    return crossing_enhanced(cfg, ix, *spec.family, spec.truncation, ev->rect, ev->axis,
                             spec.mode);
  }
  if (const auto* ev = std::get_if<OneArmEvent>(&spec.kind)) {
    if (!spec.enhanced()) return one_arm(cfg, ix, ev->radius);
    return one_arm_enhanced(cfg, ix, *spec.family, spec.truncation, ev->radius, spec.mode);
  }
  if (const auto* ev = std::get_if<GkEvent>(&spec.kind)) {
    if (!spec.family) throw std::invalid_argument("gk event requires a family");
    return detect_gk(cfg, ix, *spec.family, ev->k, GkOptions{ev->anchor_scale, spec.mode});
  }
  if (const auto* ev = std::get_if<JklEvent>(&spec.kind)) {
    if (!spec.family) throw std::invalid_argument("jkl event requires a family");
    return detect_jkl(cfg, ix, *spec.family, ev->k, ev->l);
  }
  if (const auto* ev = std::get_if<LnEvent>(&spec.kind)) {
    if (!spec.family) throw std::invalid_argument("ln event requires a family");
    return detect_ln(cfg, ix, *spec.family, ev->n, spec.mode);
  }
  const auto& ev = std::get<EdgeOpenEvent>(spec.kind);
  std::int32_t id = ix.index_of(ev.e);
  if (id < 0) throw std::invalid_argument("edge event: edge not in window");
  return cfg.is_open(id);
}

// ---- estimates ----------------------------------------------------------------

/// Binomial point estimate of an event probability.
struct Estimate {
  std::string event;
  double p = 0.0;
  int k = -1, l = -1, n = -1;  // event parameters where applicable
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double p_hat = 0.0;
  double se = 0.0;
  std::uint64_t seed = 0;
  bool exact = false;  // exhaustive enumeration rather than sampling
};

inline Estimate finish_estimate(Estimate e) {
  e.p_hat = e.trials > 0 ? static_cast<double>(e.successes) / static_cast<double>(e.trials) : 0.0;
  e.se = e.trials > 0 ? std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(e.trials)) : 0.0;
  return e;
}

inline void fill_event_params(Estimate& e, const EventSpec& spec) {
  if (const auto* g = std::get_if<GkEvent>(&spec.kind)) e.k = g->k;
  if (const auto* j = std::get_if<JklEvent>(&spec.kind)) {
    e.k = j->k;
    e.l = j->l;
  }
  if (const auto* l = std::get_if<LnEvent>(&spec.kind)) e.n = l->n;
  if (const auto* a = std::get_if<OneArmEvent>(&spec.kind)) e.k = a->radius;
  if (spec.enhanced() && e.k < 0) e.k = spec.truncation;
}

/// Fail fast on margin/precondition violations with a zero-trial evaluation
/// of an arbitrary configuration, before any sampling starts.
inline void preflight_event(const EventSpec& spec, const EdgeIndexer& ix) {
  BondConfig empty;
  empty.domain = ix.domain();
  empty.p = 0.0;
  empty.open.assign(static_cast<size_t>(ix.edge_count()), 0);
  (void)evaluate_event(spec, ix, empty);
}

/// Monte Carlo estimate over N independent trials, deterministic in
/// (seed, N) and independent of the worker count.
inline Estimate estimate_event(const EventSpec& spec, double p, std::int64_t n_trials,
                               std::uint64_t seed, const Parallel& par = Parallel(1)) {
  check_probability(p);
  if (n_trials <= 0) throw std::invalid_argument("estimate: trial count must be positive");
  EdgeIndexer ix(spec.window);
  preflight_event(spec, ix);
  struct Acc {
    std::uint64_t count = 0;
    BondConfig scratch;
  };
  Acc total = par.run<Acc>(
      static_cast<std::uint64_t>(n_trials),
      [&](std::uint64_t trial, Acc& acc) {
        threshold_into(acc.scratch, ix, UniformField{seed, trial}, p);
        if (evaluate_event(spec, ix, acc.scratch)) ++acc.count;
      },
      [](Acc& a, const Acc& b) { a.count += b.count; });
  Estimate e;
  e.event = spec.name();
  e.p = p;
  e.trials = n_trials;
  e.successes = static_cast<std::int64_t>(total.count);
  e.seed = seed;
  fill_event_params(e, spec);
  return finish_estimate(e);
}

/// Exact probability by exhaustive enumeration of all 2^E edge
/// configurations of the window, weighted by p^(#open) (1-p)^(E-#open).
/// Only feasible on tiny windows; the guard is deliberate.
inline Estimate enumerate_event(const EventSpec& spec, double p, int max_edges = 24) {
  check_probability(p);
  EdgeIndexer ix(spec.window);
  std::int64_t ecount = ix.edge_count();
  if (ecount > max_edges)
    throw std::invalid_argument("enumerate: window has " + std::to_string(ecount) +
                                " edges, exceeding the exhaustive-enumeration cap of " +
                                std::to_string(max_edges));
  preflight_event(spec, ix);
  std::vector<double> pow_p(static_cast<size_t>(ecount) + 1, 1.0);
  std::vector<double> pow_q(static_cast<size_t>(ecount) + 1, 1.0);
  for (std::int64_t i = 1; i <= ecount; ++i) {
    pow_p[static_cast<size_t>(i)] = pow_p[static_cast<size_t>(i - 1)] * p;
    pow_q[static_cast<size_t>(i)] = pow_q[static_cast<size_t>(i - 1)] * (1.0 - p);
  }
  BondConfig cfg;
  cfg.domain = ix.domain();
  cfg.p = p;
  cfg.open.assign(static_cast<size_t>(ecount), 0);
  double prob = 0.0;
  std::uint64_t n_masks = 1ull << ecount;
  std::int64_t hits = 0;
  for (std::uint64_t mask = 0; mask < n_masks; ++mask) {
    int pop = 0;
    for (std::int64_t e = 0; e < ecount; ++e) {
      int bit = (mask >> e) & 1;
      cfg.open[static_cast<size_t>(e)] = static_cast<std::uint8_t>(bit);
      pop += bit;
    }
    if (evaluate_event(spec, ix, cfg)) {
      prob += pow_p[static_cast<size_t>(pop)] * pow_q[static_cast<size_t>(ecount - pop)];
      ++hits;
    }
  }
  Estimate e;
  e.event = spec.name();
  e.p = p;
  e.trials = static_cast<std::int64_t>(n_masks);
  e.successes = hits;
  e.p_hat = prob;
  e.se = 0.0;
  e.exact = true;
  fill_event_params(e, spec);
  return e;
}

// ---- coupled sweep and threshold location -------------------------------------

struct SweepResult {
  std::vector<Estimate> points;
  std::uint64_t monotonicity_violations = 0;  // must stay 0: sweeps are coupled
};

/// One estimate per grid point, all grid points evaluated on the same
/// uniform field per trial. The coupled curve is nondecreasing trial by
/// trial, not just in expectation.
inline SweepResult sweep_event(const EventSpec& spec, const std::vector<double>& grid,
                               std::int64_t n_trials, std::uint64_t seed,
                               const Parallel& par = Parallel(1)) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  for (size_t i = 0; i < grid.size(); ++i) {
    check_probability(grid[i]);
    if (i > 0 && grid[i] <= grid[i - 1])
      throw std::invalid_argument("sweep: grid must be strictly increasing");
  }
  if (n_trials <= 0) throw std::invalid_argument("sweep: trial count must be positive");
  EdgeIndexer ix(spec.window);
  preflight_event(spec, ix);
  struct Acc {
    std::vector<std::uint64_t> counts;
    std::uint64_t violations = 0;
    BondConfig scratch;
  };
  Acc total = par.run<Acc>(
      static_cast<std::uint64_t>(n_trials),
      [&](std::uint64_t trial, Acc& acc) {
        if (acc.counts.empty()) acc.counts.assign(grid.size(), 0);
        bool prev = false;
        for (size_t gi = 0; gi < grid.size(); ++gi) {
          threshold_into(acc.scratch, ix, UniformField{seed, trial}, grid[gi]);
          bool hit = evaluate_event(spec, ix, acc.scratch);
          if (hit) ++acc.counts[gi];
          if (prev && !hit) ++acc.violations;
          prev = hit;
        }
      },
      [&](Acc& a, const Acc& b) {
        if (a.counts.empty()) a.counts.assign(grid.size(), 0);
        if (!b.counts.empty())
          for (size_t i = 0; i < grid.size(); ++i) a.counts[i] += b.counts[i];
        a.violations += b.violations;
      });
  SweepResult out;
  out.monotonicity_violations = total.violations;
  for (size_t gi = 0; gi < grid.size(); ++gi) {
    Estimate e;
    e.event = spec.name();
    e.p = grid[gi];
    e.trials = n_trials;
    e.successes = static_cast<std::int64_t>(total.counts[gi]);
    e.seed = seed;
    fill_event_params(e, spec);
    out.points.push_back(finish_estimate(e));
  }
  return out;
}

struct LocateResult {
  bool bracketed = false;
  double lo = 0.0, hi = 1.0;
  Estimate at_lo, at_hi;
  std::string note;
};

/// Bisection for the parameter where the coupled empirical curve crosses
/// `target`. The result is a bracket around a finite-size, finite-N proxy
/// location, not a critical point.
inline LocateResult locate_threshold(const EventSpec& spec, double target, double tolerance,
                                     std::int64_t n_trials, std::uint64_t seed,
                                     const Parallel& par = Parallel(1)) {
  if (!(target > 0.0 && target < 1.0))
    throw std::invalid_argument("locate: target must lie in (0,1)");
  if (tolerance <= 0.0) throw std::invalid_argument("locate: tolerance must be positive");
  auto probe = [&](double p) { return estimate_event(spec, p, n_trials, seed, par); };
  LocateResult res;
  res.at_lo = probe(0.0);
  res.at_hi = probe(1.0);
  if (res.at_lo.p_hat > target || res.at_hi.p_hat < target) {
    res.bracketed = false;
    res.note = "event probability does not cross the target on [0,1] at this trial count";
    return res;
  }
  res.bracketed = true;
  double lo = 0.0, hi = 1.0;
  Estimate elo = res.at_lo, ehi = res.at_hi;
  while (hi - lo > tolerance) {
    double mid = 0.5 * (lo + hi);
    Estimate em = probe(mid);
    if (em.p_hat >= target) {
      hi = mid;
      ehi = em;
    } else {
      lo = mid;
      elo = em;
    }
  }
  res.lo = lo;
  res.hi = hi;
  res.at_lo = elo;
  res.at_hi = ehi;
  res.note = "finite-size proxy bracket";
  return res;
}

// ---- inequality reports ---------------------------------------------------------

enum class Verdict { holds, holds_within_noise, violated };

inline std::string verdict_str(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::holds_within_noise: return "holds-within-noise";
    default: return "violated";
  }
}

struct SideValue {
  std::string desc;
  double value = 0.0;
  double se = 0.0;
};

/// A checked inequality lhs >= rhs with the three-pooled-standard-error
/// verdict rule: the checked inequalities are proved facts, so any stable
/// violation indicates an implementation bug rather than bad luck.
struct InequalityReport {
  std::string name;
  SideValue lhs;  // asserted-larger side
  SideValue rhs;  // asserted-smaller side
  double slack = 0.0;
  double pooled_se = 0.0;
  Verdict verdict = Verdict::holds;
};

inline InequalityReport make_report(std::string name, SideValue lhs, SideValue rhs) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs.value - rhs.value;
  r.pooled_se = std::sqrt(lhs.se * lhs.se + rhs.se * rhs.se);
  if (r.slack >= 0.0)
    r.verdict = Verdict::holds;
  else if (r.slack >= -3.0 * r.pooled_se)
    r.verdict = Verdict::holds_within_noise;
  else
    r.verdict = Verdict::violated;
  return r;
}

/// Noise scale used by the verdicts. The plug-in binomial standard error
/// vanishes at saturated estimates (0 or N successes), which would let a
/// sub-resolution slack masquerade as a 3-sigma violation; pulling the
/// center two successes toward the middle keeps it positive without moving
/// interior values beyond O(1/N). Exact enumerations stay at zero noise.
inline double verdict_se(const Estimate& e) {
  if (e.exact || e.trials <= 0) return 0.0;
  double n = static_cast<double>(e.trials);
  double center = (static_cast<double>(e.successes) + 2.0) / (n + 4.0);
  return std::sqrt(center * (1.0 - center) / n);
}

inline SideValue side_of(const Estimate& e, std::string desc) {
  return SideValue{std::move(desc), e.p_hat, verdict_se(e)};
}

/// Upper bound 1 - (1 - g)^(l^d) with delta-method standard error.
inline SideValue sandwich_upper_bound(const Estimate& gk, int l, int dim) {
  double ld = std::pow(static_cast<double>(l), dim);
  double base = 1.0 - gk.p_hat;
  double value = 1.0 - std::pow(base, ld);
  double deriv = ld * std::pow(base, ld - 1.0);
  return SideValue{"1-(1-P(gk))^(l^d)", value, deriv * verdict_se(gk)};
}

/// Torus sandwich: P(G_k) <= P(J_{k,l}) <= 1-(1-P(G_k))^(l^d).
inline std::pair<InequalityReport, InequalityReport> verify_sandwich(
    const EnhancementFamily& family, int k, int l, double p, std::int64_t n_trials,
    std::uint64_t seed, const Parallel& par = Parallel(1), bool exact = false) {
  EventSpec gk = gk_event(family, k);
  EventSpec jkl = jkl_event(family, k, l);
  Estimate eg = exact ? enumerate_event(gk, p)
                      : estimate_event(gk, p, n_trials, derive_seed(seed, "gk"), par);
  Estimate ej = exact ? enumerate_event(jkl, p)
                      : estimate_event(jkl, p, n_trials, derive_seed(seed, "jkl"), par);
  auto first = make_report("P(jkl) >= P(gk)", side_of(ej, "P(jkl)"), side_of(eg, "P(gk)"));
  auto second = make_report("1-(1-P(gk))^(l^d) >= P(jkl)", sandwich_upper_bound(eg, l, family.dim),
                            side_of(ej, "P(jkl)"));
  return {first, second};
}

/// One-arm to crossing: P(H(L_{jk,2k})) >= (P(one-arm at k)/8)^(2j).
inline InequalityReport verify_onearm(double p, int k, int j, std::int64_t n_trials,
                                      std::uint64_t seed, const Parallel& par = Parallel(1),
                                      const EnhancementFamily* family = nullptr,
                                      int truncation = -1, bool exact = false) {
  if (k < 1 || j < 1) throw std::invalid_argument("verify_onearm: k and j must be >= 1");
  EventSpec cross = crossing_event(Box::lambda2(j * k, 2 * k), 0, family, truncation);
  EventSpec arm = onearm_event(k, 2, family, truncation);
  Estimate eh = exact ? enumerate_event(cross, p)
                      : estimate_event(cross, p, n_trials, derive_seed(seed, "H"), par);
  Estimate ea = exact ? enumerate_event(arm, p)
                      : estimate_event(arm, p, n_trials, derive_seed(seed, "onearm"), par);
  double exponent = 2.0 * j;
  double base = ea.p_hat / 8.0;
  double bound = std::pow(base, exponent);
  double deriv = base > 0.0 ? exponent * std::pow(base, exponent - 1.0) / 8.0 : 0.0;
  return make_report("P(H(L_{jk,2k})) >= (P(onearm_k)/8)^(2j)", side_of(eh, "P(H)"),
                     SideValue{"(P(onearm)/8)^(2j)", bound, deriv * verdict_se(ea)});
}

/// Activation-to-crossing: P(H(L_{n/4,n})) >= P(L_n)/4, crossing measured in
/// the enhanced graph by default (flag for the base graph).
inline InequalityReport verify_occupancy(const EnhancementFamily& family, int n, double p,
                                         std::int64_t n_trials, std::uint64_t seed,
                                         const Parallel& par = Parallel(1),
                                         bool enhanced_crossing = true, bool exact = false) {
  if (n < 4 || n % 4 != 0)
    throw std::invalid_argument("verify_occupancy: n must be a positive multiple of 4");
  if (family.min_radius() < n)
    throw std::invalid_argument("verify_occupancy: every member radius must be >= n");
  EventSpec cross = crossing_event(Box::lambda2(n / 4, n), 0,
                                   enhanced_crossing ? &family : nullptr,
                                   enhanced_crossing ? family.max_level() : -1);
  EventSpec ln = ln_event(family, n);
  Estimate eh = exact ? enumerate_event(cross, p)
                      : estimate_event(cross, p, n_trials, derive_seed(seed, "H"), par);
  Estimate el = exact ? enumerate_event(ln, p)
                      : estimate_event(ln, p, n_trials, derive_seed(seed, "ln"), par);
  return make_report("P(H(L_{n/4,n})) >= P(ln)/4", side_of(eh, "P(H)"),
                     SideValue{"P(ln)/4", el.p_hat / 4.0, verdict_se(el) / 4.0});
}

/// Short-way/long-way crossing pair. The known comparison between the two is
/// existence-only (some homeomorphism links them, with no usable formula), so
/// this records both estimates and checks the qualitative implication: a
/// short-way crossing probability bounded away from zero forces a long-way
/// estimate positive beyond noise.
struct ShortToLongReport {
  Estimate short_way;  // H of L_{n, rho n}
  Estimate long_way;   // H of L_{rho n, n}
  double applicability_floor = 0.0;
  bool applicable = false;
  bool implication_holds = true;
};

inline ShortToLongReport verify_short_to_long(int n, int rho, double p, std::int64_t n_trials, std::uint64_t seed,
                            const Parallel& par = Parallel(1),
                            const EnhancementFamily* family = nullptr, int truncation = -1,
                            double floor = 0.25) {
  if (n < 1 || rho < 1) throw std::invalid_argument("verify_short_to_long: n and rho must be >= 1");
  ShortToLongReport rep;
  rep.applicability_floor = floor;
  EventSpec easy = crossing_event(Box::lambda2(n, rho * n), 0, family, truncation);
  EventSpec hard = crossing_event(Box::lambda2(rho * n, n), 0, family, truncation);
  rep.short_way = estimate_event(easy, p, n_trials, derive_seed(seed, "short"), par);
  rep.long_way = estimate_event(hard, p, n_trials, derive_seed(seed, "long"), par);
  rep.applicable = rep.short_way.p_hat >= floor;
  if (rep.applicable) rep.implication_holds = rep.long_way.p_hat > 3.0 * rep.long_way.se;
  return rep;
}

}  // namespace percolab
