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
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "percolab/connectivity.hpp"
#include "percolab/enhancement.hpp"
#include "percolab/estimator.hpp"
#include "percolab/parallel.hpp"
#include "percolab/rng.hpp"

namespace percolab {

using RealPoint = std::array<double, 3>;

inline double dist2(const RealPoint& a, const RealPoint& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

struct RealBox {
  int dim = 2;
  RealPoint lo{0, 0, 0};
  RealPoint hi{0, 0, 0};

  static RealBox cube(int dim, double lo, double hi) {
    RealBox b;
    b.dim = dim;
    for (int i = 0; i < dim; ++i) {
      b.lo[i] = lo;
      b.hi[i] = hi;
    }
    return b;
  }

  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= hi[i] - lo[i];
    return v;
  }

  bool contains(const RealPoint& x) const {
    for (int i = 0; i < dim; ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }

  RealBox scaled(double s) const {
    RealBox b = *this;
    for (int i = 0; i < dim; ++i) {
      b.lo[i] = lo[i] * s;
      b.hi[i] = hi[i] * s;
    }
    return b;
  }
};

/// Finite realization of a point process on a box.
struct PointSample {
  int dim = 2;
  RealBox box;
  std::vector<RealPoint> pts;
  double intensity = 0.0;  // metadata: nominal intensity of the generating law

  PointSample scaled(double s) const {
    PointSample out = *this;
    out.box = box.scaled(s);
    out.intensity = intensity / std::pow(s, dim);
    for (auto& p : out.pts)
      for (int i = 0; i < dim; ++i) p[i] *= s;
    return out;
  }

  PointSample restricted(const RealBox& sub) const {
    PointSample out;
    out.dim = dim;
    out.box = sub;
    out.intensity = intensity;
    for (const auto& p : pts)
      if (sub.contains(p)) out.pts.push_back(p);
    return out;
  }
};

/// Homogeneous Poisson process: total count Poisson(lambda * volume), points
/// uniform. Deterministic in (seed, trial).
inline PointSample sample_poisson(const RealBox& box, double lambda, std::uint64_t seed,
                                  std::uint64_t trial) {
  if (lambda < 0) throw std::invalid_argument("sample_poisson: negative intensity");
  PointSample s;
  s.dim = box.dim;
  s.box = box;
  s.intensity = lambda;
  CounterStream cs(seed, kStreamScratch, trial);
  long n = cs.next_poisson(lambda * box.volume());
  s.pts.reserve(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    RealPoint p{0, 0, 0};
    for (int d = 0; d < box.dim; ++d) p[d] = cs.next_in(box.lo[d], box.hi[d]);
    s.pts.push_back(p);
  }
  return s;
}

/// Superposition coupling: the lo-intensity sample is a subset of the
/// hi-intensity one, so any increasing functional is monotone trial by trial.
inline std::pair<PointSample, PointSample> sample_poisson_coupled(const RealBox& box,
                                                                  double lambda_lo,
                                                                  double lambda_hi,
                                                                  std::uint64_t seed,
                                                                  std::uint64_t trial) {
  if (lambda_hi < lambda_lo)
    throw std::invalid_argument("sample_poisson_coupled: lambda_hi < lambda_lo");
  PointSample base = sample_poisson(box, lambda_lo, derive_seed(seed, "base"), trial);
  PointSample extra = sample_poisson(box, lambda_hi - lambda_lo, derive_seed(seed, "extra"), trial);
  PointSample both = base;
  both.intensity = lambda_hi;
  both.pts.insert(both.pts.end(), extra.pts.begin(), extra.pts.end());
  return {base, both};
}

/// Union of closed Euclidean balls of radius r around the sample points.
struct DiskUnion {
  const PointSample* base = nullptr;
  double r = 1.0;

  bool covers(const RealPoint& x) const {
    double rr = r * r;
    for (const auto& p : base->pts)
      if (dist2(p, x, base->dim) <= rr) return true;
    return false;
  }
};

// ---- unit tile grid ----------------------------------------------------------

/// Axis-aligned grid of unit tiles with integer corners; tile (i,...) spans
/// [lo+i, lo+i+1] per axis. Unit tiles are the translates of the centered
/// unit cube used by the tile coupling.
struct TileGrid {
  int dim = 2;
  std::array<int, 3> lo{0, 0, 0};
  std::array<int, 3> count{1, 1, 1};

  static TileGrid centered(int dim, int half_tiles) {
    TileGrid g;
    g.dim = dim;
    for (int i = 0; i < dim; ++i) {
      g.lo[i] = -half_tiles;
      g.count[i] = 2 * half_tiles;
    }
    for (int i = dim; i < 3; ++i) {
      g.lo[i] = 0;
      g.count[i] = 1;
    }
    return g;
  }

  TileGrid expanded(int pad) const {
    TileGrid g = *this;
    for (int i = 0; i < dim; ++i) {
      g.lo[i] -= pad;
      g.count[i] += 2 * pad;
    }
    return g;
  }

  std::int64_t tile_count() const {
    std::int64_t n = 1;
    for (int i = 0; i < dim; ++i) n *= count[i];
    return n;
  }

  bool contains_tile(const std::array<int, 3>& t) const {
    for (int i = 0; i < dim; ++i)
      if (t[i] < lo[i] || t[i] >= lo[i] + count[i]) return false;
    return true;
  }

  std::int64_t rank(const std::array<int, 3>& t) const {
    std::int64_t r = 0;
    for (int i = 0; i < dim; ++i) r = r * count[i] + (t[i] - lo[i]);
    return r;
  }

  std::array<int, 3> at(std::int64_t rank_) const {
    std::array<int, 3> t{0, 0, 0};
    for (int i = dim - 1; i >= 0; --i) {
      t[i] = lo[i] + static_cast<int>(rank_ % count[i]);
      rank_ /= count[i];
    }
    return t;
  }

  std::array<int, 3> tile_of(const RealPoint& p) const {
    std::array<int, 3> t{0, 0, 0};
    for (int i = 0; i < dim; ++i) {
      t[i] = static_cast<int>(std::floor(p[i]));
      t[i] = std::min(std::max(t[i], lo[i]), lo[i] + count[i] - 1);
    }
    return t;
  }

  RealBox tile_box(const std::array<int, 3>& t) const {
    RealBox b;
    b.dim = dim;
    for (int i = 0; i < dim; ++i) {
      b.lo[i] = t[i];
      b.hi[i] = t[i] + 1.0;
    }
    return b;
  }

  RealBox box() const {
    RealBox b;
    b.dim = dim;
    for (int i = 0; i < dim; ++i) {
      b.lo[i] = lo[i];
      b.hi[i] = lo[i] + count[i];
    }
    return b;
  }
};

/// Occupancy field W: tile open iff it contains at least one sample point.
inline std::vector<std::uint8_t> occupied_tiles(const PointSample& s, const TileGrid& grid) {
  std::vector<std::uint8_t> occ(static_cast<size_t>(grid.tile_count()), 0);
  for (const auto& p : s.pts) {
    auto t = grid.tile_of(p);
    if (grid.contains_tile(t)) occ[static_cast<size_t>(grid.rank(t))] = 1;
  }
  return occ;
}

// ---- k-dependent source processes ---------------------------------------------

/// Poisson points sampled block by block (blocks of block^d tiles); each
/// block is independently blanked with a small probability. Genuinely
/// k-dependent (within-block states are fully dependent) with an exactly
/// computable tile-occupancy lower bound.
struct BlankedBlockPoisson {
  double mu_per_tile = 1.0;
  int block = 2;
  double blank_prob = 0.0;

  double tile_occupancy() const { return (1.0 - blank_prob) * (1.0 - std::exp(-mu_per_tile)); }
  double dependence_range() const { return static_cast<double>(block); }

  PointSample sample(const TileGrid& grid, std::uint64_t seed, std::uint64_t trial) const {
    if (mu_per_tile < 0 || blank_prob < 0 || blank_prob > 1 || block < 1)
      throw std::invalid_argument("blanked-block source: bad parameters");
    PointSample s;
    s.dim = grid.dim;
    s.box = grid.box();
    s.intensity = mu_per_tile * (1.0 - blank_prob);
    std::array<int, 3> blocks{1, 1, 1};
    for (int i = 0; i < grid.dim; ++i)
      blocks[i] = (grid.count[i] + block - 1) / block;
    std::int64_t n_blocks = 1;
    for (int i = 0; i < grid.dim; ++i) n_blocks *= blocks[i];
    for (std::int64_t br = 0; br < n_blocks; ++br) {
      // block coordinates
      std::array<int, 3> bc{0, 0, 0};
      std::int64_t rest = br;
      for (int i = grid.dim - 1; i >= 0; --i) {
        bc[i] = static_cast<int>(rest % blocks[i]);
        rest /= blocks[i];
      }
      RealBox bbox;
      bbox.dim = grid.dim;
      double vol = 1.0;
      for (int i = 0; i < grid.dim; ++i) {
        bbox.lo[i] = grid.lo[i] + static_cast<double>(bc[i]) * block;
        bbox.hi[i] = std::min<double>(bbox.lo[i] + block, grid.lo[i] + grid.count[i]);
        vol *= bbox.hi[i] - bbox.lo[i];
      }
      if (counter_unit(seed, kStreamTiles, trial, static_cast<std::uint64_t>(br)) < blank_prob)
        continue;
      CounterStream draw(seed, kStreamScratch, trial, static_cast<std::uint64_t>(br) + 1);
      long n = draw.next_poisson(mu_per_tile * vol);
      for (long i = 0; i < n; ++i) {
        RealPoint p{0, 0, 0};
        for (int d = 0; d < grid.dim; ++d) p[d] = draw.next_in(bbox.lo[d], bbox.hi[d]);
        s.pts.push_back(p);
      }
    }
    return s;
  }
};

/// Matern type-I hard core: Poisson parents, symmetric deletion of any point
/// with a neighbor within the hard-core distance. k-dependent with range
/// 2h; occupancy measured empirically.
struct MaternHardCore {
  double parent_mu = 4.0;  // parents per unit volume
  double h = 0.25;

  double dependence_range() const { return 2.0 * h; }

  PointSample sample(const TileGrid& grid, std::uint64_t seed, std::uint64_t trial) const {
    PointSample parents = sample_poisson(grid.box(), parent_mu, seed, trial);
    PointSample s;
    s.dim = parents.dim;
    s.box = parents.box;
    s.intensity = parent_mu * std::exp(-parent_mu * std::pow(2 * h, parents.dim));
    double hh = h * h;
    for (size_t i = 0; i < parents.pts.size(); ++i) {
      bool lonely = true;
      for (size_t j = 0; j < parents.pts.size(); ++j) {
        if (i == j) continue;
        if (dist2(parents.pts[i], parents.pts[j], parents.dim) < hh) {
          lonely = false;
          break;
        }
      }
      if (lonely) s.pts.push_back(parents.pts[i]);
    }
    return s;
  }
};

// ---- tile coupling of a dense k-dependent process with a Poisson process -------

/// Outcome of one coupling trial.
///
/// X is the dense source on the padded outer grid; U is an iid
/// Bernoulli(1-e^{-lambda}) tile set on the inner grid; U' is the closed
/// one-tile neighborhood of U; Y places a Poisson(lambda)-conditioned-nonempty
/// cluster on each U tile and nothing elsewhere, so Y is exactly a Poisson
/// process of intensity lambda on the inner box.
///
/// The trial succeeds when every U' tile is occupied by X and passes the
/// coverage witness test (every subcell of the tile fits inside a unit ball
/// around some X point). On success the containment chain
///     D(Y,1) subset U' subset D(X,1)
/// holds exactly: the first inclusion because a unit ball around a point of a
/// U tile stays inside the tile's closed neighborhood, the second by the
/// per-subcell witnesses. Failures are reported, never retried: a failing
/// tile is evidence that the source density is too low for this lambda.
struct CoupleOutcome {
  PointSample x;
  PointSample y;
  std::vector<std::uint8_t> u;        // per inner tile
  std::vector<std::uint8_t> u_prime;  // per outer tile
  bool success = true;
  std::array<int, 3> failing_tile{0, 0, 0};
  std::string failure_reason;
};

namespace continuum_detail {

/// Exact sufficient test: the whole subcell lies in B(x,1) iff every corner
/// does (the distance to a point is maximized at a corner of the cell).
inline bool subcell_within_unit_ball(const RealBox& cell, const RealPoint& x, int dim) {
  double worst = 0.0;
  int corners = 1 << dim;
  for (int c = 0; c < corners; ++c) {
    double d2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      double coord = (c >> i) & 1 ? cell.hi[i] : cell.lo[i];
      d2 += (coord - x[i]) * (coord - x[i]);
    }
    worst = std::max(worst, d2);
    if (worst > 1.0) return false;
  }
  return worst <= 1.0;
}

}  // namespace continuum_detail

template <class Source>
CoupleOutcome couple_lss(const Source& source, const TileGrid& inner, int pad, double lambda,
                         std::uint64_t seed, std::uint64_t trial, int subdivisions = 4) {
  if (lambda < 0) throw std::invalid_argument("couple_lss: negative intensity");
  if (pad < 2) throw std::invalid_argument("couple_lss: pad must be >= 2");
  if (subdivisions < 1) throw std::invalid_argument("couple_lss: subdivisions must be >= 1");
  TileGrid outer = inner.expanded(pad);
  CoupleOutcome out;
  out.x = source.sample(outer, derive_seed(seed, "source"), trial);
  std::vector<std::uint8_t> w = occupied_tiles(out.x, outer);

  const double rho = 1.0 - std::exp(-lambda);
  std::uint64_t u_seed = derive_seed(seed, "u-tiles");
  out.u.assign(static_cast<size_t>(inner.tile_count()), 0);
  for (std::int64_t r = 0; r < inner.tile_count(); ++r)
    out.u[static_cast<size_t>(r)] =
        counter_unit(u_seed, kStreamTiles, trial, static_cast<std::uint64_t>(r)) < rho ? 1 : 0;

  // U': closed 1-tile neighborhood of U inside the outer grid.
  out.u_prime.assign(static_cast<size_t>(outer.tile_count()), 0);
  for (std::int64_t r = 0; r < inner.tile_count(); ++r) {
    if (!out.u[static_cast<size_t>(r)]) continue;
    auto t = inner.at(r);
    std::array<int, 3> nb{0, 0, 0};
    int steps = inner.dim == 2 ? 9 : 27;
    for (int s = 0; s < steps; ++s) {
      int rest = s;
      bool ok = true;
      for (int i = 0; i < inner.dim; ++i) {
        nb[i] = t[i] + (rest % 3) - 1;
        rest /= 3;
        if (nb[i] < outer.lo[i] || nb[i] >= outer.lo[i] + outer.count[i]) ok = false;
      }
      for (int i = inner.dim; i < 3; ++i) nb[i] = 0;
      if (ok) out.u_prime[static_cast<size_t>(outer.rank(nb))] = 1;
    }
  }

  // Bucket X points by outer tile for witness queries.
  std::vector<std::vector<std::int32_t>> bucket(static_cast<size_t>(outer.tile_count()));
  for (size_t i = 0; i < out.x.pts.size(); ++i) {
    auto t = outer.tile_of(out.x.pts[i]);
    bucket[static_cast<size_t>(outer.rank(t))].push_back(static_cast<std::int32_t>(i));
  }

  // Acceptance test on every U' tile: occupied, and fully covered.
  double sub = 1.0 / subdivisions;
  for (std::int64_t r = 0; r < outer.tile_count() && out.success; ++r) {
    if (!out.u_prime[static_cast<size_t>(r)]) continue;
    auto t = outer.at(r);
    if (!w[static_cast<size_t>(r)]) {
      out.success = false;
      out.failing_tile = t;
      out.failure_reason = "tile not dominated by the source occupancy field";
      break;
    }
    // candidate witnesses: points in the 3^d block around the tile
    std::vector<std::int32_t> cand;
    std::array<int, 3> nb{0, 0, 0};
    int steps = outer.dim == 2 ? 9 : 27;
    for (int s = 0; s < steps; ++s) {
      int rest = s;
      bool ok = true;
      for (int i = 0; i < outer.dim; ++i) {
        nb[i] = t[i] + (rest % 3) - 1;
        rest /= 3;
        if (nb[i] < outer.lo[i] || nb[i] >= outer.lo[i] + outer.count[i]) ok = false;
      }
      for (int i = outer.dim; i < 3; ++i) nb[i] = 0;
      if (ok) {
        const auto& b = bucket[static_cast<size_t>(outer.rank(nb))];
        cand.insert(cand.end(), b.begin(), b.end());
      }
    }
    int cells = 1;
    for (int i = 0; i < outer.dim; ++i) cells *= subdivisions;
    for (int c = 0; c < cells && out.success; ++c) {
      RealBox cell;
      cell.dim = outer.dim;
      int rest = c;
      for (int i = 0; i < outer.dim; ++i) {
        int ci = rest % subdivisions;
        rest /= subdivisions;
        cell.lo[i] = t[i] + ci * sub;
        cell.hi[i] = cell.lo[i] + sub;
      }
      bool witnessed = false;
      for (std::int32_t pi : cand) {
        if (continuum_detail::subcell_within_unit_ball(cell, out.x.pts[static_cast<size_t>(pi)],
                                                       outer.dim)) {
          witnessed = true;
          break;
        }
      }
      if (!witnessed) {
        out.success = false;
        out.failing_tile = t;
        out.failure_reason = "tile not fully covered by unit balls around the source";
      }
    }
  }

  // Y is sampled independently of the acceptance outcome so its marginal is
  // exactly Poisson(lambda) on the inner box.
  out.y.dim = inner.dim;
  out.y.box = inner.box();
  out.y.intensity = lambda;
  std::uint64_t y_seed = derive_seed(seed, "y-points");
  for (std::int64_t r = 0; r < inner.tile_count(); ++r) {
    if (!out.u[static_cast<size_t>(r)]) continue;
    CounterStream cs(y_seed, kStreamScratch, trial, static_cast<std::uint64_t>(r) + 1);
    long n = cs.next_positive_poisson(lambda);
    RealBox tb = inner.tile_box(inner.at(r));
    for (long i = 0; i < n; ++i) {
      RealPoint p{0, 0, 0};
      for (int d = 0; d < inner.dim; ++d) p[d] = cs.next_in(tb.lo[d], tb.hi[d]);
      out.y.pts.push_back(p);
    }
  }
  return out;
}

/// Independent oracle for the containment chain: walk a dense grid and check
/// pointwise that D(Y,1) stays inside U' and inside D(X,1).
inline bool couple_containment_on_grid(const CoupleOutcome& out, const TileGrid& inner, int pad,
                                       double step) {
  TileGrid outer = inner.expanded(pad);
  RealBox probe = inner.expanded(1).box();
  DiskUnion dy{&out.y, 1.0};
  DiskUnion dx{&out.x, 1.0};
  int dim = inner.dim;
  std::array<std::int64_t, 3> n{1, 1, 1};
  for (int i = 0; i < dim; ++i)
    n[i] = static_cast<std::int64_t>(std::floor((probe.hi[i] - probe.lo[i]) / step)) + 1;
  std::array<std::int64_t, 3> idx{0, 0, 0};
  for (idx[0] = 0; idx[0] < n[0]; ++idx[0]) {
    for (idx[1] = 0; idx[1] < n[1]; ++idx[1]) {
      for (idx[2] = 0; idx[2] < n[2]; ++idx[2]) {
        RealPoint z{0, 0, 0};
        for (int i = 0; i < dim; ++i) z[i] = probe.lo[i] + step * static_cast<double>(idx[i]);
        if (!dy.covers(z)) continue;
        auto t = outer.tile_of(z);
        if (!out.u_prime[static_cast<size_t>(outer.rank(t))]) return false;
        if (!dx.covers(z)) return false;
      }
    }
  }
  return true;
}

// ---- Poisson marginal checks ----------------------------------------------------

/// Streaming accumulator for per-tile counts of a point process; used to
/// check that the coupled process Y has exactly the Poisson(lambda) law.
class PoissonMarginalAccum {
 public:
  explicit PoissonMarginalAccum(const TileGrid& grid) : grid_(grid) {}

  void add(const PointSample& s) {
    std::vector<int> counts(static_cast<size_t>(grid_.tile_count()), 0);
    for (const auto& p : s.pts) {
      auto t = grid_.tile_of(p);
      if (grid_.contains_tile(t)) ++counts[static_cast<size_t>(grid_.rank(t))];
    }
    ++trials_;
    for (size_t i = 0; i < counts.size(); ++i) {
      sum_ += counts[i];
      sq_sum_ += static_cast<double>(counts[i]) * counts[i];
      if (counts[i] == 0) ++empty_;
    }
    if (counts.size() >= 2) {
      double prod = static_cast<double>(counts[0]) * counts[1];
      pair_sum_x_ += counts[0];
      pair_sum_y_ += counts[1];
      pair_sum_xy_ += prod;
      pair_sum_xy_sq_ += prod * prod;
    }
  }

  void merge(const PoissonMarginalAccum& o) {
    trials_ += o.trials_;
    sum_ += o.sum_;
    sq_sum_ += o.sq_sum_;
    empty_ += o.empty_;
    pair_sum_x_ += o.pair_sum_x_;
    pair_sum_y_ += o.pair_sum_y_;
    pair_sum_xy_ += o.pair_sum_xy_;
    pair_sum_xy_sq_ += o.pair_sum_xy_sq_;
  }

  struct Report {
    double mean = 0, mean_dev = 0, mean_tol = 0;
    double var = 0, var_dev = 0, var_tol = 0;
    double p_empty = 0, p_empty_dev = 0, p_empty_tol = 0;
    double pair_cov = 0, pair_cov_tol = 0;
    bool pass = false;
  };

  /// Three-standard-error agreement of mean, variance and P(count = 0)
  /// against Poisson(lambda); a fixed tile pair covariance near zero.
  Report finish(double lambda, std::int64_t min_trials = 10000) const {
    if (trials_ < min_trials)
      throw std::invalid_argument("marginal check: needs at least " +
                                  std::to_string(min_trials) + " trials");
    Report r;
    double cells = static_cast<double>(trials_) * static_cast<double>(grid_.tile_count());
    r.mean = sum_ / cells;
    r.mean_dev = std::abs(r.mean - lambda);
    r.mean_tol = 3.0 * std::sqrt(std::max(lambda, 1e-12) / cells);
    r.var = sq_sum_ / cells - r.mean * r.mean;
    r.var_dev = std::abs(r.var - lambda);
    r.var_tol = 3.0 * std::sqrt((lambda + 2.0 * lambda * lambda + 1e-12) / cells);
    r.p_empty = static_cast<double>(empty_) / cells;
    double q = std::exp(-lambda);
    r.p_empty_dev = std::abs(r.p_empty - q);
    r.p_empty_tol = 3.0 * std::sqrt(std::max(q * (1 - q), 1e-12) / cells) + 1e-12;
    double n = static_cast<double>(trials_);
    double mx = pair_sum_x_ / n, my = pair_sum_y_ / n;
    r.pair_cov = pair_sum_xy_ / n - mx * my;
    double var_xy = pair_sum_xy_sq_ / n - (pair_sum_xy_ / n) * (pair_sum_xy_ / n);
    r.pair_cov_tol = 4.0 * std::sqrt(std::max(var_xy, lambda * lambda + 1e-12) / n);
    r.pass = r.mean_dev <= r.mean_tol && r.var_dev <= r.var_tol &&
             r.p_empty_dev <= r.p_empty_tol && std::abs(r.pair_cov) <= r.pair_cov_tol;
    return r;
  }

 private:
  TileGrid grid_;
  std::int64_t trials_ = 0;
  double sum_ = 0, sq_sum_ = 0;
  std::int64_t empty_ = 0;
  double pair_sum_x_ = 0, pair_sum_y_ = 0, pair_sum_xy_ = 0, pair_sum_xy_sq_ = 0;
};

// ---- disk-graph crossing probe ---------------------------------------------------

/// True iff the union of radius-r balls around the sample contains a path of
/// overlapping balls joining the two faces of the box orthogonal to axis 0.
inline bool disk_crossing(const PointSample& s, double r) {
  if (r <= 0) throw std::invalid_argument("disk_crossing: radius must be positive");
  size_t n = s.pts.size();
  if (n == 0) return false;
  UnionFind uf(static_cast<std::int64_t>(n));
  double rr = 4.0 * r * r;  // adjacency: centers within 2r
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (dist2(s.pts[i], s.pts[j], s.dim) <= rr)
        uf.unite(static_cast<std::int32_t>(i), static_cast<std::int32_t>(j));
  std::vector<std::int32_t> left, right;
  for (size_t i = 0; i < n; ++i) {
    if (s.pts[i][0] - s.box.lo[0] <= r) left.push_back(uf.find(static_cast<std::int32_t>(i)));
    if (s.box.hi[0] - s.pts[i][0] <= r) right.push_back(uf.find(static_cast<std::int32_t>(i)));
  }
  std::sort(left.begin(), left.end());
  left.erase(std::unique(left.begin(), left.end()), left.end());
  for (std::int32_t root : right)
    if (std::binary_search(left.begin(), left.end(), uf.find(root))) return true;
  return false;
}

inline Estimate disk_percolation_probe(double lambda, double r, const RealBox& box,
                                       std::int64_t n_trials, std::uint64_t seed,
                                       const Parallel& par = Parallel(1)) {
  if (lambda < 0 || r <= 0) throw std::invalid_argument("disk probe: lambda >= 0, r > 0");
  if (n_trials <= 0) throw std::invalid_argument("disk probe: trial count positive");
  std::uint64_t hits = par.count(static_cast<std::uint64_t>(n_trials), [&](std::uint64_t trial) {
    PointSample s = sample_poisson(box, lambda, seed, trial);
    return disk_crossing(s, r);
  });
  Estimate e;
  e.event = "diskcross";
  e.p = lambda;
  e.trials = n_trials;
  e.successes = static_cast<std::int64_t>(hits);
  e.seed = seed;
  return finish_estimate(e);
}

/// Scaling consistency: the probe at (lambda, r) and the probe at
/// (lambda/s^d, s r) on the s-scaled box estimate the same event.
struct DiskScalingReport {
  Estimate base;
  std::vector<std::pair<int, Estimate>> scaled;  // (s, estimate)
  bool consistent = true;                        // every |diff| <= 3 pooled se
};

inline DiskScalingReport disk_probe_with_scaling(double lambda, double r, const RealBox& box,
                                                 std::int64_t n_trials, std::uint64_t seed,
                                                 const Parallel& par = Parallel(1)) {
  DiskScalingReport rep;
  rep.base = disk_percolation_probe(lambda, r, box, n_trials, seed, par);
  for (int s : {2, 3}) {
    double sd = std::pow(static_cast<double>(s), box.dim);
    Estimate e = disk_percolation_probe(lambda / sd, r * s, box.scaled(s), n_trials,
                                        derive_seed(seed, "scale" + std::to_string(s)), par);
    double pooled = std::sqrt(rep.base.se * rep.base.se + e.se * e.se);
    if (std::abs(e.p_hat - rep.base.p_hat) > 3.0 * pooled) rep.consistent = false;
    rep.scaled.emplace_back(s, e);
  }
  return rep;
}

/// Per-member rotundity: S contains the full box L_{floor(c * radius)}.
inline std::vector<std::pair<std::string, bool>> rotund_report(const EnhancementFamily& fam,
                                                               double c) {
  std::vector<std::pair<std::string, bool>> out;
  for (const auto& m : fam.members) out.emplace_back(m.name, member_is_rotund(m, c));
  return out;
}

}  // namespace percolab
