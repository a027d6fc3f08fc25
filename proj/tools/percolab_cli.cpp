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

// Command-line driver: sampling, estimation, sweeps, inequality
// verification, renormalization reports and continuum demos. Every output
// carries a reproducibility block with the exact command that regenerates
// it; exit code 0 means success/holds, 2 a violated inequality, 1 a usage
// error.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "percolab/percolab.hpp"

namespace {

using namespace percolab;

struct OutputTarget {
  std::string path = "-";
  std::ofstream file;
  std::ostream& stream() {
    if (path == "-") return std::cout;
    if (!file.is_open()) {
      file.open(path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file: " + path);
    }
    return file;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open family file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> out;
  std::istringstream is(csv);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

struct CommonOpts {
  std::string family_path;
  bool symmetrize = false;
  double relaxed_c = 0.0;
  int workers = 0;
  std::string out = "-";
  std::string format = "text";
  std::uint64_t seed = 1;
  std::int64_t trials = 10000;
  double p = 0.5;
  int margin = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--family", o.family_path, "enhancement family file (json)");
  cmd->add_flag("--symmetrize", o.symmetrize, "close the family under reflections at load");
  cmd->add_option("--relaxed-c", o.relaxed_c,
                  "accept members with T not inside S when diam(T u S) <= c diam(S)");
  cmd->add_option("--workers", o.workers, "worker threads (0: hardware)");
  cmd->add_option("--out", o.out, "output path ('-': stdout)");
  cmd->add_option("--format", o.format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials");
  cmd->add_option("--p", o.p, "bond density");
  cmd->add_option("--margin", o.margin, "extra window padding");
}

std::unique_ptr<EnhancementFamily> load_family_if(const CommonOpts& o) {
  if (o.family_path.empty()) return nullptr;
  FamilyOptions fo;
  fo.symmetrize = o.symmetrize;
  fo.relaxed_c = o.relaxed_c;
  return std::make_unique<EnhancementFamily>(load_family(read_file(o.family_path), fo));
}

std::string common_repro(const std::string& cmd, const CommonOpts& o) {
  std::ostringstream ss;
  ss << "percolab " << cmd;
  if (!o.family_path.empty()) {
    ss << " --family " << o.family_path;
    if (o.symmetrize) ss << " --symmetrize";
    if (o.relaxed_c > 0) ss << " --relaxed-c " << fmt_double(o.relaxed_c);
  }
  // worker count never changes results, so it stays out of the block
  ss << " --p " << fmt_double(o.p) << " --trials " << o.trials << " --seed " << o.seed;
  if (o.margin) ss << " --margin " << o.margin;
  ss << " --format " << o.format;
  if (o.out != "-") ss << " --out " << o.out;
  return ss.str();
}

struct EventOpts {
  std::string event = "H";
  int rx = 1, ry = 1;
  std::vector<int> bounds;  // x0 y0 x1 y1, overrides rx/ry
  int k = 1;
  int l = 3;
  int n = 4;
  int trunc = -1;
  double anchor_scale = 1.0;
  bool windowed = false;
  std::vector<int> edge;  // x y axis
};

void add_event(CLI::App* cmd, EventOpts& e) {
  cmd->add_option("--event", e.event, "H, V, onearm, gk, jkl, ln or edge")
      ->check(CLI::IsMember({"H", "V", "onearm", "gk", "jkl", "ln", "edge"}));
  cmd->add_option("--rx", e.rx, "rectangle half width along x");
  cmd->add_option("--ry", e.ry, "rectangle half width along y");
  cmd->add_option("--bounds", e.bounds, "rectangle corners x0 y0 x1 y1 (overrides --rx/--ry)")
      ->expected(4);
  cmd->add_option("--k", e.k, "level / one-arm radius");
  cmd->add_option("--l", e.l, "torus factor for jkl");
  cmd->add_option("--n", e.n, "radius scale for ln");
  cmd->add_option("--trunc", e.trunc, "enhancement truncation level (-1: base graph)");
  cmd->add_option("--relaxed-anchor-scale", e.anchor_scale, "gk anchor box scale");
  cmd->add_flag("--windowed", e.windowed, "windowed matching near boundaries");
  cmd->add_option("--edge", e.edge, "edge event: lower endpoint x y and axis")->expected(3);
}

std::string event_repro(const EventOpts& e) {
  std::ostringstream ss;
  ss << " --event " << e.event;
  if (e.event == "H" || e.event == "V") {
    if (!e.bounds.empty())
      ss << " --bounds " << e.bounds[0] << ' ' << e.bounds[1] << ' ' << e.bounds[2] << ' '
         << e.bounds[3];
    else
      ss << " --rx " << e.rx << " --ry " << e.ry;
    if (e.trunc >= 0) ss << " --trunc " << e.trunc;
  } else if (e.event == "onearm") {
    ss << " --k " << e.k;
    if (e.trunc >= 0) ss << " --trunc " << e.trunc;
  } else if (e.event == "gk") {
    ss << " --k " << e.k;
    if (e.anchor_scale != 1.0) ss << " --relaxed-anchor-scale " << fmt_double(e.anchor_scale);
  } else if (e.event == "jkl") {
    ss << " --k " << e.k << " --l " << e.l;
  } else if (e.event == "ln") {
    ss << " --n " << e.n;
  } else if (e.event == "edge") {
    ss << " --edge " << e.edge[0] << ' ' << e.edge[1] << ' ' << e.edge[2];
  }
  if (e.windowed) ss << " --windowed";
  return ss.str();
}

EventSpec build_event(const EventOpts& e, const EnhancementFamily* fam, int margin) {
  WindowMode mode = e.windowed ? WindowMode::windowed : WindowMode::strict;
  if (e.event == "H" || e.event == "V") {
    Box rect = e.bounds.empty()
                   ? Box::lambda2(e.rx, e.ry)
                   : Box::bounds(2, make_coord(e.bounds[0], e.bounds[1]),
                                 make_coord(e.bounds[2], e.bounds[3]));
    if (e.trunc >= 0 && !fam) throw std::invalid_argument("crossing with --trunc needs --family");
    return crossing_event(rect, e.event == "H" ? 0 : 1, e.trunc >= 0 ? fam : nullptr, e.trunc,
                          margin, mode);
  }
  if (e.event == "onearm") return onearm_event(e.k, 2, e.trunc >= 0 ? fam : nullptr, e.trunc, margin);
  if (e.event == "gk") {
    if (!fam) throw std::invalid_argument("gk needs --family");
    return gk_event(*fam, e.k, e.anchor_scale, margin, mode);
  }
  if (e.event == "jkl") {
    if (!fam) throw std::invalid_argument("jkl needs --family");
    return jkl_event(*fam, e.k, e.l);
  }
  if (e.event == "ln") {
    if (!fam) throw std::invalid_argument("ln needs --family");
    return ln_event(*fam, e.n, margin, mode);
  }
  if (e.edge.size() != 3) throw std::invalid_argument("edge event needs --edge x y axis");
  return edge_open_event(
      Edge{make_coord(e.edge[0], e.edge[1]), e.edge[2]},
      Box::lambda(2, std::max({std::abs(e.edge[0]), std::abs(e.edge[1]), 1}) + 1 + margin));
}

int exit_code_for(Verdict v) { return v == Verdict::violated ? 2 : 0; }

int run_sample(const CommonOpts& co, const EventOpts& eo, int box_half, int box_ry, int torus_m,
               std::uint64_t trial, int search_half) {
  auto fam = load_family_if(co);
  Domain dom;
  if (torus_m > 0)
    dom = Torus(2, torus_m);
  else if (box_ry > 0)
    dom = Box::lambda2(box_half, box_ry);
  else
    dom = Box::lambda(2, box_half);
  EdgeIndexer ix(dom);
  BondConfig cfg = sample(ix, co.p, co.seed, trial);
  OutputTarget out;
  out.path = co.out;
  std::ostream& os = out.stream();
  {
    std::ostringstream repro;
    repro << "percolab sample";
    if (torus_m > 0)
      repro << " --torus " << torus_m;
    else if (box_ry > 0)
      repro << " --box " << box_half << " --box-ry " << box_ry;
    else
      repro << " --box " << box_half;
    repro << " --p " << fmt_double(co.p) << " --seed " << co.seed << " --trial " << trial;
    if (!co.family_path.empty()) {
      repro << " --family " << co.family_path << " --trunc " << eo.trunc << " --search "
            << search_half;
      if (eo.windowed) repro << " --windowed";
    }
    if (co.out != "-") repro << " --out " << co.out;
    write_repro_block(os, repro.str());
  }
  if (fam && eo.trunc >= 0) {
    Box search = Box::lambda(2, search_half);
    EnhancedGraph g = enhance(cfg, ix, *fam, eo.trunc, search,
                              eo.windowed ? WindowMode::windowed : WindowMode::strict);
    dump_enhanced(os, g, ix, *fam);
  } else {
    dump_config(os, cfg, ix);
  }
  return 0;
}

int run_estimate(const CommonOpts& co, const EventOpts& eo, bool exact) {
  auto fam = load_family_if(co);
  EventSpec spec = build_event(eo, fam.get(), co.margin);
  Parallel par(co.workers);
  Estimate est =
      exact ? enumerate_event(spec, co.p) : estimate_event(spec, co.p, co.trials, co.seed, par);
  OutputTarget out;
  out.path = co.out;
  std::ostream& os = out.stream();
  std::string repro = common_repro("estimate", co) + event_repro(eo) + (exact ? " --exact" : "");
  if (co.format == "csv")
    write_estimates_csv(os, {est}, repro);
  else {
    write_repro_block(os, repro);
    write_estimate_text(os, est);
  }
  return 0;
}

int run_sweep(const CommonOpts& co, const EventOpts& eo, const std::string& grid_csv) {
  auto fam = load_family_if(co);
  EventSpec spec = build_event(eo, fam.get(), co.margin);
  std::vector<double> grid = parse_grid(grid_csv);
  Parallel par(co.workers);
  SweepResult sw = sweep_event(spec, grid, co.trials, co.seed, par);
  OutputTarget out;
  out.path = co.out;
  std::ostream& os = out.stream();
  std::string repro = common_repro("sweep", co) + event_repro(eo) + " --p-grid " + grid_csv;
  if (co.format == "csv")
    write_estimates_csv(os, sw.points, repro);
  else {
    write_repro_block(os, repro);
    for (const auto& e : sw.points) write_estimate_text(os, e);
  }
  if (sw.monotonicity_violations != 0) {
    std::cerr << "coupled sweep decreased on " << sw.monotonicity_violations
              << " trial transitions\n";
    return 2;
  }
  return 0;
}

int run_locate(const CommonOpts& co, const EventOpts& eo, double target, double tol) {
  auto fam = load_family_if(co);
  EventSpec spec = build_event(eo, fam.get(), co.margin);
  Parallel par(co.workers);
  LocateResult res = locate_threshold(spec, target, tol, co.trials, co.seed, par);
  OutputTarget out;
  out.path = co.out;
  std::ostream& os = out.stream();
  write_repro_block(os, common_repro("locate", co) + event_repro(eo) + " --target " +
                            fmt_double(target) + " --tol " + fmt_double(tol));
  if (!res.bracketed) {
    os << "not-bracketed: " << res.note << "\n";
    write_estimate_text(os, res.at_lo);
    write_estimate_text(os, res.at_hi);
    return 0;
  }
  os << "bracket [" << fmt_double(res.lo) << ", " << fmt_double(res.hi)
     << "] (finite-size proxy, not a critical point)\n";
  write_estimate_text(os, res.at_lo);
  write_estimate_text(os, res.at_hi);
  return 0;
}

int run_verify(const CommonOpts& co, const EventOpts& eo, const std::string& check, int j,
               int rho, bool flip, bool exact, bool base_crossing) {
  auto fam = load_family_if(co);
  Parallel par(co.workers);
  std::vector<InequalityReport> reports;
  OutputTarget out;
  out.path = co.out;
  std::ostream& os = out.stream();
  std::ostringstream repro;
  repro << common_repro("verify", co) << " --check " << check;
  if (check == "sandwich") {
    if (!fam) throw std::invalid_argument("sandwich needs --family");
    repro << " --k " << eo.k << " --l " << eo.l;
    auto [a, b] = verify_sandwich(*fam, eo.k, eo.l, co.p, co.trials, co.seed, par, exact);
    reports.push_back(a);
    reports.push_back(b);
  } else if (check == "onearm") {
    repro << " --k " << eo.k << " --j " << j;
    if (eo.trunc >= 0) repro << " --trunc " << eo.trunc;
    reports.push_back(verify_onearm(co.p, eo.k, j, co.trials, co.seed, par,
                                    eo.trunc >= 0 ? fam.get() : nullptr, eo.trunc, exact));
  } else if (check == "occupancy") {
    if (!fam) throw std::invalid_argument("occupancy needs --family");
    repro << " --n " << eo.n;
    if (base_crossing) repro << " --base-crossing";
    reports.push_back(
        verify_occupancy(*fam, eo.n, co.p, co.trials, co.seed, par, !base_crossing, exact));
  } else if (check == "shortlong") {
    repro << " --n " << eo.n << " --rho " << rho;
    if (eo.trunc >= 0) repro << " --trunc " << eo.trunc;
    ShortToLongReport rep = verify_short_to_long(eo.n, rho, co.p, co.trials, co.seed, par,
                               eo.trunc >= 0 ? fam.get() : nullptr, eo.trunc);
    write_repro_block(os, repro.str());
    write_estimate_text(os, rep.short_way);
    write_estimate_text(os, rep.long_way);
    os << "applicable " << (rep.applicable ? "yes" : "no") << " (short-way floor "
       << fmt_double(rep.applicability_floor) << ")\n";
    if (!rep.applicable) {
      os << "verdict not-applicable\n";
      return 0;
    }
    os << "verdict " << (rep.implication_holds ? "holds" : "violated") << "\n";
    return rep.implication_holds ? 0 : 2;
  } else {
    throw std::invalid_argument("unknown check: " + check);
  }
  if (flip) {
    repro << " --flip-direction";
    for (auto& r : reports) r = make_report(r.name + " (flipped)", r.rhs, r.lhs);
  }
  if (exact) repro << " --exact";
  write_repro_block(os, repro.str());
  int code = 0;
  for (const auto& r : reports) {
    write_inequality_report(os, r);
    code = std::max(code, exit_code_for(r.verdict));
  }
  os << "exit_code " << code << "\n";
  return code;
}

int run_renorm(const CommonOpts& co, int k, int trunc, int grid_half,
               const std::string& grid_out) {
  auto fam = load_family_if(co);
  RenormSpec spec;
  spec.k = k;
  spec.p = co.p;
  spec.family = fam.get();
  spec.truncation = fam ? trunc : -1;
  spec.grid_half = grid_half;
  spec.trials = co.trials;
  spec.seed = co.seed;
  Parallel par(co.workers);
  RenormResult res = renorm_field(spec, par);
  OutputTarget out;
  out.path = co.out;
  std::ostream& os = out.stream();
  std::ostringstream repro;
  repro << common_repro("renorm", co) << " --k " << k << " --grid " << grid_half;
  if (fam) repro << " --trunc " << trunc;
  if (!grid_out.empty()) repro << " --grid-out " << grid_out;
  write_repro_block(os, repro.str());
  double n = static_cast<double>(co.trials);
  double ph = static_cast<double>(res.center_h_count) / n;
  double pv = static_cast<double>(res.center_v_count) / n;
  double po = static_cast<double>(res.center_open_count) / n;
  double delta_hat = std::max(1.0 - ph, 1.0 - pv);
  os << "center P(H(R1)) " << fmt_double(ph) << " P(V(R2)) " << fmt_double(pv)
     << " P(site open) " << fmt_double(po) << "\n";
  os << "delta_hat " << fmt_double(delta_hat) << " (1-delta)^2 "
     << fmt_double((1 - delta_hat) * (1 - delta_hat)) << "\n";
  os << "dependence_range " << res.dependence_range
     << (res.range_exceeds_two ? " (exceeds 2)" : "") << "\n";
  os << "corr beyond range " << fmt_double(res.far_corr_worst) << " (bound "
     << fmt_double(res.far_corr_bound) << ") "
     << (res.far_pairs_within_noise ? "within-noise" : "beyond-noise") << "\n";
  for (const auto& ps : res.pair_stats)
    os << "displacement " << ps.dx << ' ' << ps.dy << " distance " << ps.distance
       << " max_abs_corr " << fmt_double(ps.max_abs_corr) << "\n";
  if (!grid_out.empty()) {
    std::ofstream gos(grid_out, std::ios::binary);
    if (!gos) throw std::runtime_error("cannot open grid output: " + grid_out);
    write_renorm_csv(gos, res, repro.str());
  }
  return 0;
}

int run_continuum(const CommonOpts& co, const std::string& op, double lambda, double mu,
                  double blank_eps, int inner_half, int pad, double radius, double box_w,
                  double rotund_c) {
  Parallel par(co.workers);
  OutputTarget out;
  out.path = co.out;
  std::ostream& os = out.stream();
  std::ostringstream repro;
  repro << common_repro("continuum", co) << " --op " << op << " --lambda " << fmt_double(lambda);
  if (op == "couple" || op == "marginal") {
    repro << " --mu " << fmt_double(mu) << " --blank-eps " << fmt_double(blank_eps) << " --inner "
          << inner_half << " --pad " << pad;
    write_repro_block(os, repro.str());
    BlankedBlockPoisson src;
    src.mu_per_tile = mu;
    src.blank_prob = blank_eps;
    TileGrid inner = TileGrid::centered(2, inner_half);
    double delta = 1.0 - src.tile_occupancy();
    os << "source tile occupancy " << fmt_double(src.tile_occupancy()) << " (delta "
       << fmt_double(delta) << ")\n";
    PoissonMarginalAccum accum(inner);
    std::int64_t failures = 0;
    for (std::int64_t t = 0; t < co.trials; ++t) {
      CoupleOutcome oc =
          couple_lss(src, inner, pad, lambda, co.seed, static_cast<std::uint64_t>(t));
      if (!oc.success) {
        ++failures;
        if (failures <= 5)
          os << "coupling failure at trial " << t << " tile (" << oc.failing_tile[0] << ','
             << oc.failing_tile[1] << "): " << oc.failure_reason << "\n";
      }
      accum.add(oc.y);
    }
    os << "coupling failures " << failures << " / " << co.trials << "\n";
    if (op == "marginal") {
      auto rep = accum.finish(lambda, std::min<std::int64_t>(co.trials, 10000));
      os << "Y mean " << fmt_double(rep.mean) << " (|dev| " << fmt_double(rep.mean_dev)
         << " tol " << fmt_double(rep.mean_tol) << ")\n";
      os << "Y var " << fmt_double(rep.var) << " (|dev| " << fmt_double(rep.var_dev) << " tol "
         << fmt_double(rep.var_tol) << ")\n";
      os << "Y P(empty tile) " << fmt_double(rep.p_empty) << " vs exp(-lambda) "
         << fmt_double(std::exp(-lambda)) << " (tol " << fmt_double(rep.p_empty_tol) << ")\n";
      os << "tile pair covariance " << fmt_double(rep.pair_cov) << " (tol "
         << fmt_double(rep.pair_cov_tol) << ")\n";
      os << "marginal " << (rep.pass ? "pass" : "fail") << "\n";
      return rep.pass ? 0 : 2;
    }
    return 0;
  }
  if (op == "diskprobe") {
    repro << " --radius " << fmt_double(radius) << " --boxw " << fmt_double(box_w);
    write_repro_block(os, repro.str());
    RealBox box = RealBox::cube(2, 0.0, box_w);
    DiskScalingReport rep = disk_probe_with_scaling(lambda, radius, box, co.trials, co.seed, par);
    write_estimate_text(os, rep.base);
    for (const auto& [s, e] : rep.scaled) {
      os << "scale " << s << ": ";
      write_estimate_text(os, e);
    }
    os << "scaling consistent " << (rep.consistent ? "yes" : "no") << "\n";
    return rep.consistent ? 0 : 2;
  }
  if (op == "poisson") {
    repro << " --boxw " << fmt_double(box_w) << " --trial 0";
    RealBox box = RealBox::cube(2, 0.0, box_w);
    PointSample s = sample_poisson(box, lambda, co.seed, 0);
    write_points_csv(os, s, repro.str());
    return 0;
  }
  if (op == "rotund") {
    auto fam = load_family_if(co);
    if (!fam) throw std::invalid_argument("rotund needs --family");
    repro << " --rotund-c " << fmt_double(rotund_c);
    write_repro_block(os, repro.str());
    bool all = true;
    for (const auto& [name, ok] : rotund_report(*fam, rotund_c)) {
      os << name << ' ' << (ok ? "rotund" : "not-rotund") << "\n";
      all = all && ok;
    }
    os << (all ? "all rotund" : "not all rotund") << "\n";
    return 0;
  }
  throw std::invalid_argument("unknown continuum op: " + op);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"enhancement bond percolation laboratory"};
  app.require_subcommand(1);

  CommonOpts co;
  EventOpts eo;

  auto* sample_cmd = app.add_subcommand("sample", "dump one (enhanced) configuration");
  int box_half = 3, box_ry = 0, torus_m = 0, search_half = 2;
  std::uint64_t trial = 0;
  sample_cmd->add_option("--box", box_half, "half width of a centered square window");
  sample_cmd->add_option("--box-ry", box_ry, "half height (with --box as half width)");
  sample_cmd->add_option("--torus", torus_m, "torus diameter m (overrides --box)");
  sample_cmd->add_option("--trial", trial, "trial index");
  sample_cmd->add_option("--search", search_half, "anchor search half width for enhancement");
  sample_cmd->add_option("--trunc", eo.trunc, "enhancement truncation level");
  sample_cmd->add_flag("--windowed", eo.windowed, "windowed matching");
  add_common(sample_cmd, co);

  auto* est_cmd = app.add_subcommand("estimate", "Monte Carlo estimate of one event");
  bool exact = false;
  add_event(est_cmd, eo);
  est_cmd->add_flag("--exact", exact, "exhaustive enumeration instead of sampling");
  add_common(est_cmd, co);

  auto* sweep_cmd = app.add_subcommand("sweep", "coupled estimates across a p grid");
  std::string grid_csv = "0.1,0.3,0.5,0.7,0.9";
  add_event(sweep_cmd, eo);
  sweep_cmd->add_option("--p-grid", grid_csv, "comma-separated increasing densities");
  add_common(sweep_cmd, co);

  auto* loc_cmd = app.add_subcommand("locate", "bisect the coupled curve for a target");
  double target = 0.5, tol = 0.01;
  add_event(loc_cmd, eo);
  loc_cmd->add_option("--target", target, "target probability in (0,1)");
  loc_cmd->add_option("--tol", tol, "bracket width tolerance");
  add_common(loc_cmd, co);

  auto* ver_cmd = app.add_subcommand("verify", "check one of the proved inequalities");
  std::string check = "sandwich";
  int jj = 2, rho = 2;
  bool flip = false, vexact = false, base_crossing = false;
  ver_cmd->add_option("--check", check, "sandwich, onearm, occupancy or shortlong")
      ->check(CLI::IsMember({"sandwich", "onearm", "occupancy", "shortlong"}));
  ver_cmd->add_option("--k", eo.k, "level / one-arm radius");
  ver_cmd->add_option("--l", eo.l, "torus factor");
  ver_cmd->add_option("--n", eo.n, "radius scale");
  ver_cmd->add_option("--j", jj, "aspect factor for the one-arm bound");
  ver_cmd->add_option("--rho", rho, "aspect ratio for the crossing comparison");
  ver_cmd->add_option("--trunc", eo.trunc, "enhancement truncation level");
  ver_cmd->add_flag("--flip-direction", flip, "self-test: corrupt the inequality direction");
  ver_cmd->add_flag("--exact", vexact, "exhaustive enumeration (tiny windows only)");
  ver_cmd->add_flag("--base-crossing", base_crossing,
                    "measure the occupancy crossing in the base graph");
  add_common(ver_cmd, co);

  auto* ren_cmd = app.add_subcommand("renorm", "renormalized site field report");
  int rk = 1, rtrunc = 0, grid_half = 2;
  std::string grid_out;
  ren_cmd->add_option("--k", rk, "tile scale exponent");
  ren_cmd->add_option("--trunc", rtrunc, "enhancement truncation (with --family)");
  ren_cmd->add_option("--grid", grid_half, "site grid half extent");
  ren_cmd->add_option("--grid-out", grid_out, "CSV path for the per-site frequency grid");
  add_common(ren_cmd, co);

  auto* con_cmd = app.add_subcommand("continuum", "Poisson / disk process laboratory");
  std::string op = "couple";
  double lambda = 1.0, mu = 12.0, blank_eps = 1e-5, radius = 1.0, box_w = 6.0, rotund_c = 0.5;
  int inner_half = 8, pad = 2;
  con_cmd->add_option("--op", op, "couple, marginal, diskprobe, rotund or poisson")
      ->check(CLI::IsMember({"couple", "marginal", "diskprobe", "rotund", "poisson"}));
  con_cmd->add_option("--lambda", lambda, "Poisson intensity");
  con_cmd->add_option("--mu", mu, "source mean points per tile");
  con_cmd->add_option("--blank-eps", blank_eps, "source block blanking probability");
  con_cmd->add_option("--inner", inner_half, "inner grid half extent (tiles)");
  con_cmd->add_option("--pad", pad, "source padding (tiles, >= 2)");
  con_cmd->add_option("--radius", radius, "disk radius");
  con_cmd->add_option("--boxw", box_w, "probe box side");
  con_cmd->add_option("--rotund-c", rotund_c, "rotundity constant");
  add_common(con_cmd, co);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sample_cmd) return run_sample(co, eo, box_half, box_ry, torus_m, trial, search_half);
    if (*est_cmd) return run_estimate(co, eo, exact);
    if (*sweep_cmd) return run_sweep(co, eo, grid_csv);
    if (*loc_cmd) return run_locate(co, eo, target, tol);
    if (*ver_cmd) return run_verify(co, eo, check, jj, rho, flip, vexact, base_crossing);
    if (*ren_cmd) return run_renorm(co, rk, rtrunc, grid_half, grid_out);
    if (*con_cmd)
      return run_continuum(co, op, lambda, mu, blank_eps, inner_half, pad, radius, box_w,
                           rotund_c);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 1;
}
