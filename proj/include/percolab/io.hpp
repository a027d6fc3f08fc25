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

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "percolab/bond_config.hpp"
#include "percolab/continuum.hpp"
#include "percolab/estimator.hpp"
#include "percolab/matcher.hpp"
#include "percolab/renormalizer.hpp"

namespace percolab {

inline std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Reproducibility block: the exact command line that regenerates the file.
inline void write_repro_block(std::ostream& os, const std::string& command_line) {
  os << "# schema=1\n";
  os << "# reproduce: " << command_line << "\n";
}

inline void write_estimates_csv(std::ostream& os, const std::vector<Estimate>& rows,
                                const std::string& command_line) {
  write_repro_block(os, command_line);
  os << "event,p,k,l,n,N,p_hat,se,seed\n";
  for (const auto& e : rows) {
    os << e.event << ',' << fmt_double(e.p) << ',';
    if (e.k >= 0) os << e.k;
    os << ',';
    if (e.l >= 0) os << e.l;
    os << ',';
    if (e.n >= 0) os << e.n;
    os << ',' << e.trials << ',' << fmt_double(e.p_hat) << ',' << fmt_double(e.se) << ','
       << e.seed << "\n";
  }
}

inline void write_estimate_text(std::ostream& os, const Estimate& e) {
  os << "event " << e.event << " p " << fmt_double(e.p);
  if (e.k >= 0) os << " k " << e.k;
  if (e.l >= 0) os << " l " << e.l;
  if (e.n >= 0) os << " n " << e.n;
  os << " N " << e.trials << " p_hat " << fmt_double(e.p_hat) << " se " << fmt_double(e.se)
     << " seed " << e.seed << (e.exact ? " exact" : "") << "\n";
}

inline void write_inequality_report(std::ostream& os, const InequalityReport& r) {
  os << "check " << r.name << "\n";
  os << "  lhs " << r.lhs.desc << " = " << fmt_double(r.lhs.value) << " se "
     << fmt_double(r.lhs.se) << "\n";
  os << "  rhs " << r.rhs.desc << " = " << fmt_double(r.rhs.value) << " se "
     << fmt_double(r.rhs.se) << "\n";
  os << "  slack " << fmt_double(r.slack) << " pooled_se " << fmt_double(r.pooled_se)
     << " verdict " << verdict_str(r.verdict) << "\n";
}

inline void dump_enhanced(std::ostream& os, const EnhancedGraph& g, const EdgeIndexer& ix,
                          const EnhancementFamily& fam) {
  dump_config(os, *g.base, ix);
  int dim = fam.dim;
  os << "activations " << g.activations.size() << "\n";
  for (const auto& a : g.activations) {
    os << fam.members[static_cast<size_t>(a.member)].name << ' ' << a.rot;
    for (int i = 0; i < dim; ++i) os << ' ' << a.t[i];
    os << "\n";
  }
  os << "extra " << g.extra.size() << "\n";
  for (const auto& e : g.extra) {
    for (int i = 0; i < dim; ++i) os << e.u[i] << ' ';
    for (int i = 0; i < dim; ++i) os << e.v[i] << (i + 1 < dim ? " " : "");
    os << "\n";
  }
}

inline void write_points_csv(std::ostream& os, const PointSample& s,
                             const std::string& command_line) {
  write_repro_block(os, command_line);
  os << (s.dim == 2 ? "x,y\n" : "x,y,z\n");
  for (const auto& p : s.pts) {
    os << fmt_double(p[0]) << ',' << fmt_double(p[1]);
    if (s.dim == 3) os << ',' << fmt_double(p[2]);
    os << "\n";
  }
}

inline void write_renorm_csv(std::ostream& os, const RenormResult& r,
                             const std::string& command_line) {
  write_repro_block(os, command_line);
  os << "site_x,site_y,open_freq\n";
  int g = r.spec.grid_half;
  for (int sx = -g; sx <= g; ++sx)
    for (int sy = -g; sy <= g; ++sy)
      os << sx << ',' << sy << ',' << fmt_double(r.site_freq(sx, sy)) << "\n";
}

}  // namespace percolab
