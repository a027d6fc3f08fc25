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
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "percolab/lattice.hpp"
#include "percolab/rng.hpp"

namespace percolab {

/// One uniform variate per canonical edge, determined by (seed, trial).
/// Values are computed on demand; thresholding the same field at p <= p'
/// yields nested open sets, which is the monotone coupling every sweep and
/// monotonicity check relies on.
struct UniformField {
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;

  double at(std::int64_t edge_id) const { return edge_uniform(seed, trial, edge_id); }
};

/// A realization of Bernoulli bond percolation on a box or torus window:
/// one byte per canonical edge, plus the parameters that produced it.
struct BondConfig {
  Domain domain;
  std::vector<std::uint8_t> open;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;

  bool is_open(std::int64_t edge_id) const { return open[static_cast<size_t>(edge_id)] != 0; }
  std::int64_t open_count() const {
    std::int64_t n = 0;
    for (auto b : open) n += b;
    return n;
  }
};

inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must lie in [0,1]");
}

/// Edge open iff its uniform is strictly below p.
inline void threshold_into(BondConfig& cfg, const EdgeIndexer& ix, const UniformField& field,
                           double p) {
  check_probability(p);
  cfg.domain = ix.domain();
  cfg.p = p;
  cfg.seed = field.seed;
  cfg.trial = field.trial;
  cfg.open.resize(static_cast<size_t>(ix.edge_count()));
  for (std::int64_t e = 0; e < ix.edge_count(); ++e)
    cfg.open[static_cast<size_t>(e)] = field.at(e) < p ? 1 : 0;
}

inline BondConfig threshold(const EdgeIndexer& ix, const UniformField& field, double p) {
  BondConfig cfg;
  threshold_into(cfg, ix, field, p);
  return cfg;
}

/// Threshold an explicitly materialized field (mainly for deterministic tests).
inline BondConfig threshold(const EdgeIndexer& ix, const std::vector<double>& uniforms, double p) {
  check_probability(p);
  if (static_cast<std::int64_t>(uniforms.size()) != ix.edge_count())
    throw std::invalid_argument("threshold: field length != edge count");
  BondConfig cfg;
  cfg.domain = ix.domain();
  cfg.p = p;
  cfg.open.resize(uniforms.size());
  for (size_t e = 0; e < uniforms.size(); ++e) cfg.open[e] = uniforms[e] < p ? 1 : 0;
  return cfg;
}

inline BondConfig sample(const EdgeIndexer& ix, double p, std::uint64_t seed,
                         std::uint64_t trial) {
  return threshold(ix, UniformField{seed, trial}, p);
}

// ---- line-based dump/load -------------------------------------------------

inline void dump_config(std::ostream& os, const BondConfig& cfg, const EdgeIndexer& ix) {
  int dim = domain_dim(cfg.domain);
  os << "dim " << dim << "; domain " << domain_str(cfg.domain) << "; p " << cfg.p << "; seed "
     << cfg.seed << "; trial " << cfg.trial << "\n";
  for (std::int64_t e = 0; e < ix.edge_count(); ++e) {
    if (!cfg.is_open(e)) continue;
    const Edge& ed = ix.edge_at(e);
    for (int i = 0; i < dim; ++i) os << ed.a[i] << ' ';
    os << ed.axis << "\n";
  }
}

inline BondConfig load_config(std::istream& is) {
  std::string header;
  do {  // '#' lines (schema/reproducibility block) precede the header
    if (!std::getline(is, header)) throw std::runtime_error("load_config: empty input");
  } while (!header.empty() && header[0] == '#');
  std::vector<std::string> fields;  // header fields are ';'-separated
  {
    std::istringstream fs(header);
    std::string f;
    while (std::getline(fs, f, ';')) fields.push_back(f);
  }
  if (fields.size() < 5) throw std::runtime_error("load_config: malformed header");
  auto field_value = [&](size_t i, const std::string& key) {
    std::istringstream vs(fields[i]);
    std::string k;
    vs >> k;
    if (k != key) throw std::runtime_error("load_config: expected field '" + key + "'");
    std::string v;
    std::getline(vs, v);
    return v;
  };
  int dim;
  {
    std::istringstream vs(field_value(0, "dim"));
    vs >> dim;
  }
  Domain dom;
  {
    std::istringstream vs(field_value(1, "domain"));
    std::string kind;
    vs >> kind;
    if (kind == "box") {
      Coord lo{0, 0, 0}, hi{0, 0, 0};
      for (int i = 0; i < dim; ++i) {
        std::string range;
        vs >> range;
        auto pos = range.find("..");
        if (pos == std::string::npos) throw std::runtime_error("load_config: bad box range");
        lo[i] = std::stoi(range.substr(0, pos));
        hi[i] = std::stoi(range.substr(pos + 2));
      }
      dom = Box::bounds(dim, lo, hi);
    } else if (kind == "torus") {
      std::string k1, k2;
      int d, m;
      vs >> k1 >> d >> k2 >> m;
      if (k1 != "dim" || k2 != "m") throw std::runtime_error("load_config: bad torus header");
      dom = Torus(d, m);
    } else {
      throw std::runtime_error("load_config: unknown domain kind '" + kind + "'");
    }
  }
  BondConfig cfg;
  cfg.domain = dom;
  {
    std::istringstream vs(field_value(2, "p"));
    vs >> cfg.p;
  }
  {
    std::istringstream vs(field_value(3, "seed"));
    vs >> cfg.seed;
  }
  {
    std::istringstream vs(field_value(4, "trial"));
    vs >> cfg.trial;
  }
  EdgeIndexer ix(dom);
  cfg.open.assign(static_cast<size_t>(ix.edge_count()), 0);
  std::string line;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    Edge e;
    for (int i = 0; i < dim; ++i)
      if (!(ls >> e.a[i]))
        throw std::runtime_error("load_config: bad edge at line " + std::to_string(lineno));
    if (!(ls >> e.axis))
      throw std::runtime_error("load_config: bad edge at line " + std::to_string(lineno));
    std::int32_t id = ix.index_of(e);
    if (id < 0)
      throw std::runtime_error("load_config: edge outside domain at line " +
                               std::to_string(lineno));
    cfg.open[static_cast<size_t>(id)] = 1;
  }
  return cfg;
}

}  // namespace percolab
