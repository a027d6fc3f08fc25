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

#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace percolab {

/// Lattice vertex. Components beyond the active dimension are kept at zero so
/// that comparisons and hashing work uniformly for d = 2 and d = 3.
using Coord = std::array<int, 3>;

inline Coord make_coord(int x, int y, int z = 0) { return Coord{x, y, z}; }

inline Coord operator+(const Coord& a, const Coord& b) {
  return Coord{a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Coord operator-(const Coord& a, const Coord& b) {
  return Coord{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline int linf_norm(const Coord& a, int dim) {
  int m = 0;
  for (int i = 0; i < dim; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}
inline int linf_dist(const Coord& a, const Coord& b, int dim) {
  return linf_norm(a - b, dim);
}

inline Coord unit_coord(int axis) {
  Coord e{0, 0, 0};
  e[axis] = 1;
  return e;
}

inline std::string coord_str(const Coord& c, int dim) {
  std::string s = "(" + std::to_string(c[0]);
  for (int i = 1; i < dim; ++i) s += "," + std::to_string(c[i]);
  return s + ")";
}

/// Axis-aligned box of lattice vertices, bounds inclusive. The centered
/// constructors build the boxes L_n = [-n,n]^d and L_{n1,...,nd}; general
/// integer bounds are allowed so that rectangles with an even number of
/// vertex columns (needed by the self-duality anchor) are representable.
struct Box {
  int dim = 2;
  Coord lo{0, 0, 0};
  Coord hi{0, 0, 0};

  static Box lambda(int dim, int n) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("Box: dim must be 1..3");
    if (n < 0) throw std::invalid_argument("Box: negative half width");
    Box b;
    b.dim = dim;
    for (int i = 0; i < dim; ++i) {
      b.lo[i] = -n;
      b.hi[i] = n;
    }
    return b;
  }

  static Box lambda_rect(const std::vector<int>& half_widths) {
    int d = static_cast<int>(half_widths.size());
    if (d < 1 || d > 3) throw std::invalid_argument("Box: dim must be 1..3");
    Box b;
    b.dim = d;
    for (int i = 0; i < d; ++i) {
      if (half_widths[i] < 0) throw std::invalid_argument("Box: negative half width");
      b.lo[i] = -half_widths[i];
      b.hi[i] = half_widths[i];
    }
    return b;
  }

  // L_{n1,n2} in d = 2.
  static Box lambda2(int n1, int n2) { return lambda_rect({n1, n2}); }

  static Box bounds(int dim, Coord lo, Coord hi) {
    Box b;
    b.dim = dim;
    b.lo = lo;
    b.hi = hi;
    for (int i = 0; i < dim; ++i)
      if (lo[i] > hi[i]) throw std::invalid_argument("Box: lo > hi");
    for (int i = dim; i < 3; ++i) {
      b.lo[i] = 0;
      b.hi[i] = 0;
    }
    return b;
  }

  Box translated(const Coord& t) const {
    Box b = *this;
    for (int i = 0; i < dim; ++i) {
      b.lo[i] += t[i];
      b.hi[i] += t[i];
    }
    return b;
  }

  /// Minkowski-expand by r in every coordinate.
  Box expanded(int r) const {
    Box b = *this;
    for (int i = 0; i < dim; ++i) {
      b.lo[i] -= r;
      b.hi[i] += r;
    }
    return b;
  }

  bool contains(const Coord& v) const {
    for (int i = 0; i < dim; ++i)
      if (v[i] < lo[i] || v[i] > hi[i]) return false;
    return true;
  }

  bool contains_box(const Box& other) const {
    for (int i = 0; i < dim; ++i)
      if (other.lo[i] < lo[i] || other.hi[i] > hi[i]) return false;
    return true;
  }

  std::int64_t side(int axis) const { return hi[axis] - lo[axis] + 1; }

  std::int64_t vertex_count() const {
    std::int64_t n = 1;
    for (int i = 0; i < dim; ++i) n *= side(i);
    return n;
  }

  /// Lexicographic rank, first coordinate most significant.
  std::int64_t vertex_rank(const Coord& v) const {
    std::int64_t r = 0;
    for (int i = 0; i < dim; ++i) r = r * side(i) + (v[i] - lo[i]);
    return r;
  }

  Coord vertex_at(std::int64_t rank) const {
    Coord v{0, 0, 0};
    for (int i = dim - 1; i >= 0; --i) {
      std::int64_t s = side(i);
      v[i] = lo[i] + static_cast<int>(rank % s);
      rank /= s;
    }
    return v;
  }

  bool operator==(const Box& o) const = default;
};

/// Discrete torus T_m: the box [-m, m-1]^d with opposite faces identified,
/// i.e. side length 2m in each coordinate. Vertices are kept reduced to the
/// half-open fundamental domain [-m, m)^d so every identified class has a
/// unique representative.
struct Torus {
  int dim = 2;
  int m = 1;

  Torus() = default;
  Torus(int dim_, int m_) : dim(dim_), m(m_) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("Torus: dim must be 1..3");
    if (m < 1) throw std::invalid_argument("Torus: diameter must be >= 1");
  }

  int side() const { return 2 * m; }

  Coord reduce(const Coord& v) const {
    Coord r{0, 0, 0};
    for (int i = 0; i < dim; ++i) {
      int s = side();
      int x = (v[i] + m) % s;
      if (x < 0) x += s;
      r[i] = x - m;
    }
    return r;
  }

  std::int64_t vertex_count() const {
    std::int64_t n = 1;
    for (int i = 0; i < dim; ++i) n *= side();
    return n;
  }

  std::int64_t vertex_rank(const Coord& v) const {
    std::int64_t r = 0;
    for (int i = 0; i < dim; ++i) r = r * side() + (v[i] + m);
    return r;
  }

  Coord vertex_at(std::int64_t rank) const {
    Coord v{0, 0, 0};
    for (int i = dim - 1; i >= 0; --i) {
      v[i] = static_cast<int>(rank % side()) - m;
      rank /= side();
    }
    return v;
  }

  bool operator==(const Torus& o) const = default;
};

using Domain = std::variant<Box, Torus>;

inline int domain_dim(const Domain& d) {
  return std::visit([](const auto& x) { return x.dim; }, d);
}
inline std::int64_t domain_vertex_count(const Domain& d) {
  return std::visit([](const auto& x) { return x.vertex_count(); }, d);
}
inline bool is_torus(const Domain& d) { return std::holds_alternative<Torus>(d); }

inline std::string domain_str(const Domain& d) {
  if (const Box* b = std::get_if<Box>(&d)) {
    std::ostringstream os;
    os << "box";
    for (int i = 0; i < b->dim; ++i) os << ' ' << b->lo[i] << ".." << b->hi[i];
    return os.str();
  }
  const Torus& t = std::get<Torus>(d);
  return "torus dim " + std::to_string(t.dim) + " m " + std::to_string(t.m);
}

/// Nearest-neighbor edge, stored as (lower endpoint, axis): the segment from
/// `a` to `a + e_axis`. On a torus `a` is the reduced representative whose +1
/// step along the axis reaches the partner (wrap edges keep coordinate m-1).
struct Edge {
  Coord a{0, 0, 0};
  int axis = 0;
  bool operator==(const Edge& o) const = default;
  auto operator<=>(const Edge& o) const = default;
};

/// Unordered vertex pair for long-range/extra edges; canonical order u <= v.
struct VertexPair {
  Coord u{0, 0, 0};
  Coord v{0, 0, 0};

  VertexPair() = default;
  VertexPair(Coord a, Coord b) {
    if (b < a) std::swap(a, b);
    u = a;
    v = b;
  }
  bool is_nearest_neighbor(int dim) const {
    int diff_axes = 0, total = 0;
    for (int i = 0; i < dim; ++i) {
      int d = std::abs(v[i] - u[i]);
      total += d;
      if (d > 0) ++diff_axes;
    }
    return diff_axes == 1 && total == 1;
  }
  bool operator==(const VertexPair& o) const = default;
  auto operator<=>(const VertexPair& o) const = default;
};

/// Orientation-preserving lattice symmetry: a signed permutation matrix with
/// determinant +1. These are the lattice elements of SO(d); reflections (the
/// determinant -1 coset) are kept separate and only used when a family is
/// explicitly closed under them.
struct Rotation {
  int dim = 2;
  std::array<std::array<int, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

  Coord apply(const Coord& v) const {
    Coord r{0, 0, 0};
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) r[i] += m[i][j] * v[j];
    return r;
  }

  Rotation compose(const Rotation& other) const {  // this o other
    Rotation r;
    r.dim = dim;
    for (auto& row : r.m) row = {0, 0, 0};
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) r.m[i][j] += m[i][k] * other.m[k][j];
    if (dim < 3) r.m[2][2] = 1;
    if (dim < 2) r.m[1][1] = 1;
    return r;
  }

  Rotation inverse() const {  // orthogonal: inverse = transpose
    Rotation r;
    r.dim = dim;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }

  int det() const {
    if (dim == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }

  bool is_identity() const {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        if (m[i][j] != (i == j ? 1 : 0)) return false;
    return true;
  }

  bool operator==(const Rotation& o) const = default;
};

namespace detail {

inline std::vector<Rotation> signed_permutations(int dim, int want_det) {
  std::vector<Rotation> out;
  std::array<int, 3> perm{0, 1, 2};
  std::vector<std::array<int, 3>> perms;
  if (dim == 2) {
    perms = {{0, 1, 2}, {1, 0, 2}};
  } else {
    perms = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  }
  (void)perm;
  int sign_count = 1 << dim;
  for (const auto& pm : perms) {
    for (int s = 0; s < sign_count; ++s) {
      Rotation r;
      r.dim = dim;
      for (auto& row : r.m) row = {0, 0, 0};
      for (int i = 0; i < dim; ++i) r.m[i][pm[i]] = (s >> i) & 1 ? -1 : 1;
      if (dim < 3) r.m[2][2] = 1;
      if (r.det() == want_det) out.push_back(r);
    }
  }
  return out;
}

}  // namespace detail

/// Complete rotation group for the lattice, identity first. Size 4 for d=2,
/// 24 for d=3.
inline const std::vector<Rotation>& rotations(int dim) {
  static const std::vector<Rotation> r2 = [] {
    std::vector<Rotation> v = detail::signed_permutations(2, +1);
    for (size_t i = 0; i < v.size(); ++i)
      if (v[i].is_identity()) std::swap(v[0], v[i]);
    return v;
  }();
  static const std::vector<Rotation> r3 = [] {
    std::vector<Rotation> v = detail::signed_permutations(3, +1);
    for (size_t i = 0; i < v.size(); ++i)
      if (v[i].is_identity()) std::swap(v[0], v[i]);
    return v;
  }();
  if (dim == 2) return r2;
  if (dim == 3) return r3;
  throw std::invalid_argument("rotations: unsupported dimension " + std::to_string(dim));
}

/// The determinant -1 coset (reflections composed with rotations).
inline const std::vector<Rotation>& reflections(int dim) {
  static const std::vector<Rotation> r2 = detail::signed_permutations(2, -1);
  static const std::vector<Rotation> r3 = detail::signed_permutations(3, -1);
  if (dim == 2) return r2;
  if (dim == 3) return r3;
  throw std::invalid_argument("reflections: unsupported dimension " + std::to_string(dim));
}

/// Image of a nearest-neighbor edge under a rotation (no translation).
inline Edge rotate_edge(const Rotation& g, const Edge& e) {
  Coord u = g.apply(e.a);
  Coord dir = g.apply(unit_coord(e.axis));
  for (int i = 0; i < g.dim; ++i) {
    if (dir[i] == 1) return Edge{u, i};
    if (dir[i] == -1) return Edge{u + dir, i};
  }
  throw std::logic_error("rotate_edge: rotation did not map axis to axis");
}

inline VertexPair transform_pair(const Rotation& g, const Coord& t, const VertexPair& p) {
  return VertexPair(g.apply(p.u) + t, g.apply(p.v) + t);
}

/// Canonical edge enumeration of a domain with O(1) id lookup. Edges are
/// ordered lexicographically by lower endpoint, then by axis; the enumeration
/// is a bijection onto [0, edge_count).
class EdgeIndexer {
 public:
  explicit EdgeIndexer(Domain domain) : domain_(std::move(domain)) {
    dim_ = domain_dim(domain_);
    std::int64_t vcount = domain_vertex_count(domain_);
    table_.assign(static_cast<size_t>(vcount) * dim_, -1);
    if (const Box* b = std::get_if<Box>(&domain_)) {
      for (std::int64_t r = 0; r < vcount; ++r) {
        Coord v = b->vertex_at(r);
        for (int axis = 0; axis < dim_; ++axis) {
          Coord w = v + unit_coord(axis);
          if (!b->contains(w)) continue;
          table_[static_cast<size_t>(r) * dim_ + axis] = static_cast<std::int32_t>(edges_.size());
          edges_.push_back(Edge{v, axis});
        }
      }
    } else {
      const Torus& t = std::get<Torus>(domain_);
      for (std::int64_t r = 0; r < vcount; ++r) {
        Coord v = t.vertex_at(r);
        for (int axis = 0; axis < dim_; ++axis) {
          table_[static_cast<size_t>(r) * dim_ + axis] = static_cast<std::int32_t>(edges_.size());
          edges_.push_back(Edge{v, axis});
        }
      }
    }
  }

  const Domain& domain() const { return domain_; }
  int dim() const { return dim_; }
  std::int64_t edge_count() const { return static_cast<std::int64_t>(edges_.size()); }
  const Edge& edge_at(std::int64_t id) const { return edges_[static_cast<size_t>(id)]; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Edge id for (lower endpoint, axis); -1 if absent from the domain.
  std::int32_t index_of(const Edge& e) const {
    if (const Box* b = std::get_if<Box>(&domain_)) {
      if (!b->contains(e.a)) return -1;
      return table_[static_cast<size_t>(b->vertex_rank(e.a)) * dim_ + e.axis];
    }
    const Torus& t = std::get<Torus>(domain_);
    Coord r = t.reduce(e.a);
    return table_[static_cast<size_t>(t.vertex_rank(r)) * dim_ + e.axis];
  }

  /// Id of the edge joining an arbitrary nearest-neighbor pair; -1 if the
  /// pair is not an edge of the domain. On a torus the pair is reduced first.
  std::int32_t index_of_pair(const VertexPair& p) const {
    if (const Box* b = std::get_if<Box>(&domain_)) {
      if (!p.is_nearest_neighbor(dim_)) return -1;
      for (int axis = 0; axis < dim_; ++axis) {
        if (p.v[axis] - p.u[axis] == 1) return index_of(Edge{p.u, axis});
      }
      (void)b;
      return -1;
    }
    const Torus& t = std::get<Torus>(domain_);
    Coord u = t.reduce(p.u), v = t.reduce(p.v);
    for (int axis = 0; axis < dim_; ++axis) {
      Coord w = u;
      w[axis] += 1;
      if (t.reduce(w) == v) return index_of(Edge{u, axis});
      w = v;
      w[axis] += 1;
      if (t.reduce(w) == u) return index_of(Edge{v, axis});
    }
    return -1;
  }

  /// Both endpoints of an edge id (torus: partner reduced).
  std::pair<Coord, Coord> endpoints(std::int64_t id) const {
    const Edge& e = edge_at(id);
    Coord b = e.a + unit_coord(e.axis);
    if (const Torus* t = std::get_if<Torus>(&domain_)) b = t->reduce(b);
    return {e.a, b};
  }

 private:
  Domain domain_;
  int dim_;
  std::vector<Edge> edges_;
  std::vector<std::int32_t> table_;
};

}  // namespace percolab
