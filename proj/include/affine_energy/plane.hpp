#pragma once

// Points and lines of the projective plane, spanned lines L(P), shadows
// L(P) n l, the projective map sending two lines to the y-axis and the line
// at infinity, and quadrangles rooted on those two lines.
//
// An affine point (x, y) with x != 0 is identified with the affine map
// (x, y); under that identification parallel sides meet the line at infinity
// at one point and sides with a common y-intercept meet the y-axis at one
// point.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "affine_energy/affine.hpp"
#include "affine_energy/energy.hpp"
#include "affine_energy/incidence3d.hpp"
#include "affine_energy/projective.hpp"

namespace affine_energy {

struct PlanePointTag {};
struct PlaneLineTag {};

template <FieldScalar S>
using PlanePoint = Homogeneous<S, 3, PlanePointTag>;

/// Line a*x + b*y + c*z = 0, stored as (a : b : c).
template <FieldScalar S>
using PlaneLine = Homogeneous<S, 3, PlaneLineTag>;

template <FieldScalar S>
PlanePoint<S> affine_point(const S& x, const S& y) {
  return PlanePoint<S>({x, y, one_like(x)});
}

template <FieldScalar S>
PlaneLine<S> line_at_infinity(const FieldSpec& f) {
  return PlaneLine<S>({S::from_int(f, 0), S::from_int(f, 0), S::from_int(f, 1)});
}

template <FieldScalar S>
PlaneLine<S> y_axis(const FieldSpec& f) {
  return PlaneLine<S>({S::from_int(f, 1), S::from_int(f, 0), S::from_int(f, 0)});
}

namespace detail {

template <FieldScalar S>
std::array<S, 3> cross(const std::array<S, 3>& p, const std::array<S, 3>& q) {
  return {p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]};
}

template <FieldScalar S>
bool all_zero(const std::array<S, 3>& v) {
  return v[0].is_zero() && v[1].is_zero() && v[2].is_zero();
}

}  // namespace detail

template <FieldScalar S>
PlaneLine<S> join(const PlanePoint<S>& p, const PlanePoint<S>& q) {
  const auto c = detail::cross(p.coords(), q.coords());
  if (detail::all_zero(c)) throw Error(ErrorCode::invalid_spec, "join of equal points " + p.to_string());
  return PlaneLine<S>(c);
}

template <FieldScalar S>
PlanePoint<S> meet(const PlaneLine<S>& l, const PlaneLine<S>& m) {
  const auto c = detail::cross(l.coords(), m.coords());
  if (detail::all_zero(c)) throw Error(ErrorCode::equal_lines, "meet of equal lines " + l.to_string());
  return PlanePoint<S>(c);
}

template <FieldScalar S>
bool is_affine(const PlanePoint<S>& p) { return !p[2].is_zero(); }

/// (x, y) of an affine point.
template <FieldScalar S>
std::pair<S, S> affine_coords(const PlanePoint<S>& p) {
  const S inv = p[2].inv();
  return {p[0] * inv, p[1] * inv};
}

/// Reflection in the line y = x.
template <FieldScalar S>
PlanePoint<S> reflect_diagonal(const PlanePoint<S>& p) { return PlanePoint<S>({p[1], p[0], p[2]}); }

template <FieldScalar S>
PlaneLine<S> reflect_diagonal(const PlaneLine<S>& l) { return PlaneLine<S>({l[1], l[0], l[2]}); }

/// A x A as affine points.
template <FieldScalar S>
std::vector<PlanePoint<S>> cartesian_square(const std::vector<S>& a) {
  std::vector<PlanePoint<S>> out;
  for (const auto& x : a) {
    for (const auto& y : a) out.push_back(affine_point(x, y));
  }
  return sorted_unique(std::move(out));
}

/// Lines of L(P) with the points of P on each.
template <FieldScalar S>
std::map<PlaneLine<S>, std::vector<std::size_t>> spanned_line_members(const std::vector<PlanePoint<S>>& pts) {
  std::map<PlaneLine<S>, std::vector<std::size_t>> out;
  std::unordered_map<PlaneLine<S>, std::unordered_set<std::size_t>> acc;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      auto& s = acc[join(pts[i], pts[j])];
      s.insert(i);
      s.insert(j);
    }
  }
  for (auto& [l, s] : acc) {
    std::vector<std::size_t> v(s.begin(), s.end());
    std::sort(v.begin(), v.end());
    out.emplace(l, std::move(v));
  }
  return out;
}

/// L(P): the distinct lines through at least two points of P.
template <FieldScalar S>
std::vector<PlaneLine<S>> span_lines(const std::vector<PlanePoint<S>>& pts_in) {
  const auto pts = sorted_unique(pts_in);
  if (pts.size() < 2) throw Error(ErrorCode::too_few_points, "L(P) needs at least two distinct points");
  std::unordered_set<PlaneLine<S>> lines;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) lines.insert(join(pts[i], pts[j]));
  }
  return sorted_unique(std::vector<PlaneLine<S>>(lines.begin(), lines.end()));
}

/// The shadow L(P) n l: distinct points where spanned lines meet l.
template <FieldScalar S>
std::vector<PlanePoint<S>> shadow(const std::vector<PlanePoint<S>>& pts, const PlaneLine<S>& l) {
  for (const auto& p : pts) {
    if (incident(p, l)) throw Error(ErrorCode::line_meets_points, "point " + p.to_string() + " lies on " + l.to_string());
  }
  std::unordered_set<PlanePoint<S>> out;
  for (const auto& line : span_lines(pts)) out.insert(meet(line, l));
  return sorted_unique(std::vector<PlanePoint<S>>(out.begin(), out.end()));
}

/// Invertible 3x3 matrix acting on homogeneous point coordinates.
template <FieldScalar S>
class ProjectiveMap2 {
 public:
  using Matrix = std::array<std::array<S, 3>, 3>;

  explicit ProjectiveMap2(Matrix m) : m_(std::move(m)) {
    if (determinant().is_zero()) throw Error(ErrorCode::singular_map, "projective map with zero determinant");
  }

  static ProjectiveMap2 identity(const FieldSpec& f) {
    const S o = S::from_int(f, 0), i = S::from_int(f, 1);
    return ProjectiveMap2(Matrix{{{i, o, o}, {o, i, o}, {o, o, i}}});
  }

  const S& at(std::size_t r, std::size_t c) const { return m_[r][c]; }

  S determinant() const {
    return m_[0][0] * (m_[1][1] * m_[2][2] - m_[1][2] * m_[2][1]) - m_[0][1] * (m_[1][0] * m_[2][2] - m_[1][2] * m_[2][0]) +
           m_[0][2] * (m_[1][0] * m_[2][1] - m_[1][1] * m_[2][0]);
  }

  ProjectiveMap2 inverse() const {
    const S inv_det = determinant().inv();
    auto cof = [&](std::size_t r, std::size_t c) {
      const std::size_t r0 = (r + 1) % 3, r1 = (r + 2) % 3, c0 = (c + 1) % 3, c1 = (c + 2) % 3;
      return m_[r0][c0] * m_[r1][c1] - m_[r0][c1] * m_[r1][c0];
    };
    // adj(M)[r][c] = cofactor(c, r)
    return ProjectiveMap2(Matrix{{{cof(0, 0) * inv_det, cof(1, 0) * inv_det, cof(2, 0) * inv_det},
                                  {cof(0, 1) * inv_det, cof(1, 1) * inv_det, cof(2, 1) * inv_det},
                                  {cof(0, 2) * inv_det, cof(1, 2) * inv_det, cof(2, 2) * inv_det}}});
  }

  ProjectiveMap2 operator*(const ProjectiveMap2& o) const {
    auto entry = [&](std::size_t r, std::size_t c) { return m_[r][0] * o.m_[0][c] + m_[r][1] * o.m_[1][c] + m_[r][2] * o.m_[2][c]; };
    return ProjectiveMap2(Matrix{{{entry(0, 0), entry(0, 1), entry(0, 2)},
                                  {entry(1, 0), entry(1, 1), entry(1, 2)},
                                  {entry(2, 0), entry(2, 1), entry(2, 2)}}});
  }

  PlanePoint<S> operator()(const PlanePoint<S>& p) const {
    return PlanePoint<S>({row(0, p.coords()), row(1, p.coords()), row(2, p.coords())});
  }

  /// Image of a line: coefficients transform by the inverse transpose.
  PlaneLine<S> operator()(const PlaneLine<S>& l) const {
    const ProjectiveMap2 inv = inverse();
    const auto& c = l.coords();
    return PlaneLine<S>({inv.m_[0][0] * c[0] + inv.m_[1][0] * c[1] + inv.m_[2][0] * c[2],
                         inv.m_[0][1] * c[0] + inv.m_[1][1] * c[1] + inv.m_[2][1] * c[2],
                         inv.m_[0][2] * c[0] + inv.m_[1][2] * c[1] + inv.m_[2][2] * c[2]});
  }

  friend bool operator==(const ProjectiveMap2&, const ProjectiveMap2&) = default;

 private:
  S row(std::size_t r, const std::array<S, 3>& v) const { return m_[r][0] * v[0] + m_[r][1] * v[1] + m_[r][2] * v[2]; }

  Matrix m_;
};

namespace detail {

// A point of l other than `avoid`: l meets y = 0, then x = 0, then z = 0.
template <FieldScalar S>
PlanePoint<S> other_point_on(const PlaneLine<S>& l, const PlanePoint<S>& avoid) {
  const FieldSpec f = l.field();
  const S o = S::from_int(f, 0), i = S::from_int(f, 1);
  for (const auto& cand : {PlaneLine<S>({o, i, o}), PlaneLine<S>({i, o, o}), PlaneLine<S>({o, o, i})}) {
    if (cand == l) continue;
    const PlanePoint<S> p = meet(l, cand);
    if (p != avoid) return p;
  }
  throw Error(ErrorCode::invalid_spec, "no second point found on " + l.to_string());
}

// Matrix whose columns are the given vectors.
template <FieldScalar S>
ProjectiveMap2<S> from_columns(const std::array<S, 3>& c0, const std::array<S, 3>& c1, const std::array<S, 3>& c2) {
  using M = typename ProjectiveMap2<S>::Matrix;
  return ProjectiveMap2<S>(M{{{c0[0], c1[0], c2[0]}, {c0[1], c1[1], c2[1]}, {c0[2], c1[2], c2[2]}}});
}

}  // namespace detail

/// The projective map T with T(l1) = {x = 0} and T(l2) = line at infinity.
/// Anchors: q1 = l1 n l2 -> (0:1:0), q2 = another point of l1 -> (0:0:1),
/// q3 = another point of l2 -> (1:0:0), and q1 + q2 + q3 (canonical
/// representatives) -> (1:1:1). Lines through l1 n l2 become vertical.
template <FieldScalar S>
ProjectiveMap2<S> normalize_two_lines(const PlaneLine<S>& l1, const PlaneLine<S>& l2) {
  if (l1 == l2) throw Error(ErrorCode::equal_lines, "cannot normalize a line against itself");
  const PlanePoint<S> q1 = meet(l1, l2);
  const PlanePoint<S> q2 = detail::other_point_on(l1, q1);
  const PlanePoint<S> q3 = detail::other_point_on(l2, q1);
  const FieldSpec f = l1.field();
  const S o = S::from_int(f, 0), i = S::from_int(f, 1);
  // Source frame with columns q1, q2, q3 (unit weights, since the fourth
  // anchor is their plain sum) and target frame e2, e3, e1.
  const ProjectiveMap2<S> source = detail::from_columns(q1.coords(), q2.coords(), q3.coords());
  const ProjectiveMap2<S> target = detail::from_columns<S>({o, i, o}, {o, o, i}, {i, o, o});
  return target * source.inverse();
}

template <FieldScalar S>
std::vector<PlanePoint<S>> apply_projective(const ProjectiveMap2<S>& t, const std::vector<PlanePoint<S>>& pts) {
  std::vector<PlanePoint<S>> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(t(p));
  return sorted_unique(std::move(out));
}

/// I(P, L(P)) = sum over spanned lines of the points on them.
template <FieldScalar S>
Count spanned_incidences(const std::vector<PlanePoint<S>>& pts) {
  Count n = 0;
  for (const auto& [l, members] : spanned_line_members(pts)) n += members.size();
  return n;
}

template <FieldScalar S>
struct ShadowIncidenceReport {
  /// Points of P on l1 or l2, removed before normalizing.
  std::size_t removed = 0;
  std::vector<PlanePoint<S>> normalized;
  /// Shadows on the line at infinity (S) and on the y-axis (T), projective.
  std::size_t shadow_infinity = 0;
  std::size_t shadow_y_axis = 0;
  /// Their affine parts: slopes and y-intercepts of non-vertical lines.
  std::vector<S> slopes;
  std::vector<S> intercepts;
  std::size_t vertical_lines = 0;
  /// I(P', L(P')) over all spanned lines, and over non-vertical ones.
  Count spanned_incidences = 0;
  Count spanned_incidences_nonvertical = 0;
  /// I(S x T, P') with p = (p1, p2) read as the line y = -p1*x + p2.
  Count grid_incidences = 0;
  /// spanned_incidences_nonvertical <= grid_incidences (always expected).
  bool holds_nonvertical = false;
  /// spanned_incidences <= grid_incidences.
  bool holds = false;
};

template <FieldScalar S>
ShadowIncidenceReport<S> shadow_incidence_check(const std::vector<PlanePoint<S>>& pts_in, const PlaneLine<S>& l1,
                                                const PlaneLine<S>& l2) {
  ShadowIncidenceReport<S> r;
  std::vector<PlanePoint<S>> kept;
  for (const auto& p : sorted_unique(pts_in)) {
    if (incident(p, l1) || incident(p, l2)) {
      ++r.removed;
    } else {
      kept.push_back(p);
    }
  }
  if (kept.size() < 2) throw Error(ErrorCode::too_few_points, "fewer than two points left after removing l1 and l2");
  const ProjectiveMap2<S> t = normalize_two_lines(l1, l2);
  r.normalized = apply_projective(t, kept);
  const FieldSpec f = l1.field();
  r.shadow_infinity = shadow(r.normalized, line_at_infinity<S>(f)).size();
  r.shadow_y_axis = shadow(r.normalized, y_axis<S>(f)).size();

  std::vector<S> slopes, intercepts;
  for (const auto& [line, members] : spanned_line_members(r.normalized)) {
    r.spanned_incidences += members.size();
    if (line[1].is_zero()) {
      ++r.vertical_lines;
      continue;
    }
    r.spanned_incidences_nonvertical += members.size();
    // a x + b y + c = 0  ->  y = (-a/b) x + (-c/b)
    const S inv_b = line[1].inv();
    slopes.push_back(-line[0] * inv_b);
    intercepts.push_back(-line[2] * inv_b);
  }
  r.slopes = sorted_unique(std::move(slopes));
  r.intercepts = sorted_unique(std::move(intercepts));

  const std::unordered_set<S> tset(r.intercepts.begin(), r.intercepts.end());
  for (const auto& p : r.normalized) {
    const auto [x, y] = affine_coords(p);
    for (const auto& s : r.slopes) {
      if (tset.contains(y - s * x)) ++r.grid_incidences;
    }
  }
  r.holds_nonvertical = r.spanned_incidences_nonvertical <= r.grid_incidences;
  r.holds = r.spanned_incidences <= r.grid_incidences;
  return r;
}

struct BeckPointStats {
  /// Lines of L(P) through each point, in canonical point order.
  std::vector<std::size_t> lines_through;
  std::size_t spanned_lines = 0;
  /// Points with lines_through >= theta * |P|.
  std::size_t rich_points = 0;
  mpq_class rich_fraction;
};

template <FieldScalar S>
BeckPointStats beck_point_stats(const std::vector<PlanePoint<S>>& pts_in, const mpq_class& theta = mpq_class(1, 2)) {
  const auto pts = sorted_unique(pts_in);
  if (pts.size() < 2) throw Error(ErrorCode::too_few_points, "Beck statistics need at least two points");
  BeckPointStats st;
  st.lines_through.assign(pts.size(), 0);
  const auto members = spanned_line_members(pts);
  st.spanned_lines = members.size();
  for (const auto& [l, idx] : members) {
    for (std::size_t i : idx) ++st.lines_through[i];
  }
  const mpq_class threshold = theta * static_cast<unsigned long>(pts.size());
  for (std::size_t c : st.lines_through) {
    if (mpq_class(static_cast<unsigned long>(c)) >= threshold) ++st.rich_points;
  }
  st.rich_fraction = mpq_class(static_cast<unsigned long>(st.rich_points), static_cast<unsigned long>(pts.size()));
  st.rich_fraction.canonicalize();
  return st;
}

/// P as a set of affine maps: (x, y) -> the map x -> ... with slope x and
/// intercept y. Points must be affine and off the y-axis.
template <FieldScalar S>
AffineSet<S> as_affine_set(const std::vector<PlanePoint<S>>& pts, const FieldSpec& f) {
  std::vector<AffineMap<S>> maps;
  for (const auto& p : pts) {
    if (!is_affine(p)) throw Error(ErrorCode::invalid_spec, "point at infinity " + p.to_string());
    auto [x, y] = affine_coords(p);
    if (x.is_zero()) throw Error(ErrorCode::point_on_y_axis, "point " + p.to_string() + " lies on the y-axis");
    maps.emplace_back(std::move(x), std::move(y));
  }
  return AffineSet<S>(f, std::move(maps));
}

template <FieldScalar S>
std::vector<PlanePoint<S>> as_plane_points(const AffineSet<S>& a) {
  std::vector<PlanePoint<S>> out;
  for (const auto& g : a) out.push_back(affine_point(g.slope(), g.intercept()));
  return out;
}

namespace detail {

// Pairwise geometry of a point set: ids of the spanned line, of its point at
// infinity and of its meet with the y-axis, for every ordered pair i != j.
template <FieldScalar S>
struct PairGeometry {
  std::size_t n = 0;
  std::vector<int> line, direction, y_meet;

  explicit PairGeometry(const std::vector<PlanePoint<S>>& pts) : n(pts.size()), line(n * n, -1), direction(n * n, -1), y_meet(n * n, -1) {
    if (pts.empty()) return;
    const FieldSpec f = pts.front().field();
    const auto inf = line_at_infinity<S>(f);
    const auto ly = y_axis<S>(f);
    std::unordered_map<PlaneLine<S>, int> line_ids;
    std::unordered_map<PlanePoint<S>, int> point_ids;
    auto id_of = [](auto& table, const auto& key) {
      auto [it, inserted] = table.try_emplace(key, static_cast<int>(table.size()));
      return it->second;
    };
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const PlaneLine<S> l = join(pts[i], pts[j]);
        line[i * n + j] = id_of(line_ids, l);
        direction[i * n + j] = id_of(point_ids, meet(l, inf));
        y_meet[i * n + j] = id_of(point_ids, meet(l, ly));
      }
    }
  }

  bool collinear(std::size_t g, std::size_t h, std::size_t u, std::size_t v) const {
    std::array<std::size_t, 4> ids{g, h, u, v};
    std::size_t a = ids[0];
    std::optional<std::size_t> b;
    for (std::size_t x : ids) {
      if (x != a) {
        b = x;
        break;
      }
    }
    if (!b) return true;
    const int l = line[a * n + *b];
    for (std::size_t x : ids) {
      if (x != a && x != *b && line[a * n + x] != l) return false;
    }
    return true;
  }

  // Opposite sides gh, uv share a point at infinity and gu, hv share a point
  // of the y-axis; the four points are not collinear.
  bool quadrangle(std::size_t g, std::size_t h, std::size_t u, std::size_t v) const {
    if (g == h || u == v || g == u || h == v) return false;
    if (direction[g * n + h] != direction[u * n + v]) return false;
    if (y_meet[g * n + u] != y_meet[h * n + v]) return false;
    // With gh parallel to uv the four are collinear iff u is on line gh.
    return line[g * n + h] != line[g * n + u];
  }
};

template <FieldScalar S>
void check_quadrangle_points(const std::vector<PlanePoint<S>>& pts) {
  for (const auto& p : pts) {
    if (!is_affine(p)) throw Error(ErrorCode::invalid_spec, "point at infinity " + p.to_string());
    if (p[0].is_zero()) throw Error(ErrorCode::point_on_y_axis, "point " + p.to_string() + " lies on the y-axis");
  }
}

}  // namespace detail

/// |Q(P)| by direct enumeration of ordered quadruples, O(|P|^4).
template <FieldScalar S>
Count quadrangles_bruteforce(const std::vector<PlanePoint<S>>& pts_in, std::size_t cap = kDefaultOracleCap) {
  const auto pts = sorted_unique(pts_in);
  detail::check_quadrangle_points(pts);
  detail::check_oracle_cap(pts.size(), cap);
  const detail::PairGeometry<S> geo(pts);
  const std::size_t n = pts.size();
  Count count = 0;
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n; ++h) {
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
          if (geo.quadrangle(g, h, u, v)) ++count;
        }
      }
    }
  }
  return count;
}

/// |Q(P)| through the energy: E(P) minus the trivial quadruples (g = h,
/// u = v) and minus, for each spanned line L, the nontrivial energy
/// quadruples inside P n L. A nontrivial collinear quadruple has at least
/// two distinct points, so it lies on exactly one spanned line.
template <FieldScalar S>
Count quadrangles(const std::vector<PlanePoint<S>>& pts_in) {
  const auto pts = sorted_unique(pts_in);
  detail::check_quadrangle_points(pts);
  if (pts.empty()) return 0;
  const FieldSpec f = pts.front().field();
  const AffineSet<S> a = as_affine_set(pts, f);
  const Count n = a.size();
  Count degenerate = n * n;
  for (const auto& [line, members] : spanned_line_members(pts)) {
    const Count c = members.size();
    if (c == 2) {
      // {g, h} alone: (g,h,g,h) and (h,g,h,g), plus (g,h,h,g) and (h,g,g,h)
      // when g^-1 h is an involution.
      const auto [gx, gy] = affine_coords(pts[members[0]]);
      const auto [hx, hy] = affine_coords(pts[members[1]]);
      const AffineMap<S> g(gx, gy), h(hx, hy);
      degenerate += quotient(g, h) == quotient(h, g) ? 4 : 2;
      continue;
    }
    std::vector<PlanePoint<S>> on;
    for (std::size_t i : members) on.push_back(pts[i]);
    degenerate += energy(as_affine_set(on, f)) - c * c;
  }
  return energy(a) - degenerate;
}

struct QuadrangleCorrespondence {
  Count energy_quadruples = 0;
  Count quadrangles = 0;
  /// Quadrangles that are energy quadruples.
  Count quadrangles_in_energy = 0;
  /// Quadrangles that are not energy quadruples (expected 0).
  Count quadrangles_outside_energy = 0;
  /// Energy quadruples with g = h (then u = v).
  Count trivial = 0;
  /// Energy quadruples with g != h whose four points are collinear.
  Count collinear = 0;
  /// Energy quadruples that are neither quadrangles nor degenerate (expected 0).
  Count unclassified = 0;

  bool exhaustive() const {
    return quadrangles_outside_energy == 0 && unclassified == 0 &&
           energy_quadruples == quadrangles_in_energy + trivial + collinear;
  }
};

/// Splits the energy quadruples of P into quadrangles and degenerate ones.
template <FieldScalar S>
QuadrangleCorrespondence quadrangle_energy_correspondence(const std::vector<PlanePoint<S>>& pts_in,
                                                          std::size_t cap = kDefaultOracleCap) {
  const auto pts = sorted_unique(pts_in);
  detail::check_quadrangle_points(pts);
  detail::check_oracle_cap(pts.size(), cap);
  QuadrangleCorrespondence r;
  if (pts.empty()) return r;
  // Maps indexed like pts (AffineSet would reorder them).
  std::vector<AffineMap<S>> a;
  for (const auto& p : pts) {
    auto [x, y] = affine_coords(p);
    a.emplace_back(std::move(x), std::move(y));
  }
  const std::size_t n = a.size();
  std::vector<int> quot(n * n);
  {
    std::unordered_map<AffineMap<S>, int> ids;
    for (std::size_t g = 0; g < n; ++g) {
      for (std::size_t h = 0; h < n; ++h) {
        auto [it, ins] = ids.try_emplace(quotient(a[g], a[h]), static_cast<int>(ids.size()));
        quot[g * n + h] = it->second;
      }
    }
  }
  const detail::PairGeometry<S> geo(pts);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n; ++h) {
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
          const bool is_energy = quot[g * n + h] == quot[u * n + v];
          const bool is_quad = geo.quadrangle(g, h, u, v);
          if (is_quad) {
            ++r.quadrangles;
            if (is_energy) {
              ++r.quadrangles_in_energy;
            } else {
              ++r.quadrangles_outside_energy;
            }
          }
          if (!is_energy || is_quad) continue;
          ++r.energy_quadruples;
          if (g == h) {
            ++r.trivial;
          } else if (geo.collinear(g, h, u, v)) {
            ++r.collinear;
          } else {
            ++r.unclassified;
          }
        }
      }
    }
  }
  r.energy_quadruples += r.quadrangles_in_energy;
  return r;
}

}  // namespace affine_energy
