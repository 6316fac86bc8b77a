#pragma once

// Point-plane incidences in P^3 and the reduction of the slice energy Q_C to
// such incidences.
//
// For (g,v) in the slice C_C the energy relation g^-1 o h = u^-1 o v splits
// into g.a*v.a = h.a*u.a = C and
//     u.b*g.a - u.a*g.b - g.a*v.b + u.a*h.b = 0,
// which is the pairing of the point (g.a : g.b : g.a*v.b : 1) with the plane
// (u.b : -u.a : -1 : u.a*h.b). Both maps are injective on a slice, so Q_C is
// exactly the incidence count of the two images.

#include <algorithm>
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
#include "affine_energy/exact_ratio.hpp"
#include "affine_energy/projective.hpp"

namespace affine_energy {

struct Point3Tag {};
struct Plane3Tag {};

template <FieldScalar S>
using Point3 = Homogeneous<S, 4, Point3Tag>;

template <FieldScalar S>
using Plane3 = Homogeneous<S, 4, Plane3Tag>;

template <FieldScalar S>
Point3<S> build_point(const AffineMap<S>& g, const AffineMap<S>& v) {
  const S one = one_like(g.slope());
  return Point3<S>({g.slope(), g.intercept(), g.slope() * v.intercept(), one});
}

/// Plane u.b*x - u.a*y - z + u.a*h.b*w = 0.
template <FieldScalar S>
Plane3<S> build_plane(const AffineMap<S>& u, const AffineMap<S>& h) {
  const S one = one_like(u.slope());
  return Plane3<S>({u.intercept(), -u.slope(), -one, u.slope() * h.intercept()});
}

template <class T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

/// #{(p, pi) : p on pi}, by evaluating every pair.
template <FieldScalar S>
Count incidences(const std::vector<Point3<S>>& points, const std::vector<Plane3<S>>& planes) {
  Count n = 0;
  for (const auto& pi : planes) {
    for (const auto& p : points) {
      if (incident(p, pi)) ++n;
    }
  }
  return n;
}

/// Same count by projecting the points from e2 = (0:0:1:0). A plane not
/// through e2 meets each line through e2 once, so per plane it suffices to
/// solve for the third coordinate over each projection class and look the
/// candidate point up in a hash set.
template <FieldScalar S>
Count incidences_bucketed(const std::vector<Point3<S>>& points, const std::vector<Plane3<S>>& planes) {
  using Key = Homogeneous<S, 3, Point3Tag>;
  std::unordered_set<Point3<S>> point_set(points.begin(), points.end());
  std::unordered_set<Key> classes;
  for (const auto& p : points) {
    // e2 itself has no projection; it lies only on planes through e2.
    if (!(p[0].is_zero() && p[1].is_zero() && p[3].is_zero())) classes.insert(Key({p[0], p[1], p[3]}));
  }
  Count n = 0;
  for (const auto& pi : planes) {
    if (pi[2].is_zero()) {
      // Planes through e2 contain whole projection classes; count directly.
      for (const auto& p : points) {
        if (incident(p, pi)) ++n;
      }
      continue;
    }
    const S neg_inv = -pi[2].inv();
    for (const auto& r : classes) {
      const S z = (pi[0] * r[0] + pi[1] * r[1] + pi[3] * r[2]) * neg_inv;
      if (point_set.contains(Point3<S>({r[0], r[1], z, r[2]}))) ++n;
    }
  }
  return n;
}

/// k: the most points of P on one projective line (|P| when |P| <= 2).
template <FieldScalar S, class Tag>
std::size_t max_collinear_3d(const std::vector<Homogeneous<S, 4, Tag>>& pts) {
  if (pts.size() <= 2) return pts.size();
  struct DirTag {};
  using Direction = Homogeneous<S, 4, DirTag>;
  std::size_t best = 2;
  std::unordered_map<Direction, std::size_t> buckets;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts.size() - i <= best) break;
    buckets.clear();
    const auto& p = pts[i].coords();
    std::size_t lead = 0;
    while (p[lead].is_zero()) ++lead;  // p[lead] == 1 by canonical scaling
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      // q - q[lead] p spans the same line with p and vanishes at lead, so it
      // is a canonical representative of the line through p and q.
      auto q = pts[j].coords();
      const S s = q[lead];
      for (std::size_t c = 0; c < 4; ++c) q[c] -= s * p[c];
      const std::size_t n = ++buckets[Direction(q)];
      best = std::max(best, n + 1);
    }
  }
  return best;
}

template <FieldScalar S>
struct IncidenceInstance {
  std::vector<Point3<S>> points;
  std::vector<Plane3<S>> planes;
  std::size_t k = 0;

  IncidenceInstance(std::vector<Point3<S>> pts, std::vector<Plane3<S>> pls)
      : points(sorted_unique(std::move(pts))), planes(sorted_unique(std::move(pls))), k(max_collinear_3d(points)) {}
};

/// P_C and Pi_C for one slice.
template <FieldScalar S>
IncidenceInstance<S> slice_instance(const AffineSet<S>& a, const S& c) {
  const CSlice<S> slice = c_slice(a, c);
  std::vector<Point3<S>> pts;
  std::vector<Plane3<S>> pls;
  pts.reserve(slice.size());
  pls.reserve(slice.size());
  // Each slice pair is read as (g, v) for points and as (u, h) for planes.
  for (const auto& [x, y] : slice.pairs) {
    pts.push_back(build_point(x, y));
    pls.push_back(build_plane(x, y));
  }
  return IncidenceInstance<S>(std::move(pts), std::move(pls));
}

/// Q_C through the incidence route.
template <FieldScalar S>
Count q_c_via_incidence(const AffineSet<S>& a, const S& c) {
  const IncidenceInstance<S> inst = slice_instance(a, c);
  return incidences_bucketed(inst.points, inst.planes);
}

/// True when m|A| <= p^2 (always true in characteristic 0).
template <FieldScalar S>
bool slice_constraint_holds(const AffineSet<S>& a) {
  const std::uint64_t p = a.field().characteristic();
  if (p == 0) return true;
  return mpz_class(static_cast<unsigned long>(max_on_vertical(a))) * static_cast<unsigned long>(a.size()) <=
         mpz_class(static_cast<unsigned long>(p)) * static_cast<unsigned long>(p);
}

struct PointPlaneReport {
  std::size_t points = 0;
  std::size_t planes = 0;
  /// Roles were exchanged (dual instance) because |P| > |Pi|.
  bool swapped = false;
  Count incidences = 0;
  std::size_t k = 0;
  /// I / (|Pi||P|^{1/2} + k|Pi|).
  BoundRatio ratio;
  /// (I - |Pi||P|/p) / (|Pi||P|^{1/2} + k|Pi|), positive characteristic only.
  std::optional<BoundRatio> ratio_asymptotic;
  /// |P| > p^2: the strict form needs the asymptotic correction.
  bool exceeds_p_squared = false;
};

namespace detail {

inline std::vector<RadicalTerm> point_plane_rhs(std::size_t points, std::size_t planes, std::size_t k) {
  const mpq_class np(static_cast<unsigned long>(points));
  const mpq_class npl(static_cast<unsigned long>(planes));
  return {RadicalTerm::power_product({{npl, 1, 1}, {np, 1, 2}}),
          RadicalTerm::rational(mpq_class(static_cast<unsigned long>(k)) * npl)};
}

}  // namespace detail

template <FieldScalar S>
PointPlaneReport pointplane_bound_report(const IncidenceInstance<S>& inst, std::uint64_t char_p) {
  PointPlaneReport r;
  r.incidences = incidences_bucketed(inst.points, inst.planes);
  if (inst.points.size() <= inst.planes.size()) {
    r.points = inst.points.size();
    r.planes = inst.planes.size();
    r.k = inst.k;
  } else {
    // Dual instance: planes become points, so k counts planes through a line.
    r.swapped = true;
    r.points = inst.planes.size();
    r.planes = inst.points.size();
    r.k = max_collinear_3d(inst.planes);
  }
  r.ratio = BoundRatio(mpq_class(static_cast<unsigned long>(r.incidences)), detail::point_plane_rhs(r.points, r.planes, r.k));
  if (char_p != 0) {
    const mpq_class p(static_cast<unsigned long>(char_p));
    mpq_class lhs = mpq_class(static_cast<unsigned long>(r.incidences)) -
                    mpq_class(static_cast<unsigned long>(r.planes)) * static_cast<unsigned long>(r.points) / p;
    r.ratio_asymptotic = BoundRatio(lhs, detail::point_plane_rhs(r.points, r.planes, r.k));
    r.exceeds_p_squared = mpq_class(static_cast<unsigned long>(r.points)) > p * p;
  }
  return r;
}

enum class BeckType { single_line, short_lines };

template <FieldScalar S>
struct BeckPlaneStats {
  Plane3<S> plane;
  std::size_t points_on_plane = 0;
  /// Ordered pairs of distinct points of the plane.
  Count pairs = 0;
  /// Ordered pairs on the richest line inside the plane.
  Count max_line_pairs = 0;
  /// Ordered pairs on lines carrying fewer than the threshold of points.
  Count short_line_pairs = 0;
  BeckType type = BeckType::short_lines;
};

/// Per-plane pair statistics for planes holding at least two points. A
/// plane is labelled single_line when one line carries at least
/// `single_line_fraction` of its pairs; otherwise it is a short_lines
/// candidate. Labels are statistics, not claims.
template <FieldScalar S>
std::vector<BeckPlaneStats<S>> beck_plane_classification(const std::vector<Point3<S>>& points,
                                                         const std::vector<Plane3<S>>& planes, std::size_t cthresh = 4,
                                                         const mpq_class& single_line_fraction = mpq_class(1, 2)) {
  if (cthresh < 2) throw Error(ErrorCode::invalid_spec, "Cthresh must be at least 2");
  std::vector<BeckPlaneStats<S>> out;
  for (const auto& pi : sorted_unique(planes)) {
    std::vector<Point3<S>> on;
    for (const auto& p : points) {
      if (incident(p, pi)) on.push_back(p);
    }
    on = sorted_unique(std::move(on));
    if (on.size() < 2) continue;
    std::unordered_map<std::vector<S>, std::unordered_set<std::size_t>, detail::VectorKeyHash<S>> lines;
    for (std::size_t i = 0; i < on.size(); ++i) {
      for (std::size_t j = i + 1; j < on.size(); ++j) {
        auto& members = lines[detail::span_key(on[i].coords(), on[j].coords())];
        members.insert(i);
        members.insert(j);
      }
    }
    BeckPlaneStats<S> st{pi};
    st.points_on_plane = on.size();
    st.pairs = static_cast<Count>(on.size()) * (on.size() - 1);
    for (const auto& [key, members] : lines) {
      const Count c = members.size();
      st.max_line_pairs = std::max<Count>(st.max_line_pairs, c * (c - 1));
      if (c < cthresh) st.short_line_pairs += c * (c - 1);
    }
    st.type = mpq_class(static_cast<unsigned long>(st.max_line_pairs)) >=
                      single_line_fraction * static_cast<unsigned long>(st.pairs)
                  ? BeckType::single_line
                  : BeckType::short_lines;
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace affine_energy
