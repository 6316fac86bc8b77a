#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"

using namespace affine_energy;
using namespace testing_helpers;

using R = RationalScalar;
using Pm = PrimeScalar;

namespace {

template <class S>
Point3<S> pt(const FieldSpec& f, std::array<int, 4> c) {
  return Point3<S>({I<S>(f, c[0]), I<S>(f, c[1]), I<S>(f, c[2]), I<S>(f, c[3])});
}

template <class S>
Plane3<S> pl(const FieldSpec& f, std::array<int, 4> c) {
  return Plane3<S>({I<S>(f, c[0]), I<S>(f, c[1]), I<S>(f, c[2]), I<S>(f, c[3])});
}

// Three points of P^3 are collinear iff every 3x3 minor of their 3x4
// coordinate matrix vanishes.
template <class S>
bool collinear(const Point3<S>& p, const Point3<S>& q, const Point3<S>& r) {
  for (std::size_t skip = 0; skip < 4; ++skip) {
    std::array<std::size_t, 3> c{};
    std::size_t n = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      if (i != skip) c[n++] = i;
    }
    const S det = p[c[0]] * (q[c[1]] * r[c[2]] - q[c[2]] * r[c[1]]) - p[c[1]] * (q[c[0]] * r[c[2]] - q[c[2]] * r[c[0]]) +
                  p[c[2]] * (q[c[0]] * r[c[1]] - q[c[1]] * r[c[0]]);
    if (!det.is_zero()) return false;
  }
  return true;
}

template <class S>
std::size_t max_collinear_oracle(const std::vector<Point3<S>>& pts) {
  if (pts.size() <= 2) return pts.size();
  std::size_t best = 2;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      std::size_t n = 2;
      for (std::size_t l = 0; l < pts.size(); ++l) {
        if (l != i && l != j && collinear(pts[i], pts[j], pts[l])) ++n;
      }
      best = std::max(best, n);
    }
  }
  return best;
}

}  // namespace

TEST(Incidence3d, BuildPointExamples) {
  const auto& f = Q();
  EXPECT_EQ(build_point(M<R>(f, 1, 0), M<R>(f, 1, 0)), pt<R>(f, {1, 0, 0, 1}));
  EXPECT_EQ(build_point(M<R>(f, 2, 3), M<R>(f, 5, 7)), pt<R>(f, {2, 3, 14, 1}));
}

TEST(Incidence3d, BuildPlaneExamples) {
  const auto& f = Q();
  EXPECT_EQ(build_plane(M<R>(f, 1, 0), M<R>(f, 1, 0)), pl<R>(f, {0, -1, -1, 0}));
  EXPECT_EQ(build_plane(M<R>(f, 2, 2), M<R>(f, 2, 1)), pl<R>(f, {2, -2, -1, 2}));
  EXPECT_EQ(pl<R>(f, {2, -2, -1, 2}), pl<R>(f, {-6, 6, 3, -6}));
  EXPECT_EQ(pl<Pm>(Fp(7), {2, -2, -1, 2}), pl<Pm>(Fp(7), {6, 1, 4, 6}));
}

TEST(Incidence3d, BuildPointInjectiveOnSlices) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = random_set<Pm>(Fp(13), 20, seed);
    for (const auto& [c, size] : slice_sizes(a)) {
      const auto slice = c_slice(a, c);
      std::set<Point3<Pm>> pts;
      for (const auto& [g, v] : slice.pairs) pts.insert(build_point(g, v));
      EXPECT_EQ(pts.size(), slice.size());
      EXPECT_EQ(slice.size(), size);
    }
  }
}

TEST(Incidence3d, IncidenceExamples) {
  const auto& f = Q();
  EXPECT_EQ(incidences<R>({pt<R>(f, {0, 0, 0, 1})}, {pl<R>(f, {0, 0, 1, 0})}), 1U);
  EXPECT_EQ(incidences<R>({pt<R>(f, {1, 0, 0, 1})}, {pl<R>(f, {1, 0, 0, 0})}), 0U);
}

TEST(Incidence3d, BucketedMatchesDirect) {
  const auto f = Fp(101);
  Xorshift64Star rng(21);
  auto draw = [&] { return static_cast<int>(rng.below(101)); };
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Point3<Pm>> pts;
    std::vector<Plane3<Pm>> pls;
    while (pts.size() < 50) {
      std::array<int, 4> c{draw(), draw(), draw(), draw() % 3};
      if (c == std::array<int, 4>{0, 0, 0, 0}) continue;
      pts.push_back(pt<Pm>(f, c));
    }
    // Planes through e2 and planes built to hit many points.
    for (int i = 0; i < 50; ++i) {
      std::array<int, 4> c{draw(), draw(), i % 5 == 0 ? 0 : draw(), draw()};
      if (c == std::array<int, 4>{0, 0, 0, 0}) c[0] = 1;
      pls.push_back(pl<Pm>(f, c));
    }
    pts.push_back(pt<Pm>(f, {0, 0, 1, 0}));
    pts = sorted_unique(pts);
    pls = sorted_unique(pls);
    EXPECT_EQ(incidences_bucketed(pts, pls), incidences(pts, pls));
  }
}

TEST(Incidence3d, MaxCollinearExamples) {
  const auto& f = Q();
  EXPECT_EQ(max_collinear_3d(std::vector<Point3<R>>{pt<R>(f, {1, 2, 3, 4})}), 1U);
  std::vector<Point3<R>> line;
  for (int t = 1; t <= 5; ++t) line.push_back(pt<R>(f, {t, 0, 0, 1}));
  line.push_back(pt<R>(f, {0, 1, 0, 1}));
  EXPECT_EQ(max_collinear_3d(line), 5U);
}

TEST(Incidence3d, MaxCollinearMatchesOracle) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto a = random_set<Pm>(Fp(7), 14, seed);
    for (const auto& [c, size] : slice_sizes(a)) {
      const auto inst = slice_instance(a, c);
      ASSERT_EQ(inst.k, max_collinear_oracle(inst.points));
    }
  }
  const auto g = grid<R>(Q(), 4);
  for (int c : {1, 2, 3, 4, 6}) {
    const auto inst = slice_instance(g, I<R>(Q(), c));
    EXPECT_EQ(inst.k, max_collinear_oracle(inst.points));
  }
}

TEST(Incidence3d, QcViaIncidenceExamples) {
  const auto& f = Q();
  EXPECT_EQ(q_c_via_incidence(set_of<R>(f, {{1, 0}, {2, 0}}), I<R>(f, 2)), 4U);
  EXPECT_EQ(q_c_via_incidence(set_of<R>(f, {{1, 0}}), I<R>(f, 1)), 1U);
  const auto g4 = grid<R>(f, 4);
  for (const auto& [c, q] : decompose_by_c_bruteforce(g4)) EXPECT_EQ(q_c_via_incidence(g4, c), q);
  EXPECT_THROW(q_c_via_incidence(g4, I<R>(f, 0)), Error);
}

TEST(Incidence3d, ReductionIsExact) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto fp = random_set<Pm>(Fp(101), 10 + 2 * seed, seed);
    for (const auto& [c, q] : decompose_by_c(fp)) ASSERT_EQ(q_c_via_incidence(fp, c), q);
    const auto fq = random_set<R>(Q(), 10 + seed, seed);
    for (const auto& [c, q] : decompose_by_c(fq)) ASSERT_EQ(q_c_via_incidence(fq, c), q);
  }
}

// A 3D line {(x0 : y0 : z : 1)} meets P_C in one point per v with
// v.a = C / x0, so its count is the size of that column of A.
TEST(Incidence3d, VerticalLineCountIsColumnSize) {
  const auto& f = Q();
  std::vector<AffineMap<R>> maps;
  for (int b = 0; b < 7; ++b) maps.push_back(M<R>(f, 3, b));
  for (int a = 1; a <= 3; ++a) maps.push_back(M<R>(f, a, 2 * a + 1));
  maps.push_back(M<R>(f, 1, 5));
  const AffineSet<R> a(f, maps);
  const std::size_t m = max_on_vertical(a), big_m = max_on_line(a);
  EXPECT_EQ(m, 8U);
  for (const auto& [c, size] : slice_sizes(a)) {
    const auto slice = c_slice(a, c);
    std::map<std::pair<R, R>, std::size_t> vertical;
    for (const auto& [g, v] : slice.pairs) ++vertical[{g.slope(), g.intercept()}];
    for (const auto& [xy, count] : vertical) {
      std::size_t column = 0;
      for (const auto& v : a) column += v.slope() == c / xy.first ? 1 : 0;
      EXPECT_EQ(count, column);
      EXPECT_LE(count, m);
    }
    const auto inst = slice_instance(a, c);
    EXPECT_LE(inst.k, big_m) << "C = " << c.to_string();
    EXPECT_EQ(inst.k, max_collinear_oracle(inst.points));
  }
  // The column of slope 3 paired with g = (1, b) fills a vertical line of P_3.
  EXPECT_EQ(slice_instance(a, I<R>(f, 3)).k, 8U);
}

TEST(Incidence3d, PointPlaneReportExamples) {
  const auto& f = Q();
  const IncidenceInstance<R> one({pt<R>(f, {0, 0, 0, 1})}, {pl<R>(f, {0, 0, 1, 0})});
  const auto r = pointplane_bound_report(one, 0);
  EXPECT_EQ(r.incidences, 1U);
  EXPECT_EQ(r.ratio.value(), mpq_class(1, 2));
  EXPECT_FALSE(r.ratio_asymptotic.has_value());

  // k collinear points on the x3-axis line and a pencil of planes through it.
  std::vector<Point3<R>> pts;
  for (int t = 0; t < 5; ++t) pts.push_back(pt<R>(f, {0, 0, t, 1}));
  std::vector<Plane3<R>> pls;
  for (int s = 1; s <= 9; ++s) pls.push_back(pl<R>(f, {1, s, 0, 0}));
  const auto pencil = pointplane_bound_report(IncidenceInstance<R>(pts, pls), 0);
  EXPECT_EQ(pencil.k, 5U);
  EXPECT_EQ(pencil.incidences, 45U);
  EXPECT_FALSE(pencil.swapped);
  // 45 / (9 sqrt5 + 45), certified upper bound within 1e-12.
  const double exact = 45.0 / (9.0 * std::sqrt(5.0) + 45.0);
  EXPECT_GE(pencil.ratio.value().get_d(), exact - 1e-12);
  EXPECT_LE(pencil.ratio.value().get_d(), exact + 2e-12);

  const auto swapped = pointplane_bound_report(IncidenceInstance<R>(pts, {pls[0], pls[1]}), 0);
  EXPECT_TRUE(swapped.swapped);
  EXPECT_EQ(swapped.points, 2U);
  EXPECT_EQ(swapped.planes, 5U);
}

TEST(Incidence3d, PointPlaneAsymptoticTerm) {
  const auto a = random_set<Pm>(Fp(101), 20, 3);
  const auto c = slice_sizes(a).begin()->first;
  const auto r = pointplane_bound_report(slice_instance(a, c), 101);
  ASSERT_TRUE(r.ratio_asymptotic.has_value());
  EXPECT_LE(r.ratio_asymptotic->value(), r.ratio.value());
  EXPECT_FALSE(r.exceeds_p_squared);
}

TEST(Incidence3d, BeckClassificationExamples) {
  const auto& f = Q();
  const std::vector<Point3<R>> three{pt<R>(f, {1, 0, 0, 1}), pt<R>(f, {2, 0, 0, 1}), pt<R>(f, {3, 0, 0, 1})};
  const auto plane_y0 = pl<R>(f, {0, 1, 0, 0});
  auto stats = beck_plane_classification<R>(three, {plane_y0});
  ASSERT_EQ(stats.size(), 1U);
  EXPECT_EQ(stats[0].pairs, 6U);
  EXPECT_EQ(stats[0].max_line_pairs, 6U);
  EXPECT_EQ(stats[0].type, BeckType::single_line);

  const std::vector<Point3<R>> triangle{pt<R>(f, {0, 0, 0, 1}), pt<R>(f, {1, 0, 0, 1}), pt<R>(f, {0, 0, 1, 1})};
  stats = beck_plane_classification<R>(triangle, {plane_y0}, 3);
  ASSERT_EQ(stats.size(), 1U);
  EXPECT_EQ(stats[0].pairs, 6U);
  EXPECT_EQ(stats[0].short_line_pairs, 6U);
  EXPECT_EQ(stats[0].max_line_pairs, 2U);
  EXPECT_EQ(stats[0].type, BeckType::short_lines);

  EXPECT_TRUE(beck_plane_classification<R>(triangle, {pl<R>(f, {0, 1, 0, -1})}).empty());
  EXPECT_TRUE(beck_plane_classification<R>({pt<R>(f, {1, 0, 0, 1})}, {plane_y0}).empty());
  EXPECT_THROW(beck_plane_classification<R>(triangle, {plane_y0}, 1), Error);
}
