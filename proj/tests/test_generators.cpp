#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace affine_energy;
using namespace testing_helpers;

using R = RationalScalar;
using Pm = PrimeScalar;

TEST(Generators, GridExample) {
  const auto g = generate<R>(GenSpec::parse("grid:2"), Q());
  EXPECT_EQ(std::get<0>(g.value), set_of<R>(Q(), {{1, 1}, {1, 2}, {2, 1}, {2, 2}}));
  EXPECT_EQ(g.collisions, 0U);
}

TEST(Generators, GridLineStatistics) {
  for (int n = 1; n <= 9; ++n) {
    const auto a = generate<R>(GenSpec::parse("grid:" + std::to_string(n)), Q()).affine(Q());
    EXPECT_EQ(a.size(), static_cast<std::size_t>(n * n));
    EXPECT_EQ(max_on_line(a), static_cast<std::size_t>(n));
    EXPECT_EQ(max_on_vertical(a), static_cast<std::size_t>(n));
  }
}

TEST(Generators, GridZeroSlopeModP) {
  try {
    generate<Pm>(GenSpec::parse("grid:5"), Fp(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::zero_slope);
  }
}

TEST(Generators, AffProductExample) {
  const auto g = generate<R>(GenSpec::parse("affprod:gp(1,2,3)xap(0,1,3)"), Q());
  const auto a = g.affine(Q());
  EXPECT_EQ(a.size(), 9U);
  for (const auto& m : a) {
    EXPECT_TRUE(m.slope() == I<R>(Q(), 1) || m.slope() == I<R>(Q(), 2) || m.slope() == I<R>(Q(), 4));
  }
  const auto r = main_bound_report(a);
  EXPECT_GT(r.energy_over_m_a2, 0);
  EXPECT_TRUE(r.identities_hold());
}

TEST(Generators, AffProductZeroSlope) {
  try {
    generate<R>(GenSpec::parse("affprod:set(0,1)xap(0,1,3)"), Q());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::zero_slope);
  }
}

TEST(Generators, ParabolaExample) {
  const auto g = generate<R>(GenSpec::parse("parabola:set(1,2,3)"), Q());
  ASSERT_TRUE(g.planar());
  EXPECT_EQ(std::get<1>(g.value), (std::vector<PlanePoint<R>>{P<R>(Q(), 1, 1), P<R>(Q(), 2, 4), P<R>(Q(), 3, 9)}));
  EXPECT_EQ(g.points().size(), 3U);
}

TEST(Generators, CollisionsReportedModP) {
  const auto g = generate<Pm>(GenSpec::parse("affprod:gp(1,2,6)xap(0,1,6)"), Fp(7));
  // 2 has order 3 mod 7, so the GP repeats.
  EXPECT_EQ(g.requested, 36U);
  EXPECT_EQ(g.affine(Fp(7)).size(), 18U);
  EXPECT_EQ(g.collisions, 18U);
  EXPECT_THROW(generate<Pm>(GenSpec::parse("affprod:gp(7,2,3)xap(0,1,3)"), Fp(7)), Error);
  EXPECT_THROW(generate<Pm>(GenSpec::parse("parabola:set(1/7)"), Fp(7)), Error);
}

TEST(Generators, SpecParseRoundTrip) {
  for (const char* text : {"grid:5", "affprod:gp(1,2,6)xap(0,1,6)", "parabola:ap(1,1,20)", "randaff:100:seed=7",
                           "randplanar:12:seed=0", "affprod:set(1,3/2,-2)xap(1/2,1/3,4)"}) {
    EXPECT_EQ(GenSpec::parse(text).to_string(), text);
  }
}

TEST(Generators, SpecParseErrors) {
  for (const char* text : {"grid", "grid:0", "grid:x", "cube:3", "affprod:ap(0,1,3)", "ap(0,0,3)", "affprod:ap(0,0,3)xap(0,1,2)",
                           "affprod:gp(0,2,3)xap(0,1,2)", "randaff:10", "randaff:10:seed=-1", "parabola:ap(1,1)"}) {
    EXPECT_THROW(GenSpec::parse(text), Error) << text;
  }
}

TEST(Generators, SeededRandomDeterministic) {
  for (const auto& f : {Fp(101), Q()}) {
    dispatch_field(f, [&](auto tag) {
      using S = typename decltype(tag)::type;
      const auto a = seeded_random<S>(40, 9, f, RandomKind::affine);
      const auto b = seeded_random<S>(40, 9, f, RandomKind::affine);
      const auto c = seeded_random<S>(40, 10, f, RandomKind::affine);
      EXPECT_EQ(std::get<0>(a.value), std::get<0>(b.value));
      EXPECT_NE(std::get<0>(a.value), std::get<0>(c.value));
      EXPECT_EQ(std::get<0>(a.value).size(), 40U);
      EXPECT_EQ(seeded_random<S>(1, 3, f, RandomKind::affine).affine(f).size(), 1U);
      return 0;
    });
  }
}

TEST(Generators, SeededRandomExhaustsSmallField) {
  const auto f = Fp(5);
  const auto all = seeded_random<Pm>(20, 1, f, RandomKind::affine).affine(f);
  EXPECT_EQ(all.size(), 20U);
  for (int a = 1; a < 5; ++a)
    for (int b = 0; b < 5; ++b) EXPECT_TRUE(all.contains(M<Pm>(f, a, b)));
  try {
    seeded_random<Pm>(21, 1, f, RandomKind::affine);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::cannot_fill);
  }
}

TEST(Generators, RandomPlanarAvoidsYAxis) {
  const auto pts = seeded_random<R>(30, 4, Q(), RandomKind::planar).points();
  EXPECT_EQ(pts.size(), 30U);
  for (const auto& p : pts) {
    EXPECT_TRUE(is_affine(p));
    EXPECT_FALSE(p[0].is_zero());
  }
}

// First elements of the random stream, recomputed independently: over F_p
// each map draws slope 1 + below(p - 1), then intercept below(p).
TEST(Generators, RandomStreamLayout) {
  const auto f = Fp(101);
  Xorshift64Star rng(77);
  std::vector<AffineMap<Pm>> expected;
  for (int i = 0; i < 5; ++i) {
    const auto a = static_cast<std::int64_t>(1 + rng.below(100));
    const auto b = static_cast<std::int64_t>(rng.below(101));
    expected.push_back(M<Pm>(f, a, b));
  }
  const auto got = seeded_random<Pm>(5, 77, f, RandomKind::affine).affine(f);
  EXPECT_EQ(got, AffineSet<Pm>(f, expected));
}
