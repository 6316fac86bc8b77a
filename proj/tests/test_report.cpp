#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"

using namespace affine_energy;
using namespace testing_helpers;

using R = RationalScalar;
using Pm = PrimeScalar;

namespace {

std::vector<std::string> keys(const Json& j) {
  std::vector<std::string> out;
  for (const auto& [k, v] : j.items()) out.push_back(k);
  return out;
}

}  // namespace

TEST(ExactRatio, RationalTermsAreExact) {
  const BoundRatio r(mpq_class(1), {RadicalTerm::rational(mpq_class(3))});
  // ceil(10^12 / 3) / 10^12
  mpq_class expected(mpz_class("333333333334"), mpz_class("1000000000000"));
  expected.canonicalize();
  EXPECT_EQ(r.value(), expected);
  EXPECT_EQ(r.decimal(), "0.333333333334");
  EXPECT_EQ(BoundRatio(mpq_class(1), {RadicalTerm::rational(mpq_class(2))}).fraction(), "1/2");
  EXPECT_EQ(BoundRatio(mpq_class(5), {RadicalTerm::rational(mpq_class(2))}).decimal(), "2.500000000000");
}

TEST(ExactRatio, RadicalsAreCertifiedUpperBounds) {
  // 1 / sqrt(2), 10 / 2^(1/3), 7 / (sqrt3 + 5^(1/4))
  const BoundRatio a(mpq_class(1), {RadicalTerm::power_product({{mpq_class(2), 1, 2}})});
  EXPECT_GE(a.value().get_d(), 1 / std::sqrt(2.0) - 1e-15);
  EXPECT_LE(a.value().get_d(), 1 / std::sqrt(2.0) + 2e-12);
  // value^2 * 2 >= 1 exactly
  EXPECT_GE(a.value() * a.value() * 2, 1);

  const BoundRatio b(mpq_class(10), {RadicalTerm::power_product({{mpq_class(2), 1, 3}})});
  EXPECT_GE(b.value() * b.value() * b.value() * 2, 1000);
  EXPECT_NEAR(b.value().get_d(), 10 / std::cbrt(2.0), 2e-12);

  const BoundRatio c(mpq_class(7), {RadicalTerm::power_product({{mpq_class(3), 1, 2}}), RadicalTerm::power_product({{mpq_class(5), 1, 4}})});
  EXPECT_NEAR(c.value().get_d(), 7 / (std::sqrt(3.0) + std::pow(5.0, 0.25)), 2e-12);
  EXPECT_GE(c.value().get_d(), 7 / (std::sqrt(3.0) + std::pow(5.0, 0.25)) - 1e-15);
}

TEST(ExactRatio, PerfectPowersAreExact) {
  const auto t = RadicalTerm::power_product({{mpq_class(4), 3, 2}, {mpq_class(9), 1, 2}});
  const BoundRatio r(mpq_class(24), {t});
  EXPECT_EQ(r.value(), 1);
  EXPECT_EQ(r.rhs_lower(), r.rhs_upper());
  EXPECT_EQ(r.rhs_lower(), 24);
}

TEST(ExactRatio, NegativeExponents) {
  // m^-1/2 n^3/2 with m = 4, n = 9: 27/2
  const auto t = RadicalTerm::power_product({{mpq_class(4), -1, 2}, {mpq_class(9), 3, 2}});
  EXPECT_EQ(BoundRatio(mpq_class(27, 2), {t}).value(), 1);
  EXPECT_THROW(RadicalTerm::power_product({{mpq_class(0), -1, 2}}), Error);
  EXPECT_THROW(BoundRatio(mpq_class(1), {RadicalTerm::rational(mpq_class(0))}), Error);
}

TEST(ExactRatio, AtMost) {
  const BoundRatio r(mpq_class(1), {RadicalTerm::rational(mpq_class(4))});
  EXPECT_TRUE(r.at_most(mpq_class(1, 4)));
  EXPECT_FALSE(r.at_most(mpq_class(1, 5)));
}

TEST(Report, EnergyJsonFieldOrder) {
  const auto j = to_json(main_bound_report(grid<R>(Q(), 3)));
  EXPECT_EQ(keys(j), (std::vector<std::string>{"field", "size", "m", "M", "E", "E_star", "AA", "AinvA", "ratio_main", "ratio_growth",
                                               "E_over_M_A2", "checks", "mA_at_most_p2", "correction_term", "decomposition"}));
  EXPECT_EQ(j["E"], 233);
  EXPECT_EQ(j["m"], 3);
  EXPECT_EQ(j["M"], 3);
  EXPECT_TRUE(j["mA_at_most_p2"].is_null());
  Count sum = 0;
  for (const auto& row : j["decomposition"]) sum += row["Q_C"].get<Count>();
  EXPECT_EQ(sum, 233U);
}

TEST(Report, EnergyJsonPrimeField) {
  const auto j = to_json(main_bound_report(random_set<Pm>(Fp(101), 20, 2)));
  EXPECT_EQ(j["field"], "Fp:101");
  EXPECT_TRUE(j["mA_at_most_p2"].is_boolean());
  EXPECT_TRUE(j["correction_term"].is_string());
}

TEST(Report, EnergyJsonIsStable) {
  const auto a = random_set<R>(Q(), 25, 5);
  EXPECT_EQ(to_json(main_bound_report(a)).dump(), to_json(main_bound_report(a)).dump());
}

TEST(Report, CsvQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_row({"x", "1,2", ""}), "x,\"1,2\",\n");
}

TEST(Report, EnergyCsvMatchesHeader) {
  const auto r = main_bound_report(grid<R>(Q(), 3));
  const auto fields = energy_csv_fields(r);
  EXPECT_EQ(fields.size(), energy_csv_header().size());
  EXPECT_EQ(fields[4], "233");
  EXPECT_EQ(fields.back().substr(0, 9), "1=9/19;2=");
}

TEST(Report, SweepRowsOrderedAndDeterministic) {
  const auto a = run_sweep("grid:N", Q(), 2, 6, 1);
  const auto b = run_sweep("grid:N", Q(), 2, 6, 4);
  ASSERT_EQ(a.size(), 5U);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].param, static_cast<long>(i + 2));
    EXPECT_EQ(sweep_csv_fields(a[i]), sweep_csv_fields(b[i]));
    EXPECT_EQ(sweep_csv_fields(a[i]).size(), sweep_csv_header().size());
  }
  EXPECT_THROW(run_sweep("grid:N", Q(), 5, 4, 1), Error);
  EXPECT_THROW(run_sweep("grid:N", Fp(5), 3, 6, 2), Error);
  EXPECT_EQ(substitute_parameter("affprod:gp(1,2,N)xap(0,1,N)", 7), "affprod:gp(1,2,7)xap(0,1,7)");
}

TEST(Report, HeaviestSlice) {
  // [3] x [3]: Q_2 = 64 is the largest class.
  EXPECT_EQ(heaviest_slice(grid<R>(Q(), 3)), I<R>(Q(), 2));
}

TEST(Io, ParseAffineFile) {
  std::istringstream in("# comment\nfield Fp:7\n\n1 2\n3/2 -1\n8 9\n");
  const auto t = parse_input(in);
  ASSERT_TRUE(t.field);
  EXPECT_EQ(*t.field, Fp(7));
  ASSERT_EQ(t.rows.size(), 3U);
  const auto a = parse_affine_rows<Pm>(t.rows, *t.field);
  EXPECT_EQ(a.size(), 2U);  // 8 9 == 1 2 mod 7
}

TEST(Io, AffineSetRoundTrip) {
  const auto a = random_set<R>(Q(), 30, 3);
  std::istringstream in(format_affine_set(a));
  const auto t = parse_input(in);
  EXPECT_EQ(*t.field, Q());
  EXPECT_EQ(parse_affine_rows<R>(t.rows, Q()), a);
}

TEST(Io, ParseErrors) {
  EXPECT_THROW(parse_pair_row<R>("1 2 3", Q()), Error);
  EXPECT_THROW(parse_pair_row<R>("1", Q()), Error);
  EXPECT_THROW(parse_affine_rows<R>({"0 1"}, Q()), Error);
  std::istringstream bad_field("field Fp:6\n");
  EXPECT_THROW(parse_input(bad_field), Error);
  std::istringstream bad_alpha("alpha x\n");
  EXPECT_THROW(parse_input(bad_alpha), Error);
}

TEST(Io, PointsAndLines) {
  EXPECT_EQ(parse_point<R>("2 3", Q()), P<R>(Q(), 2, 3));
  EXPECT_EQ(parse_point<R>("4:6:2", Q()), P<R>(Q(), 2, 3));
  EXPECT_EQ(parse_point<R>("0:1:0", Q()), PlanePoint<R>({I<R>(Q(), 0), I<R>(Q(), 1), I<R>(Q(), 0)}));
  EXPECT_EQ(parse_line<R>("1:0:-2", Q()), L<R>(Q(), 1, 0, -2));
  EXPECT_THROW(parse_line<R>("1:0", Q()), Error);
  EXPECT_THROW(parse_line<R>("0:0:0", Q()), Error);
}

TEST(Io, GridFile) {
  std::istringstream in("field Q\nalpha 2/3\nS: 0 1 2\nT: 0 1 2\n1 -1\n1 0\n1 1\n0 5\n");
  const auto t = parse_input(in);
  const auto g = parse_grid<R>(t, Q());
  EXPECT_EQ(g.alpha, mpq_class(2, 3));
  EXPECT_EQ(g.lines.size(), 3U);
  EXPECT_EQ(g.rejected_horizontal, 1U);
  EXPECT_EQ(rich_lines(g).size(), 3U);
  std::istringstream missing("field Q\n1 1\n");
  EXPECT_THROW(parse_grid<R>(parse_input(missing), Q()), Error);
}
