#include <gtest/gtest.h>

#include <set>

#include "ffdist/errors.hpp"
#include "ffdist/sets.hpp"
#include "ffdist/spectrum.hpp"

using namespace ffdist;

TEST(FieldSubset, ReducesAndDeduplicates) {
  PrimeModulus p(7);
  FieldSubset a(p, {8, 1, 15, 3});
  EXPECT_EQ(a.size(), 2u);
  EXPECT_TRUE(a.contains(1));
  EXPECT_TRUE(a.contains(3));
  EXPECT_FALSE(a.contains(0));
  EXPECT_FALSE(a.contains(8));
}

TEST(FieldSubset, ShiftDilateComplement) {
  PrimeModulus p(7);
  FieldSubset a(p, {0, 1, 3});
  EXPECT_EQ(a.shifted(5), FieldSubset(p, {5, 6, 1}));
  EXPECT_EQ(a.dilated(3), FieldSubset(p, {0, 3, 2}));
  EXPECT_EQ(a.complement(), FieldSubset(p, {2, 4, 5, 6}));
  EXPECT_EQ(FieldSubset::full(p).size(), 7u);
  EXPECT_TRUE(FieldSubset::empty(p).is_empty());
}

TEST(ParseSubset, ListsAndRanges) {
  PrimeModulus p(11);
  EXPECT_EQ(parse_subset("0,1,3", p), FieldSubset(p, {0, 1, 3}));
  EXPECT_EQ(parse_subset(" 2..5 , 9 ", p), FieldSubset(p, {2, 3, 4, 5, 9}));
  EXPECT_EQ(parse_subset("-1,-12", p), FieldSubset(p, {10}));
  EXPECT_EQ(parse_subset("0..10\n", p), FieldSubset::full(p));
}

TEST(ParseSubset, ErrorsCarryPositions) {
  PrimeModulus p(11);
  for (const char* bad : {"", "  ", "1,,2", "1,", "x", "1..", "5..2", "1.5", "3 4"}) {
    EXPECT_THROW(parse_subset(bad, p), ParseError) << '"' << bad << '"';
  }
  try {
    parse_subset("1,2,zz", p);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
}

TEST(ParseSubset, FormatRoundTrip) {
  PrimeModulus p(31);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    FieldSubset a = random_subset(p, 1 + seed % 31, seed);
    EXPECT_EQ(parse_subset(format_subset(a), p), a);
  }
}

TEST(RandomSubset, SizeAndDeterminism) {
  PrimeModulus p(101);
  for (std::uint64_t n : {1ull, 17ull, 101ull}) {
    FieldSubset a = random_subset(p, n, 9);
    EXPECT_EQ(a.size(), n);
    EXPECT_EQ(a, random_subset(p, n, 9));
  }
  EXPECT_NE(random_subset(p, 10, 1), random_subset(p, 10, 2));
  EXPECT_THROW(random_subset(p, 0, 1), UsageError);
  EXPECT_THROW(random_subset(p, 102, 1), UsageError);
}

TEST(IsotropicLine, AllDistancesVanish) {
  for (std::uint32_t q : {5u, 13u, 17u, 29u}) {
    PointSet line = isotropic_line(PrimeModulus(q));
    EXPECT_EQ(line.size(), q);
    Spectrum s = distance_spectrum_general(line);
    EXPECT_EQ(s[0], BigCount(q) * q);
  }
  EXPECT_THROW(isotropic_line(PrimeModulus(7)), UsageError);
  EXPECT_THROW(isotropic_line(PrimeModulus(11)), UsageError);
}

TEST(PointSet, SortsAndDeduplicates) {
  PrimeModulus p(5);
  PointSet e(p, 2, {1, 2, 0, 0, 6, 2, 3, 3});
  EXPECT_EQ(e.size(), 3u);
  EXPECT_EQ(e.point(0)[0], 0u);
  EXPECT_EQ(e.point(1)[1], 2u);
}

TEST(RandomPointSet, DistinctPoints) {
  PrimeModulus p(7);
  PointSet e = random_pointset(p, 3, 196, 4);
  EXPECT_EQ(e.size(), 196u);
  std::set<std::vector<std::uint32_t>> seen;
  for (std::size_t i = 0; i < e.size(); ++i) {
    auto x = e.point(i);
    for (auto c : x) EXPECT_LT(c, 7u);
    seen.insert({x.begin(), x.end()});
  }
  EXPECT_EQ(seen.size(), 196u);
  EXPECT_EQ(e, random_pointset(p, 3, 196, 4));
  EXPECT_THROW(random_pointset(p, 2, 50, 1), UsageError);
}

TEST(CartesianPower, SizeAndGuard) {
  PrimeModulus p(11);
  FieldSubset a(p, {1, 2, 3});
  EXPECT_EQ(cartesian_power(a, 3).size(), 27u);
  EXPECT_EQ(cartesian_power(a, 3).dim(), 3u);
  EXPECT_THROW(cartesian_power(a, 20, 1000), GuardExceeded);
}

TEST(SetFile, RoundTripAndComments) {
  PrimeModulus p(13);
  PointSet e = random_pointset(p, 3, 20, 2);
  EXPECT_EQ(parse_set_file(format_set_file(e)), e);
  PointSet line = parse_set_file("# header follows\np=7 d=1\n\n0\n# three\n3\n-1\n");
  EXPECT_EQ(to_subset(line), FieldSubset(PrimeModulus(7), {0, 3, 6}));
}

TEST(SetFile, Errors) {
  EXPECT_THROW(parse_set_file("0\n1\n"), ParseError);
  EXPECT_THROW(parse_set_file("p=7 d=2\n1,2,3\n"), ParseError);
  EXPECT_THROW(parse_set_file("p=7 d=1\n"), ParseError);
  EXPECT_THROW(parse_set_file("p=8 d=1\n1\n"), UsageError);
  EXPECT_THROW(read_set_file("/nonexistent/file"), UsageError);
  EXPECT_THROW(to_subset(random_pointset(PrimeModulus(5), 2, 3, 1)), UsageError);
}
