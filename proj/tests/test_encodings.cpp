#include <gtest/gtest.h>

#include "ffdist/encodings.hpp"
#include "ffdist/energy.hpp"
#include "ffdist/errors.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace ffdist;
using testing_support::counts_of;
using testing_support::values_of;

namespace {

std::map<oracle::Tuple, std::uint64_t> plain(const WeightedPointSet& s) {
  std::map<oracle::Tuple, std::uint64_t> out;
  for (const auto& [x, m] : s.entries()) out[oracle::Tuple(x.begin(), x.end())] = m.get_ui();
  return out;
}

BigCount previous_energy(const FieldSubset& a, unsigned d, EnergyKind kind) {
  return d == 1 ? BigCount(1) : energy(a, d - 1, kind).value;
}

}  // namespace

TEST(WeightedPointSet, Basics) {
  PrimeModulus p(5);
  WeightedPointSet s(p, 2);
  s.add({1, 2}, 3);
  s.add({6, 7}, 2);
  s.add({0, 0}, 0);
  EXPECT_EQ(s.distinct_size(), 1u);
  EXPECT_EQ(s.total(), 5);
  EXPECT_EQ(s.second_moment(), 25);
  EXPECT_THROW(s.add({1, 1}, -1), UsageError);
  EXPECT_THROW(WeightedPointSet(p, 4), UsageError);
  EXPECT_EQ(format_multiset_csv(s), "c1,c2,multiplicity\n1,2,5\n");
}

TEST(PairCount, MatchesOracle) {
  for (std::uint32_t q : {5u, 7u, 11u}) {
    PrimeModulus p(q);
    SeededRng rng(q);
    for (int round = 0; round < 10; ++round) {
      for (unsigned dim : {2u, 3u}) {
        auto e = random_weighted_set(p, dim, 12, 5, rng);
        auto f = random_weighted_set(p, dim, 12, 5, rng);
        Spectrum all = pair_count_spectrum(e, f);
        for (std::uint32_t l = 0; l < q; ++l) {
          std::uint64_t expected = oracle::weighted_pair_count(plain(e), plain(f), l, q);
          EXPECT_EQ(all[l], expected);
          EXPECT_EQ(dim == 2 ? pair_count_dim2(e, f, FieldElement{l}) : pair_count_dim3(e, f, FieldElement{l}),
                    expected);
        }
      }
    }
  }
}

TEST(PairCount, DimensionMismatch) {
  PrimeModulus p(5);
  WeightedPointSet e(p, 2), f(p, 3);
  EXPECT_THROW(pair_count_spectrum(e, f), UsageError);
}

TEST(Encodings, CountDistancesAndDotProducts) {
  for (std::uint32_t q : {5u, 7u, 11u}) {
    PrimeModulus p(q);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      FieldSubset a = random_subset(p, 1 + seed % 3, seed + q);
      auto v = values_of(a);
      for (unsigned d = 1; d <= 2; ++d) {
        EncodedPair odd = encode_distance_odd(a, d);
        EXPECT_EQ(counts_of(pair_count_spectrum(odd.first, odd.second)),
                  oracle::power_counts(v, 2 * d + 1, q, false));
        EncodedPair even = encode_distance_even(a, d);
        EXPECT_EQ(counts_of(pair_count_spectrum(even.first, even.second)),
                  oracle::power_counts(v, 2 * d, q, false));
        EncodedPair dot = encode_dot(a, d);
        EXPECT_EQ(counts_of(pair_count_spectrum(dot.first, dot.second)),
                  oracle::power_counts(v, 2 * d, q, true));
      }
    }
  }
}

TEST(Encodings, SecondMomentIdentities) {
  for (std::uint32_t q : {5u, 7u, 11u, 13u}) {
    PrimeModulus p(q);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      FieldSubset a = random_subset(p, 1 + seed, seed);
      BigCount n = a.size();
      for (unsigned d = 1; d <= 3; ++d) {
        EncodedPair odd = encode_distance_odd(a, d);
        EXPECT_EQ(odd.first.second_moment(), n * distance_energy(a, d).value);
        EXPECT_EQ(odd.second.second_moment(), n * distance_energy(a, d).value);
        EXPECT_EQ(odd.first.total(), big_pow(a.size(), 2 * d + 1));
        EncodedPair even = encode_distance_even(a, d);
        EXPECT_EQ(even.first.second_moment(), n * n * previous_energy(a, d, EnergyKind::distance));
        EncodedPair dot = encode_dot(a, d);
        EXPECT_EQ(dot.first.second_moment(), n * n * previous_energy(a, d, EnergyKind::dot));
        EXPECT_EQ(dot.first, dot.second);
      }
    }
  }
}

TEST(Deviation, HoldsOnRandomMultisets) {
  for (std::uint32_t q : {5u, 7u, 31u}) {
    PrimeModulus p(q);
    SeededRng rng(q * 7);
    for (int round = 0; round < 20; ++round) {
      for (unsigned dim : {2u, 3u}) {
        auto e = random_weighted_set(p, dim, 2 * q, 6, rng);
        auto f = random_weighted_set(p, dim, 2 * q, 6, rng);
        DeviationReport r = deviation_check(e, f);
        EXPECT_TRUE(r.holds);
        EXPECT_LE(r.worst_ratio, 1.0);
        EXPECT_EQ(r.rows.size(), q);
      }
    }
  }
}

// The rows carry the exact integers of the comparison.
TEST(Deviation, RowsAreExact) {
  PrimeModulus p(5);
  WeightedPointSet e(p, 2), f(p, 2);
  e.add({1, 0}, 2);
  f.add({1, 0}, 3);
  DeviationReport r = deviation_check_dim2(e, f);
  // N(1) = 6; (5 * 6 - 6)^2 = 576 <= 125 * 4 * 9 = 4500.
  EXPECT_EQ(r.rows[1].count, 6);
  EXPECT_EQ(r.rows[1].lhs, 576);
  EXPECT_EQ(r.rows[1].rhs, 4500);
  EXPECT_EQ(r.rows[0].lhs, 36);
  EXPECT_TRUE(r.holds);
  EXPECT_THROW(deviation_check_dim3(e, f), UsageError);
}

// A point mass against the full plane.
TEST(Deviation, ExtremalConfigurations) {
  for (std::uint32_t q : {5u, 7u, 11u}) {
    PrimeModulus p(q);
    WeightedPointSet e(p, 2), f(p, 2);
    e.add({0, 0});
    for (std::uint32_t x = 0; x < q; ++x) {
      for (std::uint32_t y = 0; y < q; ++y) f.add({x, y});
    }
    EXPECT_TRUE(deviation_check(e, f).holds);
  }
}
