#include <gtest/gtest.h>

#include "ffdist/errors.hpp"
#include "ffdist/parallel.hpp"
#include "ffdist/verify.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace ffdist;
using testing_support::spectrum_of;
using testing_support::values_of;

TEST(Coverage, IsotropicLineMissesNonzero) {
  for (std::uint32_t q : {5u, 13u, 17u}) {
    PrimeModulus p(q);
    CoverageReport r = coverage_check(distance_spectrum_general(isotropic_line(p)));
    EXPECT_FALSE(r.covered);
    EXPECT_EQ(r.missing, FieldSubset(p, {0}).complement());
  }
}

TEST(Coverage, EmptySupport) {
  CoverageReport r = coverage_check(Spectrum::zero(PrimeModulus(7)));
  EXPECT_FALSE(r.covered);
  EXPECT_EQ(r.missing.size(), 7u);
}

TEST(Coverage, DeviationValue) {
  CoverageReport r = coverage_check(spectrum_of(5, {1, 1, 1, 1, 6}));
  EXPECT_TRUE(r.covered);
  EXPECT_DOUBLE_EQ(r.expected_count, 2.0);
  EXPECT_DOUBLE_EQ(r.max_relative_deviation, 2.0);
  EXPECT_TRUE(deviation_within(spectrum_of(5, {1, 1, 1, 1, 6}), 2, 1));
  EXPECT_FALSE(deviation_within(spectrum_of(5, {1, 1, 1, 1, 6}), 19, 10));
}

TEST(Coverage, FullFieldCubedAgainstSpheres) {
  for (std::uint32_t q : {3u, 5u, 7u}) {
    PrimeModulus p(q);
    Spectrum s = distance_spectrum_power(FieldSubset::full(p), 3);
    auto spheres = oracle::sphere_counts(q);
    EXPECT_EQ(spheres[0], std::uint64_t{q} * q);
    for (std::uint32_t l = 0; l < q; ++l) EXPECT_EQ(s[l], BigCount(spheres[l]) * q * q * q);
    EXPECT_TRUE(coverage_check(s).covered);
    EXPECT_TRUE(deviation_within(s, 2, q));
  }
}

TEST(IosevichRudnev, AboveThresholdCovers) {
  for (std::uint32_t q : {5u, 7u}) {
    PrimeModulus p(q);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      IosevichRudnevReport r = iosevich_rudnev_check(random_pointset(p, 3, 4 * q * q, seed));
      EXPECT_TRUE(r.above_threshold);
      EXPECT_TRUE(r.coverage.covered);
      EXPECT_TRUE(r.holds);
    }
  }
}

TEST(IosevichRudnev, ThresholdIsExact) {
  PrimeModulus p(5);
  EXPECT_FALSE(iosevich_rudnev_check(random_pointset(p, 3, 99, 1)).above_threshold);
  EXPECT_TRUE(iosevich_rudnev_check(random_pointset(p, 3, 100, 1)).above_threshold);
  IosevichRudnevReport below = iosevich_rudnev_check(isotropic_line(p));
  EXPECT_FALSE(below.above_threshold);
  EXPECT_TRUE(below.holds);
  EXPECT_FALSE(below.coverage.covered);
}

TEST(Identities, DeltaAdditivity) {
  for (std::uint32_t q : {5u, 7u, 13u, 31u}) {
    PrimeModulus p(q);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      FieldSubset a = random_subset(p, 1 + seed % std::min<std::uint32_t>(q, 6), seed);
      for (unsigned d = 1; d <= 3; ++d) EXPECT_TRUE(delta_additivity_check(a, d));
    }
  }
  EXPECT_TRUE(delta_additivity_check(FieldSubset(PrimeModulus(7), {4}), 2));
  for (std::uint32_t q : {5u, 7u}) {
    FieldSubset full = FieldSubset::full(PrimeModulus(q));
    EXPECT_EQ(support(distance_spectrum_power(full, 2)), full);
    EXPECT_TRUE(delta_additivity_check(full, 1));
  }
}

TEST(Identities, CauchyDavenport) {
  PrimeModulus p5(5);
  EXPECT_TRUE(cauchy_davenport_check(FieldSubset(p5, {0, 1}), FieldSubset(p5, {0, 1})));
  EXPECT_TRUE(cauchy_davenport_check(FieldSubset::full(p5), FieldSubset::full(p5)));
  EXPECT_THROW(cauchy_davenport_check(FieldSubset::empty(p5), FieldSubset::full(p5)), UsageError);
  for (std::uint32_t q : {5u, 7u, 11u, 101u}) {
    PrimeModulus p(q);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      FieldSubset x = random_subset(p, 1 + seed % q, seed);
      FieldSubset y = random_subset(p, 1 + (seed * 7) % q, seed + 1000);
      EXPECT_TRUE(cauchy_davenport_check(x, y));
    }
  }
  // Arithmetic progressions with equal step meet the bound with equality.
  PrimeModulus p(13);
  EXPECT_EQ(sumset(FieldSubset(p, {0, 2, 4}), FieldSubset(p, {1, 3})).size(), 4u);
}

TEST(Decomposition, Singleton) {
  Decomposition d = balog_wooley_decompose(FieldSubset(PrimeModulus(11), {1}),
                                           DecompositionStrategy::exhaustive);
  EXPECT_EQ(d.max_energy(), 1);
  EXPECT_EQ(d.b.size() + d.c.size(), 1u);
}

TEST(Decomposition, ExhaustiveIsOptimalAndBeatsGreedy) {
  for (std::uint32_t q : {31u, 101u}) {
    PrimeModulus p(q);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      FieldSubset a = random_subset(p, 1 + seed % 8, seed);
      Decomposition ex = balog_wooley_decompose(a, DecompositionStrategy::exhaustive);
      Decomposition gr = balog_wooley_decompose(a, DecompositionStrategy::greedy);
      EXPECT_EQ(ex.max_energy(), oracle::best_split(values_of(a), q));
      EXPECT_LE(ex.max_energy(), gr.max_energy());
      for (const Decomposition* d : {&ex, &gr}) {
        EXPECT_EQ(d->b.size() + d->c.size(), a.size());
        for (std::uint32_t x : a.elements()) EXPECT_NE(d->b.contains(x), d->c.contains(x));
        EXPECT_EQ(d->eplus.value, oracle::quad_energy(values_of(d->b), q, false));
        EXPECT_EQ(d->etimes.value, oracle::quad_energy(values_of(d->c), q, true));
      }
    }
  }
}

TEST(Decomposition, TieBreakIsDeterministic) {
  PrimeModulus p(31);
  FieldSubset a = random_subset(p, 9, 77);
  Decomposition first = balog_wooley_decompose(a, DecompositionStrategy::exhaustive);
  set_worker_limit(1);
  Decomposition serial = balog_wooley_decompose(a, DecompositionStrategy::exhaustive);
  set_worker_limit(0);
  EXPECT_EQ(first.b, serial.b);
  // The least optimal B in lexicographic order: no optimal partition has a
  // lexicographically smaller B.
  const auto elems = a.elements();
  for (std::uint64_t mask = 0; mask < (1u << elems.size()); ++mask) {
    std::vector<std::uint64_t> b, c;
    for (std::size_t i = 0; i < elems.size(); ++i) ((mask >> i) & 1 ? b : c).push_back(elems[i]);
    std::uint64_t m = std::max(oracle::quad_energy(b, 31, false), oracle::quad_energy(c, 31, true));
    if (m == first.max_energy()) {
      auto chosen = values_of(first.b);
      EXPECT_FALSE(std::lexicographical_compare(b.begin(), b.end(), chosen.begin(), chosen.end()));
    }
  }
}

TEST(Decomposition, GuardAndNames) {
  EXPECT_THROW(balog_wooley_decompose(random_subset(PrimeModulus(101), 21, 1),
                                      DecompositionStrategy::exhaustive),
               GuardExceeded);
  EXPECT_EQ(parse_decomposition_strategy("greedy"), DecompositionStrategy::greedy);
  EXPECT_THROW(parse_decomposition_strategy("random"), UsageError);
}

TEST(TheoremLast, EnergiesMatchRecomputation) {
  PrimeModulus p(101);
  FieldSubset a = random_subset(p, 10, 3);
  TheoremLastReport r = theorem_last_report(a, 2, DecompositionStrategy::exhaustive);
  EXPECT_EQ(r.distance_energy_b, energy(r.decomposition.b, 2, EnergyKind::distance).value);
  EXPECT_EQ(r.dot_energy_c, energy(r.decomposition.c, 2, EnergyKind::dot).value);
  EXPECT_TRUE(std::isfinite(r.ratio));
  EXPECT_GT(r.bound, 0);
  EXPECT_TRUE(r.size_hypothesis);
  EXPECT_THROW(theorem_last_report(a, 1, DecompositionStrategy::greedy), UsageError);
}

TEST(TheoremLast, SingletonHasUnitMaximum) {
  TheoremLastReport r = theorem_last_report(FieldSubset(PrimeModulus(7), {3}), 2,
                                            DecompositionStrategy::exhaustive);
  EXPECT_EQ(std::max(r.distance_energy_b, r.dot_energy_c), 1);
}

TEST(Scan, EndpointsAndDeterminism) {
  for (std::uint32_t q : {5u, 7u}) {
    PrimeModulus p(q);
    ScanTable t = threshold_scan(p, 2, SpectrumKind::distance, 4, 11);
    ASSERT_EQ(t.rows.size(), q);
    EXPECT_EQ(t.rows.front().covered_fraction(), 0.0);
    EXPECT_EQ(t.rows.back().covered_fraction(), 1.0);
    ASSERT_TRUE(t.min_full_coverage.has_value());
    EXPECT_EQ(t.rows[*t.min_full_coverage - 1].covered_fraction(), 1.0);
    set_worker_limit(1);
    ScanTable serial = threshold_scan(p, 2, SpectrumKind::distance, 4, 11);
    set_worker_limit(0);
    EXPECT_EQ(format_scan_csv(serial), format_scan_csv(t));
  }
  ScanTable dot = threshold_scan(PrimeModulus(5), 2, SpectrumKind::dot, 2, 1);
  EXPECT_EQ(dot.rows.front().covered_fraction(), 0.0);
  std::string csv = format_scan_csv(dot);
  EXPECT_EQ(csv.rfind("m,trials,covered_fraction,min_count,covered_nonzero_fraction\n", 0), 0u);
}
