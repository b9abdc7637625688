#include <gtest/gtest.h>

#include <set>

#include "ffdist/energy.hpp"
#include "ffdist/errors.hpp"
#include "ffdist/incidence.hpp"
#include "ffdist/rng.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace ffdist;
using testing_support::values_of;

namespace {

struct RandomInstance {
  std::vector<Point3> points;
  std::vector<Plane> planes;
};

RandomInstance random_instance(std::uint32_t p, std::size_t n_points, std::size_t n_planes,
                               std::uint64_t seed) {
  SeededRng rng(seed);
  RandomInstance inst;
  auto draw = [&] { return static_cast<std::uint32_t>(rng.below(p)); };
  for (std::size_t i = 0; i < n_points; ++i) inst.points.push_back({draw(), draw(), draw()});
  while (inst.planes.size() < n_planes) {
    Plane s{draw(), draw(), draw(), draw()};
    if (s.a || s.b || s.c) inst.planes.push_back(s);
  }
  return inst;
}

std::vector<oracle::P3> plain(std::span<const Point3> points) {
  std::vector<oracle::P3> out;
  for (const auto& x : points) out.push_back({x[0], x[1], x[2]});
  return out;
}

std::vector<oracle::Plane4> plain(std::span<const Plane> planes) {
  std::vector<oracle::Plane4> out;
  for (const auto& s : planes) out.push_back({s.a, s.b, s.c, s.e});
  return out;
}

}  // namespace

TEST(Incidences, TrivialCases) {
  PrimeModulus p(5);
  std::vector<Point3> origin{{0, 0, 0}};
  EXPECT_EQ(count_incidences(p, origin, PlaneSet(p, {Plane{0, 0, 1, 0}})), 1u);
  EXPECT_EQ(count_incidences(p, origin, PlaneSet(p, {Plane{0, 0, 1, 1}})), 0u);
  EXPECT_THROW(PlaneSet(p, {Plane{0, 0, 0, 1}}), UsageError);
  EXPECT_THROW(PlaneSet(p, {Plane{5, 10, 0, 1}}), UsageError);
}

TEST(Incidences, StrategiesAgreeWithOracle) {
  for (std::uint32_t q : {5u, 7u, 11u, 13u}) {
    PrimeModulus p(q);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      RandomInstance inst = random_instance(q, 20 + seed % 11, 20 + seed % 7, seed * 31 + q);
      PlaneSet planes(p, inst.planes);
      std::uint64_t direct = count_incidences(p, inst.points, planes, IncidenceStrategy::direct);
      EXPECT_EQ(direct, count_incidences(p, inst.points, planes, IncidenceStrategy::grouped));
      EXPECT_EQ(direct, oracle::incidences(plain(inst.points), plain(planes.planes()), q));
    }
  }
}

TEST(Collinearity, SmallCases) {
  PrimeModulus p(7);
  std::vector<Point3> axis{{0, 0, 0}, {1, 0, 0}, {4, 0, 0}};
  EXPECT_EQ(max_collinear(p, axis), 3u);
  std::vector<Point3> single{{3, 2, 1}};
  EXPECT_EQ(max_collinear(p, single), 1u);
  std::vector<Point3> repeated{{1, 1, 1}, {1, 1, 1}, {2, 2, 2}};
  EXPECT_EQ(max_collinear(p, repeated), 3u);
  std::vector<Point3> vertical{{1, 2, 0}, {1, 2, 5}, {3, 3, 3}};
  auto profile = collinearity_profile(p, vertical);
  EXPECT_EQ(profile.max_vertical, 2u);
  EXPECT_EQ(profile.max_any, 2u);
}

TEST(Collinearity, MatchesOracle) {
  for (std::uint32_t q : {3u, 5u, 7u}) {
    PrimeModulus p(q);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      RandomInstance inst = random_instance(q, 5 + seed % 25, 1, seed);
      EXPECT_EQ(max_collinear(p, inst.points), oracle::max_collinear(plain(inst.points), q));
    }
  }
}

TEST(Collinearity, Guard) {
  PrimeModulus p(101);
  RandomInstance inst = random_instance(101, 60, 1, 2);
  EXPECT_THROW(collinearity_profile(p, inst.points, 50), GuardExceeded);
  EXPECT_NO_THROW(collinearity_profile(p, inst.points, 50, true));
}

TEST(Lines, CanonicalForm) {
  PrimeModulus p(11);
  Point3 u{1, 2, 3}, v{4, 4, 4};
  Line l = line_through(p, u, v);
  EXPECT_EQ(l, line_through(p, v, u));
  EXPECT_EQ(l.direction[0], 1u);
  EXPECT_EQ(l.base[0], 0u);
  EXPECT_TRUE(lies_on(p, l, u));
  EXPECT_TRUE(lies_on(p, l, v));
  EXPECT_FALSE(lies_on(p, l, Point3{0, 0, 0}));
  EXPECT_TRUE(line_through(p, Point3{1, 1, 0}, Point3{1, 1, 9}).is_vertical());
}

TEST(Rudnev, ReportsRatioAndSwappedRoles) {
  PrimeModulus p(7);
  RandomInstance inst = random_instance(7, 40, 10, 5);
  IncidenceInstance small{p, inst.points, PlaneSet(p, inst.planes), 0, true};
  small.k = max_collinear(p, small.points);
  RudnevReport r = rudnev_diagnostic(small);
  EXPECT_TRUE(r.roles_swapped);
  EXPECT_FALSE(r.note.empty());
  EXPECT_TRUE(std::isfinite(r.ratio));
  EXPECT_EQ(r.incidences, count_incidences(p, small.points, small.planes));

  RandomInstance balanced = random_instance(7, 10, 40, 6);
  IncidenceInstance ok{p, balanced.points, PlaneSet(p, balanced.planes), 2, true};
  RudnevReport s = rudnev_diagnostic(ok);
  EXPECT_FALSE(s.roles_swapped);
  EXPECT_NEAR(s.rhs, 400.0 / 7 + std::sqrt(10.0) * 40 + 2 * 40, 1e-9);
}

TEST(ProofInstance, IncidencesEqualLevelPairSum) {
  for (std::uint32_t q : {5u, 7u, 11u}) {
    PrimeModulus p(q);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      FieldSubset a = random_subset(p, 1 + seed % 4, seed + 100 * q);
      for (const auto& li : dyadic_levels(diff_square_spectrum(a))) {
        for (const auto& lj : dyadic_levels(diff_square_spectrum(a))) {
          ProofInstance inst = build_proof_instance(a, 2, li.exponent, lj.exponent);
          std::uint64_t count = count_incidences(p, inst.instance.points, inst.instance.planes);
          EXPECT_EQ(big(count), inst.level_pair_sum);
          EXPECT_EQ(count, oracle::level_pair_sum(values_of(a), values_of(li.members),
                                                  values_of(lj.members), q));
          EXPECT_EQ(inst.instance.points.size(), a.size() * a.size() * li.members.size());
          EXPECT_EQ(inst.instance.planes.size(), a.size() * a.size() * lj.members.size());
        }
      }
    }
  }
}

TEST(ProofInstance, ProjectionAndCollinearity) {
  PrimeModulus p(13);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    FieldSubset a = random_subset(p, 3 + seed % 3, seed);
    auto levels = dyadic_levels(fold(diff_square_spectrum(a), 2));
    for (const auto& li : levels) {
      ProofInstance inst = build_proof_instance(a, 3, li.exponent, levels.front().exponent);
      std::set<std::pair<std::uint32_t, std::uint32_t>> shadow, expected;
      for (const auto& x : inst.instance.points) shadow.insert({x[0], x[1]});
      for (std::uint32_t u : a.elements()) {
        for (std::uint32_t v : a.elements()) expected.insert({p.neg(p.add(FieldElement{u}, FieldElement{u})).value, v});
      }
      EXPECT_EQ(shadow, expected);
      CollinearityProfile profile = collinearity_profile(p, inst.instance.points);
      EXPECT_LE(profile.max_vertical, li.members.size());
      EXPECT_LE(profile.max_non_vertical, a.size());
      EXPECT_LE(inst.instance.k, std::max<std::uint64_t>(a.size(), li.members.size()));
    }
  }
}

TEST(ProofInstance, Errors) {
  FieldSubset a(PrimeModulus(7), {0, 1});
  EXPECT_THROW(build_proof_instance(a, 1, 0, 0), UsageError);
  EXPECT_THROW(build_proof_instance(a, 2, 9, 0), UsageError);
}

TEST(InstanceDump, RoundTrip) {
  FieldSubset a(PrimeModulus(7), {0, 1, 3});
  ProofInstance inst = build_proof_instance(a, 2, 1, 1);
  std::string text = format_instance_dump(inst.instance);
  EXPECT_EQ(text.rfind("p=7\nPOINTS\n", 0), 0u);
  IncidenceInstance back = parse_instance_dump(text);
  EXPECT_EQ(back.points, inst.instance.points);
  EXPECT_TRUE(std::equal(back.planes.planes().begin(), back.planes.planes().end(),
                         inst.instance.planes.planes().begin(), inst.instance.planes.planes().end()));
  EXPECT_THROW(parse_instance_dump("p=7\n1,2,3\n"), UsageError);
}
