#include "ffdist/selftest.hpp"

#include <cmath>
#include <complex>
#include <functional>

#include "ffdist/encodings.hpp"
#include "ffdist/energy.hpp"
#include "ffdist/errors.hpp"
#include "ffdist/incidence.hpp"
#include "ffdist/prime_field.hpp"
#include "ffdist/sets.hpp"
#include "ffdist/spectrum.hpp"
#include "ffdist/verify.hpp"

namespace ffdist {

namespace {

class Suite {
 public:
  explicit Suite(std::string module) : module_(std::move(module)) {}

  void check(std::string name, const std::function<bool()>& body) {
    bool passed = false;
    try {
      passed = body();
    } catch (const std::exception&) {
      passed = false;
    }
    checks_.push_back({module_, std::move(name), passed});
  }

  std::vector<SelftestCheck> take() { return std::move(checks_); }

 private:
  std::string module_;
  std::vector<SelftestCheck> checks_;
};

Spectrum spectrum_of(std::uint32_t p, std::vector<unsigned long> counts) {
  std::vector<BigCount> values;
  for (auto c : counts) values.emplace_back(c);
  return Spectrum(PrimeModulus(p), std::move(values));
}

// r(t) = #{x in A^n, y in A^n : form(x, y) = t} by walking all pairs.
Spectrum enumerate_pairs(const FieldSubset& a, unsigned n, SpectrumKind kind) {
  const PrimeModulus& p = a.modulus();
  PointSet points = cartesian_power(a, n);
  std::vector<BigCount> counts(p.value());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      std::uint32_t acc = 0;
      for (unsigned k = 0; k < n; ++k) {
        std::uint32_t x = points.point(i)[k], y = points.point(j)[k];
        acc = p.add_raw(acc, kind == SpectrumKind::distance
                                 ? p.mul_raw(p.sub_raw(x, y), p.sub_raw(x, y))
                                 : p.mul_raw(x, y));
      }
      ++counts[acc];
    }
  }
  return Spectrum(p, std::move(counts));
}

std::vector<SelftestCheck> ffcore_suite() {
  Suite s("ffcore");
  s.check("primality agrees with trial division below 500", [] {
    for (std::uint64_t n = 0; n < 500; ++n) {
      bool trial = n >= 2;
      for (std::uint64_t q = 2; q * q <= n; ++q) trial = trial && n % q != 0;
      if (trial != is_prime(n)) return false;
    }
    return true;
  });
  s.check("every nonzero element of F_13 has an inverse", [] {
    PrimeModulus p(13);
    for (std::uint32_t x = 1; x < 13; ++x) {
      if (p.mul(FieldElement{x}, p.inv(FieldElement{x})) != p.one()) return false;
    }
    return true;
  });
  s.check("inverting zero is an error", [] {
    try {
      PrimeModulus(7).inv(FieldElement{0});
    } catch (const std::domain_error&) {
      return true;
    }
    return false;
  });
  s.check("square root of -1 in F_13", [] {
    PrimeModulus p(13);
    auto i = sqrt_of_minus_one(p);
    return i && p.square(*i) == p.neg(p.one()) && !sqrt_of_minus_one(PrimeModulus(7));
  });
  s.check("character sums over F_7", [] {
    PrimeModulus p(7);
    std::complex<double> plain = 0, gauss = 0;
    for (std::uint32_t x = 0; x < 7; ++x) {
      plain += additive_character(p, FieldElement{x});
      gauss += additive_character(p, p.square(FieldElement{x}));
    }
    return std::abs(plain) < 1e-9 && std::abs(std::norm(gauss) - 7.0) < 1e-9;
  });
  return s.take();
}

std::vector<SelftestCheck> sets_suite() {
  Suite s("sets");
  PrimeModulus p(11);
  s.check("element list with ranges", [&] {
    return parse_subset("0,1,5..7,-1", p) == FieldSubset(p, {0, 1, 5, 6, 7, 10});
  });
  s.check("element list round trip", [&] {
    FieldSubset a(p, {2, 3, 9});
    return parse_subset(format_subset(a), p) == a;
  });
  s.check("malformed list is rejected", [&] {
    try {
      parse_subset("1,,2", p);
    } catch (const ParseError&) {
      return true;
    }
    return false;
  });
  s.check("seeded subsets are reproducible", [&] {
    return random_subset(p, 5, 42) == random_subset(p, 5, 42) &&
           random_subset(p, 5, 42).size() == 5;
  });
  s.check("isotropic line in F_13", [] {
    PointSet line = isotropic_line(PrimeModulus(13));
    return line.size() == 13 && support(distance_spectrum_general(line)) ==
                                    FieldSubset(PrimeModulus(13), {0});
  });
  s.check("set file round trip", [&] {
    PointSet points = random_pointset(p, 2, 6, 1);
    return parse_set_file(format_set_file(points)) == points;
  });
  return s.take();
}

std::vector<SelftestCheck> spectra_suite() {
  Suite s("spectra");
  s.check("difference squares of {0,1,3} in F_7", [] {
    return diff_square_spectrum(FieldSubset(PrimeModulus(7), {0, 1, 3})) ==
           spectrum_of(7, {3, 2, 2, 0, 2, 0, 0});
  });
  s.check("threefold spectrum of {0,1} in F_5", [] {
    return distance_spectrum_power(FieldSubset(PrimeModulus(5), {0, 1}), 3) ==
           spectrum_of(5, {8, 24, 24, 8, 0});
  });
  s.check("products of {1,2} in F_5", [] {
    return product_spectrum(FieldSubset(PrimeModulus(5), {1, 2})) ==
           spectrum_of(5, {0, 1, 2, 0, 1});
  });
  s.check("spectra agree with pair enumeration", [] {
    PrimeModulus p(11);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      FieldSubset a = random_subset(p, 3, seed);
      for (unsigned n = 1; n <= 2; ++n) {
        for (auto kind : {SpectrumKind::distance, SpectrumKind::dot}) {
          if (spectrum_power(a, n, kind) != enumerate_pairs(a, n, kind)) return false;
        }
      }
    }
    return true;
  });
  s.check("direct and transform convolution agree", [] {
    FieldSubset a = random_subset(PrimeModulus(31), 9, 5);
    Spectrum base = diff_square_spectrum(a);
    return fold(base, 4, ConvolutionPath::direct) == fold(base, 4, ConvolutionPath::transform);
  });
  return s.take();
}

std::vector<SelftestCheck> energy_suite() {
  Suite s("energy");
  FieldSubset a(PrimeModulus(7), {0, 1});
  s.check("E_1 of {0,1} in F_7", [&] { return distance_energy(a, 1).value == 8; });
  s.check("E_2 of {0,1} in F_7", [&] { return distance_energy(a, 2).value == 96; });
  s.check("additive energy of {0,1} in F_5", [] {
    return additive_energy(FieldSubset(PrimeModulus(5), {0, 1})).value == 6;
  });
  s.check("energies agree with tuple enumeration", [] {
    FieldSubset b = random_subset(PrimeModulus(13), 3, 7);
    for (auto kind : {EnergyKind::distance, EnergyKind::dot, EnergyKind::additive,
                      EnergyKind::multiplicative}) {
      for (unsigned d = 1; d <= 2; ++d) {
        if (energy(b, d, kind).value != energy_bruteforce_oracle(b, d, kind).value) return false;
      }
    }
    return true;
  });
  s.check("dyadic level facts", [] {
    Spectrum spec = distance_spectrum_power(random_subset(PrimeModulus(13), 5, 3), 2);
    for (const auto& level : dyadic_levels(spec)) {
      if (!dyadic_level_facts_hold(spec, level)) return false;
    }
    return true;
  });
  return s.take();
}

std::vector<SelftestCheck> incidence_suite() {
  Suite s("incidence");
  PrimeModulus p(7);
  s.check("origin on Z = 0", [&] {
    PlaneSet planes(p, {Plane{0, 0, 1, 0}});
    std::vector<Point3> points{{0, 0, 0}};
    return count_incidences(p, points, planes) == 1;
  });
  s.check("origin off Z = 1", [&] {
    PlaneSet planes(p, {Plane{0, 0, 1, 1}});
    std::vector<Point3> points{{0, 0, 0}};
    return count_incidences(p, points, planes) == 0;
  });
  s.check("three points on an axis", [&] {
    std::vector<Point3> points{{0, 0, 0}, {1, 0, 0}, {5, 0, 0}};
    return max_collinear(p, points) == 3;
  });
  s.check("strategies agree on random instances", [&] {
    SeededRng rng(11);
    for (int round = 0; round < 5; ++round) {
      std::vector<Point3> points;
      std::vector<Plane> planes;
      for (int i = 0; i < 20; ++i) {
        points.push_back({static_cast<std::uint32_t>(rng.below(7)),
                          static_cast<std::uint32_t>(rng.below(7)),
                          static_cast<std::uint32_t>(rng.below(7))});
        planes.push_back({static_cast<std::uint32_t>(rng.below(7)),
                          static_cast<std::uint32_t>(rng.below(7)), 1,
                          static_cast<std::uint32_t>(rng.below(7))});
      }
      PlaneSet set(p, planes);
      if (count_incidences(p, points, set, IncidenceStrategy::direct) !=
          count_incidences(p, points, set, IncidenceStrategy::grouped)) {
        return false;
      }
    }
    return true;
  });
  s.check("proof instance incidences equal the level pair sum", [&] {
    FieldSubset a(p, {0, 1, 3});
    auto levels = dyadic_levels(diff_square_spectrum(a));
    for (const auto& li : levels) {
      for (const auto& lj : levels) {
        ProofInstance inst = build_proof_instance(a, 2, li.exponent, lj.exponent);
        if (big(count_incidences(p, inst.instance.points, inst.instance.planes)) !=
            inst.level_pair_sum) {
          return false;
        }
      }
    }
    return true;
  });
  return s.take();
}

std::vector<SelftestCheck> encodings_suite() {
  Suite s("encodings");
  FieldSubset a(PrimeModulus(5), {0, 1, 3});
  s.check("odd encoding counts distances in A^3", [&] {
    EncodedPair pair = encode_distance_odd(a, 1);
    return pair_count_spectrum(pair.first, pair.second) == distance_spectrum_power(a, 3);
  });
  s.check("even encoding counts distances in A^4", [&] {
    EncodedPair pair = encode_distance_even(a, 2);
    return pair_count_spectrum(pair.first, pair.second) == distance_spectrum_power(a, 4);
  });
  s.check("dot encoding counts dot products in A^4", [&] {
    EncodedPair pair = encode_dot(a, 2);
    return pair_count_spectrum(pair.first, pair.second) == dot_spectrum_power(a, 4);
  });
  s.check("second moment of the odd encoding", [&] {
    EncodedPair pair = encode_distance_odd(a, 2);
    return pair.first.second_moment() == big(a.size()) * distance_energy(a, 2).value;
  });
  s.check("deviation bounds on random multisets", [] {
    PrimeModulus p(7);
    SeededRng rng(3);
    for (int i = 0; i < 5; ++i) {
      for (unsigned dim : {2u, 3u}) {
        auto e = random_weighted_set(p, dim, 10, 4, rng);
        auto f = random_weighted_set(p, dim, 10, 4, rng);
        if (!deviation_check(e, f).holds) return false;
      }
    }
    return true;
  });
  return s.take();
}

std::vector<SelftestCheck> verify_suite() {
  Suite s("verify");
  s.check("isotropic line misses every nonzero distance", [] {
    PrimeModulus p(5);
    auto report = coverage_check(distance_spectrum_general(isotropic_line(p)));
    return !report.covered && report.missing.size() == 4;
  });
  s.check("A = F_5 cubed is equidistributed within 2/5", [] {
    PrimeModulus p(5);
    auto spec = distance_spectrum_power(FieldSubset::full(p), 3);
    return coverage_check(spec).covered && deviation_within(spec, 2, 5);
  });
  s.check("distance support doubles as a sumset", [] {
    return delta_additivity_check(random_subset(PrimeModulus(17), 4, 9), 2);
  });
  s.check("Cauchy-Davenport on {0,1}", [] {
    FieldSubset x(PrimeModulus(5), {0, 1});
    return cauchy_davenport_check(x, x) && sumset(x, x).size() == 3;
  });
  s.check("decomposition of a singleton", [] {
    auto d = balog_wooley_decompose(FieldSubset(PrimeModulus(7), {1}),
                                    DecompositionStrategy::exhaustive);
    return d.max_energy() == 1 && d.b.size() + d.c.size() == 1;
  });
  s.check("exhaustive decomposition beats greedy", [] {
    FieldSubset a = random_subset(PrimeModulus(31), 8, 4);
    return balog_wooley_decompose(a, DecompositionStrategy::exhaustive).max_energy() <=
           balog_wooley_decompose(a, DecompositionStrategy::greedy).max_energy();
  });
  return s.take();
}

}  // namespace

std::vector<SelftestCheck> run_selftest(std::string_view module) {
  if (module == "ffcore") return ffcore_suite();
  if (module == "sets") return sets_suite();
  if (module == "spectra") return spectra_suite();
  if (module == "energy") return energy_suite();
  if (module == "incidence") return incidence_suite();
  if (module == "encodings") return encodings_suite();
  if (module == "verify") return verify_suite();
  throw UsageError("unknown selftest module '" + std::string(module) + "'");
}

}  // namespace ffdist
