#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ffdist/bigint.hpp"
#include "ffdist/rng.hpp"
#include "ffdist/sets.hpp"
#include "ffdist/spectrum.hpp"

namespace ffdist {

/// A multiset in F_p^2 or F_p^3 stored sparsely as point -> multiplicity.
class WeightedPointSet {
 public:
  using Coords = std::vector<std::uint32_t>;

  /// dim must be 2 or 3.
  WeightedPointSet(const PrimeModulus& p, unsigned dim);

  /// Adds `multiplicity` copies of the point; coordinates are reduced.
  /// Adding zero copies is a no-op.
  void add(std::span<const std::uint32_t> coords, const BigCount& multiplicity = 1);
  void add(std::initializer_list<std::uint32_t> coords, const BigCount& multiplicity = 1) {
    add(std::span<const std::uint32_t>(coords.begin(), coords.size()), multiplicity);
  }

  const PrimeModulus& modulus() const { return p_; }
  unsigned dim() const { return dim_; }
  const std::map<Coords, BigCount>& entries() const { return entries_; }
  std::size_t distinct_size() const { return entries_.size(); }
  const BigCount& total() const { return total_; }
  /// sum of squared multiplicities.
  BigCount second_moment() const;

  friend bool operator==(const WeightedPointSet&, const WeightedPointSet&) = default;

 private:
  PrimeModulus p_;
  unsigned dim_;
  std::map<Coords, BigCount> entries_;
  BigCount total_;
};

/// N(E, F, lambda) = weighted #{(e, f) : e1 f1 + e2 + f2 = lambda}.
BigCount pair_count_dim2(const WeightedPointSet& e, const WeightedPointSet& f,
                         FieldElement lambda);
/// N(E, F, lambda) = weighted #{(e, f) : e1 f1 + e2 f2 + e3 + f3 = lambda}.
BigCount pair_count_dim3(const WeightedPointSet& e, const WeightedPointSet& f,
                         FieldElement lambda);
/// N(E, F, lambda) for every lambda at once, for either dimension.
Spectrum pair_count_spectrum(const WeightedPointSet& e, const WeightedPointSet& f);

struct DeviationRow {
  std::uint32_t lambda;
  BigCount count;  // N
  BigCount lhs;    // (p N - |E||F|)^2
  BigCount rhs;    // p^3 M_E M_F (dim 2) or p^4 M_E M_F (dim 3)
  bool holds;
};

// |N - |E||F|/p| <= c_p sqrt(M_E M_F) with c_p = sqrt(p) in dimension 2 and
// c_p = p in dimension 3, where M_X = sum of squared multiplicities. Checked
// as (p N - |E||F|)^2 <= p^2 c_p^2 M_E M_F over the integers.
struct DeviationReport {
  unsigned dim;
  std::uint32_t p;
  BigCount size_e, size_f;
  BigCount moment_e, moment_f;
  std::vector<DeviationRow> rows;
  bool holds;
  double worst_ratio;  // max over lambda of sqrt(lhs / rhs); <= 1 when holding
};

DeviationReport deviation_check_dim2(const WeightedPointSet& e, const WeightedPointSet& f);
DeviationReport deviation_check_dim3(const WeightedPointSet& e, const WeightedPointSet& f);
DeviationReport deviation_check(const WeightedPointSet& e, const WeightedPointSet& f);

struct EncodedPair {
  WeightedPointSet first;   // E
  WeightedPointSet second;  // F
};

/// Points (2x, x^2 + s) and (-t, t^2 + s) with s ranging over the d-fold
/// difference-square spectrum; N(E, F, lambda) counts distance-lambda pairs
/// in A^{2d+1}. d >= 1.
EncodedPair encode_distance_odd(const FieldSubset& a, unsigned d);

/// Points (2x1, 2x2, x1^2 + x2^2 + s) and (-t1, -t2, t1^2 + t2^2 + s) with
/// s from the (d-1)-fold spectrum; N counts distance-lambda pairs in A^{2d}.
EncodedPair encode_distance_even(const FieldSubset& a, unsigned d);

/// Points (x1, x2, s) with s from the (d-1)-fold product spectrum, on both
/// sides; N counts dot-product-lambda pairs in A^{2d}.
EncodedPair encode_dot(const FieldSubset& a, unsigned d);

/// Random multiset for deviation experiments: up to `max_entries` distinct
/// points, multiplicities in [1, max_multiplicity].
WeightedPointSet random_weighted_set(const PrimeModulus& p, unsigned dim,
                                     std::size_t max_entries, std::uint64_t max_multiplicity,
                                     SeededRng& rng);

/// CSV `c1,c2[,c3],multiplicity`, header line included.
std::string format_multiset_csv(const WeightedPointSet& set);

}  // namespace ffdist
