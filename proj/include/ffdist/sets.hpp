#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ffdist/prime_field.hpp"

namespace ffdist {

/// A subset of F_p stored as a bitmap over [0, p) plus the sorted element
/// list. Immutable after construction.
class FieldSubset {
 public:
  /// Values are reduced mod p; duplicates collapse.
  FieldSubset(const PrimeModulus& p, std::span<const std::uint32_t> values);
  FieldSubset(const PrimeModulus& p, std::initializer_list<std::uint32_t> values)
      : FieldSubset(p, std::span<const std::uint32_t>(values.begin(), values.size())) {}

  static FieldSubset empty(const PrimeModulus& p) { return FieldSubset(p, {}); }
  static FieldSubset full(const PrimeModulus& p);

  const PrimeModulus& modulus() const { return p_; }
  std::size_t size() const { return elements_.size(); }
  bool is_empty() const { return elements_.empty(); }
  bool contains(std::uint32_t t) const {
    return t < p_.value() && ((bits_[t >> 6] >> (t & 63)) & 1u);
  }
  std::span<const std::uint32_t> elements() const { return elements_; }

  FieldSubset shifted(std::uint32_t c) const;   // A + c
  FieldSubset dilated(std::uint32_t c) const;   // c * A
  FieldSubset complement() const;

  friend bool operator==(const FieldSubset& a, const FieldSubset& b) {
    return a.p_ == b.p_ && a.elements_ == b.elements_;
  }

 private:
  PrimeModulus p_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> elements_;
};

/// Distinct points of F_p^d, held flat in lexicographic order.
class PointSet {
 public:
  /// `coords` holds size*dim canonical-or-reducible values; the constructor
  /// reduces, sorts and drops duplicate points.
  PointSet(const PrimeModulus& p, unsigned dim, std::vector<std::uint32_t> coords);

  const PrimeModulus& modulus() const { return p_; }
  unsigned dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::span<const std::uint32_t> point(std::size_t i) const {
    return std::span<const std::uint32_t>(coords_).subspan(i * dim_, dim_);
  }
  std::span<const std::uint32_t> coords() const { return coords_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  PrimeModulus p_;
  unsigned dim_;
  std::vector<std::uint32_t> coords_;
};

/// Comma-separated integers and inclusive ranges `a..b`, e.g. "0,1,5..9".
/// Negative values are allowed and reduced. Throws ParseError on malformed
/// or empty input.
FieldSubset parse_subset(std::string_view text, const PrimeModulus& p);

/// Inverse of parse_subset: sorted elements joined by commas.
std::string format_subset(const FieldSubset& a);

/// Uniform n-subset of F_p for a given seed (Floyd sampling over SeededRng).
FieldSubset random_subset(const PrimeModulus& p, std::uint64_t n, std::uint64_t seed);

/// {(x, i x)} with i^2 = -1; requires p = 1 (mod 4).
PointSet isotropic_line(const PrimeModulus& p);

/// Uniform n-subset of F_p^dim; requires p^dim < 2^64.
PointSet random_pointset(const PrimeModulus& p, unsigned dim, std::uint64_t n,
                         std::uint64_t seed);

/// A^n as explicit points. Throws GuardExceeded when |A|^n > max_points.
PointSet cartesian_power(const FieldSubset& a, unsigned n,
                         std::uint64_t max_points = 1'000'000);

PointSet to_pointset(const FieldSubset& a);
/// Requires dim == 1.
FieldSubset to_subset(const PointSet& points);

// Set files: first line `p=<prime> d=<dim>`, then one element (d = 1) or one
// comma-separated tuple per line. Blank lines and `#` comments are skipped.
PointSet parse_set_file(std::string_view text);
std::string format_set_file(const PointSet& points);
PointSet read_set_file(const std::string& path);

}  // namespace ffdist
