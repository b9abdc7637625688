#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ffdist/bigint.hpp"
#include "ffdist/prime_field.hpp"
#include "ffdist/sets.hpp"

namespace ffdist {

/// An exact count function F_p -> N, e.g. a representation function
/// r_{(A-A)^2} or the distance pair counts N(lambda) of a point set.
class Spectrum {
 public:
  Spectrum(const PrimeModulus& p, std::vector<BigCount> counts);

  static Spectrum zero(const PrimeModulus& p);
  static Spectrum point_mass(const PrimeModulus& p, std::uint32_t at, const BigCount& mass = 1);

  const PrimeModulus& modulus() const { return p_; }
  std::size_t size() const { return counts_.size(); }
  const BigCount& operator[](std::size_t t) const { return counts_[t]; }
  std::span<const BigCount> counts() const { return counts_; }
  const BigCount& total() const { return total_; }
  BigCount max_count() const;

  /// Throws InvariantViolation when total() differs from `expected`.
  void require_total(const BigCount& expected, std::string_view what) const;

  friend bool operator==(const Spectrum& a, const Spectrum& b) {
    return a.p_ == b.p_ && a.counts_ == b.counts_;
  }

 private:
  PrimeModulus p_;
  std::vector<BigCount> counts_;
  BigCount total_;
};

enum class SpectrumKind { distance, dot };

std::string_view to_string(SpectrumKind kind);
/// Accepts "distance" or "dot"; throws UsageError otherwise.
SpectrumKind parse_spectrum_kind(std::string_view text);

/// counts[t] = #{(a, b) in A^2 : (a - b)^2 = t}.
Spectrum diff_square_spectrum(const FieldSubset& a);
/// counts[t] = #{(a, b) in A^2 : a b = t}.
Spectrum product_spectrum(const FieldSubset& a);
/// counts[t] = #{(a, b) in A^2 : a + b = t}.
Spectrum sum_spectrum(const FieldSubset& a);

enum class ConvolutionPath {
  automatic,  // transform above kTransformThreshold, direct otherwise
  direct,     // O(p^2) with arbitrary-precision accumulators
  transform,  // multi-prime NTT with CRT reconstruction
};

inline constexpr std::uint32_t kTransformThreshold = 512;

/// out[t] = sum_u S[u] T[t - u], indices mod p, exact.
Spectrum cyclic_convolve(const Spectrum& s, const Spectrum& t,
                         ConvolutionPath path = ConvolutionPath::automatic);

/// d-fold cyclic self-convolution; d >= 1.
Spectrum fold(const Spectrum& s, unsigned d, ConvolutionPath path = ConvolutionPath::automatic);

/// out[t] = sum_{u v = t} S[u] T[v]: convolution under multiplication.
Spectrum multiplicative_convolve(const Spectrum& s, const Spectrum& t);

/// Pair counts of A^n: counts[lambda] = #{(x, y) : ||x - y|| = lambda}.
Spectrum distance_spectrum_power(const FieldSubset& a, unsigned n,
                                 ConvolutionPath path = ConvolutionPath::automatic);
/// counts[lambda] = #{(x, y) in A^n x A^n : x . y = lambda}.
Spectrum dot_spectrum_power(const FieldSubset& a, unsigned n,
                            ConvolutionPath path = ConvolutionPath::automatic);
Spectrum spectrum_power(const FieldSubset& a, unsigned n, SpectrumKind kind,
                        ConvolutionPath path = ConvolutionPath::automatic);

struct EnumerationGuard {
  std::uint64_t max_points = 100'000;
  bool force = false;
};

/// counts[lambda] = #{(x, y) in E^2 : ||x - y|| = lambda}, diagonal included.
/// O(|E|^2 d); throws GuardExceeded above guard.max_points unless forced.
Spectrum distance_spectrum_general(const PointSet& e, EnumerationGuard guard = {});

/// Removes the `diagonal_pairs` (x, x) contributions from counts[0].
Spectrum off_diagonal(const Spectrum& s, const BigCount& diagonal_pairs);

FieldSubset support(const Spectrum& s, bool include_zero = true);

/// X + Y.
FieldSubset sumset(const FieldSubset& x, const FieldSubset& y);

// CSV: first line `p=<p>`, then `lambda,count`, then one row per lambda.
std::string format_spectrum_csv(const Spectrum& s);
Spectrum parse_spectrum_csv(std::string_view text);

}  // namespace ffdist
