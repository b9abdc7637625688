#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <optional>

namespace ffdist {

/// A canonical residue in [0, p). Only PrimeModulus produces these, so the
/// reduction invariant holds for every value in circulation.
struct FieldElement {
  std::uint32_t value = 0;

  friend auto operator<=>(const FieldElement&, const FieldElement&) = default;
};

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exponent, std::uint64_t m);

/// An odd prime 3 <= p < 2^31. Products of two residues fit in 64 bits, so
/// all arithmetic is plain integer arithmetic.
class PrimeModulus {
 public:
  static constexpr std::uint64_t kLimit = std::uint64_t{1} << 31;

  /// Throws std::invalid_argument unless p is an odd prime below 2^31.
  explicit PrimeModulus(std::uint64_t p);

  std::uint32_t value() const { return p_; }

  FieldElement element(std::int64_t x) const;
  FieldElement zero() const { return {0}; }
  FieldElement one() const { return {1}; }

  FieldElement add(FieldElement a, FieldElement b) const;
  FieldElement sub(FieldElement a, FieldElement b) const;
  FieldElement mul(FieldElement a, FieldElement b) const;
  FieldElement neg(FieldElement a) const;
  FieldElement square(FieldElement a) const { return mul(a, a); }
  FieldElement pow(FieldElement a, std::uint64_t exponent) const;
  /// Throws std::domain_error for a = 0.
  FieldElement inv(FieldElement a) const;

  // Raw-residue forms for hot enumeration loops; inputs must be canonical.
  std::uint32_t add_raw(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t s = a + b;  // < 2^32 because a, b < 2^31
    return s >= p_ ? s - p_ : s;
  }
  std::uint32_t sub_raw(std::uint32_t a, std::uint32_t b) const {
    return a >= b ? a - b : a + (p_ - b);
  }
  std::uint32_t mul_raw(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(std::uint64_t{a} * b % p_);
  }

  friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

 private:
  std::uint32_t p_;
};

/// Euler's criterion; zero counts as a square.
bool is_square(const PrimeModulus& p, FieldElement t);

/// Some i with i^2 = -1 when p = 1 (mod 4), built as g^((p-1)/4) for the
/// least non-residue g. Empty when p = 3 (mod 4).
std::optional<FieldElement> sqrt_of_minus_one(const PrimeModulus& p);

/// e^(2 pi i x / p). Floating point; used only to exercise the
/// orthogonality relations, never to produce a count.
std::complex<double> additive_character(const PrimeModulus& p, FieldElement x);

}  // namespace ffdist
