#include "ffdist/prime_field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ffdist {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exponent, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exponent > 0) {
    if (exponent & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exponent >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are a deterministic witness set below 3.3e24.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeModulus::PrimeModulus(std::uint64_t p) : p_(0) {
  if (p < 3 || p >= kLimit || !is_prime(p)) {
    throw std::invalid_argument("modulus must be an odd prime below 2^31, got " +
                                std::to_string(p));
  }
  p_ = static_cast<std::uint32_t>(p);
}

FieldElement PrimeModulus::element(std::int64_t x) const {
  std::int64_t r = x % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return {static_cast<std::uint32_t>(r)};
}

FieldElement PrimeModulus::add(FieldElement a, FieldElement b) const {
  return {add_raw(a.value, b.value)};
}

FieldElement PrimeModulus::sub(FieldElement a, FieldElement b) const {
  return {sub_raw(a.value, b.value)};
}

FieldElement PrimeModulus::mul(FieldElement a, FieldElement b) const {
  return {mul_raw(a.value, b.value)};
}

FieldElement PrimeModulus::neg(FieldElement a) const {
  return {a.value == 0 ? 0 : p_ - a.value};
}

FieldElement PrimeModulus::pow(FieldElement a, std::uint64_t exponent) const {
  return {static_cast<std::uint32_t>(pow_mod(a.value, exponent, p_))};
}

FieldElement PrimeModulus::inv(FieldElement a) const {
  if (a.value == 0) throw std::domain_error("inverse of zero in F_" + std::to_string(p_));
  return pow(a, p_ - 2);
}

bool is_square(const PrimeModulus& p, FieldElement t) {
  if (t.value == 0) return true;
  return p.pow(t, (p.value() - 1) / 2).value == 1;
}

std::optional<FieldElement> sqrt_of_minus_one(const PrimeModulus& p) {
  if (p.value() % 4 != 1) return std::nullopt;
  std::uint32_t g = 2;
  while (is_square(p, FieldElement{g})) ++g;
  return p.pow(FieldElement{g}, (p.value() - 1) / 4);
}

std::complex<double> additive_character(const PrimeModulus& p, FieldElement x) {
  double angle = 2.0 * std::numbers::pi * static_cast<double>(x.value) /
                 static_cast<double>(p.value());
  return std::polar(1.0, angle);
}

}  // namespace ffdist
