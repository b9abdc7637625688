#include "ffdist/bigint.hpp"

#include <cmath>
#include <limits>

#include "ffdist/errors.hpp"

namespace ffdist {

BigCount parse_decimal(const std::string& text) {
  BigCount v;
  if (text.empty() || v.set_str(text, 10) != 0 || v < 0) {
    throw UsageError("not a non-negative decimal integer: '" + text + "'");
  }
  return v;
}

BigCount big_pow(std::uint64_t base, std::uint64_t exponent) {
  BigCount r;
  mpz_pow_ui(r.get_mpz_t(), big(base).get_mpz_t(), static_cast<unsigned long>(exponent));
  return r;
}

double log_of(const BigCount& v) {
  if (v <= 0) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  double mantissa = mpz_get_d_2exp(&exponent, v.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

}  // namespace ffdist
