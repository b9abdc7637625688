#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace ffdist {

// Exact non-negative counts. Every quantity the toolkit reports as a count
// (spectra, energies, multiplicities) is held in this type.
using BigCount = mpz_class;

inline BigCount big(std::uint64_t v) { return BigCount(static_cast<unsigned long>(v)); }

inline std::string to_decimal(const BigCount& v) { return v.get_str(10); }

BigCount parse_decimal(const std::string& text);

BigCount big_pow(std::uint64_t base, std::uint64_t exponent);

// Natural logarithm; -infinity for zero. Accurate for values far beyond
// the double range.
double log_of(const BigCount& v);

}  // namespace ffdist
