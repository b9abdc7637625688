#pragma once

#include <cstdint>
#include <vector>

#include "ffdist/sets.hpp"
#include "ffdist/spectrum.hpp"

namespace testing_support {

inline std::vector<std::uint64_t> values_of(const ffdist::FieldSubset& a) {
  return {a.elements().begin(), a.elements().end()};
}

inline std::vector<std::uint64_t> counts_of(const ffdist::Spectrum& s) {
  std::vector<std::uint64_t> out;
  for (const auto& c : s.counts()) out.push_back(c.get_ui());
  return out;
}

inline ffdist::Spectrum spectrum_of(std::uint32_t p, const std::vector<unsigned long>& counts) {
  std::vector<ffdist::BigCount> values;
  for (auto c : counts) values.emplace_back(c);
  return ffdist::Spectrum(ffdist::PrimeModulus(p), std::move(values));
}

}  // namespace testing_support
