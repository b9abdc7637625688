#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffdist/bigint.hpp"
#include "ffdist/energy.hpp"
#include "ffdist/sets.hpp"
#include "ffdist/spectrum.hpp"

namespace ffdist {

struct CoverageReport {
  std::string descriptor;
  Spectrum counts;
  bool covered;          // every lambda has a positive count
  bool covered_nonzero;  // every lambda != 0 does
  FieldSubset missing;
  double expected_count;          // total / p
  double max_relative_deviation;  // max_lambda |count p / total - 1|
};

CoverageReport coverage_check(const Spectrum& counts, std::string descriptor = {});

/// max_lambda |count p / total - 1| <= num / den, evaluated exactly.
bool deviation_within(const Spectrum& counts, std::uint64_t num, std::uint64_t den);

struct IosevichRudnevReport {
  std::uint64_t size;
  unsigned dim;
  bool above_threshold;  // |E| >= 4 p^{(d+1)/2}
  double threshold;
  CoverageReport coverage;
  bool holds;  // false only when above threshold and not covered
};

IosevichRudnevReport iosevich_rudnev_check(const PointSet& e, EnumerationGuard guard = {});

/// supp(N_{A^{2d}}) == supp(N_{A^d}) + supp(N_{A^d}).
bool delta_additivity_check(const FieldSubset& a, unsigned d);

/// |X + Y| >= min(p, |X| + |Y| - 1); X and Y nonempty.
bool cauchy_davenport_check(const FieldSubset& x, const FieldSubset& y);

enum class DecompositionStrategy { exhaustive, greedy };

std::string_view to_string(DecompositionStrategy s);
DecompositionStrategy parse_decomposition_strategy(std::string_view text);

struct Decomposition {
  FieldSubset b;
  FieldSubset c;
  EnergyValue eplus;   // E^+(B)
  EnergyValue etimes;  // E^x(C)
  DecompositionStrategy strategy;

  const BigCount& max_energy() const { return eplus.value < etimes.value ? etimes.value : eplus.value; }
};

inline constexpr std::size_t kExhaustiveLimit = 20;

/// Partition A = B u C. Exhaustive minimizes max(E^+(B), E^x(C)) with ties
/// broken by the lexicographically least sorted B; greedy starts from
/// B = A and applies the best single-element move while it strictly
/// lowers the maximum.
Decomposition balog_wooley_decompose(const FieldSubset& a, DecompositionStrategy strategy);

struct TheoremLastReport {
  Decomposition decomposition;
  unsigned depth;
  BigCount distance_energy_b;  // E_d((B-B)^2)
  BigCount dot_energy_c;       // E_d(C.C)
  double bound;                // d^4 (ln|A|)^4 |A|^{4d-2+1/(5 2^{d-3})}
  double ratio;                // max energy / bound
  double decomposition_bound;  // |A|^{14/5}
  double decomposition_ratio;  // max(E^+, E^x) / |A|^{14/5}
  bool size_hypothesis;        // |A| <= p^{1/2 + 1/(5 2^{d-1} - 2)}
  bool decomposition_hypothesis;  // |A| <= p^{5/8}
};

/// d >= 2.
TheoremLastReport theorem_last_report(const FieldSubset& a, unsigned d,
                                      DecompositionStrategy strategy);

struct ScanRow {
  std::uint64_t m;
  std::uint64_t trials;
  std::uint64_t covered_trials;
  std::uint64_t covered_nonzero_trials;
  BigCount min_count;  // min over trials and lambda
  double covered_fraction() const {
    return trials == 0 ? 0.0 : static_cast<double>(covered_trials) / static_cast<double>(trials);
  }
};

struct ScanTable {
  std::uint32_t p;
  unsigned n;
  SpectrumKind kind;
  std::uint64_t trials;
  std::uint64_t seed;
  std::vector<ScanRow> rows;
  std::optional<std::uint64_t> min_full_coverage;  // least m with fraction 1
};

/// For m = 1..p draws `trials` random m-subsets, each from its own stream
/// derive_seed(seed, {m, trial}), and records full-coverage frequencies of
/// the n-fold spectrum.
ScanTable threshold_scan(const PrimeModulus& p, unsigned n, SpectrumKind kind,
                         std::uint64_t trials, std::uint64_t seed);

/// `m,trials,covered_fraction,min_count`, plus `covered_nonzero_fraction`
/// for the dot kind.
std::string format_scan_csv(const ScanTable& table);

}  // namespace ffdist
