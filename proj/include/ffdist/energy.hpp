#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "ffdist/bigint.hpp"
#include "ffdist/sets.hpp"
#include "ffdist/spectrum.hpp"

namespace ffdist {

// distance:       E_d((A-A)^2), equal d-fold sums of squared differences
// dot:            E_d(A.A), equal d-fold sums of products
// additive:       equal d-fold sums of pair sums; d = 1 is E^+(A)
// multiplicative: equal d-fold products of pair products; d = 1 is E^x(A)
enum class EnergyKind { distance, dot, additive, multiplicative };

std::string_view to_string(EnergyKind kind);
EnergyKind parse_energy_kind(std::string_view text);

struct EnergyValue {
  BigCount value;
  EnergyKind kind = EnergyKind::distance;
  unsigned depth = 1;
};

/// sum_t S[t]^2.
BigCount energy_from_spectrum(const Spectrum& s);

/// The pair-count function whose d-fold convolution defines the energy.
Spectrum base_spectrum(const FieldSubset& a, EnergyKind kind);

/// The d-fold spectrum of the given kind (folded additively, or under
/// multiplication for the multiplicative kind).
Spectrum folded_spectrum(const FieldSubset& a, unsigned d, EnergyKind kind,
                         ConvolutionPath path = ConvolutionPath::automatic);

/// Energy via the spectrum route. The empty set has energy 0.
EnergyValue energy(const FieldSubset& a, unsigned d, EnergyKind kind,
                   ConvolutionPath path = ConvolutionPath::automatic);

EnergyValue distance_energy(const FieldSubset& a, unsigned d);
EnergyValue dot_energy(const FieldSubset& a, unsigned d);
EnergyValue additive_energy(const FieldSubset& a);
EnergyValue multiplicative_energy(const FieldSubset& a);

/// total^2 <= p * E  and  E <= max_count * total, checked exactly against
/// the spectrum the energy was computed from.
bool satisfies_energy_bounds(const EnergyValue& e, const Spectrum& s);

struct OracleGuard {
  std::uint64_t max_tuples = 1'000'000'000;
  bool force = false;
};

/// Direct enumeration of all 4d-tuples of A. Independent of every spectrum
/// routine; throws GuardExceeded when |A|^(4d) > guard.max_tuples.
EnergyValue energy_bruteforce_oracle(const FieldSubset& a, unsigned d, EnergyKind kind,
                                     OracleGuard guard = {});

struct DyadicLevel {
  unsigned exponent;    // i: members have 2^i <= S[t] < 2^(i+1)
  FieldSubset members;  // P_i
};

/// Nonempty levels in increasing exponent; together they partition supp(S).
std::vector<DyadicLevel> dyadic_levels(const Spectrum& s);

/// 2^i |P_i| <= 2 sum_{P_i} S  and  4^i |P_i| <= 4 sum_{P_i} S^2, exactly.
bool dyadic_level_facts_hold(const Spectrum& s, const DyadicLevel& level);

// Report-only comparison of E_d against the recursive upper bounds. The
// bounds carry unspecified constants, so only the ratios are reported.
struct RecursionDiagnostic {
  EnergyKind kind;
  std::uint32_t p;
  std::uint64_t set_size;
  unsigned depth;
  BigCount energy;           // E_d
  BigCount previous_energy;  // E_{d-1}
  double log_factor;         // d^2 (ln|A|)^2
  double main_term;          // |A|^{4d} / p
  double recursive_term;     // |A|^{2d+1} sqrt(E_{d-1})
  double lemma_rhs;          // log_factor * (main_term + recursive_term)
  double corollary_rhs;      // d^2 ln^2 |A|^{4d}/p + d^4 ln^4 |A|^{4d-2+2^{1-d}}
  double ratio_to_main_term;
  double ratio_to_bracket;   // E_d / (main_term + recursive_term)
  double lemma_ratio;        // infinite when ln|A| = 0
  double corollary_ratio;
  bool corollary_hypothesis;  // |A| >= d ln|A| sqrt(p), constant dropped
};

/// Requires d >= 2 and kind in {distance, dot}.
RecursionDiagnostic recursion_diagnostic(const FieldSubset& a, unsigned d,
                                         EnergyKind kind = EnergyKind::distance);

}  // namespace ffdist
