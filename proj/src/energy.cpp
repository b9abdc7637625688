#include "ffdist/energy.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "ffdist/errors.hpp"
#include "ffdist/parallel.hpp"

namespace ffdist {

std::string_view to_string(EnergyKind kind) {
  switch (kind) {
    case EnergyKind::distance:
      return "distance";
    case EnergyKind::dot:
      return "dot";
    case EnergyKind::additive:
      return "additive";
    case EnergyKind::multiplicative:
      return "multiplicative";
  }
  return "?";
}

EnergyKind parse_energy_kind(std::string_view text) {
  for (auto kind : {EnergyKind::distance, EnergyKind::dot, EnergyKind::additive,
                    EnergyKind::multiplicative}) {
    if (text == to_string(kind)) return kind;
  }
  throw UsageError("unknown energy kind '" + std::string(text) +
                   "' (distance|dot|additive|multiplicative)");
}

BigCount energy_from_spectrum(const Spectrum& s) {
  BigCount sum = 0;
  for (const auto& c : s.counts()) mpz_addmul(sum.get_mpz_t(), c.get_mpz_t(), c.get_mpz_t());
  return sum;
}

Spectrum base_spectrum(const FieldSubset& a, EnergyKind kind) {
  switch (kind) {
    case EnergyKind::distance:
      return diff_square_spectrum(a);
    case EnergyKind::additive:
      return sum_spectrum(a);
    case EnergyKind::dot:
    case EnergyKind::multiplicative:
      break;
  }
  return product_spectrum(a);
}

Spectrum folded_spectrum(const FieldSubset& a, unsigned d, EnergyKind kind,
                         ConvolutionPath path) {
  if (d == 0) throw UsageError("energy depth must be at least 1");
  Spectrum base = base_spectrum(a, kind);
  if (kind != EnergyKind::multiplicative) return fold(base, d, path);
  Spectrum acc = base;
  for (unsigned k = 1; k < d; ++k) acc = multiplicative_convolve(acc, base);
  return acc;
}

EnergyValue energy(const FieldSubset& a, unsigned d, EnergyKind kind, ConvolutionPath path) {
  if (d == 0) throw UsageError("energy depth must be at least 1");
  if (a.is_empty()) return {0, kind, d};
  return {energy_from_spectrum(folded_spectrum(a, d, kind, path)), kind, d};
}

EnergyValue distance_energy(const FieldSubset& a, unsigned d) {
  return energy(a, d, EnergyKind::distance);
}
EnergyValue dot_energy(const FieldSubset& a, unsigned d) { return energy(a, d, EnergyKind::dot); }
EnergyValue additive_energy(const FieldSubset& a) { return energy(a, 1, EnergyKind::additive); }
EnergyValue multiplicative_energy(const FieldSubset& a) {
  return energy(a, 1, EnergyKind::multiplicative);
}

bool satisfies_energy_bounds(const EnergyValue& e, const Spectrum& s) {
  BigCount floor_lhs = s.total() * s.total();
  BigCount floor_rhs = big(s.modulus().value()) * e.value;
  return floor_lhs <= floor_rhs && e.value <= s.max_count() * s.total();
}

EnergyValue energy_bruteforce_oracle(const FieldSubset& a, unsigned d, EnergyKind kind,
                                     OracleGuard guard) {
  if (d == 0) throw UsageError("energy depth must be at least 1");
  if (a.is_empty()) return {0, kind, d};
  const std::size_t m = a.size();
  const unsigned width = 4 * d;
  unsigned __int128 tuples = 1;
  for (unsigned k = 0; k < width; ++k) {
    tuples *= m;
    if (!guard.force && tuples > guard.max_tuples) {
      throw GuardExceeded("|A|^(4d) exceeds the brute-force guard of " +
                          std::to_string(guard.max_tuples) + " tuples");
    }
  }
  if (tuples > UINT64_MAX) throw GuardExceeded("|A|^(4d) exceeds 2^64");
  const auto& p = a.modulus();
  const auto elems = a.elements();
  // One side of the defining equation from the 2d entries x_1, y_1, ...
  auto side = [&](const std::uint32_t* x, const std::uint32_t* y) -> std::uint32_t {
    std::uint32_t acc = kind == EnergyKind::multiplicative ? 1 : 0;
    for (unsigned i = 0; i < d; ++i) {
      std::uint32_t u = elems[x[i]], v = elems[y[i]];
      switch (kind) {
        case EnergyKind::distance: {
          std::uint32_t diff = p.sub_raw(u, v);
          acc = p.add_raw(acc, p.mul_raw(diff, diff));
          break;
        }
        case EnergyKind::dot:
          acc = p.add_raw(acc, p.mul_raw(u, v));
          break;
        case EnergyKind::additive:
          acc = p.add_raw(acc, p.add_raw(u, v));
          break;
        case EnergyKind::multiplicative:
          acc = p.mul_raw(acc, p.mul_raw(u, v));
          break;
      }
    }
    return acc;
  };
  const auto total = static_cast<std::uint64_t>(tuples);
  std::uint64_t hits = parallel_reduce(
      static_cast<std::size_t>(total), std::uint64_t{0},
      [&](std::size_t begin, std::size_t end) {
        // digits: a_1..a_d, b_1..b_d, c_1..c_d, e_1..e_d, as indices into A.
        std::vector<std::uint32_t> digit(width);
        std::uint64_t rest = begin;
        for (unsigned k = width; k-- > 0;) {
          digit[k] = static_cast<std::uint32_t>(rest % m);
          rest /= m;
        }
        std::uint64_t local = 0;
        for (std::size_t idx = begin; idx < end; ++idx) {
          const std::uint32_t* t = digit.data();
          if (side(t, t + d) == side(t + 2 * d, t + 3 * d)) ++local;
          for (unsigned k = width; k-- > 0;) {
            if (++digit[k] < m) break;
            digit[k] = 0;
          }
        }
        return local;
      },
      [](std::uint64_t x, std::uint64_t y) { return x + y; });
  return {big(hits), kind, d};
}

std::vector<DyadicLevel> dyadic_levels(const Spectrum& s) {
  std::map<unsigned, std::vector<std::uint32_t>> groups;
  for (std::uint32_t t = 0; t < s.size(); ++t) {
    if (s[t] > 0) {
      auto exponent = static_cast<unsigned>(mpz_sizeinbase(s[t].get_mpz_t(), 2) - 1);
      groups[exponent].push_back(t);
    }
  }
  std::vector<DyadicLevel> levels;
  for (auto& [exponent, members] : groups) {
    levels.push_back({exponent, FieldSubset(s.modulus(), members)});
  }
  return levels;
}

bool dyadic_level_facts_hold(const Spectrum& s, const DyadicLevel& level) {
  BigCount low, high;
  mpz_ui_pow_ui(low.get_mpz_t(), 2, level.exponent);
  high = low * 2;
  BigCount sum = 0, sum_sq = 0;
  for (std::uint32_t t : level.members.elements()) {
    if (s[t] < low || s[t] >= high) return false;
    sum += s[t];
    sum_sq += s[t] * s[t];
  }
  BigCount size = big(level.members.size());
  return low * size <= 2 * sum && low * low * size <= 4 * sum_sq;
}

namespace {

double log_sum_exp(double x, double y) {
  if (std::isinf(x) && x < 0) return y;
  if (std::isinf(y) && y < 0) return x;
  double hi = std::max(x, y);
  return hi + std::log(std::exp(x - hi) + std::exp(y - hi));
}

double ratio_from_logs(double numerator, double denominator) {
  if (std::isinf(denominator) && denominator < 0) return std::numeric_limits<double>::infinity();
  return std::exp(numerator - denominator);
}

}  // namespace

RecursionDiagnostic recursion_diagnostic(const FieldSubset& a, unsigned d, EnergyKind kind) {
  if (d < 2) throw UsageError("recursion diagnostic needs d >= 2");
  if (kind != EnergyKind::distance && kind != EnergyKind::dot) {
    throw UsageError("recursion diagnostic covers the distance and dot energies only");
  }
  if (a.is_empty()) throw UsageError("recursion diagnostic of an empty set");
  RecursionDiagnostic r{};
  r.kind = kind;
  r.p = a.modulus().value();
  r.set_size = a.size();
  r.depth = d;
  r.energy = energy(a, d, kind).value;
  r.previous_energy = energy(a, d - 1, kind).value;

  const double n = static_cast<double>(a.size());
  const double ln_n = std::log(n);
  const double dd = d;
  const double ln_p = std::log(static_cast<double>(r.p));
  const double log_energy = log_of(r.energy);
  const double neg_inf = -std::numeric_limits<double>::infinity();

  const double log_main = 4 * dd * ln_n - ln_p;
  const double log_recursive = (2 * dd + 1) * ln_n + 0.5 * log_of(r.previous_energy);
  const double log_bracket = log_sum_exp(log_main, log_recursive);
  const double log_log_factor = ln_n > 0 ? 2 * std::log(dd) + 2 * std::log(ln_n) : neg_inf;
  const double log_lemma = log_log_factor + log_bracket;
  const double log_cor_first = log_log_factor + log_main;
  const double log_cor_second = ln_n > 0 ? 4 * std::log(dd) + 4 * std::log(ln_n) +
                                               (4 * dd - 2 + std::ldexp(1.0, 1 - static_cast<int>(d))) * ln_n
                                         : neg_inf;
  const double log_corollary = log_sum_exp(log_cor_first, log_cor_second);

  r.log_factor = std::exp(log_log_factor);
  r.main_term = std::exp(log_main);
  r.recursive_term = std::exp(log_recursive);
  r.lemma_rhs = std::exp(log_lemma);
  r.corollary_rhs = std::exp(log_corollary);
  r.ratio_to_main_term = ratio_from_logs(log_energy, log_main);
  r.ratio_to_bracket = ratio_from_logs(log_energy, log_bracket);
  r.lemma_ratio = ratio_from_logs(log_energy, log_lemma);
  r.corollary_ratio = ratio_from_logs(log_energy, log_corollary);
  r.corollary_hypothesis = n >= dd * ln_n * std::sqrt(static_cast<double>(r.p));
  return r;
}

}  // namespace ffdist
