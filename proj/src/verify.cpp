#include "ffdist/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "ffdist/errors.hpp"
#include "ffdist/parallel.hpp"
#include "ffdist/rng.hpp"

namespace ffdist {

CoverageReport coverage_check(const Spectrum& counts, std::string descriptor) {
  const auto& p = counts.modulus();
  std::vector<std::uint32_t> missing;
  for (std::uint32_t t = 0; t < counts.size(); ++t) {
    if (counts[t] == 0) missing.push_back(t);
  }
  bool covered_nonzero = missing.empty() || (missing.size() == 1 && missing[0] == 0);
  double expected = std::exp(log_of(counts.total()) - std::log(static_cast<double>(p.value())));
  double deviation = std::numeric_limits<double>::infinity();
  if (counts.total() > 0) {
    BigCount worst = 0;
    for (const auto& c : counts.counts()) {
      BigCount diff = big(p.value()) * c - counts.total();
      if (abs(diff) > worst) worst = abs(diff);
    }
    deviation = mpq_class(worst, counts.total()).get_d();
  }
  return {std::move(descriptor), counts, missing.empty(), covered_nonzero,
          FieldSubset(p, missing), expected, deviation};
}

bool deviation_within(const Spectrum& counts, std::uint64_t num, std::uint64_t den) {
  const BigCount& total = counts.total();
  const BigCount limit = big(num) * total;
  for (const auto& c : counts.counts()) {
    BigCount diff = big(counts.modulus().value()) * c - total;
    if (abs(diff) * big(den) > limit) return false;
  }
  return true;
}

IosevichRudnevReport iosevich_rudnev_check(const PointSet& e, EnumerationGuard guard) {
  const std::uint32_t p = e.modulus().value();
  const unsigned d = e.dim();
  // |E| >= 4 p^{(d+1)/2}  <=>  |E|^2 >= 16 p^{d+1}
  const BigCount size = big(e.size());
  const bool above = size * size >= 16 * big_pow(p, d + 1);
  const double threshold = 4.0 * std::pow(static_cast<double>(p), (d + 1) / 2.0);
  auto coverage = coverage_check(distance_spectrum_general(e, guard),
                                 "point set |E|=" + std::to_string(e.size()) + " in F_" +
                                     std::to_string(p) + "^" + std::to_string(d));
  bool holds = !above || coverage.covered;
  return {e.size(), d, above, threshold, std::move(coverage), holds};
}

bool delta_additivity_check(const FieldSubset& a, unsigned d) {
  if (d == 0) throw UsageError("additivity check needs d >= 1");
  FieldSubset single = support(distance_spectrum_power(a, d));
  FieldSubset doubled = support(distance_spectrum_power(a, 2 * d));
  return doubled == sumset(single, single);
}

bool cauchy_davenport_check(const FieldSubset& x, const FieldSubset& y) {
  if (x.is_empty() || y.is_empty()) throw UsageError("Cauchy-Davenport needs nonempty sets");
  std::size_t bound = std::min<std::size_t>(x.modulus().value(), x.size() + y.size() - 1);
  return sumset(x, y).size() >= bound;
}

std::string_view to_string(DecompositionStrategy s) {
  return s == DecompositionStrategy::exhaustive ? "exhaustive" : "greedy";
}

DecompositionStrategy parse_decomposition_strategy(std::string_view text) {
  if (text == "exhaustive") return DecompositionStrategy::exhaustive;
  if (text == "greedy") return DecompositionStrategy::greedy;
  throw UsageError("unknown strategy '" + std::string(text) + "' (exhaustive|greedy)");
}

namespace {

// E^+ and E^x of small subsets with a reusable histogram.
class QuadrupleEnergy {
 public:
  explicit QuadrupleEnergy(const PrimeModulus& p) : p_(p), histogram_(p.value(), 0) {}

  std::uint64_t additive(const std::vector<std::uint32_t>& set) {
    return run(set, [&](std::uint32_t x, std::uint32_t y) { return p_.add_raw(x, y); });
  }
  std::uint64_t multiplicative(const std::vector<std::uint32_t>& set) {
    return run(set, [&](std::uint32_t x, std::uint32_t y) { return p_.mul_raw(x, y); });
  }

 private:
  template <class Op>
  std::uint64_t run(const std::vector<std::uint32_t>& set, Op op) {
    touched_.clear();
    for (std::uint32_t x : set) {
      for (std::uint32_t y : set) {
        std::uint32_t v = op(x, y);
        if (histogram_[v]++ == 0) touched_.push_back(v);
      }
    }
    std::uint64_t sum = 0;
    for (std::uint32_t v : touched_) {
      sum += histogram_[v] * histogram_[v];
      histogram_[v] = 0;
    }
    return sum;
  }

  PrimeModulus p_;
  std::vector<std::uint64_t> histogram_;
  std::vector<std::uint32_t> touched_;
};

struct Candidate {
  std::uint64_t max_energy = UINT64_MAX;
  std::vector<std::uint32_t> b;  // sorted

  bool better_than(const Candidate& other) const {
    if (max_energy != other.max_energy) return max_energy < other.max_energy;
    return std::lexicographical_compare(b.begin(), b.end(), other.b.begin(), other.b.end());
  }
};

Decomposition finish(const FieldSubset& a, const std::vector<std::uint32_t>& b_values,
                     DecompositionStrategy strategy) {
  FieldSubset b(a.modulus(), b_values);
  std::vector<std::uint32_t> c_values;
  for (std::uint32_t x : a.elements()) {
    if (!b.contains(x)) c_values.push_back(x);
  }
  FieldSubset c(a.modulus(), c_values);
  return {b, c, energy(b, 1, EnergyKind::additive), energy(c, 1, EnergyKind::multiplicative),
          strategy};
}

}  // namespace

Decomposition balog_wooley_decompose(const FieldSubset& a, DecompositionStrategy strategy) {
  const auto elems = a.elements();
  const std::size_t n = elems.size();
  if (strategy == DecompositionStrategy::exhaustive) {
    if (n > kExhaustiveLimit) {
      throw GuardExceeded("exhaustive decomposition limited to |A| <= " +
                          std::to_string(kExhaustiveLimit));
    }
    const std::uint64_t masks = std::uint64_t{1} << n;
    Candidate best = parallel_reduce(
        static_cast<std::size_t>(masks), Candidate{},
        [&](std::size_t begin, std::size_t end) {
          QuadrupleEnergy energies(a.modulus());
          Candidate local;
          Candidate trial;
          std::vector<std::uint32_t> c;
          for (std::size_t mask = begin; mask < end; ++mask) {
            trial.b.clear();
            c.clear();
            for (std::size_t i = 0; i < n; ++i) {
              ((mask >> i) & 1u ? trial.b : c).push_back(elems[i]);
            }
            trial.max_energy = std::max(energies.additive(trial.b), energies.multiplicative(c));
            if (trial.better_than(local)) local = trial;
          }
          return local;
        },
        [](Candidate x, Candidate y) { return y.better_than(x) ? y : x; });
    return finish(a, best.b, strategy);
  }

  QuadrupleEnergy energies(a.modulus());
  std::vector<bool> in_b(n, true);
  auto score = [&](const std::vector<bool>& side) {
    std::vector<std::uint32_t> b, c;
    for (std::size_t i = 0; i < n; ++i) (side[i] ? b : c).push_back(elems[i]);
    return std::max(energies.additive(b), energies.multiplicative(c));
  };
  std::uint64_t current = score(in_b);
  while (true) {
    std::uint64_t best_value = current;
    std::size_t best_index = n;
    for (std::size_t i = 0; i < n; ++i) {
      in_b[i] = !in_b[i];
      std::uint64_t value = score(in_b);
      in_b[i] = !in_b[i];
      if (value < best_value) {
        best_value = value;
        best_index = i;
      }
    }
    if (best_index == n) break;
    in_b[best_index] = !in_b[best_index];
    current = best_value;
  }
  std::vector<std::uint32_t> b;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_b[i]) b.push_back(elems[i]);
  }
  return finish(a, b, strategy);
}

TheoremLastReport theorem_last_report(const FieldSubset& a, unsigned d,
                                      DecompositionStrategy strategy) {
  if (d < 2) throw UsageError("theorem report needs d >= 2");
  if (a.is_empty()) throw UsageError("theorem report of an empty set");
  TheoremLastReport r{balog_wooley_decompose(a, strategy), d, 0, 0, 0, 0, 0, 0, false, false};
  r.distance_energy_b = energy(r.decomposition.b, d, EnergyKind::distance).value;
  r.dot_energy_c = energy(r.decomposition.c, d, EnergyKind::dot).value;

  const double ln_n = std::log(static_cast<double>(a.size()));
  const double ln_p = std::log(static_cast<double>(a.modulus().value()));
  const double dd = d;
  const double exponent = 4 * dd - 2 + 1.0 / std::ldexp(5.0, static_cast<int>(d) - 3);
  const double log_bound = ln_n > 0 ? 4 * std::log(dd) + 4 * std::log(ln_n) + exponent * ln_n
                                    : -std::numeric_limits<double>::infinity();
  const BigCount& worst = std::max(r.distance_energy_b, r.dot_energy_c);
  r.bound = std::exp(log_bound);
  r.ratio = std::isinf(log_bound) ? std::numeric_limits<double>::infinity()
                                  : std::exp(log_of(worst) - log_bound);
  r.decomposition_bound = std::exp(2.8 * ln_n);
  r.decomposition_ratio = std::exp(log_of(r.decomposition.max_energy()) - 2.8 * ln_n);
  r.size_hypothesis = ln_n <= (0.5 + 1.0 / (std::ldexp(5.0, static_cast<int>(d) - 1) - 2)) * ln_p;
  r.decomposition_hypothesis = ln_n <= 0.625 * ln_p;
  return r;
}

ScanTable threshold_scan(const PrimeModulus& p, unsigned n, SpectrumKind kind,
                         std::uint64_t trials, std::uint64_t seed) {
  if (n == 0) throw UsageError("scan dimension must be at least 1");
  if (trials == 0) throw UsageError("scan needs at least one trial");
  struct Cell {
    bool covered = false;
    bool covered_nonzero = false;
    BigCount min_count;
  };
  const std::uint64_t sizes = p.value();
  std::vector<Cell> cells(static_cast<std::size_t>(sizes * trials));
  parallel_for(cells.size(), [&](std::size_t idx) {
    std::uint64_t m = idx / trials + 1;
    std::uint64_t trial = idx % trials;
    FieldSubset a = random_subset(p, m, derive_seed(seed, {m, trial}));
    CoverageReport report = coverage_check(spectrum_power(a, n, kind));
    Cell& cell = cells[idx];
    cell.covered = report.covered;
    cell.covered_nonzero = report.covered_nonzero;
    cell.min_count = *std::min_element(report.counts.counts().begin(), report.counts.counts().end());
  });
  ScanTable table{p.value(), n, kind, trials, seed, {}, std::nullopt};
  for (std::uint64_t m = 1; m <= sizes; ++m) {
    ScanRow row{m, trials, 0, 0, 0};
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
      const Cell& cell = cells[static_cast<std::size_t>((m - 1) * trials + trial)];
      row.covered_trials += cell.covered;
      row.covered_nonzero_trials += cell.covered_nonzero;
      if (trial == 0 || cell.min_count < row.min_count) row.min_count = cell.min_count;
    }
    if (!table.min_full_coverage && row.covered_trials == trials) table.min_full_coverage = m;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_scan_csv(const ScanTable& table) {
  std::ostringstream out;
  const bool dot = table.kind == SpectrumKind::dot;
  out << "m,trials,covered_fraction,min_count" << (dot ? ",covered_nonzero_fraction" : "") << '\n';
  char buffer[32];
  for (const auto& row : table.rows) {
    std::snprintf(buffer, sizeof buffer, "%.6f", row.covered_fraction());
    out << row.m << ',' << row.trials << ',' << buffer << ',' << to_decimal(row.min_count);
    if (dot) {
      std::snprintf(buffer, sizeof buffer, "%.6f",
                    static_cast<double>(row.covered_nonzero_trials) / static_cast<double>(row.trials));
      out << ',' << buffer;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace ffdist
