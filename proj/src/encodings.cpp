#include "ffdist/encodings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ffdist/errors.hpp"

namespace ffdist {

WeightedPointSet::WeightedPointSet(const PrimeModulus& p, unsigned dim)
    : p_(p), dim_(dim), total_(0) {
  if (dim != 2 && dim != 3) throw UsageError("weighted point sets live in dimension 2 or 3");
}

void WeightedPointSet::add(std::span<const std::uint32_t> coords, const BigCount& multiplicity) {
  if (coords.size() != dim_) throw UsageError("point has the wrong number of coordinates");
  if (multiplicity < 0) throw UsageError("negative multiplicity");
  if (multiplicity == 0) return;
  Coords key(coords.begin(), coords.end());
  for (auto& c : key) c %= p_.value();
  entries_[std::move(key)] += multiplicity;
  total_ += multiplicity;
}

BigCount WeightedPointSet::second_moment() const {
  BigCount sum = 0;
  for (const auto& [point, m] : entries_) mpz_addmul(sum.get_mpz_t(), m.get_mpz_t(), m.get_mpz_t());
  return sum;
}

namespace {

// F grouped by its leading dim-1 coordinates; the last coordinate enters the
// defining relation additively and is looked up by value.
struct Group {
  WeightedPointSet::Coords lead;
  std::vector<std::pair<std::uint32_t, const BigCount*>> tail;  // sorted by value
};

std::vector<Group> group_by_lead(const WeightedPointSet& f) {
  std::vector<Group> groups;
  // std::map order keeps equal leads adjacent and tails ascending.
  for (const auto& [coords, m] : f.entries()) {
    WeightedPointSet::Coords lead(coords.begin(), coords.end() - 1);
    if (groups.empty() || groups.back().lead != lead) groups.push_back({std::move(lead), {}});
    groups.back().tail.emplace_back(coords.back(), &m);
  }
  return groups;
}

void require_compatible(const WeightedPointSet& e, const WeightedPointSet& f, unsigned dim) {
  if (e.dim() != dim || f.dim() != dim) {
    throw UsageError("pair count in dimension " + std::to_string(dim) +
                     " applied to multisets of dimension " + std::to_string(e.dim()) + " and " +
                     std::to_string(f.dim()));
  }
  if (!(e.modulus() == f.modulus())) throw UsageError("multisets over different primes");
}

// e_last + sum_{k < dim-1} e_k f_k
std::uint32_t partial_relation(const PrimeModulus& p, const WeightedPointSet::Coords& e,
                               const WeightedPointSet::Coords& lead) {
  std::uint32_t acc = e.back();
  for (std::size_t k = 0; k < lead.size(); ++k) acc = p.add_raw(acc, p.mul_raw(e[k], lead[k]));
  return acc;
}

BigCount pair_count_lookup(const WeightedPointSet& e, const WeightedPointSet& f,
                           FieldElement lambda) {
  const auto& p = e.modulus();
  const auto groups = group_by_lead(f);
  BigCount total = 0;
  for (const auto& [coords, m_e] : e.entries()) {
    for (const auto& g : groups) {
      std::uint32_t want = p.sub_raw(lambda.value % p.value(), partial_relation(p, coords, g.lead));
      auto it = std::lower_bound(g.tail.begin(), g.tail.end(), want,
                                 [](const auto& entry, std::uint32_t key) { return entry.first < key; });
      if (it != g.tail.end() && it->first == want) {
        mpz_addmul(total.get_mpz_t(), m_e.get_mpz_t(), it->second->get_mpz_t());
      }
    }
  }
  return total;
}

}  // namespace

BigCount pair_count_dim2(const WeightedPointSet& e, const WeightedPointSet& f,
                         FieldElement lambda) {
  require_compatible(e, f, 2);
  return pair_count_lookup(e, f, lambda);
}

BigCount pair_count_dim3(const WeightedPointSet& e, const WeightedPointSet& f,
                         FieldElement lambda) {
  require_compatible(e, f, 3);
  return pair_count_lookup(e, f, lambda);
}

Spectrum pair_count_spectrum(const WeightedPointSet& e, const WeightedPointSet& f) {
  require_compatible(e, f, e.dim());
  const auto& p = e.modulus();
  const auto groups = group_by_lead(f);
  std::vector<BigCount> counts(p.value());
  BigCount product;
  for (const auto& [coords, m_e] : e.entries()) {
    for (const auto& g : groups) {
      std::uint32_t shift = partial_relation(p, coords, g.lead);
      for (const auto& [value, m_f] : g.tail) {
        mpz_addmul(counts[p.add_raw(shift, value)].get_mpz_t(), m_e.get_mpz_t(), m_f->get_mpz_t());
      }
    }
  }
  Spectrum s(p, std::move(counts));
  s.require_total(e.total() * f.total(), "pair_count_spectrum");
  return s;
}

namespace {

DeviationReport deviation_check_impl(const WeightedPointSet& e, const WeightedPointSet& f,
                                     unsigned dim) {
  require_compatible(e, f, dim);
  const auto& p = e.modulus();
  DeviationReport report{};
  report.dim = dim;
  report.p = p.value();
  report.size_e = e.total();
  report.size_f = f.total();
  report.moment_e = e.second_moment();
  report.moment_f = f.second_moment();
  report.holds = true;
  report.worst_ratio = 0.0;

  const Spectrum counts = pair_count_spectrum(e, f);
  const BigCount expected_times_p = report.size_e * report.size_f;
  // Squared bound scaled by p^2: p^3 (dimension 2) or p^4 (dimension 3).
  const BigCount rhs = big_pow(p.value(), dim == 2 ? 3 : 4) * report.moment_e * report.moment_f;
  const double log_rhs = log_of(rhs);
  for (std::uint32_t lambda = 0; lambda < p.value(); ++lambda) {
    DeviationRow row{lambda, counts[lambda], 0, rhs, true};
    BigCount diff = big(p.value()) * row.count - expected_times_p;
    row.lhs = diff * diff;
    row.holds = row.lhs <= row.rhs;
    report.holds = report.holds && row.holds;
    double ratio = row.lhs == 0 ? 0.0
                   : rhs == 0   ? std::numeric_limits<double>::infinity()
                                : std::exp(0.5 * (log_of(row.lhs) - log_rhs));
    report.worst_ratio = std::max(report.worst_ratio, ratio);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace

DeviationReport deviation_check_dim2(const WeightedPointSet& e, const WeightedPointSet& f) {
  return deviation_check_impl(e, f, 2);
}

DeviationReport deviation_check_dim3(const WeightedPointSet& e, const WeightedPointSet& f) {
  return deviation_check_impl(e, f, 3);
}

DeviationReport deviation_check(const WeightedPointSet& e, const WeightedPointSet& f) {
  return deviation_check_impl(e, f, e.dim());
}

namespace {

Spectrum depth_spectrum(const FieldSubset& a, unsigned depth, bool products) {
  if (depth == 0) return Spectrum::point_mass(a.modulus(), 0);
  return fold(products ? product_spectrum(a) : diff_square_spectrum(a), depth);
}

void require_encodable(const FieldSubset& a, unsigned d) {
  if (d == 0) throw UsageError("encoding depth must be at least 1");
  if (a.is_empty()) throw UsageError("encoding of an empty set");
}

}  // namespace

EncodedPair encode_distance_odd(const FieldSubset& a, unsigned d) {
  require_encodable(a, d);
  const auto& p = a.modulus();
  const Spectrum s = depth_spectrum(a, d, false);
  EncodedPair out{WeightedPointSet(p, 2), WeightedPointSet(p, 2)};
  for (std::uint32_t x : a.elements()) {
    std::uint32_t x_sq = p.mul_raw(x, x);
    for (std::uint32_t t = 0; t < p.value(); ++t) {
      if (s[t] == 0) continue;
      std::uint32_t second = p.add_raw(x_sq, t);
      out.first.add({p.add_raw(x, x), second}, s[t]);
      out.second.add({p.neg(FieldElement{x}).value, second}, s[t]);
    }
  }
  return out;
}

EncodedPair encode_distance_even(const FieldSubset& a, unsigned d) {
  require_encodable(a, d);
  const auto& p = a.modulus();
  const Spectrum s = depth_spectrum(a, d - 1, false);
  EncodedPair out{WeightedPointSet(p, 3), WeightedPointSet(p, 3)};
  for (std::uint32_t x1 : a.elements()) {
    for (std::uint32_t x2 : a.elements()) {
      std::uint32_t norm = p.add_raw(p.mul_raw(x1, x1), p.mul_raw(x2, x2));
      for (std::uint32_t t = 0; t < p.value(); ++t) {
        if (s[t] == 0) continue;
        std::uint32_t third = p.add_raw(norm, t);
        out.first.add({p.add_raw(x1, x1), p.add_raw(x2, x2), third}, s[t]);
        out.second.add({p.neg(FieldElement{x1}).value, p.neg(FieldElement{x2}).value, third}, s[t]);
      }
    }
  }
  return out;
}

EncodedPair encode_dot(const FieldSubset& a, unsigned d) {
  require_encodable(a, d);
  const auto& p = a.modulus();
  const Spectrum s = depth_spectrum(a, d - 1, true);
  WeightedPointSet side(p, 3);
  for (std::uint32_t x1 : a.elements()) {
    for (std::uint32_t x2 : a.elements()) {
      for (std::uint32_t t = 0; t < p.value(); ++t) {
        if (s[t] != 0) side.add({x1, x2, t}, s[t]);
      }
    }
  }
  return {side, side};
}

WeightedPointSet random_weighted_set(const PrimeModulus& p, unsigned dim,
                                     std::size_t max_entries, std::uint64_t max_multiplicity,
                                     SeededRng& rng) {
  if (max_entries == 0 || max_multiplicity == 0) {
    throw UsageError("random multiset needs positive entry and multiplicity limits");
  }
  WeightedPointSet set(p, dim);
  std::uint64_t entries = 1 + rng.below(max_entries);
  std::vector<std::uint32_t> coords(dim);
  for (std::uint64_t k = 0; k < entries; ++k) {
    for (auto& c : coords) c = static_cast<std::uint32_t>(rng.below(p.value()));
    set.add(coords, big(1 + rng.below(max_multiplicity)));
  }
  return set;
}

std::string format_multiset_csv(const WeightedPointSet& set) {
  std::ostringstream out;
  for (unsigned k = 1; k <= set.dim(); ++k) out << 'c' << k << ',';
  out << "multiplicity\n";
  for (const auto& [coords, m] : set.entries()) {
    for (auto c : coords) out << c << ',';
    out << to_decimal(m) << '\n';
  }
  return out.str();
}

}  // namespace ffdist
