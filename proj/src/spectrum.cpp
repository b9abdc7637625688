#include "ffdist/spectrum.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "ffdist/convolution.hpp"
#include "ffdist/errors.hpp"
#include "ffdist/parallel.hpp"

namespace ffdist {

Spectrum::Spectrum(const PrimeModulus& p, std::vector<BigCount> counts)
    : p_(p), counts_(std::move(counts)), total_(0) {
  if (counts_.size() != p.value()) {
    throw std::invalid_argument("spectrum length " + std::to_string(counts_.size()) +
                                " differs from p = " + std::to_string(p.value()));
  }
  for (const auto& c : counts_) {
    if (c < 0) throw std::invalid_argument("negative spectrum count");
    total_ += c;
  }
}

Spectrum Spectrum::zero(const PrimeModulus& p) {
  return Spectrum(p, std::vector<BigCount>(p.value()));
}

Spectrum Spectrum::point_mass(const PrimeModulus& p, std::uint32_t at, const BigCount& mass) {
  std::vector<BigCount> counts(p.value());
  counts[at % p.value()] = mass;
  return Spectrum(p, std::move(counts));
}

BigCount Spectrum::max_count() const {
  BigCount best = 0;
  for (const auto& c : counts_) {
    if (c > best) best = c;
  }
  return best;
}

void Spectrum::require_total(const BigCount& expected, std::string_view what) const {
  if (total_ != expected) {
    throw InvariantViolation(std::string(what) + ": spectrum total " + to_decimal(total_) +
                             " != expected " + to_decimal(expected));
  }
}

std::string_view to_string(SpectrumKind kind) {
  return kind == SpectrumKind::distance ? "distance" : "dot";
}

SpectrumKind parse_spectrum_kind(std::string_view text) {
  if (text == "distance") return SpectrumKind::distance;
  if (text == "dot") return SpectrumKind::dot;
  throw UsageError("unknown spectrum kind '" + std::string(text) + "' (distance|dot)");
}

namespace {

std::vector<BigCount> to_big(const std::vector<std::uint64_t>& counts) {
  std::vector<BigCount> out(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = big(counts[i]);
  return out;
}

template <class PairValue>
Spectrum pair_spectrum(const FieldSubset& a, PairValue value, std::string_view what) {
  if (a.is_empty()) throw UsageError(std::string(what) + " of an empty set");
  const auto& p = a.modulus();
  std::vector<std::uint64_t> counts(p.value(), 0);
  auto elems = a.elements();
  for (std::uint32_t x : elems) {
    for (std::uint32_t y : elems) ++counts[value(p, x, y)];
  }
  Spectrum s(p, to_big(counts));
  s.require_total(big(a.size()) * big(a.size()), what);
  return s;
}

}  // namespace

Spectrum diff_square_spectrum(const FieldSubset& a) {
  return pair_spectrum(
      a,
      [](const PrimeModulus& p, std::uint32_t x, std::uint32_t y) {
        std::uint32_t d = p.sub_raw(x, y);
        return p.mul_raw(d, d);
      },
      "diff_square_spectrum");
}

Spectrum product_spectrum(const FieldSubset& a) {
  return pair_spectrum(
      a, [](const PrimeModulus& p, std::uint32_t x, std::uint32_t y) { return p.mul_raw(x, y); },
      "product_spectrum");
}

Spectrum sum_spectrum(const FieldSubset& a) {
  return pair_spectrum(
      a, [](const PrimeModulus& p, std::uint32_t x, std::uint32_t y) { return p.add_raw(x, y); },
      "sum_spectrum");
}

namespace {

void require_same_modulus(const Spectrum& s, const Spectrum& t) {
  if (!(s.modulus() == t.modulus())) throw UsageError("spectra over different primes");
}

Spectrum convolve_direct(const Spectrum& s, const Spectrum& t) {
  const auto& p = s.modulus();
  const std::uint32_t n = p.value();
  std::vector<BigCount> out(n);
  std::vector<std::uint32_t> t_support;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (t[v] != 0) t_support.push_back(v);
  }
  for (std::uint32_t u = 0; u < n; ++u) {
    if (s[u] == 0) continue;
    for (std::uint32_t v : t_support) {
      mpz_addmul(out[p.add_raw(u, v)].get_mpz_t(), s[u].get_mpz_t(), t[v].get_mpz_t());
    }
  }
  return Spectrum(p, std::move(out));
}

std::vector<std::uint32_t> residues_of(const Spectrum& s, std::uint32_t q) {
  std::vector<std::uint32_t> r(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    r[i] = static_cast<std::uint32_t>(mpz_fdiv_ui(s[i].get_mpz_t(), q));
  }
  return r;
}

// Evaluates `per_prime(convolver, prime)` for enough primes that their
// product exceeds `bound`, then lifts the residues back to Z.
template <class PerPrime>
Spectrum transform_route(const PrimeModulus& p, const BigCount& bound, PerPrime per_prime) {
  if (bound == 0) return Spectrum::zero(p);
  unsigned log_size = ntt::CyclicConvolver::log_size_for(p.value());
  auto primes = ntt::primes_exceeding(log_size, bound);
  std::vector<std::vector<std::uint32_t>> residues(primes.size());
  parallel_for(primes.size(), [&](std::size_t i) {
    ntt::CyclicConvolver conv(p.value(), primes[i]);
    residues[i] = per_prime(conv, primes[i].modulus);
  });
  return Spectrum(p, ntt::reconstruct(residues, primes));
}

bool use_transform(const PrimeModulus& p, ConvolutionPath path) {
  switch (path) {
    case ConvolutionPath::direct:
      return false;
    case ConvolutionPath::transform:
      return true;
    case ConvolutionPath::automatic:
      break;
  }
  return p.value() > kTransformThreshold;
}

}  // namespace

Spectrum cyclic_convolve(const Spectrum& s, const Spectrum& t, ConvolutionPath path) {
  require_same_modulus(s, t);
  BigCount expected = s.total() * t.total();
  Spectrum out = use_transform(s.modulus(), path)
                     ? transform_route(s.modulus(), expected,
                                       [&](const ntt::CyclicConvolver& conv, std::uint32_t q) {
                                         return conv.convolve(residues_of(s, q), residues_of(t, q));
                                       })
                     : convolve_direct(s, t);
  out.require_total(expected, "cyclic_convolve");
  return out;
}

Spectrum fold(const Spectrum& s, unsigned d, ConvolutionPath path) {
  if (d == 0) throw UsageError("fold depth must be at least 1");
  BigCount expected;
  mpz_pow_ui(expected.get_mpz_t(), s.total().get_mpz_t(), d);
  if (d == 1) return s;
  if (use_transform(s.modulus(), path)) {
    Spectrum out = transform_route(s.modulus(), expected,
                                   [&](const ntt::CyclicConvolver& conv, std::uint32_t q) {
                                     return conv.power(residues_of(s, q), d);
                                   });
    out.require_total(expected, "fold");
    return out;
  }
  Spectrum acc = s;
  for (unsigned k = 1; k < d; ++k) acc = convolve_direct(acc, s);
  acc.require_total(expected, "fold");
  return acc;
}

Spectrum multiplicative_convolve(const Spectrum& s, const Spectrum& t) {
  require_same_modulus(s, t);
  const auto& p = s.modulus();
  std::vector<BigCount> out(p.value());
  for (std::uint32_t u = 0; u < p.value(); ++u) {
    if (s[u] == 0) continue;
    for (std::uint32_t v = 0; v < p.value(); ++v) {
      if (t[v] == 0) continue;
      mpz_addmul(out[p.mul_raw(u, v)].get_mpz_t(), s[u].get_mpz_t(), t[v].get_mpz_t());
    }
  }
  Spectrum result(p, std::move(out));
  result.require_total(s.total() * t.total(), "multiplicative_convolve");
  return result;
}

Spectrum distance_spectrum_power(const FieldSubset& a, unsigned n, ConvolutionPath path) {
  return fold(diff_square_spectrum(a), n, path);
}

Spectrum dot_spectrum_power(const FieldSubset& a, unsigned n, ConvolutionPath path) {
  return fold(product_spectrum(a), n, path);
}

Spectrum spectrum_power(const FieldSubset& a, unsigned n, SpectrumKind kind,
                        ConvolutionPath path) {
  return kind == SpectrumKind::distance ? distance_spectrum_power(a, n, path)
                                        : dot_spectrum_power(a, n, path);
}

Spectrum distance_spectrum_general(const PointSet& e, EnumerationGuard guard) {
  const std::size_t n = e.size();
  if (!guard.force && n > guard.max_points) {
    throw GuardExceeded("point set has " + std::to_string(n) + " points, above the " +
                        std::to_string(guard.max_points) + "-point enumeration guard");
  }
  const auto& p = e.modulus();
  const unsigned dim = e.dim();
  // Bound the per-chunk histograms to about 2^25 counters in total.
  std::size_t chunks = std::clamp<std::size_t>((std::size_t{1} << 25) / p.value(), 1, 64);
  using Histogram = std::vector<std::uint64_t>;
  Histogram counts = parallel_reduce(
      n, Histogram(p.value(), 0),
      [&](std::size_t begin, std::size_t end) {
        Histogram local(p.value(), 0);
        for (std::size_t i = begin; i < end; ++i) {
          auto x = e.point(i);
          for (std::size_t j = i + 1; j < n; ++j) {
            auto y = e.point(j);
            std::uint64_t acc = 0;
            for (unsigned k = 0; k < dim; ++k) {
              std::uint64_t diff = p.sub_raw(x[k], y[k]);
              acc = (acc + diff * diff) % p.value();
            }
            local[acc] += 2;
          }
        }
        return local;
      },
      [](Histogram acc, Histogram part) {
        for (std::size_t t = 0; t < acc.size(); ++t) acc[t] += part[t];
        return acc;
      },
      chunks);
  counts[0] += n;
  Spectrum s(p, to_big(counts));
  s.require_total(big(n) * big(n), "distance_spectrum_general");
  return s;
}

Spectrum off_diagonal(const Spectrum& s, const BigCount& diagonal_pairs) {
  std::vector<BigCount> counts(s.counts().begin(), s.counts().end());
  if (counts[0] < diagonal_pairs) {
    throw InvariantViolation("fewer zero-distance pairs than diagonal pairs");
  }
  counts[0] -= diagonal_pairs;
  return Spectrum(s.modulus(), std::move(counts));
}

FieldSubset support(const Spectrum& s, bool include_zero) {
  std::vector<std::uint32_t> values;
  for (std::uint32_t t = include_zero ? 0 : 1; t < s.size(); ++t) {
    if (s[t] > 0) values.push_back(t);
  }
  return FieldSubset(s.modulus(), values);
}

FieldSubset sumset(const FieldSubset& x, const FieldSubset& y) {
  if (!(x.modulus() == y.modulus())) throw UsageError("sumset of sets over different primes");
  const auto& p = x.modulus();
  std::vector<std::uint32_t> values;
  values.reserve(x.size() * y.size());
  for (std::uint32_t a : x.elements()) {
    for (std::uint32_t b : y.elements()) values.push_back(p.add_raw(a, b));
  }
  return FieldSubset(p, values);
}

std::string format_spectrum_csv(const Spectrum& s) {
  std::ostringstream out;
  out << "p=" << s.modulus().value() << "\nlambda,count\n";
  for (std::size_t t = 0; t < s.size(); ++t) out << t << ',' << to_decimal(s[t]) << '\n';
  return out.str();
}

Spectrum parse_spectrum_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<PrimeModulus> p;
  std::vector<BigCount> counts;
  std::vector<bool> seen;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!p) {
      if (line.rfind("p=", 0) != 0) throw ParseError("expected 'p=<prime>' header", 0);
      try {
        p.emplace(std::stoull(line.substr(2)));
      } catch (const std::exception& err) {
        throw ParseError(std::string("bad header: ") + err.what(), 0);
      }
      counts.assign(p->value(), 0);
      seen.assign(p->value(), false);
      continue;
    }
    if (line == "lambda,count") continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw UsageError("spectrum CSV line " + std::to_string(line_no) + " lacks a comma");
    }
    std::uint64_t lambda = 0;
    try {
      lambda = std::stoull(line.substr(0, comma));
    } catch (const std::exception&) {
      throw UsageError("spectrum CSV line " + std::to_string(line_no) + ": bad lambda");
    }
    if (lambda >= p->value() || seen[lambda]) {
      throw UsageError("spectrum CSV line " + std::to_string(line_no) + ": lambda repeated or out of range");
    }
    seen[lambda] = true;
    counts[lambda] = parse_decimal(line.substr(comma + 1));
  }
  if (!p) throw ParseError("empty spectrum CSV", 0);
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw UsageError("spectrum CSV lacks a row for some lambda");
  }
  return Spectrum(*p, std::move(counts));
}

}  // namespace ffdist
