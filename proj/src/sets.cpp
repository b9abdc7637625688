#include "ffdist/sets.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "ffdist/errors.hpp"
#include "ffdist/rng.hpp"

namespace ffdist {

FieldSubset::FieldSubset(const PrimeModulus& p, std::span<const std::uint32_t> values)
    : p_(p), bits_((p.value() + 63) / 64, 0) {
  for (std::uint32_t v : values) {
    std::uint32_t t = v % p.value();
    bits_[t >> 6] |= std::uint64_t{1} << (t & 63);
  }
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    for (std::uint64_t word = bits_[w]; word != 0; word &= word - 1) {
      elements_.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(word)));
    }
  }
}

FieldSubset FieldSubset::full(const PrimeModulus& p) {
  std::vector<std::uint32_t> all(p.value());
  for (std::uint32_t t = 0; t < p.value(); ++t) all[t] = t;
  return FieldSubset(p, all);
}

FieldSubset FieldSubset::shifted(std::uint32_t c) const {
  std::vector<std::uint32_t> out;
  out.reserve(elements_.size());
  std::uint32_t shift = c % p_.value();
  for (std::uint32_t x : elements_) out.push_back(p_.add_raw(x, shift));
  return FieldSubset(p_, out);
}

FieldSubset FieldSubset::dilated(std::uint32_t c) const {
  std::vector<std::uint32_t> out;
  out.reserve(elements_.size());
  std::uint32_t factor = c % p_.value();
  for (std::uint32_t x : elements_) out.push_back(p_.mul_raw(x, factor));
  return FieldSubset(p_, out);
}

FieldSubset FieldSubset::complement() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t t = 0; t < p_.value(); ++t) {
    if (!contains(t)) out.push_back(t);
  }
  return FieldSubset(p_, out);
}

PointSet::PointSet(const PrimeModulus& p, unsigned dim, std::vector<std::uint32_t> coords)
    : p_(p), dim_(dim) {
  if (dim == 0) throw std::invalid_argument("point dimension must be positive");
  if (coords.size() % dim != 0) {
    throw std::invalid_argument("coordinate count is not a multiple of the dimension");
  }
  for (auto& c : coords) c %= p.value();
  std::size_t n = coords.size() / dim;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto point_of = [&](std::size_t i) {
    return std::span<const std::uint32_t>(coords).subspan(i * dim, dim);
  };
  auto less = [&](std::size_t i, std::size_t j) {
    auto a = point_of(i), b = point_of(j);
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  };
  std::sort(order.begin(), order.end(), less);
  coords_.reserve(coords.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && !less(order[k - 1], order[k])) continue;
    auto pt = point_of(order[k]);
    coords_.insert(coords_.end(), pt.begin(), pt.end());
  }
}

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

// Parses a signed decimal integer occupying text[begin, end) exactly.
std::int64_t parse_integer(std::string_view text, std::size_t begin, std::size_t end) {
  std::string_view token = text.substr(begin, end - begin);
  if (token.empty()) throw ParseError("empty token", begin);
  std::size_t skip = token.front() == '+' ? 1 : 0;
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data() + skip, token.data() + token.size(), value);
  if (ec == std::errc::result_out_of_range) throw ParseError("integer out of range", begin);
  if (ec != std::errc() || ptr != token.data() + token.size() ||
      (skip == 1 && token.size() > 1 && token[1] == '-')) {
    throw ParseError("malformed integer '" + std::string(token) + "'", begin);
  }
  return value;
}

// Trims blanks in text[begin, end) and returns the trimmed bounds.
std::pair<std::size_t, std::size_t> trim(std::string_view text, std::size_t begin,
                                         std::size_t end) {
  while (begin < end && is_blank(text[begin])) ++begin;
  while (end > begin && is_blank(text[end - 1])) --end;
  return {begin, end};
}

void parse_subset_tokens(std::string_view text, std::size_t base, const PrimeModulus& p,
                         std::vector<std::uint32_t>& out) {
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    auto [b, e] = trim(text, start, comma);
    if (b == e) throw ParseError("empty element", base + b);
    std::string_view token = text.substr(b, e - b);
    std::size_t dots = token.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(p.element(parse_integer(text, b, e)).value);
    } else {
      auto [lb, le] = trim(text, b, b + dots);
      auto [hb, he] = trim(text, b + dots + 2, e);
      std::int64_t lo = 0, hi = 0;
      try {
        lo = parse_integer(text, lb, le);
        hi = parse_integer(text, hb, he);
      } catch (const ParseError& err) {
        throw ParseError("malformed range '" + std::string(token) + "'", base + b);
      }
      if (hi < lo) throw ParseError("range upper end below lower end", base + b);
      // More than p consecutive integers already cover F_p.
      std::int64_t span = std::min<std::int64_t>(hi - lo, p.value() - 1);
      for (std::int64_t x = lo; x <= lo + span; ++x) out.push_back(p.element(x).value);
    }
    start = comma + 1;
  }
}

}  // namespace

FieldSubset parse_subset(std::string_view text, const PrimeModulus& p) {
  auto [b, e] = trim(text, 0, text.size());
  if (b == e) throw ParseError("empty element list", 0);
  std::vector<std::uint32_t> values;
  parse_subset_tokens(text.substr(0, e), 0, p, values);
  return FieldSubset(p, values);
}

std::string format_subset(const FieldSubset& a) {
  std::string out;
  for (std::uint32_t x : a.elements()) {
    if (!out.empty()) out += ',';
    out += std::to_string(x);
  }
  return out;
}

FieldSubset random_subset(const PrimeModulus& p, std::uint64_t n, std::uint64_t seed) {
  if (n == 0 || n > p.value()) {
    throw UsageError("random subset size must be in [1, p], got " + std::to_string(n));
  }
  SeededRng rng(seed);
  auto picks = sample_indices(p.value(), n, rng);
  std::vector<std::uint32_t> values(picks.begin(), picks.end());
  return FieldSubset(p, values);
}

PointSet isotropic_line(const PrimeModulus& p) {
  auto i = sqrt_of_minus_one(p);
  if (!i) {
    throw UsageError("isotropic line needs p = 1 (mod 4); " + std::to_string(p.value()) +
                     " = 3 (mod 4)");
  }
  std::vector<std::uint32_t> coords;
  coords.reserve(2 * p.value());
  for (std::uint32_t x = 0; x < p.value(); ++x) {
    coords.push_back(x);
    coords.push_back(p.mul_raw(x, i->value));
  }
  return PointSet(p, 2, std::move(coords));
}

namespace {

std::uint64_t checked_power(std::uint64_t base, unsigned exponent) {
  unsigned __int128 acc = 1;
  for (unsigned k = 0; k < exponent; ++k) {
    acc *= base;
    if (acc > UINT64_MAX) throw UsageError("p^d does not fit in 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace

PointSet random_pointset(const PrimeModulus& p, unsigned dim, std::uint64_t n,
                         std::uint64_t seed) {
  if (dim == 0) throw UsageError("dimension must be positive");
  std::uint64_t universe = checked_power(p.value(), dim);
  if (n == 0 || n > universe) {
    throw UsageError("random point set size must be in [1, p^d], got " + std::to_string(n));
  }
  SeededRng rng(seed);
  auto picks = sample_indices(universe, n, rng);
  std::vector<std::uint32_t> coords(static_cast<std::size_t>(n) * dim);
  for (std::size_t k = 0; k < picks.size(); ++k) {
    std::uint64_t idx = picks[k];
    for (unsigned j = dim; j-- > 0;) {
      coords[k * dim + j] = static_cast<std::uint32_t>(idx % p.value());
      idx /= p.value();
    }
  }
  return PointSet(p, dim, std::move(coords));
}

PointSet cartesian_power(const FieldSubset& a, unsigned n, std::uint64_t max_points) {
  if (n == 0) throw UsageError("dimension must be positive");
  unsigned __int128 count = 1;
  for (unsigned k = 0; k < n; ++k) {
    count *= a.size();
    if (count > max_points) {
      throw GuardExceeded("A^n has more than " + std::to_string(max_points) + " points");
    }
  }
  auto elems = a.elements();
  std::vector<std::uint32_t> coords;
  coords.reserve(static_cast<std::size_t>(count) * n);
  std::vector<std::size_t> digit(n, 0);
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(count); ++i) {
    for (unsigned j = 0; j < n; ++j) coords.push_back(elems[digit[j]]);
    for (unsigned j = n; j-- > 0;) {
      if (++digit[j] < elems.size()) break;
      digit[j] = 0;
    }
  }
  return PointSet(a.modulus(), n, std::move(coords));
}

PointSet to_pointset(const FieldSubset& a) {
  return PointSet(a.modulus(), 1, std::vector<std::uint32_t>(a.elements().begin(), a.elements().end()));
}

FieldSubset to_subset(const PointSet& points) {
  if (points.dim() != 1) {
    throw UsageError("expected a one-dimensional set, got d=" + std::to_string(points.dim()));
  }
  return FieldSubset(points.modulus(), points.coords());
}

namespace {

std::uint64_t parse_header_field(std::string_view line, std::size_t base, std::string_view key) {
  std::size_t at = line.find(key);
  if (at == std::string_view::npos || (at > 0 && !is_blank(line[at - 1]))) {
    throw ParseError("set file header lacks '" + std::string(key) + "'", base);
  }
  std::size_t begin = at + key.size();
  std::size_t end = begin;
  while (end < line.size() && !is_blank(line[end])) ++end;
  std::int64_t v = parse_integer(line, begin, end);
  if (v <= 0) throw ParseError("header value must be positive", base + begin);
  return static_cast<std::uint64_t>(v);
}

}  // namespace

PointSet parse_set_file(std::string_view text) {
  std::optional<PrimeModulus> p;
  unsigned dim = 0;
  std::vector<std::uint32_t> coords;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t eol = text.find('\n', offset);
    if (eol == std::string_view::npos) eol = text.size();
    auto [b, e] = trim(text, offset, eol);
    std::string_view line = text.substr(b, e - b);
    if (!line.empty() && line.front() != '#') {
      if (!p) {
        std::uint64_t pv = parse_header_field(line, b, "p=");
        std::uint64_t dv = parse_header_field(line, b, "d=");
        try {
          p.emplace(pv);
        } catch (const std::invalid_argument& err) {
          throw ParseError(err.what(), b);
        }
        if (dv > 64) throw ParseError("dimension too large", b);
        dim = static_cast<unsigned>(dv);
      } else {
        std::size_t before = coords.size();
        std::size_t start = b;
        while (true) {
          std::size_t comma = text.find(',', start);
          if (comma == std::string_view::npos || comma > e) comma = e;
          auto [tb, te] = trim(text, start, comma);
          coords.push_back(p->element(parse_integer(text, tb, te)).value);
          if (comma == e) break;
          start = comma + 1;
        }
        if (coords.size() - before != dim) {
          throw ParseError("tuple has " + std::to_string(coords.size() - before) +
                               " coordinates, expected " + std::to_string(dim),
                           b);
        }
      }
    }
    offset = eol + 1;
  }
  if (!p) throw ParseError("missing 'p=<prime> d=<dim>' header", 0);
  if (coords.empty()) throw ParseError("set file has no elements", text.size());
  return PointSet(*p, dim, std::move(coords));
}

std::string format_set_file(const PointSet& points) {
  std::ostringstream out;
  out << "p=" << points.modulus().value() << " d=" << points.dim() << '\n';
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto pt = points.point(i);
    for (unsigned j = 0; j < points.dim(); ++j) out << (j ? "," : "") << pt[j];
    out << '\n';
  }
  return out.str();
}

PointSet read_set_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read set file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_set_file(buffer.str());
}

}  // namespace ffdist
