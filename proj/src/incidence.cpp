#include "ffdist/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "ffdist/energy.hpp"
#include "ffdist/errors.hpp"
#include "ffdist/parallel.hpp"
#include "ffdist/spectrum.hpp"

namespace ffdist {

PlaneSet::PlaneSet(const PrimeModulus& p, std::vector<Plane> planes)
    : p_(p), planes_(std::move(planes)) {
  for (auto& s : planes_) {
    s.a %= p.value();
    s.b %= p.value();
    s.c %= p.value();
    s.e %= p.value();
    if (s.a == 0 && s.b == 0 && s.c == 0) {
      throw UsageError("plane with zero normal vector");
    }
  }
}

namespace {

std::uint32_t evaluate(const PrimeModulus& p, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                       const Point3& x) {
  std::uint64_t v = std::uint64_t{a} * x[0] + std::uint64_t{b} * x[1] + std::uint64_t{c} * x[2];
  return static_cast<std::uint32_t>(v % p.value());
}

struct NormalGroup {
  std::uint32_t a, b, c;
  std::vector<std::pair<std::uint32_t, std::uint64_t>> constants;  // (e, multiplicity), sorted
};

std::vector<NormalGroup> group_by_normal(const PlaneSet& planes) {
  std::vector<Plane> sorted(planes.planes().begin(), planes.planes().end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<NormalGroup> groups;
  for (const auto& s : sorted) {
    if (groups.empty() || groups.back().a != s.a || groups.back().b != s.b ||
        groups.back().c != s.c) {
      groups.push_back({s.a, s.b, s.c, {}});
    }
    auto& constants = groups.back().constants;
    if (!constants.empty() && constants.back().first == s.e) {
      ++constants.back().second;
    } else {
      constants.emplace_back(s.e, 1);
    }
  }
  return groups;
}

}  // namespace

std::uint64_t count_incidences(const PrimeModulus& p, std::span<const Point3> points,
                               const PlaneSet& planes, IncidenceStrategy strategy) {
  if (!(planes.modulus() == p)) throw UsageError("points and planes over different primes");
  auto sum = [](std::uint64_t x, std::uint64_t y) { return x + y; };
  if (strategy == IncidenceStrategy::direct) {
    return parallel_reduce(
        points.size(), std::uint64_t{0},
        [&](std::size_t begin, std::size_t end) {
          std::uint64_t local = 0;
          for (std::size_t i = begin; i < end; ++i) {
            for (const auto& s : planes.planes()) {
              if (evaluate(p, s.a, s.b, s.c, points[i]) == s.e) ++local;
            }
          }
          return local;
        },
        sum);
  }
  const auto groups = group_by_normal(planes);
  return parallel_reduce(
      points.size(), std::uint64_t{0},
      [&](std::size_t begin, std::size_t end) {
        std::uint64_t local = 0;
        for (std::size_t i = begin; i < end; ++i) {
          for (const auto& g : groups) {
            std::uint32_t v = evaluate(p, g.a, g.b, g.c, points[i]);
            auto it = std::lower_bound(
                g.constants.begin(), g.constants.end(), v,
                [](const auto& entry, std::uint32_t key) { return entry.first < key; });
            if (it != g.constants.end() && it->first == v) local += it->second;
          }
        }
        return local;
      },
      sum);
}

namespace {

Point3 normalized_direction(const PrimeModulus& p, Point3 d) {
  std::size_t k = 0;
  while (k < 3 && d[k] == 0) ++k;
  if (k == 3) throw std::invalid_argument("zero direction");
  std::uint32_t scale = p.inv(FieldElement{d[k]}).value;
  for (auto& x : d) x = p.mul_raw(x, scale);
  return d;
}

Point3 difference(const PrimeModulus& p, const Point3& v, const Point3& u) {
  return {p.sub_raw(v[0], u[0]), p.sub_raw(v[1], u[1]), p.sub_raw(v[2], u[2])};
}

std::size_t leading_index(const Point3& d) {
  std::size_t k = 0;
  while (k < 3 && d[k] == 0) ++k;
  return k;
}

}  // namespace

Line line_through(const PrimeModulus& p, const Point3& u, const Point3& v) {
  if (u == v) throw UsageError("line_through needs two distinct points");
  Point3 dir = normalized_direction(p, difference(p, v, u));
  std::size_t k = leading_index(dir);
  Point3 base;
  for (std::size_t j = 0; j < 3; ++j) base[j] = p.sub_raw(u[j], p.mul_raw(u[k], dir[j]));
  return {base, dir};
}

bool lies_on(const PrimeModulus& p, const Line& line, const Point3& x) {
  Point3 offset = difference(p, x, line.base);
  std::uint32_t t = offset[leading_index(line.direction)];
  for (std::size_t j = 0; j < 3; ++j) {
    if (offset[j] != p.mul_raw(t, line.direction[j])) return false;
  }
  return true;
}

CollinearityProfile collinearity_profile(const PrimeModulus& p, std::span<const Point3> points,
                                         std::uint64_t guard, bool force) {
  if (!force && points.size() > guard) {
    throw GuardExceeded("collinearity search over " + std::to_string(points.size()) +
                        " points exceeds the guard of " + std::to_string(guard));
  }
  std::vector<Point3> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<Point3, std::uint64_t>> distinct;
  for (const auto& x : sorted) {
    if (!distinct.empty() && distinct.back().first == x) {
      ++distinct.back().second;
    } else {
      distinct.emplace_back(x, 1);
    }
  }
  using Profile = CollinearityProfile;
  auto merge = [](Profile x, Profile y) {
    return Profile{std::max(x.max_any, y.max_any), std::max(x.max_vertical, y.max_vertical),
                   std::max(x.max_non_vertical, y.max_non_vertical)};
  };
  return parallel_reduce(
      distinct.size(), Profile{},
      [&](std::size_t begin, std::size_t end) {
        Profile local{};
        std::vector<std::pair<Point3, std::uint64_t>> rays;
        for (std::size_t i = begin; i < end; ++i) {
          const auto& [anchor, weight] = distinct[i];
          local = merge(local, Profile{weight, weight, weight});
          rays.clear();
          for (std::size_t j = 0; j < distinct.size(); ++j) {
            if (j == i) continue;
            rays.emplace_back(normalized_direction(p, difference(p, distinct[j].first, anchor)),
                              distinct[j].second);
          }
          std::sort(rays.begin(), rays.end());
          for (std::size_t r = 0; r < rays.size();) {
            std::uint64_t count = weight;
            std::size_t s = r;
            for (; s < rays.size() && rays[s].first == rays[r].first; ++s) count += rays[s].second;
            bool vertical = rays[r].first == Point3{0, 0, 1};
            local = merge(local, Profile{count, vertical ? count : 0, vertical ? 0 : count});
            r = s;
          }
        }
        return local;
      },
      merge);
}

std::uint64_t max_collinear(const PrimeModulus& p, std::span<const Point3> points,
                            std::uint64_t guard, bool force) {
  return collinearity_profile(p, points, guard, force).max_any;
}

RudnevReport rudnev_diagnostic(const IncidenceInstance& inst) {
  RudnevReport r{};
  r.point_count = inst.points.size();
  r.plane_count = inst.planes.size();
  r.incidences = count_incidences(inst.p, inst.points, inst.planes);
  r.k = inst.k;
  r.roles_swapped = r.point_count > r.plane_count;
  double small = static_cast<double>(std::min(r.point_count, r.plane_count));
  double large = static_cast<double>(std::max(r.point_count, r.plane_count));
  r.product_term = small * large / static_cast<double>(inst.p.value());
  r.sqrt_term = std::sqrt(small) * large;
  r.k_term = static_cast<double>(r.k) * large;
  r.rhs = r.product_term + r.sqrt_term + r.k_term;
  r.ratio = r.rhs > 0 ? static_cast<double>(r.incidences) / r.rhs : 0.0;
  if (r.roles_swapped) {
    r.note = "hypothesis |R| <= |S| violated (|R| = " + std::to_string(r.point_count) +
             ", |S| = " + std::to_string(r.plane_count) + "); terms use swapped roles";
  }
  if (!inst.k_exact) {
    if (!r.note.empty()) r.note += "; ";
    r.note += "k is an upper bound on collinear points, not an exhaustive count";
  }
  return r;
}

BigCount level_pair_sum(const FieldSubset& a, const FieldSubset& p_levels,
                        const FieldSubset& q_levels) {
  const auto& p = a.modulus();
  // r(u) = #{(x, y) in A^2 : (x - y)^2 = u}
  std::vector<std::uint64_t> r(p.value(), 0);
  for (std::uint32_t x : a.elements()) {
    for (std::uint32_t y : a.elements()) {
      std::uint32_t diff = p.sub_raw(x, y);
      ++r[p.mul_raw(diff, diff)];
    }
  }
  // f(t1, t2) = sum_s r(s - t1) r(s - t2) depends only on t1 - t2.
  std::vector<BigCount> f_by_shift(p.value());
  for (std::uint32_t delta = 0; delta < p.value(); ++delta) {
    std::uint64_t acc = 0;
    for (std::uint32_t u = 0; u < p.value(); ++u) {
      if (r[u] != 0) acc += r[u] * r[p.add_raw(u, delta)];
    }
    f_by_shift[delta] = big(acc);
  }
  BigCount total = 0;
  for (std::uint32_t t1 : p_levels.elements()) {
    for (std::uint32_t t2 : q_levels.elements()) total += f_by_shift[p.sub_raw(t1, t2)];
  }
  return total;
}

ProofInstance build_proof_instance(const FieldSubset& a, unsigned d, unsigned i0, unsigned j0) {
  if (d < 2) throw UsageError("proof instance needs d >= 2");
  if (a.is_empty()) throw UsageError("proof instance of an empty set");
  const auto& p = a.modulus();
  const auto levels = dyadic_levels(fold(diff_square_spectrum(a), d - 1));
  auto find_level = [&](unsigned exponent) -> const FieldSubset& {
    for (const auto& level : levels) {
      if (level.exponent == exponent) return level.members;
    }
    throw UsageError("dyadic level " + std::to_string(exponent) + " is empty");
  };
  const FieldSubset& level_i = find_level(i0);
  const FieldSubset& level_j = find_level(j0);

  std::vector<Point3> points;
  points.reserve(a.size() * a.size() * level_i.size());
  for (std::uint32_t x : a.elements()) {
    std::uint32_t x_sq = p.mul_raw(x, x);
    for (std::uint32_t e : a.elements()) {
      std::uint32_t e_sq = p.mul_raw(e, e);
      for (std::uint32_t t1 : level_i.elements()) {
        points.push_back({p.neg(FieldElement{p.add_raw(x, x)}).value, e,
                          p.sub_raw(p.add_raw(t1, x_sq), e_sq)});
      }
    }
  }
  std::vector<Plane> planes;
  planes.reserve(a.size() * a.size() * level_j.size());
  for (std::uint32_t b : a.elements()) {
    std::uint32_t b_sq = p.mul_raw(b, b);
    for (std::uint32_t c : a.elements()) {
      std::uint32_t c_sq = p.mul_raw(c, c);
      for (std::uint32_t t2 : level_j.elements()) {
        planes.push_back({b, p.add_raw(c, c), 1, p.add_raw(p.sub_raw(t2, b_sq), c_sq)});
      }
    }
  }
  IncidenceInstance inst{p, std::move(points), PlaneSet(p, std::move(planes)), 0, true};
  if (inst.points.size() <= kCollinearityGuard) {
    inst.k = max_collinear(p, inst.points);
  } else {
    inst.k = std::max<std::uint64_t>(a.size(), level_i.size());
    inst.k_exact = false;
  }
  BigCount sum = level_pair_sum(a, level_i, level_j);
  return {std::move(inst), level_i, level_j, i0, j0, std::move(sum)};
}

std::string format_instance_dump(const IncidenceInstance& inst) {
  std::ostringstream out;
  out << "p=" << inst.p.value() << "\nPOINTS\n";
  for (const auto& x : inst.points) out << x[0] << ',' << x[1] << ',' << x[2] << '\n';
  out << "PLANES\n";
  for (const auto& s : inst.planes.planes()) {
    out << s.a << ',' << s.b << ',' << s.c << ',' << s.e << '\n';
  }
  return out.str();
}

IncidenceInstance parse_instance_dump(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<PrimeModulus> p;
  enum class Section { none, points, planes } section = Section::none;
  std::vector<Point3> points;
  std::vector<Plane> planes;
  std::size_t line_no = 0;
  auto fields = [&](const std::string& row, std::size_t expected) {
    std::vector<std::uint32_t> values;
    std::istringstream cells(row);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        long long v = std::stoll(cell, &used);
        if (used != cell.size() && cell.find_first_not_of(" \t", used) != std::string::npos) {
          throw std::invalid_argument("trailing characters");
        }
        values.push_back(p->element(v).value);
      } catch (const std::exception&) {
        throw UsageError("instance dump line " + std::to_string(line_no) + ": bad number '" +
                         cell + "'");
      }
    }
    if (values.size() != expected) {
      throw UsageError("instance dump line " + std::to_string(line_no) + ": expected " +
                       std::to_string(expected) + " fields");
    }
    return values;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!p) {
      if (line.rfind("p=", 0) != 0) throw UsageError("instance dump must start with 'p=<prime>'");
      try {
        p.emplace(std::stoull(line.substr(2)));
      } catch (const std::exception& err) {
        throw UsageError(std::string("instance dump header: ") + err.what());
      }
    } else if (line == "POINTS") {
      section = Section::points;
    } else if (line == "PLANES") {
      section = Section::planes;
    } else if (section == Section::points) {
      auto v = fields(line, 3);
      points.push_back({v[0], v[1], v[2]});
    } else if (section == Section::planes) {
      auto v = fields(line, 4);
      planes.push_back({v[0], v[1], v[2], v[3]});
    } else {
      throw UsageError("instance dump line " + std::to_string(line_no) + " outside a section");
    }
  }
  if (!p) throw UsageError("empty instance dump");
  PlaneSet plane_set(*p, std::move(planes));
  IncidenceInstance inst{*p, std::move(points), std::move(plane_set), 0, true};
  if (inst.points.size() <= kCollinearityGuard) {
    inst.k = max_collinear(*p, inst.points);
  } else {
    inst.k = inst.points.size();
    inst.k_exact = false;
  }
  return inst;
}

}  // namespace ffdist
