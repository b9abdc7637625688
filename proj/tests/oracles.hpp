#pragma once

// Brute-force reference implementations. They use nothing from the library
// except plain containers, so agreement with the library is meaningful.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using Tuple = std::vector<u64>;

inline u64 sq(u64 x, u64 p) { return x * x % p; }

/// All n-tuples over `values`, first coordinate slowest.
inline std::vector<Tuple> tuples(const std::vector<u64>& values, unsigned n) {
  std::vector<Tuple> out{{}};
  for (unsigned k = 0; k < n; ++k) {
    std::vector<Tuple> next;
    for (const auto& t : out) {
      for (u64 v : values) {
        Tuple u = t;
        u.push_back(v);
        next.push_back(std::move(u));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline u64 distance(const Tuple& x, const Tuple& y, u64 p) {
  u64 acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc = (acc + sq((x[i] + p - y[i]) % p, p)) % p;
  return acc;
}

inline u64 dot(const Tuple& x, const Tuple& y, u64 p) {
  u64 acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc = (acc + x[i] * y[i]) % p;
  return acc;
}

/// counts[l] = #{(x, y) in points^2 : ||x - y|| = l}.
inline std::vector<u64> distance_counts(const std::vector<Tuple>& points, u64 p) {
  std::vector<u64> counts(p, 0);
  for (const auto& x : points) {
    for (const auto& y : points) ++counts[distance(x, y, p)];
  }
  return counts;
}

/// Pair counts of A^n by walking every pair of points.
inline std::vector<u64> power_counts(const std::vector<u64>& a, unsigned n, u64 p, bool use_dot) {
  auto points = tuples(a, n);
  std::vector<u64> counts(p, 0);
  for (const auto& x : points) {
    for (const auto& y : points) ++counts[use_dot ? dot(x, y, p) : distance(x, y, p)];
  }
  return counts;
}

enum class Energy { distance, dot, additive, multiplicative };

/// Number of (a, b, c, e) in (A^d)^4 whose d-fold forms agree, by walking
/// all |A|^(4d) tuples.
inline u64 energy(const std::vector<u64>& a, unsigned d, u64 p, Energy kind) {
  auto points = tuples(a, d);
  auto form = [&](const Tuple& x, const Tuple& y) {
    u64 acc = kind == Energy::multiplicative ? 1 : 0;
    for (unsigned i = 0; i < d; ++i) {
      switch (kind) {
        case Energy::distance: acc = (acc + sq((x[i] + p - y[i]) % p, p)) % p; break;
        case Energy::dot: acc = (acc + x[i] * y[i]) % p; break;
        case Energy::additive: acc = (acc + x[i] + y[i]) % p; break;
        case Energy::multiplicative: acc = acc * (x[i] * y[i] % p) % p; break;
      }
    }
    return acc;
  };
  std::vector<u64> values;
  for (const auto& x : points) {
    for (const auto& y : points) values.push_back(form(x, y));
  }
  u64 total = 0;
  for (u64 v : values) {
    for (u64 w : values) total += v == w;
  }
  return total;
}

/// Weighted #{(e, f) : <e', f'> + e_last + f_last = l}.
inline u64 weighted_pair_count(const std::map<Tuple, u64>& e, const std::map<Tuple, u64>& f,
                               u64 lambda, u64 p) {
  u64 total = 0;
  for (const auto& [x, mx] : e) {
    for (const auto& [y, my] : f) {
      u64 acc = 0;
      for (std::size_t i = 0; i + 1 < x.size(); ++i) acc = (acc + x[i] * y[i]) % p;
      acc = (acc + x.back() + y.back()) % p;
      if (acc == lambda) total += mx * my;
    }
  }
  return total;
}

using P3 = std::array<u64, 3>;
struct Plane4 {
  u64 a, b, c, e;
};

inline u64 incidences(const std::vector<P3>& points, const std::vector<Plane4>& planes, u64 p) {
  u64 total = 0;
  for (const auto& x : points) {
    for (const auto& s : planes) total += (s.a * x[0] + s.b * x[1] + s.c * x[2]) % p == s.e % p;
  }
  return total;
}

/// Three points are collinear iff (v - u) x (w - u) = 0.
inline bool collinear(const P3& u, const P3& v, const P3& w, u64 p) {
  std::array<u64, 3> a, b;
  for (int i = 0; i < 3; ++i) {
    a[i] = (v[i] + p - u[i]) % p;
    b[i] = (w[i] + p - u[i]) % p;
  }
  return (a[1] * b[2] + p * p - a[2] * b[1]) % p == 0 &&
         (a[2] * b[0] + p * p - a[0] * b[2]) % p == 0 &&
         (a[0] * b[1] + p * p - a[1] * b[0]) % p == 0;
}

/// Max number of points (with repeats) on one line, cubic time.
inline u64 max_collinear(const std::vector<P3>& points, u64 p) {
  if (points.empty()) return 0;
  u64 best = 1;
  for (std::size_t i = 0; i < points.size(); ++i) {
    u64 same = 0;
    for (const auto& x : points) same += x == points[i];
    best = std::max(best, same);
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (points[j] == points[i]) continue;
      u64 on = 0;
      for (const auto& x : points) on += collinear(points[i], points[j], x, p);
      best = std::max(best, on);
    }
  }
  return best;
}

/// sum over t1 in P, t2 in Q of f(t1, t2), where
/// f(t1, t2) = sum_s r_{(A-A)^2 + t1}(s) r_{(A-A)^2 + t2}(s).
inline u64 level_pair_sum(const std::vector<u64>& a, const std::vector<u64>& levels_p,
                          const std::vector<u64>& levels_q, u64 p) {
  std::vector<u64> r(p, 0);
  for (u64 x : a) {
    for (u64 y : a) ++r[sq((x + p - y) % p, p)];
  }
  u64 total = 0;
  for (u64 t1 : levels_p) {
    for (u64 t2 : levels_q) {
      for (u64 s = 0; s < p; ++s) total += r[(s + p - t1) % p] * r[(s + p - t2) % p];
    }
  }
  return total;
}

/// #{x in F_p^3 : x1^2 + x2^2 + x3^2 = l} for every l.
inline std::vector<u64> sphere_counts(u64 p) {
  std::vector<u64> counts(p, 0);
  for (u64 x = 0; x < p; ++x) {
    for (u64 y = 0; y < p; ++y) {
      for (u64 z = 0; z < p; ++z) ++counts[(sq(x, p) + sq(y, p) + sq(z, p)) % p];
    }
  }
  return counts;
}

inline u64 quad_energy(const std::vector<u64>& s, u64 p, bool multiplicative) {
  u64 total = 0;
  for (u64 a : s) {
    for (u64 b : s) {
      for (u64 c : s) {
        for (u64 e : s) {
          total += multiplicative ? (a * b) % p == (c * e) % p : (a + b) % p == (c + e) % p;
        }
      }
    }
  }
  return total;
}

/// min over partitions A = B u C of max(E^+(B), E^x(C)).
inline u64 best_split(const std::vector<u64>& a, u64 p) {
  u64 best = UINT64_MAX;
  for (u64 mask = 0; mask < (u64{1} << a.size()); ++mask) {
    std::vector<u64> b, c;
    for (std::size_t i = 0; i < a.size(); ++i) ((mask >> i) & 1 ? b : c).push_back(a[i]);
    best = std::min(best, std::max(quad_energy(b, p, false), quad_energy(c, p, true)));
  }
  return best;
}

}  // namespace oracle
