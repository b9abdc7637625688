#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ffdist/bigint.hpp"
#include "ffdist/sets.hpp"

namespace ffdist {

using Point3 = std::array<std::uint32_t, 3>;

/// The plane a X + b Y + c Z = e.
struct Plane {
  std::uint32_t a = 0, b = 0, c = 0, e = 0;
  friend auto operator<=>(const Plane&, const Plane&) = default;
};

/// Planes in F_p^3, repeats allowed. Every normal (a, b, c) is nonzero.
class PlaneSet {
 public:
  PlaneSet(const PrimeModulus& p, std::vector<Plane> planes);

  const PrimeModulus& modulus() const { return p_; }
  std::size_t size() const { return planes_.size(); }
  std::span<const Plane> planes() const { return planes_; }

 private:
  PrimeModulus p_;
  std::vector<Plane> planes_;
};

struct IncidenceInstance {
  PrimeModulus p;
  std::vector<Point3> points;  // repeats allowed
  PlaneSet planes;
  std::uint64_t k = 0;  // max points of `points` on one line
  bool k_exact = true;  // false when k is the structural bound, not a count
};

enum class IncidenceStrategy {
  direct,   // every (point, plane) pair
  grouped,  // planes bucketed by normal, one evaluation per (point, normal)
};

/// #{(r, s) : r lies on s}, counted with multiplicity.
std::uint64_t count_incidences(const PrimeModulus& p, std::span<const Point3> points,
                               const PlaneSet& planes,
                               IncidenceStrategy strategy = IncidenceStrategy::grouped);

/// A line in canonical form: `direction` scaled so its first nonzero
/// coordinate is 1, and `base` the unique point of the line whose
/// coordinate at that index is 0.
struct Line {
  Point3 base;
  Point3 direction;
  friend auto operator<=>(const Line&, const Line&) = default;

  bool is_vertical() const { return direction == Point3{0, 0, 1}; }
};

/// The line through two distinct points.
Line line_through(const PrimeModulus& p, const Point3& u, const Point3& v);
bool lies_on(const PrimeModulus& p, const Line& line, const Point3& x);

struct CollinearityProfile {
  std::uint64_t max_any = 0;
  std::uint64_t max_vertical = 0;      // lines with direction (0, 0, 1)
  std::uint64_t max_non_vertical = 0;
};

inline constexpr std::uint64_t kCollinearityGuard = 5000;

/// Maximum multiplicity-weighted point counts on lines, by line type.
/// O(n^2 log n) in the number of distinct points; throws GuardExceeded
/// when the number of points exceeds `guard` unless forced.
CollinearityProfile collinearity_profile(const PrimeModulus& p, std::span<const Point3> points,
                                         std::uint64_t guard = kCollinearityGuard,
                                         bool force = false);

std::uint64_t max_collinear(const PrimeModulus& p, std::span<const Point3> points,
                            std::uint64_t guard = kCollinearityGuard, bool force = false);

struct RudnevReport {
  std::uint64_t incidences;
  std::uint64_t point_count;
  std::uint64_t plane_count;
  std::uint64_t k;
  bool roles_swapped;  // |R| > |S|: terms use (min, max) and a note is attached
  double product_term;  // |R||S|/p
  double sqrt_term;     // |R|^{1/2}|S|
  double k_term;        // k|S|
  double rhs;
  double ratio;         // incidences / rhs
  std::string note;
};

RudnevReport rudnev_diagnostic(const IncidenceInstance& inst);

// The point-plane instance behind the recursive energy bound: points
// (-2a, e, t1 + a^2 - e^2) for a, e in A, t1 in P_i0, and planes
// bX + 2cY + Z = t2 - b^2 + c^2 for b, c in A, t2 in P_j0, where the P are
// dyadic levels of the (d-1)-fold difference-square spectrum.
struct ProofInstance {
  IncidenceInstance instance;
  FieldSubset level_i;
  FieldSubset level_j;
  unsigned i0;
  unsigned j0;
  // sum over t1 in P_i0, t2 in P_j0 of f(t1, t2), with
  // f(t1, t2) = sum_s r_{(A-A)^2 + t1}(s) r_{(A-A)^2 + t2}(s).
  BigCount level_pair_sum;
};

/// Requires d >= 2 and both levels nonempty (throws UsageError otherwise).
ProofInstance build_proof_instance(const FieldSubset& a, unsigned d, unsigned i0, unsigned j0);

/// sum_{t1 in P, t2 in Q} f(t1, t2) by direct enumeration of
/// (a, b, c, e, t1, t2).
BigCount level_pair_sum(const FieldSubset& a, const FieldSubset& p_levels,
                        const FieldSubset& q_levels);

// Instance dump: `p=<p>`, a `POINTS` section of `x,y,z` lines and a
// `PLANES` section of `a,b,c,e` lines.
std::string format_instance_dump(const IncidenceInstance& inst);
IncidenceInstance parse_instance_dump(std::string_view text);

}  // namespace ffdist
