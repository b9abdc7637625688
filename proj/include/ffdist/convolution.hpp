#pragma once

// Exact cyclic convolution over Z of length-p count vectors, carried out in
// a residue number system: each count vector is reduced modulo several
// NTT-friendly primes q < 2^31, convolved there with a power-of-two number
// theoretic transform, and lifted back with Garner's mixed-radix
// reconstruction. Exact as long as the product of the chosen primes exceeds
// an a-priori bound on every output count.

#include <cstdint>
#include <span>
#include <vector>

#include "ffdist/bigint.hpp"

namespace ffdist::ntt {

struct NttPrime {
  std::uint32_t modulus;    // q = c * 2^k + 1
  std::uint32_t generator;  // primitive root mod q
  unsigned two_adicity;     // k
};

/// The `count` largest primes q < 2^31 with 2^log_size | q - 1. Throws
/// std::runtime_error if fewer exist.
std::vector<NttPrime> primes_for(unsigned log_size, std::size_t count);

/// Enough primes (from primes_for) that their product exceeds `bound`.
std::vector<NttPrime> primes_exceeding(unsigned log_size, const BigCount& bound);

/// Length-`length` cyclic convolution modulo one prime, via a linear NTT
/// product of size 2^log_size >= 2 length - 1 followed by wrap-around.
class CyclicConvolver {
 public:
  CyclicConvolver(std::uint32_t length, const NttPrime& prime);

  std::uint32_t length() const { return length_; }
  std::uint32_t modulus() const { return q_; }

  std::vector<std::uint32_t> convolve(std::span<const std::uint32_t> a,
                                      std::span<const std::uint32_t> b) const;
  /// d-fold self-convolution by binary exponentiation; d >= 1.
  std::vector<std::uint32_t> power(std::span<const std::uint32_t> a, unsigned d) const;

  static unsigned log_size_for(std::uint32_t length);

 private:
  void transform(std::vector<std::uint32_t>& a, bool inverse) const;
  std::vector<std::uint32_t> multiply_wrapped(std::vector<std::uint32_t> fa,
                                              std::vector<std::uint32_t> fb) const;

  std::uint32_t length_;
  std::uint32_t q_;
  unsigned log_size_;
  std::size_t size_;
  std::vector<std::uint32_t> roots_;      // forward twiddles, bit-reversed order per level
  std::vector<std::uint32_t> inv_roots_;
  std::uint32_t size_inverse_;
};

/// Garner reconstruction: residues[i][j] is value j modulo primes[i].
/// Returns the unique values in [0, prod q_i).
std::vector<BigCount> reconstruct(std::span<const std::vector<std::uint32_t>> residues,
                                  std::span<const NttPrime> primes);

}  // namespace ffdist::ntt
