#include "ffdist/convolution.hpp"

#include <bit>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "ffdist/prime_field.hpp"

namespace ffdist::ntt {

namespace {

std::uint32_t find_generator(std::uint32_t q) {
  std::vector<std::uint64_t> factors;
  std::uint64_t m = q - 1;
  for (std::uint64_t f = 2; f * f <= m; ++f) {
    if (m % f == 0) {
      factors.push_back(f);
      while (m % f == 0) m /= f;
    }
  }
  if (m > 1) factors.push_back(m);
  for (std::uint32_t g = 2;; ++g) {
    bool primitive = true;
    for (std::uint64_t f : factors) {
      if (pow_mod(g, (q - 1) / f, q) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) return g;
  }
}

std::mutex g_prime_cache_mutex;
std::map<unsigned, std::vector<NttPrime>> g_prime_cache;

}  // namespace

std::vector<NttPrime> primes_for(unsigned log_size, std::size_t count) {
  std::lock_guard lock(g_prime_cache_mutex);
  auto& cached = g_prime_cache[log_size];
  if (cached.size() < count) {
    const std::uint64_t step = std::uint64_t{1} << log_size;
    const std::uint64_t limit = std::uint64_t{1} << 31;
    std::uint64_t c = (limit - 2) / step;
    if (!cached.empty()) c = (cached.back().modulus - 1) / step - 1;
    for (; c >= 1 && cached.size() < count; --c) {
      std::uint64_t q = c * step + 1;
      if (is_prime(q)) {
        auto q32 = static_cast<std::uint32_t>(q);
        cached.push_back({q32, find_generator(q32), static_cast<unsigned>(std::countr_zero(q - 1))});
      }
    }
    if (cached.size() < count) {
      throw std::runtime_error("not enough NTT primes for transform size 2^" +
                               std::to_string(log_size));
    }
  }
  return {cached.begin(), cached.begin() + static_cast<std::ptrdiff_t>(count)};
}

std::vector<NttPrime> primes_exceeding(unsigned log_size, const BigCount& bound) {
  std::size_t count = 1;
  while (true) {
    auto primes = primes_for(log_size, count);
    BigCount product = 1;
    for (const auto& q : primes) product *= static_cast<unsigned long>(q.modulus);
    if (product > bound) return primes;
    // Each prime contributes at least 2^(log_size) bits-worth; grow quickly.
    BigCount ratio = bound / product + 1;
    std::size_t more = mpz_sizeinbase(ratio.get_mpz_t(), 2) / 30 + 1;
    count += more;
  }
}

unsigned CyclicConvolver::log_size_for(std::uint32_t length) {
  unsigned log_size = 0;
  std::uint64_t needed = 2 * std::uint64_t{length} - 1;
  while ((std::uint64_t{1} << log_size) < needed) ++log_size;
  return log_size;
}

CyclicConvolver::CyclicConvolver(std::uint32_t length, const NttPrime& prime)
    : length_(length), q_(prime.modulus), log_size_(log_size_for(length)) {
  if (length == 0) throw std::invalid_argument("empty convolution");
  if (log_size_ > prime.two_adicity) {
    throw std::invalid_argument("prime does not support the transform size");
  }
  size_ = std::size_t{1} << log_size_;
  std::uint64_t w = pow_mod(prime.generator, (q_ - 1) >> log_size_, q_);
  std::uint64_t w_inv = pow_mod(w, q_ - 2, q_);
  std::size_t half = std::max<std::size_t>(1, size_ / 2);
  roots_.resize(half);
  inv_roots_.resize(half);
  std::uint64_t x = 1, y = 1;
  for (std::size_t j = 0; j < half; ++j) {
    roots_[j] = static_cast<std::uint32_t>(x);
    inv_roots_[j] = static_cast<std::uint32_t>(y);
    x = x * w % q_;
    y = y * w_inv % q_;
  }
  size_inverse_ = static_cast<std::uint32_t>(pow_mod(size_, q_ - 2, q_));
}

void CyclicConvolver::transform(std::vector<std::uint32_t>& a, bool inverse) const {
  const std::size_t n = size_;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const auto& table = inverse ? inv_roots_ : roots_;
  const std::uint64_t q = q_;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    std::size_t half = len >> 1;
    std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        std::uint64_t u = a[i + j];
        std::uint64_t v = a[i + j + half] * std::uint64_t{table[j * stride]} % q;
        a[i + j] = static_cast<std::uint32_t>(u + v >= q ? u + v - q : u + v);
        a[i + j + half] = static_cast<std::uint32_t>(u >= v ? u - v : u + q - v);
      }
    }
  }
  if (inverse) {
    for (auto& x : a) x = static_cast<std::uint32_t>(std::uint64_t{x} * size_inverse_ % q);
  }
}

std::vector<std::uint32_t> CyclicConvolver::multiply_wrapped(std::vector<std::uint32_t> fa,
                                                             std::vector<std::uint32_t> fb) const {
  transform(fa, false);
  transform(fb, false);
  for (std::size_t i = 0; i < size_; ++i) {
    fa[i] = static_cast<std::uint32_t>(std::uint64_t{fa[i]} * fb[i] % q_);
  }
  transform(fa, true);
  std::vector<std::uint32_t> out(fa.begin(), fa.begin() + length_);
  for (std::size_t i = length_; i < 2 * std::size_t{length_} - 1; ++i) {
    std::uint32_t& slot = out[i - length_];
    std::uint64_t s = std::uint64_t{slot} + fa[i];
    slot = static_cast<std::uint32_t>(s >= q_ ? s - q_ : s);
  }
  return out;
}

std::vector<std::uint32_t> CyclicConvolver::convolve(std::span<const std::uint32_t> a,
                                                     std::span<const std::uint32_t> b) const {
  if (a.size() != length_ || b.size() != length_) {
    throw std::invalid_argument("convolution operand has the wrong length");
  }
  std::vector<std::uint32_t> fa(size_, 0), fb(size_, 0);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  return multiply_wrapped(std::move(fa), std::move(fb));
}

std::vector<std::uint32_t> CyclicConvolver::power(std::span<const std::uint32_t> a,
                                                  unsigned d) const {
  if (d == 0) throw std::invalid_argument("fold depth must be positive");
  std::vector<std::uint32_t> base(a.begin(), a.end());
  std::vector<std::uint32_t> result;
  bool have_result = false;
  while (true) {
    if (d & 1u) {
      result = have_result ? convolve(result, base) : base;
      have_result = true;
    }
    d >>= 1;
    if (d == 0) break;
    base = convolve(base, base);
  }
  return result;
}

std::vector<BigCount> reconstruct(std::span<const std::vector<std::uint32_t>> residues,
                                  std::span<const NttPrime> primes) {
  const std::size_t k = primes.size();
  if (residues.size() != k || k == 0) throw std::invalid_argument("residue/prime mismatch");
  const std::size_t n = residues[0].size();
  // inverse[j][i] = q_j^{-1} mod q_i for j < i.
  std::vector<std::vector<std::uint64_t>> inverse(k, std::vector<std::uint64_t>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      std::uint64_t qi = primes[i].modulus;
      inverse[j][i] = pow_mod(primes[j].modulus % qi, qi - 2, qi);
    }
  }
  std::vector<BigCount> out(n);
  std::vector<std::uint64_t> digits(k);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t i = 0; i < k; ++i) {
      std::uint64_t qi = primes[i].modulus;
      std::uint64_t x = residues[i][t];
      for (std::size_t j = 0; j < i; ++j) {
        std::uint64_t cj = digits[j] % qi;
        x = (x + qi - cj) % qi * inverse[j][i] % qi;
      }
      digits[i] = x;
    }
    BigCount& v = out[t];
    v = static_cast<unsigned long>(digits[k - 1]);
    for (std::size_t i = k - 1; i-- > 0;) {
      v *= static_cast<unsigned long>(primes[i].modulus);
      v += static_cast<unsigned long>(digits[i]);
    }
  }
  return out;
}

}  // namespace ffdist::ntt
