#pragma once

// Fixed-width integer number theory helpers shared across the library.

#include <cmath>
#include <cstdint>
#include <vector>

namespace unitcensus {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m);

// Deterministic Miller-Rabin, valid for the whole 64-bit range.
bool is_prime_u64(uint64_t n);

struct Factor {
  uint64_t p;
  uint32_t e;
};

// Exact factorization of any n >= 1 (trial division by small primes, then
// Brent's variant of Pollard rho on the cofactors). Sorted by prime.
std::vector<Factor> factorize_u64(uint64_t n);

// Primes <= limit via a plain byte sieve.
std::vector<uint32_t> primes_up_to(uint32_t limit);

// Largest v with ell^v | n (n >= 1, ell >= 2).
uint32_t valuation(uint64_t n, uint64_t ell);

// Euler phi from a ready factorization.
uint64_t euler_phi_u64(uint64_t n);

// a^e with overflow check; throws std::overflow_error.
uint64_t checked_pow_u64(uint64_t a, uint32_t e);

// Neumaier-compensated accumulator for long sums of doubles.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace unitcensus
