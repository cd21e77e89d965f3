#include "unitcensus/nt.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace unitcensus {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
  if (m == 1) return 0;
  uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This base set is known to be exact for all n < 2^64.
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i < s - 1; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

uint64_t pollard_brent(uint64_t n) {
  // n composite, odd, not a prime power of a small prime.
  if (n % 2 == 0) return 2;
  uint64_t x0 = 2, c = 1;
  while (true) {
    uint64_t x = x0, y = x0, q = 1, g = 1, ys = 0;
    const unsigned m = 128;
    unsigned r = 1;
    while (g == 1) {
      x = y;
      for (unsigned i = 0; i < r; ++i) y = (mulmod_u64(y, y, n) + c) % n;
      for (unsigned k = 0; k < r && g == 1; k += m) {
        ys = y;
        unsigned lim = std::min<unsigned>(m, r - k);
        for (unsigned i = 0; i < lim; ++i) {
          y = (mulmod_u64(y, y, n) + c) % n;
          q = mulmod_u64(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
      r <<= 1;
    }
    if (g == n) {
      g = 1;
      uint64_t y2 = ys;
      while (g == 1) {
        y2 = (mulmod_u64(y2, y2, n) + c) % n;
        g = std::gcd(x > y2 ? x - y2 : y2 - x, n);
      }
    }
    if (g != n) return g;
    ++c;  // rare cycle degeneracy: retry with a new increment
  }
}

void factor_rec(uint64_t n, std::vector<uint64_t>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  uint64_t d = pollard_brent(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

std::vector<Factor> factorize_u64(uint64_t n) {
  if (n == 0) throw std::domain_error("factorize_u64: n must be >= 1");
  std::vector<uint64_t> ps;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                     29ull, 31ull, 37ull, 41ull, 43ull, 47ull}) {
    while (n % p == 0) {
      ps.push_back(p);
      n /= p;
    }
  }
  factor_rec(n, ps);
  std::sort(ps.begin(), ps.end());
  std::vector<Factor> out;
  for (size_t i = 0; i < ps.size();) {
    size_t j = i;
    while (j < ps.size() && ps[j] == ps[i]) ++j;
    out.push_back({ps[i], static_cast<uint32_t>(j - i)});
    i = j;
  }
  return out;
}

std::vector<uint32_t> primes_up_to(uint32_t limit) {
  std::vector<uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<uint8_t> comp(static_cast<size_t>(limit) + 1, 0);
  for (uint64_t i = 2; i <= limit; ++i) {
    if (!comp[i]) {
      primes.push_back(static_cast<uint32_t>(i));
      for (uint64_t j = i * i; j <= limit; j += i) comp[j] = 1;
    }
  }
  return primes;
}

uint32_t valuation(uint64_t n, uint64_t ell) {
  uint32_t v = 0;
  while (n % ell == 0) {
    n /= ell;
    ++v;
  }
  return v;
}

uint64_t euler_phi_u64(uint64_t n) {
  uint64_t r = n;
  for (const Factor& f : factorize_u64(n)) r -= r / f.p;
  return r;
}

uint64_t checked_pow_u64(uint64_t a, uint32_t e) {
  unsigned __int128 r = 1;
  for (uint32_t i = 0; i < e; ++i) {
    r *= a;
    if (r > UINT64_MAX) throw std::overflow_error("prime power exceeds 64 bits");
  }
  return static_cast<uint64_t>(r);
}

}  // namespace unitcensus
