#pragma once

// Exact counting of integers by the structure of their unit group, all in
// single sieve passes: S(x;G), its refinements by the power of p dividing n,
// counts by prime factors in residue classes, omega counts, and the
// prime-reciprocal Mertens diagnostic.

#include <cstdint>
#include <vector>

#include "unitcensus/abelian.hpp"
#include "unitcensus/residues.hpp"
#include "unitcensus/sieve.hpp"

namespace unitcensus {

// #{n <= x : G does not embed in Z_n^x} for every x in the grid, one pass.
// G must be nontrivial; the grid strictly increasing with max <= sieve cap.
std::vector<uint64_t> count_S(const std::vector<uint64_t>& x_grid, const FiniteAbelianGroup& G,
                              const SieveOptions& opt = {});

// #{n <= x : p^ell || n, Z_{p^alpha}^k does not embed in Z_n^x}.
// k <= 0 counts nothing (zero copies always embed).
uint64_t count_S_ell(uint64_t x, const PrimePower& pa, int64_t k, uint32_t ell,
                     const SieveOptions& opt = {});

// ell = 0 slice: n not divisible by p.
uint64_t count_S0(uint64_t x, const PrimePower& pa, int64_t k, const SieveOptions& opt = {});

// #{N <= x : p does not divide N, exactly m distinct prime factors of N are
// congruent to 1 mod p^alpha}. Requires p^alpha >= 3.
uint64_t count_D_m(uint64_t x, const PrimePower& pa, uint32_t m, const SieveOptions& opt = {});

// #{N <= x : exactly m distinct prime factors of N lie outside B}.
uint64_t count_D_m_residue(uint64_t x, const ResidueSet& B, uint32_t m,
                           const SieveOptions& opt = {});

// #{n <= x : omega(n) = m}; the star variant restricts to odd n.
uint64_t count_pi_m(uint64_t x, uint32_t m, const SieveOptions& opt = {});
uint64_t count_pi_m_star(uint64_t x, uint32_t m, const SieveOptions& opt = {});

// #{n <= x : neither H1 nor H2 embeds in Z_n^x}. Both nontrivial.
uint64_t count_S_pair(uint64_t x, const FiniteAbelianGroup& H1, const FiniteAbelianGroup& H2,
                      const SieveOptions& opt = {});

struct MertensDiagnostic {
  uint64_t modulus = 1;    // p^alpha; 1 means all primes
  uint64_t x = 0;
  double M = 0.0;          // sum of 1/q over primes q <= x with q = 1 (mod modulus)
  double c_estimate = 0.0; // M - loglog(x)/phi(modulus)
  double R = 0.0;          // c_estimate minus the constant fitted at the largest x
};

// Exact prime-reciprocal sums over a grid (compensated accumulation, one
// ordered pass). modulus must be 1 or a prime power.
std::vector<MertensDiagnostic> mertens_diagnostic(const std::vector<uint64_t>& x_grid,
                                                  uint64_t modulus, const SieveOptions& opt = {});

}  // namespace unitcensus
