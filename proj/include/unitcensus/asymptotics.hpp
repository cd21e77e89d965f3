#pragma once

// The constants and main terms of the census asymptotics: the regularized
// Euler-product density delta(B), the leading coefficients K(p^alpha, k), and
// the main-term formulas, including the split into dominant summands.

#include <cstdint>
#include <string>
#include <vector>

#include "unitcensus/abelian.hpp"
#include "unitcensus/residues.hpp"

namespace unitcensus {

inline constexpr uint64_t kDefaultTruncationQ = 100000;

// The phi(p^alpha)-1 reduced classes mod p^alpha other than 1. p^alpha >= 3.
ResidueSet residue_set_B(const PrimePower& pa);

// Reduced classes mod p1^b1*p2^b2 that are != 1 mod either prime power.
ResidueSet residue_set_BH(const PrimePower& p1b1, const PrimePower& p2b2);

enum class DeltaMethod { l_function, direct_extrapolation };

struct DeltaResult {
  double value = 0.0;
  DeltaMethod method = DeltaMethod::l_function;
  uint64_t truncation_Q = 0;
  double error_estimate = 0.0;
};

// delta(B) = lim_{s->1+} zeta(s)^{-tau/phi(d)} prod_{q in B} (1 - q^-s)^{-1}.
//
// l_function: character decomposition; the product over primes beyond Q is a
// 1 + O(q^-2) tail reflected in error_estimate. Imaginary parts of the
// log-space accumulation must cancel below 1e-10, else a character-table bug
// is signalled.
//
// direct_extrapolation: evaluates the defining expression at s = 1 + eps for
// a halving ladder of eps with primes up to Q (plus a prime-density tail
// estimate) and Richardson-extrapolates; low precision, used as a
// cross-check oracle only.
DeltaResult delta(const ResidueSet& B, DeltaMethod method, uint64_t Q = kDefaultTruncationQ);

// Leading coefficient of the term contributed by the gathered summand
// Z_{p^alpha}^k. Exactly 1 when p^alpha = 2.
double k_constant(const PrimePower& pa, uint32_t k, uint64_t Q = kDefaultTruncationQ);

// (3 / (2 (k-2)!)) x (loglog x)^{k-2} / log x, the k >= 2 all-twos main term.
double main_term_z2k(double x, uint32_t k);

enum class MainTermBranch { AllTwos, OneDominant, TwoDominant };

// Which main-term formula applies to G; exactly one branch for every
// nontrivial G.
MainTermBranch main_term_branch(const FiniteAbelianGroup& G);

struct MainTermEntry {
  GatheredSummand summand;
  double coefficient = 0.0;  // K(p^alpha, k), or the all-twos coefficient
  double value = 0.0;
  bool dominant = false;
  bool placeholder = false;  // K(2, k): fixed at 1, never a dominant coefficient
};

struct MainTerm {
  double x = 0.0;
  FiniteAbelianGroup group;
  MainTermBranch branch = MainTermBranch::OneDominant;
  std::vector<MainTermEntry> terms;
  double total = 0.0;           // sum over all gathered summands
  double dominant_total = 0.0;  // sum over dominant summands only
};

// Full term list over the gathered summands of G. Dispatches to the all-twos
// formula when G is a power of Z_2 (which then requires k >= 2). Requires
// x > e so that loglog x is positive.
MainTerm main_term_general(double x, const FiniteAbelianGroup& G,
                           uint64_t Q = kDefaultTruncationQ);

struct RhoResult {
  double rho = 0.0;               // 1/phi1 + 1/phi2 - 1/(phi1 phi2)
  double excess_over_first = 0.0; // rho - 1/phi1 = (1 - 1/phi1)/phi2
};

RhoResult error_exponent_rho(const PrimePower& p1b1, const PrimePower& p2b2);

const char* to_string(DeltaMethod m);
const char* to_string(MainTermBranch b);

}  // namespace unitcensus
