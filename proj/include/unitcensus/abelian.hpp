#pragma once

// Canonical finite abelian groups: primary decomposition, gathered summands,
// the (phi, multiplicity) preorder, embedding tests, and unit-group structure
// of prime-power moduli.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace unitcensus {

// Census entry points refuse the one-element group; embedding still treats it
// as universally embeddable.
class trivial_group_error : public std::domain_error {
 public:
  trivial_group_error() : std::domain_error("trivial group is not a valid census target") {}
};

struct PrimePower {
  uint64_t p = 0;
  uint32_t alpha = 0;

  uint64_t value() const;  // p^alpha, checked
  uint64_t phi() const;    // p^(alpha-1) * (p-1)

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
  friend auto operator<=>(const PrimePower&, const PrimePower&) = default;
};

// Validates primality of p, alpha >= 1, and that p^alpha fits in 64 bits.
PrimePower make_prime_power(uint64_t p, uint32_t alpha);

struct GatheredSummand {
  uint64_t p = 0;
  uint32_t alpha = 0;
  uint32_t k = 0;  // exact multiplicity of Z_{p^alpha}

  PrimePower prime_power() const { return PrimePower{p, alpha}; }

  friend bool operator==(const GatheredSummand&, const GatheredSummand&) = default;
  friend auto operator<=>(const GatheredSummand&, const GatheredSummand&) = default;
};

// Exponent partition of the ell-primary part, non-increasing.
struct PPartition {
  uint64_t ell = 0;
  std::vector<uint32_t> parts;

  bool trivial() const { return parts.empty(); }
  // Componentwise domination: every part of `sub` fits under ours.
  bool dominates(const PPartition& sub) const;

  friend bool operator==(const PPartition&, const PPartition&) = default;
};

class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() = default;  // trivial group

  // Multiset of prime-power cyclic factors; normalized on construction.
  static FiniteAbelianGroup from_prime_powers(const std::vector<PrimePower>& factors);
  // Cyclic orders n >= 1; composite orders split into prime powers (CRT).
  static FiniteAbelianGroup from_cyclic_orders(const std::vector<uint64_t>& orders);

  bool is_trivial() const { return summands_.empty(); }

  // Canonical gathered form, sorted by (p, alpha); one entry per distinct
  // prime power with its exact multiplicity.
  const std::vector<GatheredSummand>& summands() const { return summands_; }

  // Distinct primes dividing the order, ascending.
  std::vector<uint64_t> primes() const;

  PPartition p_partition(uint64_t ell) const;

  // Group order if it fits in 64 bits.
  std::optional<uint64_t> order() const;

  // Direct product.
  FiniteAbelianGroup times(const FiniteAbelianGroup& other) const;

  // Canonical rendering, e.g. "Z2^2*Z4*Z3"; "Z1" for the trivial group.
  std::string render() const;

  friend bool operator==(const FiniteAbelianGroup&, const FiniteAbelianGroup&) = default;
  friend auto operator<=>(const FiniteAbelianGroup&, const FiniteAbelianGroup&) = default;

 private:
  std::vector<GatheredSummand> summands_;
};

// Grammar: group ::= term ("*" term)* ; term ::= "Z" n ("^" k)?   (n >= 2, k >= 1)
// or "[" n ("," n)* "]". Whitespace ignored. Composite cyclic orders are split
// into prime-power factors.
FiniteAbelianGroup parse_group(const std::string& spec);

// One entry per distinct prime power of the decomposition; errors on the
// trivial group.
std::vector<GatheredSummand> gathered_summands(const FiniteAbelianGroup& g);

enum class SummandOrder { Less, Greater, Equivalent };

// Lexicographic preorder on (phi(p^alpha), k). Equivalent means equal on both
// coordinates (the prime powers themselves may differ).
SummandOrder preorder_cmp(const GatheredSummand& a, const GatheredSummand& b);

// Maximal gathered summands under the preorder; always 1 or 2 entries, sorted
// by p. Errors on the trivial group.
std::vector<GatheredSummand> dominant_summands(const FiniteAbelianGroup& g);

// The unique other prime power with the same phi value, if it exists.
// Exhaustive for any 64-bit prime power.
std::optional<PrimePower> phi_collision_partner(const PrimePower& pp);

PPartition p_partition(const FiniteAbelianGroup& g, uint64_t ell);

// True iff g is isomorphic to a subgroup of h (componentwise partition
// domination for every prime). The trivial group embeds in everything.
bool embeds(const FiniteAbelianGroup& g, const FiniteAbelianGroup& h);

// Structure of Z_{p^beta}^x in primary form.
FiniteAbelianGroup unit_group_of_prime_power(uint64_t p, uint32_t beta);

// Structure of Z_n^x for any n >= 1 (factors n, then joins the prime-power
// unit groups).
FiniteAbelianGroup unit_group_of_integer(uint64_t n);

uint64_t euler_phi_pp(const PrimePower& pp);

}  // namespace unitcensus
