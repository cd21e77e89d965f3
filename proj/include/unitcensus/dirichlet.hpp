#pragma once

// Dirichlet character tables (via generators of Z_d^x) and L(1, chi).

#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

namespace unitcensus {

// The full character group mod d, d >= 1. Characters are indexed 0..phi(d)-1
// with 0 the principal character. Immutable after construction.
class CharacterGroup {
 public:
  explicit CharacterGroup(uint64_t d);

  uint64_t modulus() const { return d_; }
  uint64_t phi() const { return phi_; }
  size_t num_characters() const { return phi_; }

  bool is_unit(uint64_t n) const;
  std::complex<double> value(size_t chi, uint64_t n) const;
  size_t conj_index(size_t chi) const;

  // psi(a/d) for every reduced residue a, lazily built and cached; used by
  // the L(1, chi) evaluation.
  const std::vector<double>& digamma_table() const;

 private:
  struct Component {
    uint64_t modulus;              // the prime power this component lives in
    uint64_t order;                // cyclic order of the component
    std::vector<uint32_t> dlog;    // indexed by n % modulus (units only)
  };

  uint64_t d_ = 1;
  uint64_t phi_ = 1;
  std::vector<Component> comps_;
  uint64_t phase_lcm_ = 1;
  mutable std::vector<double> psi_;      // guarded by psi_once_
  mutable std::once_flag psi_once_;
};

class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const CharacterGroup> group, size_t index)
      : group_(std::move(group)), index_(index) {}

  uint64_t modulus() const { return group_->modulus(); }
  bool is_principal() const { return index_ == 0; }
  std::complex<double> operator()(uint64_t n) const { return group_->value(index_, n); }
  DirichletCharacter conj() const {
    return DirichletCharacter(group_, group_->conj_index(index_));
  }
  const CharacterGroup& group() const { return *group_; }
  size_t index() const { return index_; }

 private:
  std::shared_ptr<const CharacterGroup> group_;
  size_t index_;
};

// The full list of characters mod d (principal first).
std::vector<DirichletCharacter> characters_mod(uint64_t d);

// L(1, chi) for non-principal chi, through the digamma identity
// L(1, chi) = -(1/d) * sum_a chi(a) psi(a/d). Throws on the principal
// character.
std::complex<double> l_value(const DirichletCharacter& chi);

}  // namespace unitcensus
