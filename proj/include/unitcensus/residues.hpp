#pragma once

// Unions of reduced residue classes modulo d.

#include <cstdint>
#include <vector>

namespace unitcensus {

struct ResidueSet {
  uint64_t d = 1;
  std::vector<uint64_t> classes;  // sorted, each coprime to d, in [1, d)

  uint64_t tau() const { return classes.size(); }
  // Primes dividing d are never members (the classes are reduced).
  bool contains(uint64_t q) const;
};

// Validates coprimality, range and uniqueness; sorts the classes.
ResidueSet make_residue_set(uint64_t d, std::vector<uint64_t> classes);

}  // namespace unitcensus
