#include "unitcensus/residues.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace unitcensus {

bool ResidueSet::contains(uint64_t q) const {
  return std::binary_search(classes.begin(), classes.end(), q % d);
}

ResidueSet make_residue_set(uint64_t d, std::vector<uint64_t> classes) {
  if (d < 1) throw std::domain_error("residue modulus must be >= 1");
  std::sort(classes.begin(), classes.end());
  for (size_t i = 0; i < classes.size(); ++i) {
    uint64_t r = classes[i];
    if (r < 1 || r >= d) throw std::invalid_argument("residue out of range [1, d)");
    if (std::gcd(r, d) != 1) throw std::invalid_argument("residue not reduced mod d");
    if (i > 0 && classes[i - 1] == r) throw std::invalid_argument("duplicate residue class");
  }
  return ResidueSet{d, std::move(classes)};
}

}  // namespace unitcensus
