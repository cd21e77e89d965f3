#include "unitcensus/dirichlet.hpp"

#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "unitcensus/nt.hpp"
#include "unitcensus/special.hpp"

namespace unitcensus {

namespace {

uint64_t primitive_root_mod_p(uint64_t p) {
  if (p == 2) return 1;
  std::vector<Factor> fs = factorize_u64(p - 1);
  for (uint64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (const Factor& f : fs) {
      if (powmod_u64(g, (p - 1) / f.p, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root found");  // unreachable for prime p
}

}  // namespace

CharacterGroup::CharacterGroup(uint64_t d) : d_(d) {
  if (d < 1) throw std::domain_error("character modulus must be >= 1");
  phi_ = 1;
  for (const Factor& f : factorize_u64(d)) {
    const uint64_t pa = checked_pow_u64(f.p, f.e);
    if (f.p == 2) {
      if (f.e == 1) continue;  // phi(2) = 1, nothing to represent
      if (f.e == 2) {
        Component c{pa, 2, std::vector<uint32_t>(pa, 0)};
        c.dlog[3] = 1;
        comps_.push_back(std::move(c));
        phi_ *= 2;
      } else {
        // Z_{2^e}^x = <-1> x <5>
        const uint64_t half = pa >> 2;  // order of 5
        Component sign{pa, 2, std::vector<uint32_t>(pa, 0)};
        Component five{pa, half, std::vector<uint32_t>(pa, 0)};
        uint64_t pow5 = 1;
        for (uint64_t t = 0; t < half; ++t) {
          sign.dlog[pow5] = 0;
          five.dlog[pow5] = static_cast<uint32_t>(t);
          uint64_t neg = pa - pow5;
          sign.dlog[neg] = 1;
          five.dlog[neg] = static_cast<uint32_t>(t);
          pow5 = (pow5 * 5) % pa;
        }
        comps_.push_back(std::move(sign));
        comps_.push_back(std::move(five));
        phi_ *= 2 * half;
      }
    } else {
      const uint64_t order = pa / f.p * (f.p - 1);
      uint64_t g = primitive_root_mod_p(f.p);
      if (f.e >= 2 && powmod_u64(g, f.p - 1, f.p * f.p) == 1) g += f.p;
      Component c{pa, order, std::vector<uint32_t>(pa, 0)};
      uint64_t r = 1;
      for (uint64_t t = 0; t < order; ++t) {
        c.dlog[r] = static_cast<uint32_t>(t);
        r = mulmod_u64(r, g, pa);
      }
      comps_.push_back(std::move(c));
      phi_ *= order;
    }
  }
  phase_lcm_ = 1;
  for (const Component& c : comps_) phase_lcm_ = std::lcm(phase_lcm_, c.order);
}

bool CharacterGroup::is_unit(uint64_t n) const { return std::gcd(n % d_, d_) == 1; }

std::complex<double> CharacterGroup::value(size_t chi, uint64_t n) const {
  n %= d_;
  if (std::gcd(n, d_) != 1) return {0.0, 0.0};
  // chi decodes mixed-radix into one exponent per component.
  uint64_t t = 0;
  size_t idx = chi;
  for (const Component& c : comps_) {
    uint64_t e = idx % c.order;
    idx /= c.order;
    uint64_t dl = c.dlog[n % c.modulus];
    t = (t + e * dl % c.order * (phase_lcm_ / c.order)) % phase_lcm_;
  }
  double angle = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(phase_lcm_);
  return {std::cos(angle), std::sin(angle)};
}

size_t CharacterGroup::conj_index(size_t chi) const {
  uint64_t out = 0;
  uint64_t stride = 1;
  size_t idx = chi;
  for (const Component& c : comps_) {
    uint64_t e = idx % c.order;
    idx /= c.order;
    uint64_t ce = e == 0 ? 0 : c.order - e;
    out += ce * stride;
    stride *= c.order;
  }
  return out;
}

const std::vector<double>& CharacterGroup::digamma_table() const {
  std::call_once(psi_once_, [this] {
    psi_.assign(d_, 0.0);
    for (uint64_t a = 1; a < d_; ++a) {
      if (std::gcd(a, d_) == 1)
        psi_[a] = digamma(static_cast<double>(a) / static_cast<double>(d_));
    }
    if (d_ == 1) psi_.assign(1, 0.0);
  });
  return psi_;
}

std::vector<DirichletCharacter> characters_mod(uint64_t d) {
  auto group = std::make_shared<const CharacterGroup>(d);
  std::vector<DirichletCharacter> out;
  out.reserve(group->num_characters());
  for (size_t i = 0; i < group->num_characters(); ++i) out.emplace_back(group, i);
  return out;
}

std::complex<double> l_value(const DirichletCharacter& chi) {
  if (chi.is_principal()) throw std::invalid_argument("L(1, chi) needs a non-principal character");
  const CharacterGroup& g = chi.group();
  const uint64_t d = g.modulus();
  const std::vector<double>& psi = g.digamma_table();
  std::complex<double> sum = 0.0;
  for (uint64_t a = 1; a < d; ++a) {
    if (!g.is_unit(a)) continue;
    sum += chi(a) * psi[a];
  }
  return -sum / static_cast<double>(d);
}

}  // namespace unitcensus
