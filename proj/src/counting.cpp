#include "unitcensus/counting.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "unitcensus/nt.hpp"

namespace unitcensus {

namespace {

// Streaming test of "G embeds in Z_n^x" from a factorization. For each prime
// ell of G with exponent partition lambda (descending), Z_n^x must supply at
// least j parts of size >= lambda_j for every j; only the distinct threshold
// values need checking.
class EmbedTester {
 public:
  explicit EmbedTester(const FiniteAbelianGroup& G) {
    for (uint64_t ell : G.primes()) {
      PPartition lam = G.p_partition(ell);
      Requirement r;
      r.ell = ell;
      for (size_t i = 0; i < lam.parts.size();) {
        size_t j = i;
        while (j < lam.parts.size() && lam.parts[j] == lam.parts[i]) ++j;
        r.thresholds.push_back({lam.parts[i], static_cast<uint32_t>(j)});
        i = j;
      }
      reqs_.push_back(std::move(r));
    }
  }

  bool embeds(const FactorView& fv) {
    for (const Requirement& r : reqs_) {
      if (!satisfied(r, fv)) return false;
    }
    return true;
  }

 private:
  struct Threshold {
    uint32_t t;
    uint32_t need;  // number of parts >= t required
  };
  struct Requirement {
    uint64_t ell;
    std::vector<Threshold> thresholds;
  };

  bool satisfied(const Requirement& r, const FactorView& fv) {
    have_.assign(r.thresholds.size(), 0);
    uint32_t missing = 0;
    for (const Threshold& th : r.thresholds) missing += th.need;
    for (int i = 0; i < fv.count && missing > 0; ++i) {
      const uint64_t q = fv.f[i].q;
      const uint32_t beta = fv.f[i].beta;
      if (q == 2) {
        if (r.ell == 2) {
          if (beta >= 2) missing -= credit(r, 1);
          if (beta >= 3) missing -= credit(r, beta - 2);
        }
        continue;
      }
      uint32_t v = r.ell == 2 ? static_cast<uint32_t>(std::countr_zero(static_cast<uint32_t>(q - 1)))
                              : valuation(q - 1, r.ell);
      if (v > 0) missing -= credit(r, v);
      if (q == r.ell && beta >= 2) missing -= credit(r, beta - 1);
    }
    return missing == 0;
  }

  // Registers one part of size v; returns how many outstanding requirements
  // it settles.
  uint32_t credit(const Requirement& r, uint32_t v) {
    uint32_t settled = 0;
    for (size_t j = 0; j < r.thresholds.size(); ++j) {
      if (v >= r.thresholds[j].t && have_[j] < r.thresholds[j].need) {
        ++have_[j];
        ++settled;
      }
    }
    return settled;
  }

  std::vector<Requirement> reqs_;
  std::vector<uint32_t> have_;
};

uint32_t p_valuation_of(const FactorView& fv, uint64_t p) {
  for (int i = 0; i < fv.count; ++i) {
    if (fv.f[i].q == p) return fv.f[i].beta;
  }
  return 0;
}

FiniteAbelianGroup homocyclic(const PrimePower& pa, int64_t k) {
  return FiniteAbelianGroup::from_prime_powers(
      std::vector<PrimePower>(static_cast<size_t>(k), pa));
}

}  // namespace

std::vector<uint64_t> count_S(const std::vector<uint64_t>& x_grid, const FiniteAbelianGroup& G,
                              const SieveOptions& opt) {
  if (G.is_trivial()) throw trivial_group_error();
  auto make_pred = [&G]() -> std::function<bool(const FactorView&)> {
    return [tester = EmbedTester(G)](const FactorView& fv) mutable { return !tester.embeds(fv); };
  };
  return count_over_grid(x_grid, make_pred, opt);
}

uint64_t count_S_ell(uint64_t x, const PrimePower& pa, int64_t k, uint32_t ell,
                     const SieveOptions& opt) {
  make_prime_power(pa.p, pa.alpha);
  if (x == 0) return 0;
  if (k <= 0) return 0;  // zero copies always embed
  auto make_pred = [&]() -> std::function<bool(const FactorView&)> {
    return [tester = EmbedTester(homocyclic(pa, k)), p = pa.p, ell](const FactorView& fv) mutable {
      return p_valuation_of(fv, p) == ell && !tester.embeds(fv);
    };
  };
  return count_over_grid({x}, make_pred, opt)[0];
}

uint64_t count_S0(uint64_t x, const PrimePower& pa, int64_t k, const SieveOptions& opt) {
  return count_S_ell(x, pa, k, 0, opt);
}

uint64_t count_D_m(uint64_t x, const PrimePower& pa, uint32_t m, const SieveOptions& opt) {
  const uint64_t value = pa.value();
  if (value < 3) throw std::domain_error("D_m is undefined for p^alpha = 2");
  if (x == 0) return 0;
  auto make_pred = [&]() -> std::function<bool(const FactorView&)> {
    return [p = pa.p, value, m](const FactorView& fv) {
      uint32_t hits = 0;
      for (int i = 0; i < fv.count; ++i) {
        if (fv.f[i].q == p) return false;  // p | N
        if (fv.f[i].q % value == 1) ++hits;
      }
      return hits == m;
    };
  };
  return count_over_grid({x}, make_pred, opt)[0];
}

uint64_t count_D_m_residue(uint64_t x, const ResidueSet& B, uint32_t m, const SieveOptions& opt) {
  make_residue_set(B.d, B.classes);  // validate
  if (x == 0) return 0;
  // Dense membership table: primes dividing d are outside B by construction.
  std::vector<uint8_t> in_B(B.d, 0);
  for (uint64_t c : B.classes) in_B[c] = 1;
  auto make_pred = [&]() -> std::function<bool(const FactorView&)> {
    return [&in_B, d = B.d, m](const FactorView& fv) {
      uint32_t outside = 0;
      for (int i = 0; i < fv.count; ++i) {
        if (!in_B[fv.f[i].q % d]) ++outside;
      }
      return outside == m;
    };
  };
  return count_over_grid({x}, make_pred, opt)[0];
}

uint64_t count_pi_m(uint64_t x, uint32_t m, const SieveOptions& opt) {
  if (x == 0) return 0;
  auto make_pred = [m]() -> std::function<bool(const FactorView&)> {
    return [m](const FactorView& fv) { return static_cast<uint32_t>(fv.count) == m; };
  };
  return count_over_grid({x}, make_pred, opt)[0];
}

uint64_t count_pi_m_star(uint64_t x, uint32_t m, const SieveOptions& opt) {
  if (x == 0) return 0;
  auto make_pred = [m]() -> std::function<bool(const FactorView&)> {
    return [m](const FactorView& fv) {
      if (fv.count > 0 && fv.f[0].q == 2) return false;
      return static_cast<uint32_t>(fv.count) == m;
    };
  };
  return count_over_grid({x}, make_pred, opt)[0];
}

uint64_t count_S_pair(uint64_t x, const FiniteAbelianGroup& H1, const FiniteAbelianGroup& H2,
                      const SieveOptions& opt) {
  if (H1.is_trivial() || H2.is_trivial()) throw trivial_group_error();
  if (x == 0) return 0;
  auto make_pred = [&]() -> std::function<bool(const FactorView&)> {
    return [t1 = EmbedTester(H1), t2 = EmbedTester(H2)](const FactorView& fv) mutable {
      return !t1.embeds(fv) && !t2.embeds(fv);
    };
  };
  return count_over_grid({x}, make_pred, opt)[0];
}

std::vector<MertensDiagnostic> mertens_diagnostic(const std::vector<uint64_t>& x_grid,
                                                  uint64_t modulus, const SieveOptions& opt) {
  if (x_grid.empty()) throw std::invalid_argument("empty x grid");
  for (size_t i = 0; i + 1 < x_grid.size(); ++i) {
    if (x_grid[i] >= x_grid[i + 1])
      throw std::invalid_argument("x grid must be strictly increasing");
  }
  uint64_t phi = 1;
  if (modulus > 1) {
    std::vector<Factor> fs = factorize_u64(modulus);
    if (fs.size() != 1) throw std::domain_error("mertens modulus must be 1 or a prime power");
    phi = make_prime_power(fs[0].p, fs[0].e).phi();
  }

  std::vector<MertensDiagnostic> out;
  CompensatedSum M;
  size_t gi = 0;
  auto snapshot = [&](uint64_t x) {
    MertensDiagnostic diag;
    diag.modulus = modulus;
    diag.x = x;
    diag.M = M.value();
    diag.c_estimate = diag.M - std::log(std::log(static_cast<double>(x))) / static_cast<double>(phi);
    out.push_back(diag);
  };

  // Ordered single pass: the compensated accumulator sees primes ascending,
  // so the result is independent of segmentation.
  for_each_factored(x_grid.back(), opt, [&](const FactorView& fv) {
    while (gi < x_grid.size() && fv.n > x_grid[gi]) snapshot(x_grid[gi++]);
    const bool is_prime = fv.count == 1 && fv.f[0].beta == 1 && fv.f[0].q == fv.n;
    if (is_prime && (modulus == 1 || fv.n % modulus == 1)) {
      M.add(1.0 / static_cast<double>(fv.n));
    }
  });
  while (gi < x_grid.size()) snapshot(x_grid[gi++]);

  const double c_fit = out.back().c_estimate;
  for (MertensDiagnostic& diag : out) diag.R = diag.c_estimate - c_fit;
  return out;
}

}  // namespace unitcensus
