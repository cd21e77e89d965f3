#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "oracles.hpp"
#include "unitcensus/dirichlet.hpp"
#include "unitcensus/nt.hpp"
#include "unitcensus/special.hpp"

using namespace unitcensus;

TEST_CASE("character counts and group shapes") {
  CHECK(characters_mod(3).size() == 2);
  CHECK(characters_mod(8).size() == 4);
  CHECK(characters_mod(9).size() == 6);
  CHECK(characters_mod(16).size() == 8);
  CHECK(characters_mod(1).size() == 1);
  CHECK(characters_mod(2).size() == 1);
  CHECK(characters_mod(12).size() == 4);

  // mod 8 the group is Z_2 x Z_2: every non-principal character is real and
  // squares to the principal one.
  for (const DirichletCharacter& chi : characters_mod(8)) {
    for (uint64_t n : {1, 3, 5, 7}) {
      std::complex<double> v = chi(n);
      CHECK(std::abs(v.imag()) < 1e-14);
      CHECK(std::abs(std::abs(v.real()) - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("orthogonality over all moduli up to 100") {
  for (uint64_t d = 1; d <= 100; ++d) {
    std::vector<DirichletCharacter> chars = characters_mod(d);
    const uint64_t phi = euler_phi_u64(d);
    REQUIRE(chars.size() == phi);
    for (uint64_t c = 1; c < std::max<uint64_t>(d, 2); ++c) {
      if (std::gcd(c, d) != 1) continue;
      std::complex<double> sum = 0.0;
      for (const DirichletCharacter& chi : chars) sum += chi(c);
      double expect = c % d == 1 % d ? static_cast<double>(phi) : 0.0;
      CHECK(std::abs(sum.real() - expect) < 1e-9);
      CHECK(std::abs(sum.imag()) < 1e-9);
    }
    // Row orthogonality: each non-principal character sums to zero.
    for (size_t i = 0; i < chars.size(); ++i) {
      std::complex<double> sum = 0.0;
      for (uint64_t c = 1; c <= d; ++c) sum += chars[i](c);
      double expect = i == 0 ? static_cast<double>(phi) : 0.0;
      CHECK(std::abs(sum - std::complex<double>(expect, 0.0)) < 1e-9);
    }
  }
}

TEST_CASE("characters are multiplicative") {
  for (uint64_t d : {5, 8, 9, 12, 15, 16, 21, 40}) {
    for (const DirichletCharacter& chi : characters_mod(d)) {
      for (uint64_t a = 1; a < d; ++a) {
        for (uint64_t b = a; b < d; ++b) {
          std::complex<double> lhs = chi(a * b);
          std::complex<double> rhs = chi(a) * chi(b);
          CHECK(std::abs(lhs - rhs) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("conjugate indexing") {
  for (uint64_t d : {7, 9, 15, 16}) {
    for (const DirichletCharacter& chi : characters_mod(d)) {
      DirichletCharacter bar = chi.conj();
      for (uint64_t n = 1; n <= d; ++n) {
        CHECK(std::abs(bar(n) - std::conj(chi(n))) < 1e-13);
      }
    }
  }
}

TEST_CASE("L(1, chi_4) = pi/4") {
  std::vector<DirichletCharacter> chars = characters_mod(4);
  REQUIRE(chars.size() == 2);
  std::complex<double> L = l_value(chars[1]);
  double reference = oracles::leibniz_pi_over_4();
  CHECK(std::abs(reference - std::numbers::pi / 4) < 1e-12);
  CHECK(std::abs(L.real() - reference) < 1e-10);
  CHECK(std::abs(L.imag()) < 1e-12);
}

TEST_CASE("L(1, chi_3) = pi / (3 sqrt 3)") {
  std::vector<DirichletCharacter> chars = characters_mod(3);
  REQUIRE(chars.size() == 2);
  std::complex<double> L = l_value(chars[1]);
  double reference = oracles::l_chi3_series();
  CHECK(std::abs(reference - std::numbers::pi / (3 * std::sqrt(3.0))) < 1e-12);
  CHECK(std::abs(L.real() - reference) < 1e-10);
  CHECK(std::abs(L.imag()) < 1e-12);
}

TEST_CASE("L value conjugate symmetry") {
  for (uint64_t d : {5, 7, 9, 11, 13, 16}) {
    std::vector<DirichletCharacter> chars = characters_mod(d);
    for (size_t i = 1; i < chars.size(); ++i) {
      std::complex<double> a = l_value(chars[i]);
      std::complex<double> b = l_value(chars[i].conj());
      CHECK(std::abs(a - std::conj(b)) < 1e-11);
    }
  }
}

TEST_CASE("principal character rejected") {
  std::vector<DirichletCharacter> chars = characters_mod(5);
  CHECK(chars[0].is_principal());
  CHECK_THROWS_AS(l_value(chars[0]), std::invalid_argument);
}

TEST_CASE("special functions used by the L machinery") {
  CHECK(digamma(1.0) == doctest::Approx(-0.57721566490153286).epsilon(1e-13));
  CHECK(digamma(0.5) == doctest::Approx(-1.9635100260214235).epsilon(1e-13));
  // psi(5.25) = psi(1/4) + sum_{k=0}^{4} 1/(k + 1/4), psi(1/4) = -g - pi/2 - 3 ln 2
  double psi_quarter = -0.57721566490153286 - std::numbers::pi / 2 - 3 * std::log(2.0);
  double psi_5_25 = psi_quarter;
  for (int k = 0; k <= 4; ++k) psi_5_25 += 1.0 / (k + 0.25);
  CHECK(digamma(5.25) == doctest::Approx(psi_5_25).epsilon(1e-13));
  CHECK(riemann_zeta(2.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6).epsilon(1e-14));
  CHECK(riemann_zeta(1.5) == doctest::Approx(2.6123753486854883).epsilon(1e-13));
  CHECK(riemann_zeta(1.01) == doctest::Approx(100.577943338497).epsilon(1e-9));
  // E1 at points with tabulated values.
  CHECK(exp_integral_e1(1.0) == doctest::Approx(0.21938393439552028).epsilon(1e-12));
  CHECK(exp_integral_e1(0.5) == doctest::Approx(0.55977359477616081).epsilon(1e-12));
  CHECK(exp_integral_e1(8.0) == doctest::Approx(3.7665622843924906e-5).epsilon(1e-6));
}
