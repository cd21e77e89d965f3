#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "unitcensus/asymptotics.hpp"
#include "unitcensus/nt.hpp"
#include "unitcensus/special.hpp"

using namespace unitcensus;

namespace {
FiniteAbelianGroup G(const std::string& spec) { return parse_group(spec); }
}

TEST_CASE("residue set B_{p^a}") {
  ResidueSet b3 = residue_set_B({3, 1});
  CHECK(b3.d == 3);
  CHECK(b3.classes == std::vector<uint64_t>{2});
  ResidueSet b9 = residue_set_B({3, 2});
  CHECK(b9.classes == std::vector<uint64_t>{2, 4, 5, 7, 8});
  CHECK(b9.tau() == 5);
  ResidueSet b4 = residue_set_B({2, 2});
  CHECK(b4.classes == std::vector<uint64_t>{3});
  CHECK_THROWS_AS(residue_set_B({2, 1}), std::domain_error);
}

TEST_CASE("residue set B_H") {
  ResidueSet bh34 = residue_set_BH({3, 1}, {2, 2});
  CHECK(bh34.d == 12);
  CHECK(bh34.classes == std::vector<uint64_t>{11});
  CHECK(bh34.tau() == 1);

  ResidueSet bh35 = residue_set_BH({3, 1}, {5, 1});
  CHECK(bh35.classes == std::vector<uint64_t>{2, 8, 14});
  CHECK(bh35.tau() == 3);

  // tau formula: phi(d) - phi(v1) - phi(v2) + 1, always in [0, phi(d)).
  std::vector<std::pair<PrimePower, PrimePower>> pairs = {
      {{3, 1}, {2, 2}}, {{3, 2}, {5, 1}}, {{2, 3}, {7, 1}}, {{5, 2}, {3, 1}}, {{2, 4}, {3, 2}}};
  for (const auto& [a, b] : pairs) {
    ResidueSet bh = residue_set_BH(a, b);
    uint64_t expect = euler_phi_u64(bh.d) - a.phi() - b.phi() + 1;
    CHECK(bh.tau() == expect);
    CHECK(bh.tau() < euler_phi_u64(bh.d));
  }
  CHECK_THROWS_AS(residue_set_BH({3, 1}, {3, 2}), std::domain_error);
}

TEST_CASE("gamma spot values") {
  CHECK(gamma_real(1.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(gamma_real(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
  CHECK(gamma_real(1.5) == doctest::Approx(std::sqrt(std::numbers::pi) / 2).epsilon(1e-13));
  CHECK(gamma_real(2.0) == doctest::Approx(1.0).epsilon(1e-13));
  for (double z = 0.05; z < 2.0; z += 0.03) {
    CHECK(gamma_real(z) == doctest::Approx(std::tgamma(z)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(gamma_real(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_real(-2.0), std::domain_error);
}

TEST_CASE("delta degenerate cases") {
  // Empty set: zeta^0 times the empty product.
  ResidueSet empty{7, {}};
  CHECK(delta(empty, DeltaMethod::l_function).value == 1.0);

  // Full reduced class set mod d collapses to prod_{l | d} (1 - 1/l).
  for (uint64_t d : {4, 3, 8, 9, 12, 15}) {
    std::vector<uint64_t> all;
    for (uint64_t r = 1; r < d; ++r) {
      if (std::gcd(r, d) == 1) all.push_back(r);
    }
    double expect = 1.0;
    for (const Factor& f : factorize_u64(d)) expect *= 1.0 - 1.0 / static_cast<double>(f.p);
    DeltaResult res = delta(make_residue_set(d, all), DeltaMethod::l_function, 100000);
    CHECK(res.value == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("delta truncation stability and cross-method agreement for B_3") {
  ResidueSet b3 = residue_set_B({3, 1});
  DeltaResult lo = delta(b3, DeltaMethod::l_function, 100000);
  DeltaResult hi = delta(b3, DeltaMethod::l_function, 1000000);
  CHECK(std::abs(lo.value - hi.value) < 1e-6);
  CHECK(lo.error_estimate > 0.0);

  DeltaResult extrap = delta(b3, DeltaMethod::direct_extrapolation, 2000000);
  CHECK(std::abs(extrap.value - hi.value) < 1e-3);
}

TEST_CASE("delta against a hand-built Euler product for B_4") {
  // For d = 4 the character sum collapses: delta(B_4) = sqrt(2/pi) *
  // prod_{q = 3 mod 4} (1 - q^-2)^{-1/2}; assemble that directly.
  double log_prod = 0.0;
  for (uint32_t q : primes_up_to(2000000)) {
    if (q % 4 == 3) log_prod += -0.5 * std::log1p(-1.0 / (static_cast<double>(q) * q));
  }
  double tail = 0.5 * 0.5 / 2000000.0;  // crude bound on the rest
  double reference = std::sqrt(2.0 / std::numbers::pi) * std::exp(log_prod);
  DeltaResult res = delta(residue_set_B({2, 2}), DeltaMethod::l_function, 1000000);
  CHECK(std::abs(res.value - reference) < 1e-6 + tail);
}

TEST_CASE("k constant branches") {
  for (uint32_t k = 1; k <= 5; ++k) CHECK(k_constant({2, 1}, k) == 1.0);

  // K(3,1) = delta(B_3) * (4/3) / sqrt(pi)
  double d3 = delta(residue_set_B({3, 1}), DeltaMethod::l_function).value;
  CHECK(k_constant({3, 1}, 1) ==
        doctest::Approx(d3 * (4.0 / 3.0) / std::sqrt(std::numbers::pi)).epsilon(1e-12));

  // Rational prefactor for (p, a, k) = (3, 2, 2) is 26/108.
  double d9 = delta(residue_set_B({3, 2}), DeltaMethod::l_function).value;
  double k922 = k_constant({3, 2}, 2);
  double common = d9 / (1.0 * gamma_real(1.0 - 1.0 / 6.0));
  CHECK(k922 == doctest::Approx(common * 26.0 / 108.0).epsilon(1e-12));

  // p = 2, alpha >= 2 branch: K(4,1) = delta(B_4)/Gamma(1/2) * (2^4-1)/2^2.
  double d4 = delta(residue_set_B({2, 2}), DeltaMethod::l_function).value;
  CHECK(k_constant({2, 2}, 1) ==
        doctest::Approx(d4 / std::sqrt(std::numbers::pi) * 15.0 / 4.0).epsilon(1e-12));

  for (const PrimePower& pa : {PrimePower{3, 1}, PrimePower{2, 2}, PrimePower{5, 1},
                               PrimePower{2, 3}, PrimePower{3, 2}}) {
    for (uint32_t k = 1; k <= 3; ++k) CHECK(k_constant(pa, k) > 0.0);
  }
}

TEST_CASE("all-twos main term") {
  const double e = std::exp(1.0);
  double x = std::exp(e);
  CHECK(main_term_z2k(x, 2) == doctest::Approx(1.5 * std::exp(e - 1.0)).epsilon(1e-12));
  // term(k=3)/term(k=2) = loglog x
  for (double xx : {100.0, 1e6, 1e10}) {
    CHECK(main_term_z2k(xx, 3) / main_term_z2k(xx, 2) ==
          doctest::Approx(std::log(std::log(xx))).epsilon(1e-12));
  }
  // monotone in x
  for (uint32_t k = 2; k <= 5; ++k) {
    double prev = 0.0;
    for (double xx = 100.0; xx < 1e9; xx *= 1.7) {
      double v = main_term_z2k(xx, k);
      CHECK(v > prev);
      prev = v;
    }
  }
  CHECK_THROWS_AS(main_term_z2k(2.0, 2), std::domain_error);
  CHECK_THROWS_AS(main_term_z2k(100.0, 1), std::invalid_argument);
}

TEST_CASE("main term branch dispatch is total and exclusive") {
  CHECK(main_term_branch(G("Z2^3")) == MainTermBranch::AllTwos);
  CHECK(main_term_branch(G("Z3*Z4")) == MainTermBranch::TwoDominant);
  CHECK(main_term_branch(G("Z5^2*Z3")) == MainTermBranch::OneDominant);
  CHECK(main_term_branch(G("Z2^3*Z3")) == MainTermBranch::OneDominant);
  std::mt19937_64 rng(31);
  std::vector<uint32_t> primes = primes_up_to(50);
  for (int i = 0; i < 500; ++i) {
    std::vector<PrimePower> pps;
    int cnt = 1 + static_cast<int>(rng() % 4);
    for (int j = 0; j < cnt; ++j) {
      pps.push_back(PrimePower{primes[rng() % primes.size()], 1 + static_cast<uint32_t>(rng() % 3)});
    }
    FiniteAbelianGroup g = FiniteAbelianGroup::from_prime_powers(pps);
    MainTermBranch b = main_term_branch(g);
    size_t doms = dominant_summands(g).size();
    bool all_twos = g.summands().size() == 1 && g.summands()[0].p == 2 && g.summands()[0].alpha == 1;
    if (all_twos) {
      CHECK(b == MainTermBranch::AllTwos);
    } else {
      CHECK(b == (doms == 1 ? MainTermBranch::OneDominant : MainTermBranch::TwoDominant));
    }
  }
}

TEST_CASE("main term for two dominant summands") {
  MainTerm mt = main_term_general(1e6, G("Z3*Z4"));
  CHECK(mt.branch == MainTermBranch::TwoDominant);
  REQUIRE(mt.terms.size() == 2);
  double k3 = k_constant({3, 1}, 1);
  double k4 = k_constant({2, 2}, 1);
  double shape = 1e6 / std::sqrt(std::log(1e6));
  CHECK(mt.dominant_total == doctest::Approx((k3 + k4) * shape).epsilon(1e-12));
  CHECK(mt.total == doctest::Approx(mt.dominant_total).epsilon(1e-15));
  for (const MainTermEntry& e : mt.terms) CHECK(e.dominant);
}

TEST_CASE("main term with a unique dominant summand") {
  MainTerm mt = main_term_general(1e8, G("Z5^2*Z3"));
  CHECK(mt.branch == MainTermBranch::OneDominant);
  const double x = 1e8;
  const double lx = std::log(x);
  double expect = k_constant({5, 1}, 2) * x * std::log(lx) / std::pow(lx, 0.25);
  CHECK(mt.dominant_total == doctest::Approx(expect).epsilon(1e-12));
  CHECK(mt.total > mt.dominant_total);  // the Z_3 term joins the full sum
  // Dominant-term equality with the matching entry of the full list.
  double from_terms = 0.0;
  for (const MainTermEntry& e : mt.terms) {
    if (e.dominant) from_terms += e.value;
  }
  CHECK(mt.dominant_total == from_terms);
}

TEST_CASE("main term flags the K(2,k) placeholder") {
  MainTerm mt = main_term_general(1e6, G("Z2^3*Z3"));
  bool saw_placeholder = false;
  for (const MainTermEntry& e : mt.terms) {
    if (e.summand.p == 2 && e.summand.alpha == 1) {
      CHECK(e.placeholder);
      CHECK(!e.dominant);
      CHECK(e.coefficient == 1.0);
      saw_placeholder = true;
    }
  }
  CHECK(saw_placeholder);
  CHECK(main_term_branch(mt.group) == MainTermBranch::OneDominant);
}

TEST_CASE("main term rejects the trivial group, Z2 and tiny x") {
  CHECK_THROWS_AS(main_term_general(100.0, FiniteAbelianGroup{}), trivial_group_error);
  CHECK_THROWS_AS(main_term_general(100.0, G("Z2")), std::domain_error);
  CHECK_THROWS_AS(main_term_general(2.0, G("Z3")), std::domain_error);
}

TEST_CASE("rho exponent") {
  RhoResult r34 = error_exponent_rho({3, 1}, {2, 2});
  CHECK(r34.rho == doctest::Approx(0.75).epsilon(1e-15));
  RhoResult r35 = error_exponent_rho({3, 1}, {5, 1});
  CHECK(r35.rho == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(r35.excess_over_first == doctest::Approx(r35.rho - 0.5).epsilon(1e-15));
  // positivity of the excess whenever the first prime power is >= 3
  for (const auto& [a, b] : std::vector<std::pair<PrimePower, PrimePower>>{
           {{3, 1}, {2, 2}}, {{5, 1}, {3, 2}}, {{3, 2}, {7, 1}}, {{7, 1}, {2, 5}}}) {
    RhoResult r = error_exponent_rho(a, b);
    CHECK(r.excess_over_first > 0.0);
    CHECK(r.rho == doctest::Approx(1.0 / a.phi() + 1.0 / b.phi() - 1.0 / (a.phi() * b.phi())));
  }
  CHECK_THROWS_AS(error_exponent_rho({3, 1}, {3, 2}), std::domain_error);
}

TEST_CASE("delta caching is consistent") {
  ResidueSet b5 = residue_set_B({5, 1});
  DeltaResult first = delta(b5, DeltaMethod::l_function, 50000);
  DeltaResult again = delta(b5, DeltaMethod::l_function, 50000);
  CHECK(first.value == again.value);
}
