#include "unitcensus/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numeric>

#include "unitcensus/dirichlet.hpp"
#include "unitcensus/nt.hpp"
#include "unitcensus/special.hpp"

namespace unitcensus {

ResidueSet residue_set_B(const PrimePower& pa) {
  const uint64_t v = pa.value();
  if (v < 3) throw std::domain_error("B_{p^alpha} needs p^alpha >= 3");
  std::vector<uint64_t> classes;
  for (uint64_t r = 2; r < v; ++r) {
    if (r % pa.p != 0) classes.push_back(r);
  }
  return make_residue_set(v, std::move(classes));
}

ResidueSet residue_set_BH(const PrimePower& p1b1, const PrimePower& p2b2) {
  if (p1b1.p == p2b2.p) throw std::domain_error("B_H needs distinct primes");
  const uint64_t v1 = p1b1.value();
  const uint64_t v2 = p2b2.value();
  unsigned __int128 prod = static_cast<unsigned __int128>(v1) * v2;
  if (prod > UINT64_MAX) throw std::overflow_error("B_H modulus exceeds 64 bits");
  const auto d = static_cast<uint64_t>(prod);
  std::vector<uint64_t> classes;
  for (uint64_t r = 1; r < d; ++r) {
    if (std::gcd(r, d) != 1) continue;
    if (r % v1 != 1 && r % v2 != 1) classes.push_back(r);
  }
  return make_residue_set(d, std::move(classes));
}

namespace {

struct DeltaKey {
  uint64_t d;
  std::vector<uint64_t> classes;
  DeltaMethod method;
  uint64_t Q;

  bool operator<(const DeltaKey& o) const {
    return std::tie(d, method, Q, classes) < std::tie(o.d, o.method, o.Q, o.classes);
  }
};

std::mutex delta_cache_mutex;
std::map<DeltaKey, DeltaResult>& delta_cache() {
  static std::map<DeltaKey, DeltaResult> cache;
  return cache;
}

DeltaResult delta_l_function(const ResidueSet& B, uint64_t Q) {
  const uint64_t d = B.d;
  const auto tau = static_cast<double>(B.tau());
  auto group = std::make_shared<const CharacterGroup>(d);
  const auto phi = static_cast<double>(group->phi());
  const size_t nchi = group->num_characters();

  // a_chi = (1/phi) sum_{c in B} conj(chi(c))
  std::vector<std::complex<double>> a(nchi, 0.0);
  for (size_t chi = 0; chi < nchi; ++chi) {
    std::complex<double> s = 0.0;
    for (uint64_t c : B.classes) s += std::conj(group->value(chi, c));
    a[chi] = s / phi;
  }

  std::complex<double> log_delta = 0.0;
  for (const Factor& f : factorize_u64(d)) {
    log_delta += (tau / phi) * std::log1p(-1.0 / static_cast<double>(f.p));
  }
  for (size_t chi = 1; chi < nchi; ++chi) {
    log_delta += a[chi] * std::log(l_value(DirichletCharacter(group, chi)));
  }
  // Local corrections E_q, each 1 + O(q^-2).
  for (uint32_t q : primes_up_to(static_cast<uint32_t>(Q))) {
    if (d % q == 0) continue;  // chi(q) = 0 for every chi: E_q = 1
    const double invq = 1.0 / q;
    std::complex<double> lq = 0.0;
    for (size_t chi = 0; chi < nchi; ++chi) {
      lq += a[chi] * std::log(1.0 - group->value(chi, q) * invq);
    }
    if (B.contains(q)) lq -= std::log1p(-invq);
    log_delta += lq;
  }
  if (std::abs(log_delta.imag()) > 1e-10) {
    throw std::logic_error("delta: imaginary parts failed to cancel (character table bug?)");
  }
  DeltaResult res;
  res.value = std::exp(log_delta.real());
  res.method = DeltaMethod::l_function;
  res.truncation_Q = Q;
  res.error_estimate = (1.0 + tau) / static_cast<double>(Q);
  return res;
}

DeltaResult delta_extrapolated(const ResidueSet& B, uint64_t Q) {
  const auto tau = static_cast<double>(B.tau());
  const double phi = static_cast<double>(euler_phi_u64(B.d));
  const double logQ = std::log(static_cast<double>(Q));

  std::vector<double> member_logs;  // log q for primes q in B up to Q
  for (uint32_t q : primes_up_to(static_cast<uint32_t>(Q))) {
    if (B.contains(q)) member_logs.push_back(std::log(static_cast<double>(q)));
  }

  std::vector<double> samples;
  double eps = 0.1;
  for (int j = 0; j < 5; ++j, eps /= 2) {
    const double s = 1.0 + eps;
    CompensatedSum sum;
    for (double lq : member_logs) sum.add(-std::log1p(-std::exp(-s * lq)));
    // Primes beyond Q enter through the density integral
    // int_Q^inf t^-s dt/log t = E1(eps log Q).
    double g = -(tau / phi) * std::log(riemann_zeta(s)) + sum.value() +
               (tau / phi) * exp_integral_e1(eps * logQ);
    samples.push_back(g);
  }
  double extrapolated = richardson_halving(samples);

  DeltaResult res;
  res.value = std::exp(extrapolated);
  res.method = DeltaMethod::direct_extrapolation;
  res.truncation_Q = Q;
  // Dominated by the prime-count fluctuation beyond Q; report the last
  // Richardson correction as the observable part.
  res.error_estimate = std::abs(extrapolated - samples.back()) * 1e-2 + 1e-4;
  return res;
}

}  // namespace

DeltaResult delta(const ResidueSet& B, DeltaMethod method, uint64_t Q) {
  if (Q < 1000) throw std::invalid_argument("delta: truncation Q must be >= 1000");
  if (B.tau() == 0) {
    return DeltaResult{1.0, method, Q, 0.0};
  }
  DeltaKey key{B.d, B.classes, method, Q};
  {
    std::lock_guard<std::mutex> lock(delta_cache_mutex);
    auto it = delta_cache().find(key);
    if (it != delta_cache().end()) return it->second;
  }
  DeltaResult res = method == DeltaMethod::l_function ? delta_l_function(B, Q)
                                                      : delta_extrapolated(B, Q);
  std::lock_guard<std::mutex> lock(delta_cache_mutex);
  return delta_cache().emplace(key, res).first->second;
}

double k_constant(const PrimePower& pa, uint32_t k, uint64_t Q) {
  if (k < 1) throw std::invalid_argument("k_constant: k must be >= 1");
  if (pa.value() == 2) return 1.0;
  const double dlt = delta(residue_set_B(pa), DeltaMethod::l_function, Q).value;
  const auto phi = static_cast<double>(pa.phi());
  double fact = 1.0;
  for (uint32_t i = 2; i < k; ++i) fact *= i;
  const double common = dlt / (fact * gamma_real(1.0 - 1.0 / phi));
  const auto p = static_cast<double>(pa.p);
  const double alpha = pa.alpha;
  double rational;
  if (pa.p >= 3) {
    rational = (std::pow(p, alpha + 1) - 1.0) /
               (std::pow(p, k * (alpha - 1) + 1) * std::pow(p - 1.0, k));
  } else {
    rational = (std::pow(2.0, alpha + 2) - 1.0) / std::pow(2.0, k * (alpha - 1) + 2);
  }
  return common * rational;
}

double main_term_z2k(double x, uint32_t k) {
  if (k < 2) throw std::invalid_argument("all-twos main term needs k >= 2");
  if (!(x > std::exp(1.0))) throw std::domain_error("main term needs x > e");
  const double lx = std::log(x);
  const double llx = std::log(lx);
  double fact = 1.0;
  for (uint32_t i = 2; i <= k - 2; ++i) fact *= i;
  return 1.5 / fact * x * std::pow(llx, static_cast<double>(k) - 2.0) / lx;
}

MainTermBranch main_term_branch(const FiniteAbelianGroup& G) {
  const std::vector<GatheredSummand>& gs = gathered_summands(G);
  if (gs.size() == 1 && gs[0].p == 2 && gs[0].alpha == 1) return MainTermBranch::AllTwos;
  return dominant_summands(G).size() == 1 ? MainTermBranch::OneDominant
                                          : MainTermBranch::TwoDominant;
}

MainTerm main_term_general(double x, const FiniteAbelianGroup& G, uint64_t Q) {
  MainTerm mt;
  mt.x = x;
  mt.group = G;
  mt.branch = main_term_branch(G);

  if (mt.branch == MainTermBranch::AllTwos) {
    const GatheredSummand s = G.summands().front();
    if (s.k < 2) {
      throw std::domain_error("Z2 itself has no asymptotic main term (the count is eventually constant)");
    }
    double fact = 1.0;
    for (uint32_t i = 2; i <= s.k - 2; ++i) fact *= i;
    MainTermEntry e;
    e.summand = s;
    e.coefficient = 1.5 / fact;
    e.value = main_term_z2k(x, s.k);
    e.dominant = true;
    mt.terms.push_back(e);
    mt.total = mt.dominant_total = e.value;
    return mt;
  }

  if (!(x > std::exp(1.0))) throw std::domain_error("main term needs x > e");
  const double lx = std::log(x);
  const double llx = std::log(lx);
  const std::vector<GatheredSummand> dom = dominant_summands(G);
  for (const GatheredSummand& s : G.summands()) {
    MainTermEntry e;
    e.summand = s;
    e.coefficient = k_constant(s.prime_power(), s.k, Q);
    e.value = e.coefficient * x * std::pow(llx, static_cast<double>(s.k) - 1.0) /
              std::pow(lx, 1.0 / static_cast<double>(s.prime_power().phi()));
    e.dominant = std::find(dom.begin(), dom.end(), s) != dom.end();
    e.placeholder = s.p == 2 && s.alpha == 1;
    mt.total += e.value;
    if (e.dominant) mt.dominant_total += e.value;
    mt.terms.push_back(e);
  }
  return mt;
}

RhoResult error_exponent_rho(const PrimePower& p1b1, const PrimePower& p2b2) {
  if (p1b1.p == p2b2.p) throw std::domain_error("rho needs distinct primes");
  const auto phi1 = static_cast<double>(p1b1.phi());
  const auto phi2 = static_cast<double>(p2b2.phi());
  RhoResult r;
  r.rho = 1.0 / phi1 + 1.0 / phi2 - 1.0 / (phi1 * phi2);
  r.excess_over_first = (1.0 - 1.0 / phi1) / phi2;
  return r;
}

const char* to_string(DeltaMethod m) {
  return m == DeltaMethod::l_function ? "l-function" : "direct-extrapolation";
}

const char* to_string(MainTermBranch b) {
  switch (b) {
    case MainTermBranch::AllTwos: return "all-twos";
    case MainTermBranch::OneDominant: return "one-dominant";
    default: return "two-dominant";
  }
}

}  // namespace unitcensus
