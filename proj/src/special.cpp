#include "unitcensus/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace unitcensus {

double gamma_real(double z) {
  if (z <= 0.0 && z == std::floor(z)) throw std::domain_error("gamma pole at non-positive integer");
  if (z < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * z) * gamma_real(1.0 - z));
  }
  static const double coeff[9] = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  z -= 1.0;
  double x = coeff[0];
  for (int i = 1; i < 9; ++i) x += coeff[i] / (z + i);
  double t = z + 7.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

double digamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) throw std::domain_error("digamma pole");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  // Asymptotic series with Bernoulli numbers B_2..B_14.
  double inv = 1.0 / x;
  double inv2 = inv * inv;
  double series = inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12))))));
  return acc + std::log(x) - 0.5 * inv - series;
}

double riemann_zeta(double s) {
  if (s <= 1.0) throw std::domain_error("zeta evaluated at s <= 1");
  constexpr int N = 24;
  double sum = 0.0;
  for (int n = 1; n < N; ++n) sum += std::pow(n, -s);
  sum += 0.5 * std::pow(N, -s);
  sum += std::pow(N, 1.0 - s) / (s - 1.0);
  // Euler-Maclaurin tail: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
  static const double bern[8] = {1.0 / 6,  -1.0 / 30,      1.0 / 42, -1.0 / 30,
                                 5.0 / 66, -691.0 / 2730, 7.0 / 6,  -3617.0 / 510};
  double poch = s;            // rising factorial s(s+1)...
  double fact = 2.0;          // (2k)!
  double npow = std::pow(N, -s - 1.0);
  for (int k = 1; k <= 8; ++k) {
    sum += bern[k - 1] / fact * poch * npow;
    // advance to k+1
    poch *= (s + 2 * k - 1) * (s + 2 * k);
    fact *= (2 * k + 1) * (2 * k + 2);
    npow /= static_cast<double>(N) * N;
  }
  return sum;
}

double exp_integral_e1(double x) {
  if (x <= 0.0) throw std::domain_error("E1 requires x > 0");
  if (x <= 6.0) {
    // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k * k!)
    constexpr double egamma = 0.57721566490153286060651209;
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 80; ++k) {
      term *= -x / k;
      double add = -term / k;
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return -egamma - std::log(x) + sum;
  }
  // Continued fraction (Lentz).
  double b = x + 1.0, c = 1e308, d = 1.0 / b, h = d;
  for (int i = 1; i <= 200; ++i) {
    double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

double richardson_halving(const std::vector<double>& samples) {
  if (samples.empty()) throw std::invalid_argument("richardson: no samples");
  std::vector<double> t = samples;
  const size_t n = t.size();
  for (size_t m = 1; m < n; ++m) {
    double pw = std::pow(2.0, static_cast<double>(m));
    for (size_t j = n - 1; j >= m; --j) {
      t[j] = t[j] + (t[j] - t[j - 1]) / (pw - 1.0);
      if (j == m) break;
    }
  }
  return t[n - 1];
}

}  // namespace unitcensus
