#pragma once

// Scalar special functions needed by the constant evaluations. All plain
// double precision; accuracy notes at each definition.

#include <vector>

namespace unitcensus {

// Gamma on the positive reals (reflection below 1/2), Lanczos g=7 kernel.
// Relative error below 1e-13 on (0, 2).
double gamma_real(double z);

// Digamma via upward recurrence to z >= 10 plus the Bernoulli asymptotic
// series; absolute error ~1e-14 for moderate arguments.
double digamma(double x);

// Riemann zeta for s > 1 (Euler-Maclaurin).
double riemann_zeta(double s);

// Exponential integral E1(x) for x > 0 (series for small x, continued
// fraction beyond).
double exp_integral_e1(double x);

// Richardson extrapolation to h -> 0 for samples g(h0/2^j), j = 0..n-1,
// assuming an error expansion in integer powers of h. Returns the last
// tableau entry.
double richardson_halving(const std::vector<double>& samples);

}  // namespace unitcensus
