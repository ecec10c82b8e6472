#pragma once

#include <cstdint>
#include <random>

namespace eloline::num {

// Standard normal CDF.
double normal_cdf(double z);

// Inverse error function on (-1, 1), accurate to a few ulp (rational
// initial guess refined by Newton steps against std::erf). Odd by
// construction: erf_inv(-x) == -erf_inv(x) exactly.
double erf_inv(double x);

// Inverse standard normal CDF, p in (0, 1).
double normal_quantile(double p);

using Rng = std::mt19937_64;

// Decorrelated substream: same (seed, stream) always yields the same
// generator state.
Rng seeded(std::uint64_t seed, std::uint64_t stream = 0);

// Uniform double in [0, 1) with 53 random bits. Hand-rolled so results do
// not depend on the standard library's distribution implementations.
double uniform01(Rng& rng);

// Uniform integer in [0, n). Rejection-free modulo with widening multiply.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

// Poisson sample by Knuth's product-of-uniforms method. Requires
// 0 < lambda < 700 (exp(-lambda) must not underflow).
int poisson(Rng& rng, double lambda);

}  // namespace eloline::num
