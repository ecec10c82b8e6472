#include "eloline/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace eloline::num {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kTwoOverSqrtPi = 1.1283791670955126;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Polynomial initial guess (relative error ~1e-7 on the whole range).
double erf_inv_guess(double x) {
  double w = -std::log((1.0 - x) * (1.0 + x));
  double p;
  if (w < 5.0) {
    w -= 2.5;
    p = 2.81022636e-08;
    p = 3.43273939e-07 + p * w;
    p = -3.5233877e-06 + p * w;
    p = -4.39150654e-06 + p * w;
    p = 0.00021858087 + p * w;
    p = -0.00125372503 + p * w;
    p = -0.00417768164 + p * w;
    p = 0.246640727 + p * w;
    p = 1.50140941 + p * w;
  } else {
    w = std::sqrt(w) - 3.0;
    p = -0.000200214257;
    p = 0.000100950558 + p * w;
    p = 0.00134934322 + p * w;
    p = -0.00367342844 + p * w;
    p = 0.00573950773 + p * w;
    p = -0.0076224613 + p * w;
    p = 0.00943887047 + p * w;
    p = 1.00167406 + p * w;
    p = 2.83297682 + p * w;
  }
  return p * x;
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double erf_inv(double x) {
  if (!(x > -1.0 && x < 1.0)) throw std::domain_error("erf_inv argument must lie in (-1, 1)");
  if (x == 0.0) return 0.0;
  double ax = std::abs(x);
  double y = erf_inv_guess(ax);
  for (int i = 0; i < 2; ++i) {
    double err = std::erf(y) - ax;
    y -= err / (kTwoOverSqrtPi * std::exp(-y * y));
  }
  return std::copysign(y, x);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile argument must lie in (0, 1)");
  return kSqrt2 * erf_inv(2.0 * p - 1.0);
}

Rng seeded(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  return Rng(mix64(mix64(s)));
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below requires n > 0");
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * static_cast<unsigned __int128>(n)) >> 64);
}

int poisson(Rng& rng, double lambda) {
  if (!(lambda > 0.0 && lambda < 700.0)) {
    throw std::invalid_argument("poisson lambda must lie in (0, 700)");
  }
  double limit = std::exp(-lambda);
  int k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform01(rng);
  } while (p > limit);
  return k - 1;
}

}  // namespace eloline::num
