#include "unseen/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace unseen {
namespace {

// Arguments are shifted to at least this value before the asymptotic series
// is applied. With eight Bernoulli terms the truncation error at 10 is far
// below double precision for every function here.
constexpr double kAsymptoticThreshold = 10.0;

// B_{2k} for k = 1..8.
constexpr std::array<double, 8> kBernoulli = {
    1.0 / 6.0,   -1.0 / 30.0, 1.0 / 42.0,     -1.0 / 30.0,
    5.0 / 66.0,  -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0,
};

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error(std::string(name) + ": argument must be positive and finite, got " +
                            std::to_string(x));
  }
}

double ln_gamma_asymptotic(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double power = inv;  // x^{-(2k-1)}
  for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
    series += kBernoulli[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * power;
    power *= inv2;
  }
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

double digamma_asymptotic(double x) {
  const double inv2 = 1.0 / (x * x);
  double series = 0.0;
  double power = inv2;  // x^{-2k}
  for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
    series += kBernoulli[k - 1] / (2.0 * k) * power;
    power *= inv2;
  }
  return std::log(x) - 0.5 / x - series;
}

double trigamma_asymptotic(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double power = inv2 * inv;  // x^{-(2k+1)}
  for (double b : kBernoulli) {
    series += b * power;
    power *= inv2;
  }
  return inv + 0.5 * inv2 + series;
}

double tetragamma_asymptotic(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double power = inv2 * inv2;  // x^{-(2k+2)}
  for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
    series += (2.0 * k + 1.0) * kBernoulli[k - 1] * power;
    power *= inv2;
  }
  return -inv2 - inv2 * inv - series;
}

}  // namespace

double ln_gamma(double x) {
  require_positive(x, "ln_gamma");
  if (x >= kAsymptoticThreshold) return ln_gamma_asymptotic(x);
  // Gamma(x) = Gamma(x + k) / (x (x+1) ... (x+k-1))
  double product = 1.0;
  double shifted = x;
  while (shifted < kAsymptoticThreshold) {
    product *= shifted;
    shifted += 1.0;
  }
  return ln_gamma_asymptotic(shifted) - std::log(product);
}

double digamma(double x) {
  require_positive(x, "digamma");
  double shift = 0.0;
  while (x < kAsymptoticThreshold) {
    shift += 1.0 / x;
    x += 1.0;
  }
  return digamma_asymptotic(x) - shift;
}

double trigamma(double x) {
  require_positive(x, "trigamma");
  double shift = 0.0;
  while (x < kAsymptoticThreshold) {
    shift += 1.0 / (x * x);
    x += 1.0;
  }
  return trigamma_asymptotic(x) + shift;
}

double tetragamma(double x) {
  require_positive(x, "tetragamma");
  double shift = 0.0;
  while (x < kAsymptoticThreshold) {
    shift += 2.0 / (x * x * x);
    x += 1.0;
  }
  return tetragamma_asymptotic(x) - shift;
}

double delta_phi1(double z1, double z2) {
  if (z1 == z2) {
    require_positive(z1, "delta_phi1");
    return 0.0;
  }
  return digamma(z1) - digamma(z2);
}

double delta_phi2(double z1, double z2) {
  if (z1 == z2) {
    require_positive(z1, "delta_phi2");
    return 0.0;
  }
  return trigamma(z1) - trigamma(z2);
}

double ln_choose(double n, double k) {
  if (k < 0.0 || k > n) throw std::invalid_argument("ln_choose: require 0 <= k <= n");
  if (k == 0.0 || k == n) return 0.0;
  return ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0);
}

}  // namespace unseen
