#pragma once

// Gamma-family special functions on the positive real axis.
//
// All functions shift small arguments upward with the functional recurrence
// and then evaluate an asymptotic (Stirling / Bernoulli) series. They throw
// std::domain_error for non-positive or non-finite input.

namespace unseen {

/// ln Gamma(x), x > 0.
double ln_gamma(double x);

/// Digamma Psi0(x) = d ln Gamma(x) / dx, x > 0.
double digamma(double x);

/// Trigamma Psi1(x), x > 0.
double trigamma(double x);

/// Tetragamma Psi2(x), x > 0.
double tetragamma(double x);

/// Psi0(z1) - Psi0(z2).
double delta_phi1(double z1, double z2);

/// Psi1(z1) - Psi1(z2).
double delta_phi2(double z1, double z2);

/// ln binomial(n, k) for 0 <= k <= n.
double ln_choose(double n, double k);

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

}  // namespace unseen
