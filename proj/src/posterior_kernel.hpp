#pragma once

// Per-(c, m) evaluation of the Dirichlet posterior quantities shared by the
// estimators, the size likelihood and the NSB baseline.
//
// Counts are grouped by value so the cost per evaluation is proportional to
// the number of distinct counts, not the number of bins. Only c/m changes
// with m, so everything that depends on c alone is computed once per node.

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "unseen/model.hpp"
#include "unseen/specfun.hpp"

namespace unseen::detail {

// Below this count the rising-factorial identities are cheaper and more
// accurate than separate gamma-function calls.
inline constexpr Count kSmallCount = 16;

struct CountGroup {
  Count value;         // > 0
  double multiplicity;  // number of occupied bins holding `value`
};

struct GroupedCounts {
  std::vector<CountGroup> groups;
  Count total = 0;
  Count support = 0;

  explicit GroupedCounts(const CountVector& n) : total(n.total()), support(n.support_size()) {
    std::map<Count, Count> by_value;
    for (Count v : n.positive()) ++by_value[v];
    for (auto [v, k] : by_value) groups.push_back({v, static_cast<double>(k)});
  }
};

/// Quantities that depend on c only.
struct ConcentrationTerms {
  double c;
  double total_alpha;      // A = N + c
  double log_gamma_ratio;  // ln Gamma(c) - ln Gamma(N + c)
  double psi_a1;           // Psi0(A + 1)
  double psi_a2;           // Psi0(A + 2)
  double tri_a2;           // Psi1(A + 2)

  ConcentrationTerms(double c_, Count n_total) : c(c_) {
    const double N = static_cast<double>(n_total);
    total_alpha = N + c;
    log_gamma_ratio = n_total == 0 ? 0.0 : ln_gamma(c) - ln_gamma(N + c);
    psi_a1 = digamma(total_alpha + 1.0);
    psi_a2 = psi_a1 + 1.0 / (total_alpha + 1.0);
    tri_a2 = trigamma(total_alpha + 2.0);
  }
};

/// ln Gamma(n + beta) - ln Gamma(beta).
inline double log_rising(Count n, double beta) {
  if (n <= kSmallCount) {
    double prod = 1.0;
    for (Count j = 0; j < n; ++j) prod *= beta + static_cast<double>(j);
    return std::log(prod);
  }
  return ln_gamma(static_cast<double>(n) + beta) - ln_gamma(beta);
}

/// Psi0(n + beta + 1) given Psi0(beta + 1).
inline double digamma_shifted(Count n, double beta, double psi_beta1) {
  if (n <= kSmallCount) {
    double acc = psi_beta1;
    for (Count j = 1; j <= n; ++j) acc += 1.0 / (beta + static_cast<double>(j));
    return acc;
  }
  return digamma(static_cast<double>(n) + beta + 1.0);
}

/// Psi1(n + beta + 2) given Psi1(beta + 1).
inline double trigamma_shifted(Count n, double beta, double tri_beta1) {
  if (n <= kSmallCount) {
    double acc = tri_beta1;
    for (Count j = 1; j <= n + 1; ++j) {
      const double x = beta + static_cast<double>(j);
      acc -= 1.0 / (x * x);
    }
    return acc;
  }
  return trigamma(static_cast<double>(n) + beta + 2.0);
}

/// ln P(n | c, m) = ln Gamma(c) - M ln Gamma(c/m) + sum ln Gamma(n_i + c/m) - ln Gamma(N + c).
inline double log_likelihood(const GroupedCounts& g, const ConcentrationTerms& ct, double beta) {
  double acc = ct.log_gamma_ratio;
  for (const auto& grp : g.groups) acc += grp.multiplicity * log_rising(grp.value, beta);
  return acc;
}

/// Posterior mean of Shannon entropy (nats) for fixed (c, m).
inline double entropy_mean(const GroupedCounts& g, const ConcentrationTerms& ct, Count m) {
  const double beta = ct.c / static_cast<double>(m);
  const double psi_b1 = digamma(beta + 1.0);
  const double empty = static_cast<double>(m - g.support);
  double acc = empty * beta * (psi_b1 - ct.psi_a1);
  for (const auto& grp : g.groups) {
    const double alpha = static_cast<double>(grp.value) + beta;
    acc += grp.multiplicity * alpha * (digamma_shifted(grp.value, beta, psi_b1) - ct.psi_a1);
  }
  return -acc / ct.total_alpha;
}

/// Posterior first and second raw moments of Shannon entropy for fixed (c, m).
inline std::array<double, 2> entropy_moments(const GroupedCounts& g, const ConcentrationTerms& ct, Count m) {
  const double beta = ct.c / static_cast<double>(m);
  const double A = ct.total_alpha;
  const double psi_b1 = digamma(beta + 1.0);
  const double tri_b1 = trigamma(beta + 1.0);

  double mean_acc = 0.0;
  double sum_t = 0.0;      // sum_z alpha_z d_z
  double sum_t2 = 0.0;     // sum_z (alpha_z d_z)^2
  double sum_alpha2 = 0.0;  // sum_z alpha_z^2
  double diag = 0.0;

  auto add = [&](Count value, double mult) {
    const double alpha = static_cast<double>(value) + beta;
    const double psi1 = digamma_shifted(value, beta, psi_b1);  // Psi0(alpha + 1)
    const double tri2 = trigamma_shifted(value, beta, tri_b1);  // Psi1(alpha + 2)
    mean_acc += mult * alpha * (psi1 - ct.psi_a1);
    const double d = psi1 - ct.psi_a2;                // DeltaPhi1(alpha + 1, A + 2)
    const double d2 = d + 1.0 / (alpha + 1.0);        // DeltaPhi1(alpha + 2, A + 2)
    const double t = alpha * d;
    sum_t += mult * t;
    sum_t2 += mult * t * t;
    sum_alpha2 += mult * alpha * alpha;
    diag += mult * alpha * (alpha + 1.0) * (d2 * d2 + tri2 - ct.tri_a2);
  };

  const double empty = static_cast<double>(m - g.support);
  if (empty > 0.0) add(0, empty);
  for (const auto& grp : g.groups) add(grp.value, grp.multiplicity);

  const double cross = (sum_t * sum_t - sum_t2) - ct.tri_a2 * (A * A - sum_alpha2);
  return {-mean_acc / A, (cross + diag) / (A * (A + 1.0))};
}

/// Posterior mean of sum_i p_i^q for fixed (c, m).
inline double power_sum_mean(const GroupedCounts& g, const ConcentrationTerms& ct, Count m, double q) {
  const double beta = ct.c / static_cast<double>(m);
  const double A = ct.total_alpha;
  const double common = ln_gamma(A) - ln_gamma(A + q);
  auto moment = [&](double alpha) { return std::exp(ln_gamma(alpha + q) - ln_gamma(alpha) + common); };
  double acc = static_cast<double>(m - g.support) * moment(beta);
  for (const auto& grp : g.groups) acc += grp.multiplicity * moment(static_cast<double>(grp.value) + beta);
  return acc;
}

}  // namespace unseen::detail
