#pragma once

// Likelihood of the event-space size, posteriors over it, the
// subset-selection variant, and the concentration that maximizes the prior
// variance of entropy.

#include <optional>
#include <vector>

#include "unseen/model.hpp"
#include "unseen/quad.hpp"

namespace unseen {

/// ln P(n | c, m) = ln Gamma(c) - M ln Gamma(c/m) + sum_i ln Gamma(n_i + c/m) - ln Gamma(N + c).
double log_likelihood_size(const CountVector& n, double c, Count m);

/// ln of the integral of P(n | c, m) P(c) over c.
double log_likelihood_size_marginal_c(const CountVector& n, Count m, const ConcentrationPrior& c_prior,
                                      int quad_nodes = kDefaultQuadNodes);

struct SizePosterior {
  std::vector<Count> sizes;
  std::vector<double> probabilities;
  double mean = 0.0;
  Count map = 0;
  /// Bound on the prior-weighted likelihood mass left out of a truncated
  /// (unbounded-prior) posterior, relative to the retained mass.
  double tail_bound = 0.0;
};

/// P(m | n) proportional to P(m) P(n | m), with P(n | m) either at a fixed c
/// or integrated over the concentration prior.
SizePosterior size_posterior(const CountVector& n, const ConcentrationPrior& c_prior, const SizePrior& size_prior,
                             int quad_nodes = kDefaultQuadNodes);

/// ln[ binom(|Zhat| - M, m - M) G(n, c, m) ]: the subset-selection
/// likelihood up to factors that depend on m but not on n.
double subset_log_likelihood(const CountVector& n, Count m, Count zhat_size, double c);

/// ln P(n | m, Zhat) with every m-dependent factor retained, i.e.
/// binom(|Zhat| - M, m - M) / binom(|Zhat|, m) * G(n, c, m) / G(0, c, m).
/// Use this form to compare sizes.
double subset_log_likelihood_normalized(const CountVector& n, Count m, Count zhat_size, double c);

/// Posterior over m in [M, |Zhat|] under the subset-selection model with a
/// uniform P(m | Zhat).
SizePosterior subset_size_posterior(const CountVector& n, Count zhat_size, double c);

/// Prior variance of entropy under a symmetric Dirichlet with total
/// concentration c over m bins.
double prior_entropy_variance(double c, Count m);

/// Stand-in bin count for the m -> infinity limit of c_max.
inline constexpr Count kInfiniteBins = 1'000'000;

/// Concentration in [1e-4, 1e2] that maximizes prior_entropy_variance(c, m).
/// Pass nullopt for the infinite-bin limit.
double c_max(std::optional<Count> m);

}  // namespace unseen
