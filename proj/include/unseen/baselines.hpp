#pragma once

// Reference entropy estimators used for comparison.

#include "unseen/model.hpp"

namespace unseen {

/// Maximum-likelihood (plug-in) entropy of the empirical frequencies.
double plugin_entropy(const CountVector& n);

/// Coverage-adjusted estimator (Chao-Shen style): Good-Turing coverage with
/// an N + 1 denominator, then a Horvitz-Thompson correction per bin.
double cae_entropy(const CountVector& n);

/// NSB estimator with the bin count fixed at k_max: the fixed-(c, k_max)
/// posterior mean averaged over c with weight P(n | c, k_max) d xi / dc,
/// where xi(c) is the prior mean entropy.
double nsb_large_z_entropy(const CountVector& n, Count k_max);

/// Coincidence-based asymptotic NSB estimate for an unknown, large number
/// of bins. Throws std::domain_error when there are no coincidences.
double asymptotic_nsb_entropy(const CountVector& n);

}  // namespace unseen
