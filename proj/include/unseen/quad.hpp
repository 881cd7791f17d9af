#pragma once

// Quadrature over the concentration c and truncated summation over the
// event-space size m.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "unseen/errors.hpp"
#include "unseen/model.hpp"

namespace unseen {

inline constexpr int kDefaultQuadNodes = 200;

struct QuadNode {
  double c;
  double log_weight;
};

/// Quadrature rule for integrals against a ConcentrationPrior. Weights
/// include the prior density and sum to one.
struct LogGrid {
  std::vector<QuadNode> nodes;
};

/// Gauss-Legendre abscissae and weights on [-1, 1], ascending.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// Point mass: a single node of weight 1. LogUniform: n_nodes-point
/// Gauss-Legendre in u = ln c over [ln c_min, ln c_max].
LogGrid c_grid(const ConcentrationPrior& prior, int n_nodes = kDefaultQuadNodes);

/// ln sum exp(terms); -inf terms are allowed.
double log_sum_exp(std::span<const double> terms);

struct SizeSumOptions {
  /// The caller guarantees that the term log-weight is non-increasing in m.
  /// This licenses stopping once the rest of the prior mass, weighted by the
  /// current term, is negligible, even for bounded priors.
  bool nonincreasing_weights = false;
  double relative_tail = 1e-12;
  Count hard_limit = 200'000'000;
};

template <std::size_t K>
struct SizeSumResult {
  std::array<double, K> expectation{};
  /// ln sum_m P(m) exp(log-weight(m)) over the summed terms.
  double log_mass = 0.0;
  /// Upper bound on the neglected mass relative to the summed mass.
  double tail_bound = 0.0;
  Count terms = 0;
  Count first_m = 0;
  Count last_m = 0;
};

/// Normalized mixture sum_m w(m) payload(m) / sum_m w(m) over m >= max(M, 1)
/// with w(m) = P(m) exp(log_weight(m)). `term(m)` returns the pair
/// (log_weight, payload). Payloads are vectors of K reals that share weights.
///
/// Bounded priors are summed over their full support unless
/// `nonincreasing_weights` is set; the exponential prior is extended until
/// the remaining prior tail, times the largest (or, with the flag, the
/// current) term weight, drops below `relative_tail` of the summed mass.
template <std::size_t K, class Term>
SizeSumResult<K> size_sum_n(const SizePrior& prior, Count M, Term&& term, SizeSumOptions opts = {}) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const Count start = std::max({M, Count{1}, prior.min_support()});
  const auto max_m = prior.max_support();
  if (max_m && *max_m < start) {
    throw SupportExhausted("size prior support ends at " + std::to_string(*max_m) + " but " +
                           std::to_string(M) + " bins are occupied");
  }
  const double log_rel = std::log(opts.relative_tail);

  SizeSumResult<K> out;
  out.first_m = start;
  double shift = kNegInf;  // running max of total log-weights
  double mass = 0.0;       // sum exp(lw - shift)
  std::array<double, K> acc{};
  double max_term_lw = kNegInf;

  for (Count m = start;; ++m) {
    if (m - start >= opts.hard_limit) {
      throw std::runtime_error("size_sum: series did not converge within the term limit");
    }
    const double lp = prior.log_prob(m);
    if (lp == kNegInf) {
      if (max_m && m >= *max_m) break;
      continue;
    }
    const auto [term_lw, payload] = term(m);
    const double lw = lp + term_lw;
    ++out.terms;
    out.last_m = m;
    if (lw > kNegInf) {
      if (lw > shift) {
        const double scale = shift == kNegInf ? 0.0 : std::exp(shift - lw);
        mass *= scale;
        for (auto& a : acc) a *= scale;
        shift = lw;
      }
      const double w = std::exp(lw - shift);
      mass += w;
      for (std::size_t k = 0; k < K; ++k) acc[k] += w * payload[k];
    }
    max_term_lw = std::max(max_term_lw, term_lw);

    if (max_m && m >= *max_m) break;
    const bool may_stop = opts.nonincreasing_weights || !max_m;
    if (may_stop && mass > 0.0) {
      const double tail = prior.tail_mass(m);
      if (tail <= 0.0) break;
      const double bound_lw = opts.nonincreasing_weights ? term_lw : max_term_lw;
      const double log_rel_tail = std::log(tail) + bound_lw - (shift + std::log(mass));
      if (log_rel_tail < log_rel) {
        out.tail_bound = std::exp(log_rel_tail);
        break;
      }
    }
  }
  if (!(mass > 0.0)) throw SupportExhausted("size_sum: every admissible size has zero weight");
  for (std::size_t k = 0; k < K; ++k) out.expectation[k] = acc[k] / mass;
  out.log_mass = shift + std::log(mass);
  return out;
}

struct SizeSum {
  double expectation;
  double tail_bound;
  Count terms;
};

/// Scalar-payload form of size_sum_n.
SizeSum size_sum(const SizePrior& prior, Count M,
                 const std::function<std::pair<double, double>(Count)>& term, SizeSumOptions opts = {});

}  // namespace unseen
