#include "unseen/likelihood.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "posterior_kernel.hpp"
#include "unseen/specfun.hpp"

namespace unseen {
namespace {

void check_size(const CountVector& n, Count m) {
  if (m < 1 || m < n.support_size()) {
    throw std::invalid_argument("number of bins " + std::to_string(m) + " is below the observed support " +
                                std::to_string(n.support_size()));
  }
}

SizePosterior finalize(std::vector<Count> sizes, const std::vector<double>& log_post) {
  SizePosterior out;
  const double norm = log_sum_exp(log_post);
  out.sizes = std::move(sizes);
  out.probabilities.reserve(log_post.size());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < log_post.size(); ++i) {
    const double p = std::exp(log_post[i] - norm);
    out.probabilities.push_back(p);
    out.mean += p * static_cast<double>(out.sizes[i]);
    if (log_post[i] > best) {
      best = log_post[i];
      out.map = out.sizes[i];
    }
  }
  return out;
}

}  // namespace

double log_likelihood_size(const CountVector& n, double c, Count m) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("concentration must be positive");
  check_size(n, m);
  const detail::GroupedCounts g(n);
  return detail::log_likelihood(g, detail::ConcentrationTerms(c, g.total), c / static_cast<double>(m));
}

double log_likelihood_size_marginal_c(const CountVector& n, Count m, const ConcentrationPrior& c_prior,
                                      int quad_nodes) {
  check_size(n, m);
  const detail::GroupedCounts g(n);
  const LogGrid grid = c_grid(c_prior, quad_nodes);
  std::vector<double> terms;
  terms.reserve(grid.nodes.size());
  for (const auto& node : grid.nodes) {
    terms.push_back(node.log_weight +
                    detail::log_likelihood(g, detail::ConcentrationTerms(node.c, g.total),
                                           node.c / static_cast<double>(m)));
  }
  return log_sum_exp(terms);
}

SizePosterior size_posterior(const CountVector& n, const ConcentrationPrior& c_prior, const SizePrior& size_prior,
                             int quad_nodes) {
  const detail::GroupedCounts g(n);
  const LogGrid grid = c_grid(c_prior, quad_nodes);
  std::vector<detail::ConcentrationTerms> terms;
  for (const auto& node : grid.nodes) terms.emplace_back(node.c, g.total);

  std::vector<Count> sizes;
  std::vector<double> log_post;
  std::vector<double> scratch(grid.nodes.size());
  auto term = [&](Count m) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      scratch[i] = grid.nodes[i].log_weight +
                   detail::log_likelihood(g, terms[i], terms[i].c / static_cast<double>(m));
    }
    const double ll = log_sum_exp(scratch);
    sizes.push_back(m);
    log_post.push_back(ll + size_prior.log_prob(m));
    return std::pair<double, std::array<double, 1>>{ll, {static_cast<double>(m)}};
  };
  SizeSumOptions opts;
  opts.nonincreasing_weights = true;
  opts.relative_tail = 1e-15;
  // Bounded priors keep every support point so the reported distribution is
  // complete; only unbounded ones are truncated.
  if (size_prior.max_support()) opts.nonincreasing_weights = false;
  const auto r = size_sum_n<1>(size_prior, g.support, term, opts);

  SizePosterior out = finalize(std::move(sizes), log_post);
  out.tail_bound = r.tail_bound;
  return out;
}

double subset_log_likelihood(const CountVector& n, Count m, Count zhat_size, double c) {
  const Count M = n.support_size();
  if (m < M || m < 1) throw std::invalid_argument("subset likelihood: m below the observed support");
  if (m > zhat_size) throw std::invalid_argument("subset likelihood: m exceeds the superset size");
  return ln_choose(static_cast<double>(zhat_size - M), static_cast<double>(m - M)) + log_G(n, c, m);
}

double subset_log_likelihood_normalized(const CountVector& n, Count m, Count zhat_size, double c) {
  const CountVector empty;
  return subset_log_likelihood(n, m, zhat_size, c) -
         ln_choose(static_cast<double>(zhat_size), static_cast<double>(m)) - log_G(empty, c, m);
}

SizePosterior subset_size_posterior(const CountVector& n, Count zhat_size, double c) {
  const Count start = std::max<Count>(n.support_size(), 1);
  if (zhat_size < start) throw SupportExhausted("superset is smaller than the observed support");
  std::vector<Count> sizes;
  std::vector<double> log_post;
  for (Count m = start; m <= zhat_size; ++m) {
    sizes.push_back(m);
    log_post.push_back(subset_log_likelihood_normalized(n, m, zhat_size, c));
  }
  return finalize(std::move(sizes), log_post);
}

double prior_entropy_variance(double c, Count m) {
  if (!(c > 0.0)) throw std::invalid_argument("concentration must be positive");
  if (m < 1) throw std::invalid_argument("number of bins must be >= 1");
  if (m == 1) return 0.0;
  const double beta = c / static_cast<double>(m);
  return (beta + 1.0) / (c + 1.0) * trigamma(beta + 1.0) - trigamma(c + 1.0);
}

double c_max(std::optional<Count> m) {
  const Count bins = m.value_or(kInfiniteBins);
  if (bins < 2) throw std::invalid_argument("c_max needs at least two bins");
  constexpr double kLo = 1e-4;
  constexpr double kHi = 1e2;
  // Coarse log-spaced scan to bracket the maximum, then golden section.
  constexpr int kScan = 400;
  const double step = std::log(kHi / kLo) / kScan;
  int best = 0;
  double best_v = -1.0;
  for (int i = 0; i <= kScan; ++i) {
    const double v = prior_entropy_variance(kLo * std::exp(step * i), bins);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  double a = kLo * std::exp(step * std::max(best - 1, 0));
  double b = kLo * std::exp(step * std::min(best + 1, kScan));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = prior_entropy_variance(x1, bins);
  double f2 = prior_entropy_variance(x2, bins);
  while (b - a > 1e-9) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = prior_entropy_variance(x2, bins);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = prior_entropy_variance(x1, bins);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace unseen
