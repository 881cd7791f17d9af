#include "unseen/baselines.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "posterior_kernel.hpp"
#include "unseen/quad.hpp"
#include "unseen/specfun.hpp"

namespace unseen {
namespace {

void require_samples(const CountVector& n, const char* who) {
  if (n.total() < 1) throw std::invalid_argument(std::string(who) + ": no samples");
}

// Integration range in ln c for the NSB average. The weight d xi behaves
// like c near zero and like k_max / (2 c^2) for c >> k_max, so the
// neglected tails are below 1e-8 of the total.
constexpr double kNsbLogCLow = -18.42;  // ln 1e-8
constexpr double kNsbLogCHighOverK = 18.42;
constexpr int kNsbNodes = 600;

}  // namespace

double plugin_entropy(const CountVector& n) {
  require_samples(n, "plugin_entropy");
  const double N = static_cast<double>(n.total());
  double h = 0.0;
  for (Count v : n.positive()) {
    const double p = static_cast<double>(v) / N;
    h -= p * std::log(p);
  }
  return h;
}

double cae_entropy(const CountVector& n) {
  require_samples(n, "cae_entropy");
  const double N = static_cast<double>(n.total());
  double singletons = 0.0;
  for (Count v : n.positive()) singletons += v == 1 ? 1.0 : 0.0;
  const double coverage = 1.0 - singletons / (N + 1.0);
  double h = 0.0;
  for (Count v : n.positive()) {
    const double p = coverage * static_cast<double>(v) / N;
    const double inclusion = -std::expm1(N * std::log1p(-p));  // 1 - (1 - p)^N
    h -= p * std::log(p) / inclusion;
  }
  return h;
}

double nsb_large_z_entropy(const CountVector& n, Count k_max) {
  if (k_max < 1 || k_max < n.support_size()) {
    throw std::invalid_argument("nsb_large_z_entropy: k_max below the observed support");
  }
  if (k_max == 1) return 0.0;
  const detail::GroupedCounts g(n);
  const double K = static_cast<double>(k_max);
  const double lo = kNsbLogCLow;
  const double hi = std::log(K) + kNsbLogCHighOverK;

  std::vector<double> x, w;
  gauss_legendre(kNsbNodes, x, w);
  std::vector<double> log_weight(x.size());
  std::vector<double> estimate(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = 0.5 * (hi - lo) * x[i] + 0.5 * (hi + lo);
    const double c = std::exp(u);
    const detail::ConcentrationTerms ct(c, g.total);
    // d xi / dc with xi(c) = Psi0(c + 1) - Psi0(c/K + 1); dc = c du.
    const double dxi = trigamma(c + 1.0) - trigamma(c / K + 1.0) / K;
    if (!(dxi > 0.0)) {
      log_weight[i] = -std::numeric_limits<double>::infinity();
      estimate[i] = 0.0;
      continue;
    }
    log_weight[i] = std::log(w[i]) + std::log(dxi * c) + detail::log_likelihood(g, ct, c / K);
    estimate[i] = detail::entropy_mean(g, ct, k_max);
  }
  const double norm = log_sum_exp(log_weight);
  double h = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) h += std::exp(log_weight[i] - norm) * estimate[i];
  return h;
}

double asymptotic_nsb_entropy(const CountVector& n) {
  // Coincidence-based large-alphabet limit of NSB, in nats:
  //   S = (C_gamma - ln 2) + 2 ln N - Psi0(Delta),  Delta = N - K_observed.
  const Count coincidences = n.total() - n.support_size();
  if (coincidences < 1) throw std::domain_error("asymptotic_nsb_entropy: no coincidences in the sample");
  const double N = static_cast<double>(n.total());
  return kEulerGamma - std::numbers::ln2 + 2.0 * std::log(N) - digamma(static_cast<double>(coincidences));
}

}  // namespace unseen
