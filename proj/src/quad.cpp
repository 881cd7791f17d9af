#include "unseen/quad.hpp"

#include <numbers>

namespace unseen {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    w[static_cast<std::size_t>(i)] = weight;
    w[static_cast<std::size_t>(n - 1 - i)] = weight;
  }
}

LogGrid c_grid(const ConcentrationPrior& prior, int n_nodes) {
  if (n_nodes < 1) throw std::invalid_argument("c_grid: n_nodes must be >= 1");
  LogGrid grid;
  if (const auto* p = std::get_if<ConcentrationPrior::PointMass>(&prior.value())) {
    grid.nodes.push_back({p->c, 0.0});
    return grid;
  }
  if (n_nodes < 2) throw std::invalid_argument("c_grid: log-uniform prior needs at least two nodes");
  const auto& lu = std::get<ConcentrationPrior::LogUniform>(prior.value());
  const double lo = std::log(lu.c_min);
  const double hi = std::log(lu.c_max);
  std::vector<double> x, w;
  gauss_legendre(n_nodes, x, w);
  // Uniform density 1/(hi - lo) in u cancels the Jacobian (hi - lo)/2.
  grid.nodes.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = 0.5 * (hi - lo) * x[i] + 0.5 * (hi + lo);
    grid.nodes.push_back({std::exp(u), std::log(0.5 * w[i])});
  }
  return grid;
}

double log_sum_exp(std::span<const double> terms) {
  if (terms.empty()) throw std::invalid_argument("log_sum_exp: empty input");
  const double top = *std::max_element(terms.begin(), terms.end());
  if (top == -std::numeric_limits<double>::infinity()) return top;
  if (top == std::numeric_limits<double>::infinity()) return top;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - top);
  return top + std::log(acc);
}

SizeSum size_sum(const SizePrior& prior, Count M, const std::function<std::pair<double, double>(Count)>& term,
                 SizeSumOptions opts) {
  auto wrapped = [&](Count m) {
    const auto [lw, payload] = term(m);
    return std::pair<double, std::array<double, 1>>{lw, {payload}};
  };
  const auto r = size_sum_n<1>(prior, M, wrapped, opts);
  return {r.expectation[0], r.tail_bound, r.terms};
}

}  // namespace unseen
