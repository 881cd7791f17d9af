#include "unseen/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "posterior_kernel.hpp"

namespace unseen {
namespace {

using detail::ConcentrationTerms;
using detail::GroupedCounts;

// Quadrature nodes whose weight is this far (in log units) below the
// heaviest node at the same m do not contribute at double precision.
constexpr double kNegligibleLogWeight = -50.0;

void check_fixed(const CountVector& n, double c, Count m) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("concentration must be positive");
  if (m < 1) throw std::invalid_argument("number of bins must be >= 1");
  if (m < n.support_size()) {
    throw std::invalid_argument("number of bins " + std::to_string(m) + " is below the observed support " +
                                std::to_string(n.support_size()));
  }
}

void check_functional(const Functional& f) {
  if (const auto* t = std::get_if<TsallisEntropy>(&f)) {
    if (!(t->q > 0.0)) throw std::invalid_argument("Tsallis index must be positive");
    if (t->q == 1.0) throw std::invalid_argument("Tsallis index 1 is Shannon entropy; use the Shannon functional");
  }
}

double functional_kernel(const GroupedCounts& g, const ConcentrationTerms& ct, Count m, const Functional& f) {
  if (m == 1) return 0.0;
  if (const auto* t = std::get_if<TsallisEntropy>(&f)) {
    return (1.0 - detail::power_sum_mean(g, ct, m, t->q)) / (t->q - 1.0);
  }
  return detail::entropy_mean(g, ct, m);
}

// Mixture over the quadrature nodes in c and the size prior in m. The
// weight of (c, m) is P(c) P(m) P(n | c, m); `payload(ct, m)` returns the
// fixed-(c, m) posterior quantities to be averaged.
template <std::size_t K, class Payload>
SizeSumResult<K> mix(const GroupedCounts& g, const LogGrid& grid, const SizePrior& size_prior, Payload&& payload) {
  std::vector<ConcentrationTerms> terms;
  terms.reserve(grid.nodes.size());
  for (const auto& node : grid.nodes) terms.emplace_back(node.c, g.total);
  std::vector<double> log_w(grid.nodes.size());

  auto term = [&](Count m) {
    const double md = static_cast<double>(m);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < terms.size(); ++i) {
      log_w[i] = grid.nodes[i].log_weight + detail::log_likelihood(g, terms[i], terms[i].c / md);
      top = std::max(top, log_w[i]);
    }
    double mass = 0.0;
    std::array<double, K> acc{};
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const double rel = log_w[i] - top;
      if (rel < kNegligibleLogWeight) continue;
      const double w = std::exp(rel);
      const auto p = payload(terms[i], m);
      mass += w;
      for (std::size_t k = 0; k < K; ++k) acc[k] += w * p[k];
    }
    for (auto& a : acc) a /= mass;
    return std::pair<double, std::array<double, K>>{top + std::log(mass), acc};
  };

  // ln P(n | c, m) is non-increasing in m for every c: each occupied bin
  // contributes ln Gamma(n_i + c/m) - ln Gamma(c/m) = sum_j ln(c/m + j).
  SizeSumOptions opts;
  opts.nonincreasing_weights = true;
  return size_sum_n<K>(size_prior, g.support, term, opts);
}

template <std::size_t K>
MomentEstimate::Diagnostics diagnostics_of(const SizeSumResult<K>& r, const LogGrid& grid) {
  return {r.tail_bound, r.terms, static_cast<std::int64_t>(grid.nodes.size())};
}

MomentEstimate entropy_mixture(const CountVector& n, const LogGrid& grid, const SizePrior& size_prior,
                               bool with_second_moment) {
  const GroupedCounts g(n);
  if (with_second_moment) {
    const auto r = mix<2>(g, grid, size_prior, [&](const ConcentrationTerms& ct, Count m) {
      if (m == 1) return std::array<double, 2>{0.0, 0.0};
      return detail::entropy_moments(g, ct, m);
    });
    return MomentEstimate::from_moments(r.expectation[0], r.expectation[1], diagnostics_of(r, grid));
  }
  const auto r = mix<1>(g, grid, size_prior, [&](const ConcentrationTerms& ct, Count m) {
    return std::array<double, 1>{m == 1 ? 0.0 : detail::entropy_mean(g, ct, m)};
  });
  return MomentEstimate::mean_only(r.expectation[0], diagnostics_of(r, grid));
}

}  // namespace

double entropy_mean_fixed(const CountVector& n, double c, Count m) {
  check_fixed(n, c, m);
  if (m == 1) return 0.0;
  const GroupedCounts g(n);
  return detail::entropy_mean(g, ConcentrationTerms(c, g.total), m);
}

double entropy_second_moment_fixed(const CountVector& n, double c, Count m) {
  check_fixed(n, c, m);
  if (m == 1) return 0.0;
  const GroupedCounts g(n);
  return detail::entropy_moments(g, ConcentrationTerms(c, g.total), m)[1];
}

EntropyMoments entropy_variance_fixed(const CountVector& n, double c, Count m) {
  check_fixed(n, c, m);
  if (m == 1) return {0.0, 0.0};
  const GroupedCounts g(n);
  const auto [mean, second] = detail::entropy_moments(g, ConcentrationTerms(c, g.total), m);
  const auto est = MomentEstimate::from_moments(mean, second);
  return {mean, *est.variance};
}

double tsallis_mean_fixed(const CountVector& n, double c, Count m, double q) {
  return functional_mean_fixed(n, c, m, TsallisEntropy{q});
}

double functional_mean_fixed(const CountVector& n, double c, Count m, const Functional& f) {
  check_fixed(n, c, m);
  check_functional(f);
  const GroupedCounts g(n);
  return functional_kernel(g, ConcentrationTerms(c, g.total), m, f);
}

MomentEstimate entropy_mean_unknown_size(const CountVector& n, double c, const SizePrior& size_prior) {
  return entropy_mixture(n, c_grid(ConcentrationPrior::point(c)), size_prior, false);
}

MomentEstimate entropy_moments_full(const CountVector& n, const EstimatorConfig& config, bool with_second_moment) {
  return entropy_mixture(n, c_grid(config.c_prior, config.quad_nodes), config.size_prior, with_second_moment);
}

MomentEstimate functional_mean_full(const CountVector& n, const EstimatorConfig& config, const Functional& f) {
  check_functional(f);
  if (std::holds_alternative<ShannonEntropy>(f)) return entropy_moments_full(n, config, false);
  const GroupedCounts g(n);
  const LogGrid grid = c_grid(config.c_prior, config.quad_nodes);
  const auto r = mix<1>(g, grid, config.size_prior, [&](const ConcentrationTerms& ct, Count m) {
    return std::array<double, 1>{functional_kernel(g, ct, m, f)};
  });
  return MomentEstimate::mean_only(r.expectation[0], diagnostics_of(r, grid));
}

double fixed_size_marginal_c(const CountVector& n, Count m, const ConcentrationPrior& c_prior, const Functional& f,
                             int quad_nodes) {
  check_functional(f);
  if (m < 1 || m < n.support_size()) throw std::invalid_argument("number of bins is below the observed support");
  const GroupedCounts g(n);
  const LogGrid grid = c_grid(c_prior, quad_nodes);
  const auto r = mix<1>(g, grid, SizePrior::point(m), [&](const ConcentrationTerms& ct, Count mm) {
    return std::array<double, 1>{functional_kernel(g, ct, mm, f)};
  });
  return r.expectation[0];
}

double mi_mean_fixed(const JointCountTable& table, double c) {
  if (table.rank() != 2) throw std::invalid_argument("mi_mean_fixed: expected a two-way table");
  const auto dims = table.dims();
  const Count nx = static_cast<Count>(dims[0]);
  const Count ny = static_cast<Count>(dims[1]);
  return entropy_mean_fixed(marginal(table, 0), c, nx) + entropy_mean_fixed(marginal(table, 1), c, ny) -
         entropy_mean_fixed(table.flatten(), c, nx * ny);
}

MutualInformationEstimate mi_mean_full(const JointCountTable& table, const EstimatorConfig& config_joint,
                                       const EstimatorConfig& config_x, const EstimatorConfig& config_y) {
  if (table.rank() != 2) throw std::invalid_argument("mi_mean_full: expected a two-way table");
  return multi_information(table, {config_x, config_y}, config_joint);
}

MutualInformationEstimate multi_information(const JointCountTable& table,
                                            const std::vector<EstimatorConfig>& axis_configs,
                                            const EstimatorConfig& joint_config) {
  if (axis_configs.size() != table.rank()) {
    throw std::invalid_argument("multi_information: need one configuration per axis");
  }
  MutualInformationEstimate out;
  double value = 0.0;
  MomentEstimate::Diagnostics diag{0.0, 0, 0};
  auto absorb = [&](const MomentEstimate& e) {
    diag.tail_bound = std::max(diag.tail_bound, e.diagnostics.tail_bound);
    diag.size_terms += e.diagnostics.size_terms;
    diag.quad_nodes = std::max(diag.quad_nodes, e.diagnostics.quad_nodes);
    out.terms.push_back(e);
  };
  for (std::size_t axis = 0; axis < table.rank(); ++axis) {
    const auto e = entropy_moments_full(marginal(table, axis), axis_configs[axis], false);
    value += e.mean;
    absorb(e);
  }
  const auto joint = entropy_moments_full(table.flatten(), joint_config, false);
  value -= joint.mean;
  absorb(joint);
  out.mi = MomentEstimate::mean_only(value, diag);
  return out;
}

}  // namespace unseen
