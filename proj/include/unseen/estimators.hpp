#pragma once

// Posterior moments of entropy-type functionals under symmetric Dirichlet
// priors, with the concentration c and the event-space size m either fixed
// or integrated out under independent priors.
//
// All entropies are in nats.

#include <variant>
#include <vector>

#include "unseen/model.hpp"
#include "unseen/quad.hpp"

namespace unseen {

struct ShannonEntropy {};
struct TsallisEntropy {
  double q;
};
using Functional = std::variant<ShannonEntropy, TsallisEntropy>;

/// Independent priors over c and m. Independence is structural: the two
/// priors are separate fields and neither is allowed to depend on the other.
struct EstimatorConfig {
  ConcentrationPrior c_prior = ConcentrationPrior::log_uniform(1e-3, 1e3);
  SizePrior size_prior = SizePrior::uniform(10'000);
  int quad_nodes = kDefaultQuadNodes;
};

struct EntropyMoments {
  double mean;
  double variance;
};

/// E(H | n, c, m). Bins beyond the observed support are empty.
double entropy_mean_fixed(const CountVector& n, double c, Count m);

/// Posterior mean and variance of H for fixed (c, m).
EntropyMoments entropy_variance_fixed(const CountVector& n, double c, Count m);

/// E(H^2 | n, c, m).
double entropy_second_moment_fixed(const CountVector& n, double c, Count m);

/// E[(1 - sum_i p_i^q) / (q - 1) | n, c, m], q > 0, q != 1.
double tsallis_mean_fixed(const CountVector& n, double c, Count m, double q);

/// Posterior mean of any supported functional for fixed (c, m).
double functional_mean_fixed(const CountVector& n, double c, Count m, const Functional& f);

/// E(H | n, c) with m drawn from `size_prior`.
MomentEstimate entropy_mean_unknown_size(const CountVector& n, double c, const SizePrior& size_prior);

/// First and second moments of H with both c and m integrated out.
/// With `with_second_moment = false` only the mean is computed.
MomentEstimate entropy_moments_full(const CountVector& n, const EstimatorConfig& config,
                                    bool with_second_moment = true);

/// Posterior mean of a functional with both c and m integrated out.
MomentEstimate functional_mean_full(const CountVector& n, const EstimatorConfig& config, const Functional& f);

/// E(Q | n, |Z| = m) with c integrated out.
double fixed_size_marginal_c(const CountVector& n, Count m, const ConcentrationPrior& c_prior,
                             const Functional& f = ShannonEntropy{}, int quad_nodes = kDefaultQuadNodes);

/// E(I(X;Y) | n, c) for a two-way table, using |X|, |Y| and |X||Y| bins.
double mi_mean_fixed(const JointCountTable& table, double c);

struct MutualInformationEstimate {
  MomentEstimate mi;
  /// Per-term entropy estimates: one per axis, then the joint.
  std::vector<MomentEstimate> terms;
};

/// E(H_X) + E(H_Y) - E(H_XY), each with its own priors.
MutualInformationEstimate mi_mean_full(const JointCountTable& table, const EstimatorConfig& config_joint,
                                       const EstimatorConfig& config_x, const EstimatorConfig& config_y);

/// sum_i E(H_{X_i}) - E(H_{X_1..X_k}); `axis_configs` has one entry per axis.
MutualInformationEstimate multi_information(const JointCountTable& table,
                                            const std::vector<EstimatorConfig>& axis_configs,
                                            const EstimatorConfig& joint_config);

}  // namespace unseen
