#pragma once

// Generative models, the Monte Carlo posterior oracle, and the RMS-error
// sweep harness.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "unseen/model.hpp"

namespace unseen {

using Rng = std::mt19937_64;

struct DirichletGen {
  double c;
  Count m;
};

/// P(i) proportional to 1 / S[i]^alpha for a uniformly random permutation S
/// of 1..m. Without a permutation seed the permutation is drawn from the
/// generator passed to `generate`.
struct PowerLawGen {
  double alpha;
  Count m;
  std::optional<std::uint64_t> permutation_seed;
};

using GeneratorSpec = std::variant<DirichletGen, PowerLawGen>;

/// Draws from a Dirichlet with the given per-bin parameters. Gamma variates
/// are formed in log space so that shapes far below one do not underflow
/// before normalization.
std::vector<double> sample_dirichlet(std::span<const double> alphas, Rng& rng);

/// Symmetric Dirichlet with per-bin parameter c/m.
std::vector<double> sample_dirichlet(double c, Count m, std::uint64_t seed);

/// Multinomial draw of N samples.
CountVector sample_counts(std::span<const double> p, Count N, Rng& rng);
CountVector sample_counts(std::span<const double> p, Count N, std::uint64_t seed);

std::vector<double> power_law_distribution(double alpha, Count m, Rng& rng);

/// One distribution from the generator.
std::vector<double> generate(const GeneratorSpec& spec, Rng& rng);

/// Shannon entropy (nats) of a probability vector.
double entropy_of(std::span<const double> p);

/// Tsallis entropy of index q.
double tsallis_of(std::span<const double> p, double q);

/// I(X;Y) of a row-major nx-by-ny joint distribution.
double mutual_information_of(std::span<const double> p, std::size_t nx, std::size_t ny);

using ProbabilityFunctional = std::function<double(std::span<const double>)>;

struct OracleResult {
  double mean;
  double std_error;
};

/// Monte Carlo mean of `f(rho)` for rho drawn from the Dirichlet posterior
/// with per-bin parameters n_z + c/m over m bins. When n has exactly m
/// entries they keep their positions; otherwise the positive counts fill the
/// first bins and the rest are empty.
OracleResult mc_posterior_oracle(const CountVector& n, double c, Count m, const ProbabilityFunctional& f,
                                 std::int64_t draws, std::uint64_t seed);

enum class EstimatorKind { hierarchical, plugin, cae, nsb_large_z, asymptotic_nsb };
enum class TargetFunctional { entropy, mutual_information };

std::string to_string(EstimatorKind e);
std::optional<EstimatorKind> parse_estimator(const std::string& name);

struct SweepSpec {
  std::vector<GeneratorSpec> grid;
  Count sample_size = 10;
  int replicates = 200;
  std::uint64_t base_seed = 1;
  std::vector<EstimatorKind> roster;
  TargetFunctional target = TargetFunctional::entropy;

  // Estimator settings. Marginal limits apply to mutual information only.
  double prior_c_min = 1e-3;
  double prior_c_max = 1e3;
  Count prior_m_max = 10'000;
  Count prior_marginal_m_max = 100;
  Count nsb_k_max = 10'000;
  Count nsb_marginal_k_max = 100;
  int quad_nodes = 200;
  /// 0 selects the UNSEEN_THREADS environment variable, falling back to
  /// the hardware concurrency.
  int threads = 0;
};

struct SweepRow {
  std::string sweep_param;
  std::string estimator;
  double rms;
  int n_success;
  int n_miss;
  int replicates;
  std::uint64_t base_seed;
};

struct ReplicateRecord {
  std::size_t grid_index;
  int replicate;
  std::uint64_t seed;
  double truth;
  /// Estimate per roster entry; nullopt records a miss.
  std::vector<std::optional<double>> estimates;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<ReplicateRecord> records;
};

/// "dirichlet:c=0.01" or "power_law:alpha=1".
std::string describe_generator(const GeneratorSpec& g);

/// Draws the distribution and counts of one replicate exactly as run_sweep
/// does.
struct ReplicateData {
  std::vector<double> rho;
  CountVector counts;
};
ReplicateData replicate_data(const SweepSpec& spec, std::size_t grid_index, int replicate);

/// Evaluates one estimator on one replicate; nullopt when it is undefined
/// for the data.
std::optional<double> run_estimator(const SweepSpec& spec, EstimatorKind kind, const CountVector& counts,
                                    Count m);

SweepResult run_sweep(const SweepSpec& spec);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Resolved worker count for `requested` (see SweepSpec::threads).
int resolve_threads(int requested);

}  // namespace unseen
