#pragma once

// Count data and hyperprior types.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace unseen {

using Count = std::int64_t;

/// Histogram over positionally labeled bins. Zeros are kept, but only the
/// strictly positive entries contribute to the support size.
class CountVector {
 public:
  CountVector() = default;
  explicit CountVector(std::vector<Count> counts);

  std::span<const Count> counts() const { return counts_; }
  std::size_t size() const { return counts_.size(); }

  /// Total number of samples N.
  Count total() const { return total_; }

  /// Support size M: number of strictly positive entries.
  Count support_size() const { return static_cast<Count>(positive_.size()); }

  /// The strictly positive entries, in input order.
  std::span<const Count> positive() const { return positive_; }

 private:
  std::vector<Count> counts_;
  std::vector<Count> positive_;
  Count total_ = 0;
};

/// Dense k-way table of counts, row-major (last axis fastest).
class JointCountTable {
 public:
  JointCountTable(std::vector<std::size_t> dims, std::vector<Count> counts);

  std::span<const std::size_t> dims() const { return dims_; }
  std::size_t rank() const { return dims_.size(); }
  std::span<const Count> cells() const { return cells_; }
  Count total() const;

  Count at(std::span<const std::size_t> index) const;

  /// All cells as one CountVector over prod(dims) bins.
  CountVector flatten() const;

  /// Builds a 2-way table from row-major rows; rows must be rectangular.
  static JointCountTable from_rows(const std::vector<std::vector<Count>>& rows);

 private:
  std::vector<std::size_t> dims_;
  std::vector<Count> cells_;
};

/// Sums out every axis not listed in `keep`. Keeping one axis yields a
/// CountVector; keeping two or more yields a table whose axes appear in the
/// order given.
std::variant<CountVector, JointCountTable> marginalize(const JointCountTable& table,
                                                       std::span<const std::size_t> keep);

/// Marginal counts of a single axis.
CountVector marginal(const JointCountTable& table, std::size_t axis);

/// Prior over the concentration parameter c.
class ConcentrationPrior {
 public:
  struct PointMass {
    double c;
  };
  struct LogUniform {
    double c_min;
    double c_max;
  };

  static ConcentrationPrior point(double c);
  static ConcentrationPrior log_uniform(double c_min, double c_max);

  bool is_point() const { return std::holds_alternative<PointMass>(value_); }
  const std::variant<PointMass, LogUniform>& value() const { return value_; }

  /// Density at c (a point mass reports 0 everywhere).
  double density(double c) const;

  std::string describe() const;

 private:
  explicit ConcentrationPrior(std::variant<PointMass, LogUniform> v) : value_(v) {}
  std::variant<PointMass, LogUniform> value_;
};

/// Prior over the event-space size |Z| = m >= 1.
class SizePrior {
 public:
  struct PointMass {
    Count m;
  };
  struct UniformCutoff {
    Count m_max;
  };
  struct Geometric {
    double gamma;
    Count m_max;
  };
  struct Exponential {
    double alpha;
  };
  using Variant = std::variant<PointMass, UniformCutoff, Geometric, Exponential>;

  static SizePrior point(Count m);
  static SizePrior uniform(Count m_max);
  static SizePrior geometric(double gamma, Count m_max);
  static SizePrior exponential(double alpha);

  const Variant& value() const { return value_; }

  /// Normalized log probability; -inf off the support.
  double log_prob(Count m) const;
  double prob(Count m) const;

  Count min_support() const;
  /// Largest m with positive mass, or nullopt for unbounded support.
  std::optional<Count> max_support() const;

  /// P(|Z| > m).
  double tail_mass(Count m) const;

  std::string describe() const;

 private:
  explicit SizePrior(Variant v);
  Variant value_;
  double log_norm_ = 0.0;
};

/// Symmetric Dirichlet over m bins with total concentration c; each bin has
/// parameter c/m.
struct DirichletSpec {
  double c;
  Count m;

  DirichletSpec(double c, Count m);
  double per_bin() const { return c / static_cast<double>(m); }
};

struct EstimateDiagnostics {
  /// Bound on the neglected size-prior mass relative to the summed mass.
  double tail_bound = 0.0;
  std::int64_t size_terms = 1;
  std::int64_t quad_nodes = 1;
};

/// Posterior summary of a scalar functional.
struct MomentEstimate {
  using Diagnostics = EstimateDiagnostics;

  double mean = 0.0;
  std::optional<double> second_moment;
  std::optional<double> variance;
  Diagnostics diagnostics;

  /// Builds an estimate from the first two raw moments. Variances within
  /// -1e-9 of zero are clamped; anything more negative is a logic error.
  static MomentEstimate from_moments(double mean, double second_moment, Diagnostics diag = EstimateDiagnostics{});
  static MomentEstimate mean_only(double mean, Diagnostics diag = EstimateDiagnostics{});
};

/// ln G(n, c, m) = sum_z ln Gamma(n_z + c/m) - ln Gamma(N + c), where the sum
/// covers the M occupied bins and m - M empty bins.
double log_G(const CountVector& n, double c, Count m);

}  // namespace unseen
