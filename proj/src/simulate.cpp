#include "unseen/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "unseen/baselines.hpp"
#include "unseen/estimators.hpp"
#include "unseen/quad.hpp"

namespace unseen {
namespace {

// Dimensions of the square joint space used for mutual information.
std::size_t square_side(Count m) {
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(m))));
  if (static_cast<Count>(side * side) != m) {
    throw std::invalid_argument("mutual-information sweeps need a square number of bins, got " + std::to_string(m));
  }
  return side;
}

Count generator_bins(const GeneratorSpec& g) {
  return std::visit([](const auto& s) { return s.m; }, g);
}

template <class F>
double decomposed(const JointCountTable& t, F&& entropy) {
  return entropy(marginal(t, 0), 0) + entropy(marginal(t, 1), 1) - entropy(t.flatten(), 2);
}

}  // namespace

std::vector<double> sample_dirichlet(std::span<const double> alphas, Rng& rng) {
  std::vector<double> log_g(alphas.size());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double a = alphas[i];
    if (!(a > 0.0)) throw std::invalid_argument("sample_dirichlet: parameters must be positive");
    if (a >= 1.0) {
      std::gamma_distribution<double> gam(a, 1.0);
      log_g[i] = std::log(gam(rng));
    } else {
      // Gamma(a) = Gamma(a + 1) * U^{1/a}
      std::gamma_distribution<double> gam(a + 1.0, 1.0);
      double u = unif(rng);
      while (u <= 0.0) u = unif(rng);
      log_g[i] = std::log(gam(rng)) + std::log(u) / a;
    }
  }
  const double norm = log_sum_exp(log_g);
  std::vector<double> p(alphas.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(log_g[i] - norm);
  return p;
}

std::vector<double> sample_dirichlet(double c, Count m, std::uint64_t seed) {
  const DirichletSpec spec(c, m);
  Rng rng(seed);
  const std::vector<double> alphas(static_cast<std::size_t>(m), spec.per_bin());
  return sample_dirichlet(alphas, rng);
}

CountVector sample_counts(std::span<const double> p, Count N, Rng& rng) {
  std::vector<Count> counts(p.size(), 0);
  Count remaining = N;
  double mass_left = 1.0;
  for (std::size_t i = 0; i < p.size() && remaining > 0; ++i) {
    if (i + 1 == p.size()) {
      counts[i] = remaining;
      break;
    }
    const double prob = mass_left > 0.0 ? std::clamp(p[i] / mass_left, 0.0, 1.0) : 0.0;
    std::binomial_distribution<Count> binom(remaining, prob);
    counts[i] = binom(rng);
    remaining -= counts[i];
    mass_left -= p[i];
  }
  return CountVector(std::move(counts));
}

CountVector sample_counts(std::span<const double> p, Count N, std::uint64_t seed) {
  Rng rng(seed);
  return sample_counts(p, N, rng);
}

std::vector<double> power_law_distribution(double alpha, Count m, Rng& rng) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("power law exponent must be non-negative");
  if (m < 1) throw std::invalid_argument("power law needs m >= 1");
  std::vector<Count> rank(static_cast<std::size_t>(m));
  std::iota(rank.begin(), rank.end(), Count{1});
  std::shuffle(rank.begin(), rank.end(), rng);
  std::vector<double> p(rank.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::pow(static_cast<double>(rank[i]), -alpha);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

std::vector<double> generate(const GeneratorSpec& spec, Rng& rng) {
  if (const auto* d = std::get_if<DirichletGen>(&spec)) {
    const DirichletSpec ds(d->c, d->m);
    const std::vector<double> alphas(static_cast<std::size_t>(d->m), ds.per_bin());
    return sample_dirichlet(alphas, rng);
  }
  const auto& pl = std::get<PowerLawGen>(spec);
  if (pl.permutation_seed) {
    Rng perm(*pl.permutation_seed);
    return power_law_distribution(pl.alpha, pl.m, perm);
  }
  return power_law_distribution(pl.alpha, pl.m, rng);
}

double entropy_of(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

double tsallis_of(std::span<const double> p, double q) {
  double s = 0.0;
  for (double v : p) {
    if (v > 0.0) s += std::pow(v, q);
  }
  return (1.0 - s) / (q - 1.0);
}

double mutual_information_of(std::span<const double> p, std::size_t nx, std::size_t ny) {
  if (p.size() != nx * ny) throw std::invalid_argument("mutual_information_of: size mismatch");
  std::vector<double> px(nx, 0.0), py(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      px[x] += p[x * ny + y];
      py[y] += p[x * ny + y];
    }
  }
  double mi = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      const double v = p[x * ny + y];
      if (v > 0.0 && px[x] > 0.0 && py[y] > 0.0) mi += v * std::log(v / (px[x] * py[y]));
    }
  }
  return mi;
}

OracleResult mc_posterior_oracle(const CountVector& n, double c, Count m, const ProbabilityFunctional& f,
                                 std::int64_t draws, std::uint64_t seed) {
  if (draws < 100) throw std::invalid_argument("mc_posterior_oracle: need at least 100 draws");
  const DirichletSpec ds(c, m);
  if (m < n.support_size()) throw std::invalid_argument("mc_posterior_oracle: m below the observed support");

  std::vector<double> alphas(static_cast<std::size_t>(m), ds.per_bin());
  if (static_cast<Count>(n.size()) == m) {
    for (std::size_t i = 0; i < alphas.size(); ++i) alphas[i] += static_cast<double>(n.counts()[i]);
  } else {
    const auto pos = n.positive();
    for (std::size_t i = 0; i < pos.size(); ++i) alphas[i] += static_cast<double>(pos[i]);
  }

  Rng rng(seed);
  // Welford running mean / variance.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t k = 1; k <= draws; ++k) {
    const auto rho = sample_dirichlet(alphas, rng);
    const double v = f(rho);
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(draws - 1);
  return {mean, std::sqrt(var / static_cast<double>(draws))};
}

std::string to_string(EstimatorKind e) {
  switch (e) {
    case EstimatorKind::hierarchical: return "hierarchical";
    case EstimatorKind::plugin: return "plugin";
    case EstimatorKind::cae: return "cae";
    case EstimatorKind::nsb_large_z: return "nsb_large_z";
    case EstimatorKind::asymptotic_nsb: return "asymptotic_nsb";
  }
  return "unknown";
}

std::optional<EstimatorKind> parse_estimator(const std::string& name) {
  for (auto e : {EstimatorKind::hierarchical, EstimatorKind::plugin, EstimatorKind::cae, EstimatorKind::nsb_large_z,
                 EstimatorKind::asymptotic_nsb}) {
    if (to_string(e) == name) return e;
  }
  return std::nullopt;
}

std::string describe_generator(const GeneratorSpec& g) {
  std::ostringstream os;
  os << std::setprecision(12);
  if (const auto* d = std::get_if<DirichletGen>(&g)) {
    os << "dirichlet:c=" << d->c;
  } else {
    os << "power_law:alpha=" << std::get<PowerLawGen>(g).alpha;
  }
  return os.str();
}

ReplicateData replicate_data(const SweepSpec& spec, std::size_t grid_index, int replicate) {
  Rng rng(spec.base_seed + static_cast<std::uint64_t>(replicate));
  ReplicateData out;
  out.rho = generate(spec.grid.at(grid_index), rng);
  out.counts = sample_counts(out.rho, spec.sample_size, rng);
  return out;
}

std::optional<double> run_estimator(const SweepSpec& spec, EstimatorKind kind, const CountVector& counts, Count m) {
  try {
    if (spec.target == TargetFunctional::entropy) {
      switch (kind) {
        case EstimatorKind::hierarchical: {
          EstimatorConfig cfg{ConcentrationPrior::log_uniform(spec.prior_c_min, spec.prior_c_max),
                              SizePrior::uniform(spec.prior_m_max), spec.quad_nodes};
          return entropy_moments_full(counts, cfg, false).mean;
        }
        case EstimatorKind::plugin: return plugin_entropy(counts);
        case EstimatorKind::cae: return cae_entropy(counts);
        case EstimatorKind::nsb_large_z: return nsb_large_z_entropy(counts, spec.nsb_k_max);
        case EstimatorKind::asymptotic_nsb: return asymptotic_nsb_entropy(counts);
      }
      return std::nullopt;
    }

    const std::size_t side = square_side(m);
    const auto cells = counts.counts();
    const JointCountTable table({side, side}, std::vector<Count>(cells.begin(), cells.end()));
    switch (kind) {
      case EstimatorKind::hierarchical: {
        const auto c_prior = ConcentrationPrior::log_uniform(spec.prior_c_min, spec.prior_c_max);
        const EstimatorConfig joint{c_prior, SizePrior::uniform(spec.prior_m_max), spec.quad_nodes};
        const EstimatorConfig marg{c_prior, SizePrior::uniform(spec.prior_marginal_m_max), spec.quad_nodes};
        return mi_mean_full(table, joint, marg, marg).mi.mean;
      }
      case EstimatorKind::plugin:
        return decomposed(table, [](const CountVector& v, int) { return plugin_entropy(v); });
      case EstimatorKind::cae:
        return decomposed(table, [](const CountVector& v, int) { return cae_entropy(v); });
      case EstimatorKind::nsb_large_z:
        return decomposed(table, [&](const CountVector& v, int term) {
          return nsb_large_z_entropy(v, term == 2 ? spec.nsb_k_max : spec.nsb_marginal_k_max);
        });
      case EstimatorKind::asymptotic_nsb:
        return decomposed(table, [](const CountVector& v, int) { return asymptotic_nsb_entropy(v); });
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return std::nullopt;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("UNSEEN_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.roster.empty()) throw std::invalid_argument("run_sweep: empty estimator roster");
  if (spec.replicates < 1) throw std::invalid_argument("run_sweep: replicates must be >= 1");
  if (spec.grid.empty()) throw std::invalid_argument("run_sweep: empty generator grid");
  for (const auto& g : spec.grid) {
    if (spec.target == TargetFunctional::mutual_information) square_side(generator_bins(g));
  }

  const std::size_t n_tasks = spec.grid.size() * static_cast<std::size_t>(spec.replicates);
  std::vector<ReplicateRecord> records(n_tasks);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (std::size_t task = next++; task < n_tasks && !failed; task = next++) {
      try {
        const std::size_t gi = task / static_cast<std::size_t>(spec.replicates);
        const int r = static_cast<int>(task % static_cast<std::size_t>(spec.replicates));
        const Count m = generator_bins(spec.grid[gi]);
        const auto data = replicate_data(spec, gi, r);
        ReplicateRecord rec{gi, r, spec.base_seed + static_cast<std::uint64_t>(r), 0.0, {}};
        if (spec.target == TargetFunctional::entropy) {
          rec.truth = entropy_of(data.rho);
        } else {
          const std::size_t side = square_side(m);
          rec.truth = mutual_information_of(data.rho, side, side);
        }
        for (auto kind : spec.roster) rec.estimates.push_back(run_estimator(spec, kind, data.counts, m));
        records[task] = std::move(rec);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };

  const int n_threads = std::min<int>(resolve_threads(spec.threads), static_cast<int>(n_tasks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  SweepResult out;
  for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
    for (std::size_t e = 0; e < spec.roster.size(); ++e) {
      double sq = 0.0;
      int ok = 0;
      for (int r = 0; r < spec.replicates; ++r) {
        const auto& rec = records[gi * static_cast<std::size_t>(spec.replicates) + static_cast<std::size_t>(r)];
        if (const auto& est = rec.estimates[e]) {
          const double err = *est - rec.truth;
          sq += err * err;
          ++ok;
        }
      }
      out.rows.push_back({describe_generator(spec.grid[gi]), to_string(spec.roster[e]),
                          ok > 0 ? std::sqrt(sq / ok) : std::numeric_limits<double>::quiet_NaN(), ok,
                          spec.replicates - ok, spec.replicates, spec.base_seed});
    }
  }
  out.records = std::move(records);
  return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "sweep_param,estimator,rms,n_success,n_miss,replicates,base_seed\n";
  const auto old_precision = os.precision(17);
  for (const auto& r : rows) {
    os << r.sweep_param << ',' << r.estimator << ',';
    if (std::isnan(r.rms)) {
      os << "nan";
    } else {
      os << r.rms;
    }
    os << ',' << r.n_success << ',' << r.n_miss << ',' << r.replicates << ',' << r.base_seed << '\n';
  }
  os.precision(old_precision);
}

}  // namespace unseen
