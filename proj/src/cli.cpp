#include "unseen/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "unseen/errors.hpp"
#include "unseen/estimators.hpp"
#include "unseen/io.hpp"
#include "unseen/likelihood.hpp"
#include "unseen/simulate.hpp"
#include "unseen/svg.hpp"

namespace unseen {
namespace {

constexpr Count kDefaultSizeCutoff = 10'000;

struct PriorFlags {
  std::optional<double> c;
  std::vector<double> c_log_uniform;
  std::optional<Count> m;
  std::optional<Count> m_uniform;
  std::vector<double> m_geometric;
  std::optional<double> m_exp;
  int nodes = kDefaultQuadNodes;

  void add_c(CLI::App* cmd) {
    auto* c_opt = cmd->add_option("--c", c, "Fixed concentration c");
    auto* lu_opt = cmd->add_option("--c-log-uniform", c_log_uniform, "Log-uniform prior on c over [MIN, MAX]")
                       ->expected(2);
    c_opt->excludes(lu_opt);
    cmd->add_option("--nodes", nodes, "Quadrature nodes in ln c")->check(CLI::PositiveNumber);
  }

  void add_m(CLI::App* cmd) {
    auto* a = cmd->add_option("--m", m, "Fixed number of bins");
    auto* b = cmd->add_option("--m-uniform", m_uniform, "Uniform size prior on [1, MAX]");
    auto* g = cmd->add_option("--m-geometric", m_geometric, "Geometric size prior GAMMA MAX")->expected(2);
    auto* e = cmd->add_option("--m-exp", m_exp, "Exponential size prior exp(-ALPHA m)");
    a->excludes(b, g, e);
    b->excludes(g, e);
    g->excludes(e);
  }

  ConcentrationPrior c_prior() const {
    if (c) return ConcentrationPrior::point(*c);
    if (!c_log_uniform.empty()) return ConcentrationPrior::log_uniform(c_log_uniform[0], c_log_uniform[1]);
    return ConcentrationPrior::log_uniform(1e-3, 1e3);
  }

  SizePrior size_prior() const {
    if (m) return SizePrior::point(*m);
    if (m_uniform) return SizePrior::uniform(*m_uniform);
    if (!m_geometric.empty()) {
      const double cutoff = m_geometric[1];
      if (cutoff != std::floor(cutoff)) throw std::invalid_argument("--m-geometric cutoff must be an integer");
      return SizePrior::geometric(m_geometric[0], static_cast<Count>(cutoff));
    }
    if (m_exp) return SizePrior::exponential(*m_exp);
    return SizePrior::uniform(kDefaultSizeCutoff);
  }
};

std::string fixed6(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << v;
  return os.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << std::setprecision(17);
  return f;
}

int cmd_entropy(const std::string& path, const PriorFlags& flags, std::optional<double> tsallis,
                const std::string& csv_path, std::ostream& out) {
  const CountVector n = read_counts_file(path);
  const EstimatorConfig cfg{flags.c_prior(), flags.size_prior(), flags.nodes};
  MomentEstimate est = tsallis ? functional_mean_full(n, cfg, TsallisEntropy{*tsallis})
                               : entropy_moments_full(n, cfg, true);
  out << "functional " << (tsallis ? "tsallis(q=" + fixed6(*tsallis) + ")" : std::string("shannon")) << '\n'
      << "c_prior " << cfg.c_prior.describe() << '\n'
      << "size_prior " << cfg.size_prior.describe() << '\n'
      << "N " << n.total() << '\n'
      << "M " << n.support_size() << '\n'
      << "mean " << fixed6(est.mean) << '\n';
  if (est.variance) {
    out << "variance " << fixed6(*est.variance) << '\n' << "std_dev " << fixed6(std::sqrt(*est.variance)) << '\n';
  }
  out << "size_terms " << est.diagnostics.size_terms << '\n'
      << "quad_nodes " << est.diagnostics.quad_nodes << '\n'
      << "tail_bound " << std::scientific << std::setprecision(3) << est.diagnostics.tail_bound << '\n';
  if (!csv_path.empty()) {
    auto f = open_out(csv_path);
    f << "mean,variance,second_moment,size_terms,quad_nodes,tail_bound\n"
      << est.mean << ',' << (est.variance ? std::to_string(*est.variance) : "") << ','
      << (est.second_moment ? std::to_string(*est.second_moment) : "") << ',' << est.diagnostics.size_terms << ','
      << est.diagnostics.quad_nodes << ',' << est.diagnostics.tail_bound << '\n';
  }
  return kExitOk;
}

struct MiFlags {
  std::optional<Count> mx, my, mxy;
  std::optional<Count> mx_uniform, my_uniform, mxy_uniform;
};

int cmd_mi(const std::string& path, const PriorFlags& flags, const MiFlags& mf, const std::string& csv_path,
           std::ostream& out) {
  const JointCountTable table = read_joint_csv_file(path);
  const auto dims = table.dims();
  auto size_prior = [](std::optional<Count> point, std::optional<Count> uniform, Count fallback) {
    if (uniform) return SizePrior::uniform(*uniform);
    return SizePrior::point(point.value_or(fallback));
  };
  const auto cp = flags.c_prior();
  const Count nx = static_cast<Count>(dims[0]);
  const Count ny = static_cast<Count>(dims[1]);
  const EstimatorConfig cx{cp, size_prior(mf.mx, mf.mx_uniform, nx), flags.nodes};
  const EstimatorConfig cy{cp, size_prior(mf.my, mf.my_uniform, ny), flags.nodes};
  const EstimatorConfig cxy{cp, size_prior(mf.mxy, mf.mxy_uniform, nx * ny), flags.nodes};
  const auto est = mi_mean_full(table, cxy, cx, cy);
  out << "c_prior " << cp.describe() << '\n'
      << "h_x " << fixed6(est.terms[0].mean) << '\n'
      << "h_y " << fixed6(est.terms[1].mean) << '\n'
      << "h_xy " << fixed6(est.terms[2].mean) << '\n'
      << "mi " << fixed6(est.mi.mean) << '\n';
  if (!csv_path.empty()) {
    auto f = open_out(csv_path);
    f << "h_x,h_y,h_xy,mi\n"
      << est.terms[0].mean << ',' << est.terms[1].mean << ',' << est.terms[2].mean << ',' << est.mi.mean << '\n';
  }
  return kExitOk;
}

int cmd_size_posterior(const std::string& path, const PriorFlags& flags, const std::string& csv_path,
                       const std::string& plot_path, std::ostream& out) {
  const CountVector n = read_counts_file(path);
  const auto cp = flags.c_prior();
  const auto post = size_posterior(n, cp, flags.size_prior(), flags.nodes);
  out << "mean " << fixed6(post.mean) << '\n' << "map " << post.map << '\n';

  auto write_csv = [&](std::ostream& os) {
    const auto prec = os.precision(17);
    os << "m,probability\n";
    for (std::size_t i = 0; i < post.sizes.size(); ++i) os << post.sizes[i] << ',' << post.probabilities[i] << '\n';
    os.precision(prec);
  };
  if (csv_path.empty()) {
    write_csv(out);
  } else {
    auto f = open_out(csv_path);
    write_csv(f);
  }
  if (!plot_path.empty()) {
    PlotSeries s{cp.describe(), {}, post.probabilities};
    for (Count m : post.sizes) s.x.push_back(static_cast<double>(m));
    auto f = open_out(plot_path);
    write_line_chart(f, {s}, {"Posterior over the number of bins", "m", "P(m | n)", false});
  }
  return kExitOk;
}

void plot_sweep(const SweepSpec& spec, const SweepResult& result, const std::string& plot_path) {
  // One chart per generator family.
  std::map<std::string, std::map<std::string, PlotSeries>> families;
  for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
    const bool dirichlet = std::holds_alternative<DirichletGen>(spec.grid[gi]);
    const double param = dirichlet ? std::get<DirichletGen>(spec.grid[gi]).c : std::get<PowerLawGen>(spec.grid[gi]).alpha;
    const std::string family = dirichlet ? "dirichlet" : "power_law";
    for (std::size_t e = 0; e < spec.roster.size(); ++e) {
      const auto& row = result.rows[gi * spec.roster.size() + e];
      auto& s = families[family][row.estimator];
      s.name = row.estimator;
      s.x.push_back(param);
      s.y.push_back(row.rms);
    }
  }
  for (const auto& [family, by_est] : families) {
    std::string target = plot_path;
    if (families.size() > 1) {
      const auto dot = target.rfind('.');
      const std::string suffix = "_" + family;
      target = dot == std::string::npos ? target + suffix : target.insert(dot, suffix);
    }
    std::vector<PlotSeries> series;
    for (const auto& [_, s] : by_est) series.push_back(s);
    const bool dirichlet = family == "dirichlet";
    auto f = open_out(target);
    write_line_chart(f, series,
                     {spec.target == TargetFunctional::entropy ? "RMS error: entropy" : "RMS error: mutual information",
                      dirichlet ? "concentration c" : "power-law exponent alpha", "RMS error", dirichlet});
  }
}

int cmd_sweep(const std::string& path, const std::string& out_path, const std::string& plot_path, int threads,
              std::ostream& out) {
  SweepSpec spec = read_sweep_config_file(path);
  if (threads > 0) spec.threads = threads;
  const auto result = run_sweep(spec);
  if (out_path.empty()) {
    write_sweep_csv(out, result.rows);
  } else {
    auto f = open_out(out_path);
    write_sweep_csv(f, result.rows);
  }
  if (!plot_path.empty()) plot_sweep(spec, result, plot_path);
  return kExitOk;
}

int cmd_cmax(const std::string& m_arg, std::ostream& out) {
  std::optional<Count> m;
  if (m_arg != "infinite" && m_arg != "inf") {
    Count v = 0;
    const auto [ptr, ec] = std::from_chars(m_arg.data(), m_arg.data() + m_arg.size(), v);
    if (ec != std::errc() || ptr != m_arg.data() + m_arg.size()) throw InputError("--m expects an integer or 'infinite'");
    if (v < 2) throw InputError("--m must be at least 2");
    m = v;
  }
  out << std::fixed << std::setprecision(4) << c_max(m) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian entropy and mutual-information estimation with unknown concentration and event-space size"};
  app.require_subcommand(1);

  std::string input, csv_path, plot_path, out_path, m_arg;
  std::optional<double> tsallis;
  int threads = 0;
  PriorFlags flags;
  MiFlags mf;

  auto* entropy = app.add_subcommand("entropy", "Posterior moments of entropy from a counts file");
  entropy->add_option("input", input, "Whitespace-separated counts")->required();
  flags.add_c(entropy);
  flags.add_m(entropy);
  entropy->add_option("--tsallis", tsallis, "Tsallis index q instead of Shannon entropy");
  entropy->add_option("--csv", csv_path, "Write unrounded results as CSV");

  auto* mi = app.add_subcommand("mi", "Posterior mean of mutual information from a joint CSV table");
  mi->add_option("input", input, "CSV counts, rows = first variable")->required();
  flags.add_c(mi);
  mi->add_option("--mx", mf.mx, "Fixed size of X (default: table rows)");
  mi->add_option("--my", mf.my, "Fixed size of Y (default: table columns)");
  mi->add_option("--mxy", mf.mxy, "Fixed size of the joint space (default: rows * columns)");
  mi->add_option("--mx-uniform", mf.mx_uniform, "Uniform prior on |X| over [1, MAX]");
  mi->add_option("--my-uniform", mf.my_uniform, "Uniform prior on |Y| over [1, MAX]");
  mi->add_option("--mxy-uniform", mf.mxy_uniform, "Uniform prior on |X x Y| over [1, MAX]");
  mi->add_option("--csv", csv_path, "Write unrounded results as CSV");

  auto* sp = app.add_subcommand("size-posterior", "Posterior over the number of bins");
  sp->add_option("input", input, "Whitespace-separated counts")->required();
  flags.add_c(sp);
  flags.add_m(sp);
  sp->add_option("--csv", csv_path, "Write P(m | n) to this file instead of stdout");
  sp->add_option("--plot", plot_path, "Write an SVG chart of P(m | n)");

  auto* sweep = app.add_subcommand("sweep", "RMS-error benchmark over a generator grid");
  sweep->add_option("config", input, "key = value configuration file")->required();
  sweep->add_option("--out", out_path, "CSV output path (default: stdout)");
  sweep->add_option("--plot", plot_path, "SVG output path for RMS curves");
  sweep->add_option("--threads", threads, "Worker threads (overrides UNSEEN_THREADS)");

  auto* cmax = app.add_subcommand("cmax", "Concentration maximizing the prior variance of entropy");
  cmax->add_option("--m", m_arg, "Number of bins, or 'infinite'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (entropy->parsed()) return cmd_entropy(input, flags, tsallis, csv_path, out);
    if (mi->parsed()) return cmd_mi(input, flags, mf, csv_path, out);
    if (sp->parsed()) return cmd_size_posterior(input, flags, csv_path, plot_path, out);
    if (sweep->parsed()) return cmd_sweep(input, out_path, plot_path, threads, out);
    if (cmax->parsed()) return cmd_cmax(m_arg, out);
  } catch (const SupportExhausted& e) {
    err << "error: infeasible model: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace unseen
