#include "unseen/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "unseen/specfun.hpp"

namespace unseen {

CountVector::CountVector(std::vector<Count> counts) : counts_(std::move(counts)) {
  for (Count v : counts_) {
    if (v < 0) throw std::invalid_argument("CountVector: negative count");
    if (v > 0) positive_.push_back(v);
    total_ += v;
  }
}

JointCountTable::JointCountTable(std::vector<std::size_t> dims, std::vector<Count> counts)
    : dims_(std::move(dims)), cells_(std::move(counts)) {
  if (dims_.size() < 2) throw std::invalid_argument("JointCountTable: need at least two axes");
  std::size_t cells = 1;
  for (std::size_t d : dims_) {
    if (d == 0) throw std::invalid_argument("JointCountTable: empty axis");
    cells *= d;
  }
  if (cells != cells_.size()) throw std::invalid_argument("JointCountTable: cell count mismatch");
  if (std::any_of(cells_.begin(), cells_.end(), [](Count v) { return v < 0; })) {
    throw std::invalid_argument("JointCountTable: negative count");
  }
}

Count JointCountTable::total() const { return std::accumulate(cells_.begin(), cells_.end(), Count{0}); }

Count JointCountTable::at(std::span<const std::size_t> index) const {
  if (index.size() != dims_.size()) throw std::invalid_argument("JointCountTable::at: rank mismatch");
  std::size_t flat = 0;
  for (std::size_t a = 0; a < dims_.size(); ++a) {
    if (index[a] >= dims_[a]) throw std::out_of_range("JointCountTable::at");
    flat = flat * dims_[a] + index[a];
  }
  return cells_[flat];
}

CountVector JointCountTable::flatten() const { return CountVector(cells_); }

JointCountTable JointCountTable::from_rows(const std::vector<std::vector<Count>>& rows) {
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("from_rows: empty table");
  const std::size_t width = rows.front().size();
  std::vector<Count> cells;
  cells.reserve(rows.size() * width);
  for (const auto& row : rows) {
    if (row.size() != width) throw std::invalid_argument("from_rows: ragged rows");
    cells.insert(cells.end(), row.begin(), row.end());
  }
  return JointCountTable({rows.size(), width}, std::move(cells));
}

std::variant<CountVector, JointCountTable> marginalize(const JointCountTable& table,
                                                       std::span<const std::size_t> keep) {
  const auto dims = table.dims();
  if (keep.empty()) throw std::invalid_argument("marginalize: no axes retained");
  std::vector<bool> seen(dims.size(), false);
  for (std::size_t a : keep) {
    if (a >= dims.size()) throw std::invalid_argument("marginalize: axis index out of range");
    if (seen[a]) throw std::invalid_argument("marginalize: repeated axis");
    seen[a] = true;
  }

  std::vector<std::size_t> out_dims;
  std::size_t out_cells = 1;
  for (std::size_t a : keep) {
    out_dims.push_back(dims[a]);
    out_cells *= dims[a];
  }

  std::vector<Count> out(out_cells, 0);
  std::vector<std::size_t> index(dims.size(), 0);
  for (Count v : table.cells()) {
    std::size_t flat = 0;
    for (std::size_t a : keep) flat = flat * dims[a] + index[a];
    out[flat] += v;
    // odometer increment, last axis fastest
    for (std::size_t a = dims.size(); a-- > 0;) {
      if (++index[a] < dims[a]) break;
      index[a] = 0;
    }
  }

  if (keep.size() == 1) return CountVector(std::move(out));
  return JointCountTable(std::move(out_dims), std::move(out));
}

CountVector marginal(const JointCountTable& table, std::size_t axis) {
  const std::size_t keep[] = {axis};
  return std::get<CountVector>(marginalize(table, keep));
}

ConcentrationPrior ConcentrationPrior::point(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("concentration must be positive");
  return ConcentrationPrior(PointMass{c});
}

ConcentrationPrior ConcentrationPrior::log_uniform(double c_min, double c_max) {
  if (!(c_min > 0.0) || !(c_max > c_min) || !std::isfinite(c_max)) {
    throw std::invalid_argument("log-uniform concentration prior needs 0 < c_min < c_max");
  }
  return ConcentrationPrior(LogUniform{c_min, c_max});
}

double ConcentrationPrior::density(double c) const {
  if (const auto* lu = std::get_if<LogUniform>(&value_)) {
    if (c < lu->c_min || c > lu->c_max) return 0.0;
    return 1.0 / (c * std::log(lu->c_max / lu->c_min));
  }
  return 0.0;
}

std::string ConcentrationPrior::describe() const {
  std::ostringstream os;
  if (const auto* p = std::get_if<PointMass>(&value_)) {
    os << "c = " << p->c;
  } else {
    const auto& lu = std::get<LogUniform>(value_);
    os << "c ~ log-uniform[" << lu.c_min << ", " << lu.c_max << "]";
  }
  return os.str();
}

SizePrior::SizePrior(Variant v) : value_(v) {
  if (const auto* g = std::get_if<Geometric>(&value_)) {
    // log sum_{m=1}^{K} gamma^m = ln gamma + ln(1 - gamma^K) - ln(1 - gamma)
    const double lg = std::log(g->gamma);
    log_norm_ = lg + std::log(-std::expm1(static_cast<double>(g->m_max) * lg)) - std::log1p(-g->gamma);
  }
}

SizePrior SizePrior::point(Count m) {
  if (m < 1) throw std::invalid_argument("size prior point mass needs m >= 1");
  return SizePrior(PointMass{m});
}

SizePrior SizePrior::uniform(Count m_max) {
  if (m_max < 1) throw std::invalid_argument("uniform size prior needs m_max >= 1");
  return SizePrior(UniformCutoff{m_max});
}

SizePrior SizePrior::geometric(double gamma, Count m_max) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("geometric size prior needs 0 < gamma < 1");
  if (m_max < 1) throw std::invalid_argument("geometric size prior needs m_max >= 1");
  return SizePrior(Geometric{gamma, m_max});
}

SizePrior SizePrior::exponential(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("exponential size prior needs alpha > 0");
  return SizePrior(Exponential{alpha});
}

double SizePrior::log_prob(Count m) const {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (m < 1) return kNegInf;
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return m == p.m ? 0.0 : kNegInf;
        } else if constexpr (std::is_same_v<T, UniformCutoff>) {
          return m <= p.m_max ? -std::log(static_cast<double>(p.m_max)) : kNegInf;
        } else if constexpr (std::is_same_v<T, Geometric>) {
          return m <= p.m_max ? static_cast<double>(m) * std::log(p.gamma) - log_norm_ : kNegInf;
        } else {
          // P(m) = (1 - e^{-alpha}) e^{-alpha (m - 1)}
          return std::log(-std::expm1(-p.alpha)) - p.alpha * static_cast<double>(m - 1);
        }
      },
      value_);
}

double SizePrior::prob(Count m) const { return std::exp(log_prob(m)); }

Count SizePrior::min_support() const {
  if (const auto* p = std::get_if<PointMass>(&value_)) return p->m;
  return 1;
}

std::optional<Count> SizePrior::max_support() const {
  return std::visit(
      [](const auto& p) -> std::optional<Count> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return p.m;
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return std::nullopt;
        } else {
          return p.m_max;
        }
      },
      value_);
}

double SizePrior::tail_mass(Count m) const {
  if (m < 1) return 1.0;
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return m < p.m ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, UniformCutoff>) {
          return m >= p.m_max ? 0.0 : static_cast<double>(p.m_max - m) / static_cast<double>(p.m_max);
        } else if constexpr (std::is_same_v<T, Geometric>) {
          if (m >= p.m_max) return 0.0;
          // sum_{j=m+1}^{K} gamma^j = gamma^{m+1} (1 - gamma^{K-m}) / (1 - gamma)
          const double lg = std::log(p.gamma);
          const double log_tail = static_cast<double>(m + 1) * lg +
                                  std::log(-std::expm1(static_cast<double>(p.m_max - m) * lg)) -
                                  std::log1p(-p.gamma);
          return std::exp(log_tail - log_norm_);
        } else {
          return std::exp(-p.alpha * static_cast<double>(m));
        }
      },
      value_);
}

std::string SizePrior::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          os << "m = " << p.m;
        } else if constexpr (std::is_same_v<T, UniformCutoff>) {
          os << "m ~ uniform[1, " << p.m_max << "]";
        } else if constexpr (std::is_same_v<T, Geometric>) {
          os << "m ~ geometric(gamma=" << p.gamma << ", m_max=" << p.m_max << ")";
        } else {
          os << "m ~ exponential(alpha=" << p.alpha << ")";
        }
      },
      value_);
  return os.str();
}

DirichletSpec::DirichletSpec(double c_, Count m_) : c(c_), m(m_) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("DirichletSpec: c must be positive");
  if (m < 1) throw std::invalid_argument("DirichletSpec: m must be >= 1");
}

MomentEstimate MomentEstimate::from_moments(double mean, double second_moment, Diagnostics diag) {
  MomentEstimate out;
  out.mean = mean;
  out.second_moment = second_moment;
  double var = second_moment - mean * mean;
  if (var < 0.0) {
    if (var < -1e-9) throw std::logic_error("MomentEstimate: negative variance " + std::to_string(var));
    var = 0.0;
  }
  out.variance = var;
  out.diagnostics = diag;
  return out;
}

MomentEstimate MomentEstimate::mean_only(double mean, Diagnostics diag) {
  MomentEstimate out;
  out.mean = mean;
  out.diagnostics = diag;
  return out;
}

double log_G(const CountVector& n, double c, Count m) {
  if (!(c > 0.0)) throw std::invalid_argument("log_G: c must be positive");
  if (m < n.support_size() || m < 1) throw std::invalid_argument("log_G: m smaller than the observed support");
  const double beta = c / static_cast<double>(m);
  double acc = 0.0;
  for (Count v : n.positive()) acc += ln_gamma(static_cast<double>(v) + beta);
  acc += static_cast<double>(m - n.support_size()) * ln_gamma(beta);
  return acc - ln_gamma(static_cast<double>(n.total()) + c);
}

}  // namespace unseen
