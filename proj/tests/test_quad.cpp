#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "unseen/quad.hpp"

using namespace unseen;

namespace {

double weight_sum(const LogGrid& g) {
  double s = 0.0;
  for (const auto& n : g.nodes) s += std::exp(n.log_weight);
  return s;
}

}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(12, x, w);
  REQUIRE(x.size() == 12);
  double w_sum = 0.0, x8 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    w_sum += w[i];
    x8 += w[i] * std::pow(x[i], 8);
    if (i > 0) CHECK(x[i] > x[i - 1]);
  }
  CHECK(w_sum == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(x8 == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("point prior gives a single node") {
  const auto g = c_grid(ConcentrationPrior::point(1.0), 200);
  REQUIRE(g.nodes.size() == 1);
  CHECK(g.nodes[0].c == 1.0);
  CHECK(g.nodes[0].log_weight == 0.0);
}

TEST_CASE("log-uniform grid is normalized, increasing and inside the range") {
  const auto g = c_grid(ConcentrationPrior::log_uniform(1e-3, 1e3), 200);
  REQUIRE(g.nodes.size() == 200);
  CHECK(weight_sum(g) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 1; i < g.nodes.size(); ++i) CHECK(g.nodes[i].c > g.nodes[i - 1].c);
  CHECK(g.nodes.front().c > 1e-3);
  CHECK(g.nodes.back().c < 1e3);
  CHECK(g.nodes.front().c < 1.001e-3);
  CHECK(g.nodes.back().c > 0.999e3);
}

TEST_CASE("expected c under a log-uniform prior matches the closed form") {
  const auto g = c_grid(ConcentrationPrior::log_uniform(0.1, 10.0), 64);
  double ec = 0.0;
  for (const auto& n : g.nodes) ec += n.c * std::exp(n.log_weight);
  CHECK(ec == doctest::Approx(9.9 / std::log(100.0)).epsilon(1e-12));
  CHECK(ec == doctest::Approx(2.1497).epsilon(1e-4));
}

TEST_CASE("log_sum_exp") {
  const double two[] = {0.0, 0.0};
  CHECK(log_sum_exp(two) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  const double one[] = {-3.25};
  CHECK(log_sum_exp(one) == -3.25);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<double> t(1000);
  double naive = 0.0;
  for (auto& v : t) {
    v = u(rng);
    naive += std::exp(v);
  }
  CHECK(log_sum_exp(t) == doctest::Approx(std::log(naive)).epsilon(1e-12));

  const double huge[] = {1000.0, 1000.0};
  CHECK(log_sum_exp(huge) == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS(log_sum_exp(std::span<const double>{}));
}

TEST_CASE("size_sum with a point prior returns the payload exactly") {
  const auto r = size_sum(SizePrior::point(17), 3, [](Count m) { return std::pair{-2.0, 1.5 * m}; });
  CHECK(r.expectation == 1.5 * 17);
  CHECK(r.tail_bound == 0.0);
  CHECK(r.terms == 1);
}

TEST_CASE("size_sum with constant payload returns the constant") {
  const auto r = size_sum(SizePrior::uniform(250), 4, [](Count m) { return std::pair{-0.01 * m, 0.75}; });
  CHECK(r.expectation == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("size_sum reproduces the truncated geometric mean") {
  const double gamma = 0.9;
  double num = 0.0, den = 0.0;
  for (int m = 1; m <= 50; ++m) {
    num += m * std::pow(gamma, m);
    den += std::pow(gamma, m);
  }
  const auto r = size_sum(SizePrior::geometric(gamma, 50), 0, [](Count m) { return std::pair{0.0, double(m)}; });
  CHECK(r.expectation == doctest::Approx(num / den).epsilon(1e-13));
  CHECK(r.terms == 50);
}

TEST_CASE("size_sum is invariant to a constant log-weight shift") {
  auto term = [](double shift) {
    return [shift](Count m) { return std::pair{shift - 0.5 * std::log(double(m)), std::sqrt(double(m))}; };
  };
  const auto prior = SizePrior::uniform(400);
  const auto a = size_sum(prior, 5, term(0.0));
  const auto b = size_sum(prior, 5, term(-800.0));
  const auto c = size_sum(prior, 5, term(700.0));
  CHECK(a.expectation == doctest::Approx(b.expectation).epsilon(1e-13));
  CHECK(a.expectation == doctest::Approx(c.expectation).epsilon(1e-13));
}

TEST_CASE("size_sum truncates unbounded priors and reports the bound") {
  const double alpha = 0.1;
  const auto r = size_sum(SizePrior::exponential(alpha), 1, [](Count m) { return std::pair{0.0, double(m)}; });
  // Mean of a geometric distribution on {1, 2, ...} with ratio e^{-alpha}.
  CHECK(r.expectation == doctest::Approx(1.0 / (1.0 - std::exp(-alpha))).epsilon(1e-9));
  CHECK(r.tail_bound < 1e-12);
  CHECK(r.tail_bound > 0.0);
}

TEST_CASE("size_sum stops early for non-increasing weights") {
  SizeSumOptions opts;
  opts.nonincreasing_weights = true;
  const auto r = size_sum(
      SizePrior::uniform(1'000'000), 1, [](Count m) { return std::pair{-2.0 * double(m), 1.0 / double(m)}; }, opts);
  CHECK(r.terms < 30);
  CHECK(r.tail_bound < 1e-12);
  double num = 0.0, den = 0.0;
  for (int m = 1; m < 60; ++m) {
    num += std::exp(-2.0 * m) / m;
    den += std::exp(-2.0 * m);
  }
  CHECK(r.expectation == doctest::Approx(num / den).epsilon(1e-12));
}

TEST_CASE("size_sum rejects support below the observed bins") {
  CHECK_THROWS_AS(size_sum(SizePrior::uniform(5), 8, [](Count) { return std::pair{0.0, 0.0}; }), SupportExhausted);
  CHECK_THROWS_AS(size_sum(SizePrior::point(3), 4, [](Count) { return std::pair{0.0, 0.0}; }), SupportExhausted);
}
