#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fixtures.hpp"
#include "unseen/baselines.hpp"

using namespace unseen;

TEST_CASE("plug-in entropy") {
  CHECK(plugin_entropy(CountVector({5})) == 0.0);
  CHECK(plugin_entropy(CountVector({2, 2})) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(plugin_entropy(CountVector({3, 0, 1})) == doctest::Approx(0.5623351446188083).epsilon(1e-14));
  CHECK_THROWS_AS(plugin_entropy(CountVector({0, 0})), std::invalid_argument);
}

TEST_CASE("coverage-adjusted entropy for (3, 1)") {
  // N = 4, one singleton: coverage 1 - 1/5, adjusted p = (0.6, 0.2).
  double expected = 0.0;
  for (double p : {0.6, 0.2}) expected += -p * std::log(p) / (1.0 - std::pow(1.0 - p, 4));
  CHECK(cae_entropy(CountVector({3, 1})) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("coverage-adjusted entropy stays finite for all singletons") {
  const double h = cae_entropy(CountVector(std::vector<Count>(10, 1)));
  CHECK(std::isfinite(h));
  CHECK(h > plugin_entropy(CountVector(std::vector<Count>(10, 1))));
}

TEST_CASE("coverage-adjusted entropy approaches plug-in without singletons") {
  std::vector<Count> v;
  for (int i = 0; i < 20; ++i) v.push_back(500 + 7 * i);
  const CountVector n(v);
  CHECK(std::abs(cae_entropy(n) - plugin_entropy(n)) < 1.0 / static_cast<double>(n.total()));
}

TEST_CASE("NSB large-Z") {
  CHECK(nsb_large_z_entropy(CountVector({9}), 1) == 0.0);
  const CountVector n({4, 1, 1, 2});
  const double h = nsb_large_z_entropy(n, 4);
  CHECK(h >= 0.0);
  CHECK(h <= std::log(4.0));
  CHECK_THROWS_AS(nsb_large_z_entropy(n, 3), std::invalid_argument);
}

TEST_CASE("NSB large-Z matches a fine trapezoid oracle") {
  // 400001-point trapezoid over ln c in [1e-8, 1e12] for k_max = 10000.
  CHECK(nsb_large_z_entropy(unseen::testing::skewed_counts(), 10000) ==
        doctest::Approx(0.9256967682742).epsilon(1e-7));
}

TEST_CASE("asymptotic NSB") {
  const double h = asymptotic_nsb_entropy(CountVector({2, 1, 1, 1}));
  CHECK(std::isfinite(h));
  CHECK(h > 0.0);
  CHECK_THROWS_AS(asymptotic_nsb_entropy(CountVector({1, 1, 1})), std::domain_error);

  // N = 20 fixed; more coincidences, lower estimate.
  double prev = 1e300;
  for (Count M = 19; M >= 1; --M) {
    std::vector<Count> v(static_cast<std::size_t>(M), 1);
    v[0] += 20 - M;
    const double cur = asymptotic_nsb_entropy(CountVector(v));
    CHECK(cur < prev);
    prev = cur;
  }
}
