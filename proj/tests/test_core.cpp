#include <cmath>

#include "cfmm/core.hpp"
#include "doctest.h"

using namespace cfmm;

TEST_CASE("inventory rejects negative and non-finite coordinates") {
  CHECK_NOTHROW(Inventory({0.0, 1.0}));
  CHECK_THROWS_AS(Inventory({-1e-9, 1.0}), DomainError);
  CHECK_THROWS_AS(Inventory({NAN, 1.0}), DomainError);
  CHECK(Inventory({1.0, 2.0}).interior());
  CHECK_FALSE(Inventory({0.0, 2.0}).interior());
}

TEST_CASE("trade vectors add and negate") {
  const TradeVector a{1.0, -2.0};
  const TradeVector b{0.5, 0.5};
  const auto s = a + b;
  CHECK(s[0] == doctest::Approx(1.5));
  CHECK(s[1] == doctest::Approx(-1.5));
  CHECK((-a)[1] == 2.0);
  CHECK_THROWS(a + TradeVector{1.0});
}

TEST_CASE("price vectors are strictly positive") {
  CHECK_THROWS(PriceVector({1.0, 0.0}));
  const PriceVector p{1.0, 4.0};
  const double q[] = {100.0, 100.0};
  CHECK(p.dot(q) == 500.0);
}

TEST_CASE("default asset labels") {
  const auto a = default_assets(3);
  CHECK(a[0].label == "A");
  CHECK(a[2].label == "C");
  CHECK(default_assets(27)[26].label == "AA");
}

TEST_CASE("sampler stays inside the box and is reproducible") {
  SamplerConfig cfg;
  cfg.seed = 1;
  cfg.samples = 3;
  const auto xs = sample_inventories(cfg, 3);
  REQUIRE(xs.size() == 3);
  for (const auto& x : xs) {
    for (double v : x.values()) {
      CHECK(v >= 0.1);
      CHECK(v <= 10.0);
    }
  }
  CHECK(sample_inventories(cfg, 3) == xs);
  cfg.seed = 2;
  CHECK_FALSE(sample_inventories(cfg, 3) == xs);
  cfg.samples = 0;
  CHECK(sample_inventories(cfg, 3).empty());
}

TEST_CASE("sampler config validation") {
  SamplerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.box_low = 20.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.pass_tol = 1e-2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("halton points are in the unit cube and well spread") {
  HaltonSampler h(7, 2);
  double mean0 = 0.0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const auto p = h.point(static_cast<std::size_t>(i));
    CHECK(p[0] >= 0.0);
    CHECK(p[0] < 1.0);
    mean0 += p[0];
  }
  CHECK(mean0 / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("scalar root") {
  CHECK(scalar_root([](double x) { return x - 2.0; }, 0.0, 10.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(scalar_root([](double x) { return x * x - 4.0; }, 0.0, 10.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(scalar_root([](double x) { return x + 1.0; }, 0.0, 10.0), NoBracket);
  // Decreasing functions are bracketed too.
  CHECK(scalar_root([](double x) { return 3.0 - x; }, 0.0, 10.0) == doctest::Approx(3.0));
}

TEST_CASE("scalar root honours the residual bound") {
  auto f = [](double x) { return std::exp(x) - 5.0; };
  const double tol = 1e-9;
  const double x = scalar_root(f, 0.0, 4.0, tol);
  const double scale = std::max({1.0, std::abs(f(0.0)), std::abs(f(4.0))});
  CHECK(std::abs(f(x)) <= tol * scale);
}

TEST_CASE("scalar root survives non-finite values inside the bracket") {
  auto f = [](double x) { return x < 0.5 ? -INFINITY : std::log(x); };
  CHECK(scalar_root(f, 0.0, 3.0) == doctest::Approx(1.0));
}

TEST_CASE("relative scale floor") {
  CHECK(relative_scale(0.0, 0.0) == 1e-9);
  CHECK(relative_scale(-3.0, 2.0) == 3.0);
}
