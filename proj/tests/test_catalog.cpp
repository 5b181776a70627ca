#include <cmath>
#include <set>

#include "cfmm/catalog.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cfmm;

namespace {

const AssetId A{"A"}, B{"B"}, C{"C"};

std::vector<double> vec(const Inventory& x) { return x.vector(); }

}  // namespace

TEST_CASE("evaluation at reference points") {
  CHECK(evaluate(AmmSpec::cpmm(), {100.0, 100.0}) == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(evaluate(AmmSpec::constant_sum({1, 1, 1}), {3.0, 4.0, 5.0}) == 12.0);
  CHECK(evaluate(AmmSpec::curve(1.0, 2), {100.0, 100.0}) == doctest::Approx(200.0).epsilon(1e-14));
  // The LMSR is defined on all of R^A, so the zero inventory is interior.
  CHECK(detail::evaluate_raw(AmmSpec::lmsr(1.0, 2), std::vector<double>{0.0, 0.0}) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("cemm evaluation matches the direct power formula") {
  const std::vector<double> w{0.2, 0.3, 0.5};
  for (double g : {-2.0, -1.0, -0.1, 1e-4, 0.0, 0.5, 1.0, 2.0}) {
    const auto spec = AmmSpec::cemm(g, w, 1.7);
    for (const auto& x : std::vector<std::vector<double>>{{1, 2, 3}, {0.1, 10, 4}, {5, 5, 5}}) {
      CAPTURE(g);
      CHECK(oracle::rel_diff(evaluate(spec, Inventory(x)), oracle::cemm(g, w, 1.7, x)) < 1e-8);
    }
  }
}

TEST_CASE("cemm small gamma approaches the geometric mean smoothly") {
  const std::vector<double> w{0.5, 0.5};
  const Inventory x{1.0, 1e4};
  const double g0 = evaluate(AmmSpec::cemm(0.0, w), x);
  CHECK(g0 == doctest::Approx(100.0));
  CHECK(oracle::rel_diff(evaluate(AmmSpec::cemm(1e-12, w), x), g0) < 1e-9);
  CHECK(oracle::rel_diff(evaluate(AmmSpec::cemm(-1e-12, w), x), g0) < 1e-9);
}

TEST_CASE("lmsr is stable for large inventories") {
  const auto spec = AmmSpec::lmsr(1.0, 2);
  const std::vector<double> x{1000.0, 1001.0};
  const double f = detail::evaluate_raw(spec, x);
  CHECK(std::isfinite(f));
  CHECK(f == doctest::Approx(1000.0 - std::log1p(std::exp(-1.0))).epsilon(1e-14));
  CHECK(oracle::rel_diff(detail::evaluate_raw(spec, std::vector<double>{0.3, 2.0}),
                         oracle::lmsr(1.0, {0.3, 2.0})) < 1e-14);
}

TEST_CASE("curve invariant solve") {
  const CurveParams p{1.0};
  CHECK(curve_invariant_solve(p, {100.0, 100.0}) == doctest::Approx(200.0).epsilon(1e-14));
  const double d = curve_invariant_solve(p, {50.0, 200.0});
  CHECK(curve_invariant_residual(p, std::vector<double>{50.0, 200.0}, d) <= 1e-10);
  CHECK(oracle::rel_diff(d, oracle::stableswap_d(1.0, {50.0, 200.0})) < 1e-12);
  CHECK(std::abs(oracle::stableswap_g(1.0, {50.0, 200.0}, d)) <= 1e-10 * d * 100.0);
  CHECK_THROWS_AS(curve_invariant_solve(p, {0.0, 100.0}), DomainError);
}

TEST_CASE("curve invariant for several amplifications and sizes") {
  for (double amp : {0.01, 1.0, 100.0, 5000.0}) {
    for (const auto& x : std::vector<std::vector<double>>{{1e-3, 1e3}, {1, 2, 3}, {7, 0.5, 3, 12}}) {
      const double d = curve_invariant_solve(CurveParams{amp}, Inventory(x));
      CAPTURE(amp);
      CHECK(curve_invariant_residual(CurveParams{amp}, x, d) <= 1e-10);
      CHECK(oracle::rel_diff(d, oracle::stableswap_d(amp, x)) < 1e-10);
    }
  }
}

TEST_CASE("analytic gradients at reference points") {
  const auto g = gradient(AmmSpec::cpmm(), {100.0, 100.0});
  CHECK(g[0] == doctest::Approx(0.5));
  CHECK(g[1] == doctest::Approx(0.5));
  const auto s = gradient(AmmSpec::constant_sum({1, 1, 1}), {2.0, 7.0, 9.0});
  for (std::size_t i = 0; i < 3; ++i) CHECK(s[i] == 1.0);
  const auto l = detail::gradient_raw(AmmSpec::lmsr(1.0, 2), std::vector<double>{0.0, 0.0});
  CHECK(l[0] == doctest::Approx(0.5));
  CHECK(l[1] == doctest::Approx(0.5));
}

TEST_CASE("finite difference gradient agrees with the analytic one") {
  const auto cp = AmmSpec::cpmm();
  const auto a = gradient(cp, {100.0, 100.0});
  const auto f = finite_diff_gradient(cp, {100.0, 100.0}, 1e-5);
  for (std::size_t i = 0; i < 2; ++i) CHECK(oracle::rel_diff(a[i], f[i]) <= 1e-8);

  const auto cs = AmmSpec::constant_sum({1, 1});
  const auto fs = finite_diff_gradient(cs, {3.0, 4.0}, 1e-5);
  CHECK(fs[0] == doctest::Approx(1.0).epsilon(1e-9));

  const auto cv = AmmSpec::curve(1.0, 2);
  const auto ac = gradient(cv, {50.0, 200.0});
  const auto fc = finite_diff_gradient(cv, {50.0, 200.0}, 1e-5);
  for (std::size_t i = 0; i < 2; ++i) CHECK(oracle::rel_diff(ac[i], fc[i]) <= 1e-6);
}

TEST_CASE("curve gradient against an independent bisection oracle") {
  const std::vector<double> x{3.0, 0.4, 9.0};
  const auto a = gradient(AmmSpec::curve(2.0, 3), Inventory(x));
  const auto o = oracle::fd_gradient([](const std::vector<double>& y) { return oracle::stableswap_d(2.0, y); }, x, 1e-4);
  for (std::size_t i = 0; i < 3; ++i) CHECK(oracle::rel_diff(a[i], o[i]) < 1e-7);
}

TEST_CASE("marginal exchange rates") {
  CHECK(marginal_exchange_rate(AmmSpec::cpmm(), {100.0, 50.0}, A, B) == doctest::Approx(0.5));
  const auto ex1 = AmmSpec::counterexample(CounterexampleKind::pairwise_products, 3);
  CHECK(marginal_exchange_rate(ex1, {1.0, 2.0, 0.0}, A, B) == doctest::Approx(2.0));
  CHECK(marginal_exchange_rate(ex1, {1.0, 2.0, 1.0}, A, B) == doctest::Approx(1.5));
  CHECK(marginal_exchange_rate(AmmSpec::lmsr(1.0, 2), {3.0, 5.0}, A, B) ==
        doctest::Approx(std::exp(2.0)).epsilon(1e-14));
  CHECK_THROWS(marginal_exchange_rate(AmmSpec::cpmm(), {1.0, 1.0}, A, C));
  CHECK_THROWS_AS(gradient(AmmSpec::cpmm(), {0.0, 1.0}), DomainError);
}

TEST_CASE("spec validation") {
  CHECK_THROWS(AmmSpec::cemm(0.5, {0.5, 0.6}));
  CHECK_THROWS(AmmSpec::cemm(0.5, {1.5, -0.5}));
  CHECK_THROWS(AmmSpec::lmsr(0.0, 2));
  CHECK_THROWS(AmmSpec::constant_sum({1.0, 0.0}));
  CHECK_THROWS(AmmSpec::curve(-1.0, 2));
  CHECK_THROWS(AmmSpec::curve(1.0, 1));
  CHECK_THROWS(AmmSpec::lmsr(1.0, 2, {0.0}));
  CHECK_THROWS(AmmSpec(default_assets(3), V3Params{1.0, 1.0}));
  CHECK_THROWS(AmmSpec({A, A}, CurveParams{1.0}));
  CHECK_THROWS(evaluate(AmmSpec::cpmm(), {1.0, 2.0, 3.0}));
}

TEST_CASE("trading functions increase in every coordinate on the interior") {
  for (const auto& e : catalog_entries()) {
    CAPTURE(e.key);
    const std::size_t n = e.spec.dimension();
    SamplerConfig cfg;
    cfg.samples = 20;
    for (const auto& x : sample_inventories(cfg, n)) {
      for (std::size_t i = 0; i < n; ++i) {
        auto y = vec(x);
        y[i] *= 1.01;
        CHECK(detail::evaluate_raw(e.spec, y) > detail::evaluate_raw(e.spec, x.values()));
      }
    }
  }
}

TEST_CASE("catalog registry") {
  const auto entries = catalog_entries();
  std::set<std::string> keys;
  for (const auto& e : entries) keys.insert(e.key);
  CHECK(keys.size() == entries.size());
  for (const char* k : {"cpmm", "constant_sum", "uniswap_v3", "curve2", "lmsr_b1", "lmsr_bneg", "pairwise_products",
                        "linear_plus_sqrt", "triple_product_pairwise", "cemm_pair_sum", "cemm_gamma2",
                        "smoothed_translation", "unscaled_product", "asymmetric_geometric",
                        "piecewise_norm_product", "mixed_cubic"}) {
    CAPTURE(k);
    CHECK(keys.count(k) == 1);
  }
  const auto cp = find_catalog_entry("cpmm");
  REQUIRE(cp);
  CHECK(cp->expected.at(Axiom::scale_invariance) == Verdict::pass);
  CHECK(cp->expected.at(Axiom::translation_invariance) == Verdict::fail);
  CHECK_FALSE(find_catalog_entry("nope"));
}

TEST_CASE("name tables round trip") {
  for (Axiom a : kAllAxioms) CHECK(axiom_from_name(axiom_name(a)) == a);
  for (Family f : {Family::cemm, Family::geometric_mean, Family::constant_sum, Family::uniswap_v3, Family::curve,
                   Family::lmsr, Family::counterexample})
    CHECK(family_from_name(family_name(f)) == f);
  CHECK_FALSE(axiom_from_name("bogus"));
}

TEST_CASE("boundary limits") {
  CHECK(detail::evaluate_limit(AmmSpec::curve(1.0, 2), std::vector<double>{0.0, 5.0}) == 0.0);
  CHECK(detail::evaluate_limit(AmmSpec::cpmm(), std::vector<double>{0.0, 5.0}) == 0.0);
  const auto sep = AmmSpec::cemm(-1.0, {0.5, 0.5}, 1.0, CemmForm::separable);
  CHECK(std::isinf(detail::evaluate_limit(sep, std::vector<double>{0.0, 5.0})));
}
