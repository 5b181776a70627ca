#include <cmath>
#include <sstream>

#include "cfmm/characterize.hpp"
#include "cfmm/engine.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cfmm;

namespace {

const AssetId A{"A"}, B{"B"}, C{"C"};

SamplerConfig config(std::size_t samples = 60) {
  SamplerConfig cfg;
  cfg.samples = samples;
  return cfg;
}

const CurvePoint& at(const NormalizedCurve& c, double z) {
  for (const auto& p : c.grid) {
    if (std::abs(p.z - z) < 1e-15) return p;
  }
  throw std::runtime_error("grid point missing");
}

}  // namespace

TEST_CASE("normalized curve of the product rule") {
  const auto c = extract_g(AmmSpec::cpmm(), 100, config(), {0.25, 0.5});
  CHECK(at(c, 0.25).g == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(c.grid.back().z == 1.0);
  CHECK(c.grid.back().g == 1.0);
  CHECK(c.left_derivative_at_one == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(exchange_rate_from_g(c, 0.25) == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(c.concavity_violations.empty());
  for (const auto& p : c.grid) CHECK(std::abs(p.g - std::sqrt(p.z)) <= 1e-10);
}

TEST_CASE("normalized curve of the harmonic cemm") {
  const auto c = extract_g(AmmSpec::symmetric_cemm(-1.0, 2), 60, config(), {0.5});
  CHECK(at(c, 0.5).g == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(exchange_rate_from_g(c, 0.5) == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("normalized curves of cemms with non-positive gamma are concave increasing bijections") {
  for (double g : {-3.0, -1.0, -0.5, 0.0}) {
    CAPTURE(g);
    const auto c = extract_g(AmmSpec::symmetric_cemm(g, 2), 80, config());
    for (std::size_t i = 1; i < c.grid.size(); ++i) CHECK(c.grid[i].g > c.grid[i - 1].g);
    CHECK(c.concavity_violations.empty());
    CHECK(c.max_second_difference <= 1e-6);
    CHECK(c.grid.back().g == 1.0);
    CHECK(c.grid.front().g >= 0.0);
    CHECK(std::abs(c.left_derivative_at_one - 0.5) <= 1e-3);
  }
}

TEST_CASE("exchange rate from g approaches one at the diagonal") {
  const auto c = extract_g(AmmSpec::symmetric_cemm(-2.0, 2), 200, config());
  const auto& p = c.grid[c.grid.size() - 2];
  CHECK(exchange_rate_from_g(c, p.z) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("extract_g preconditions and grid errors") {
  CHECK_THROWS_AS(extract_g(AmmSpec::cpmm(3), 10, config()), PreconditionFailed);
  CHECK_THROWS_AS(extract_g(find_catalog_entry("asymmetric_geometric")->spec, 10, config()), PreconditionFailed);
  CHECK_THROWS_AS(extract_g(find_catalog_entry("unscaled_product")->spec, 10, config()), PreconditionFailed);
  const auto c = extract_g(AmmSpec::cpmm(), 10, config());
  CHECK_THROWS_AS(exchange_rate_from_g(c, 0.123456789), OutOfGrid);
  CHECK_THROWS_AS(exchange_rate_from_g(c, 1.0), OutOfGrid);
}

TEST_CASE("curve csv export") {
  const auto c = extract_g(AmmSpec::cpmm(), 5, config());
  std::ostringstream os;
  write_curve_csv(os, c);
  const auto text = os.str();
  CHECK(text.rfind("z,g\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(c.grid.size() + 1));
}

TEST_CASE("elasticity estimates") {
  const Inventory x{2.0, 3.0, 5.0};
  for (double g : {-2.0, -1.0, 0.0, 0.5}) {
    CAPTURE(g);
    const auto spec = AmmSpec::cemm(g, {0.2, 0.3, 0.5});
    CHECK(std::abs(estimate_elasticity(spec, x, A, B) - (1.0 - g)) <= 1e-4);
  }
}

TEST_CASE("elasticity is shared by equivalent forms") {
  const Inventory x{2.0, 7.0};
  for (double g : {-1.0, 0.0, 0.5}) {
    const auto raw = AmmSpec::cemm(g, {0.4, 0.6});
    const auto sep = AmmSpec::cemm(g, {0.4, 0.6}, 3.0, CemmForm::separable);
    CHECK(std::abs(estimate_elasticity(raw, x, A, B) - estimate_elasticity(sep, x, A, B)) <= 1e-8);
  }
}

TEST_CASE("lmsr slope estimates") {
  const Inventory x{1.0, 2.0, 4.0};
  for (double b : {0.5, 1.0, 10.0}) CHECK(std::abs(estimate_lmsr_b(AmmSpec::lmsr(b, 3), x, A, B) - 1.0 / b) <= 1e-6);
  CHECK(std::abs(estimate_lmsr_b(AmmSpec::constant_sum({1, 1, 1}), x, A, B)) <= 1e-8);
}

TEST_CASE("fitting cemms") {
  const auto fit = fit_cemm(AmmSpec::cpmm(3), config());
  CHECK(std::abs(fit.gamma) <= 1e-4);
  for (double w : fit.weights) CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
  CHECK(fit.residual <= 1e-6);

  const auto raw = AmmSpec::cemm(0.5, {0.2, 0.3, 0.5}, 1.0, CemmForm::separable);
  const auto f2 = fit_cemm(raw, config());
  CHECK(f2.gamma == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(f2.weights[0] == doctest::Approx(0.2).epsilon(1e-4));
  CHECK(f2.weights[2] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(f2.residual <= 1e-6);

  CHECK_THROWS_AS(fit_cemm(find_catalog_entry("pairwise_products")->spec, config()), PreconditionFailed);
  CHECK_THROWS_AS(fit_cemm(find_catalog_entry("mixed_cubic")->spec, config()), PreconditionFailed);
}

TEST_CASE("scale invariant independent catalog entries are equivalent to a fitted cemm") {
  for (const auto& e : catalog_entries()) {
    if (e.spec.dimension() != 3) continue;
    const auto cfg = config(40);
    if (check_independence(e.spec, cfg).verdict != Verdict::pass) continue;
    if (check_scale_invariance(e.spec, cfg).verdict != Verdict::pass) continue;
    CAPTURE(e.key);
    const auto fit = fit_cemm(e.spec, cfg);
    CHECK(fit.residual <= 1e-6);
    CHECK(check_equivalence(e.spec, fit.spec(e.spec.assets()), cfg).verdict == Verdict::pass);
  }
}

TEST_CASE("trader optimality") {
  const auto cp = AmmSpec::cpmm();
  const auto h = AmmSpec::symmetric_cemm(-1.0, 2);
  const auto r = trader_optimality_compare(cp, h, 100.0, std::vector<double>{100.0});
  CHECK(r.verdict == Dominance::f_dominates);
  REQUIRE(r.rows.size() == 1);
  CHECK(*r.rows[0].y_f == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(std::abs(*r.rows[0].y_g - 100.0 / 3.0) <= 1e-6);

  CHECK(trader_optimality_compare(cp, find_catalog_entry("unscaled_product")->spec, 100.0).verdict ==
        Dominance::equivalent);
  CHECK(trader_optimality_compare(h, cp, 100.0).verdict == Dominance::g_dominates);
}

TEST_CASE("trader optimality is antisymmetric") {
  const std::vector<AmmSpec> specs{AmmSpec::cpmm(), AmmSpec::symmetric_cemm(-1.0, 2), AmmSpec::symmetric_cemm(-2.0, 2),
                                   AmmSpec::symmetric_cemm(0.5, 2), AmmSpec::constant_sum({1, 1})};
  auto flip = [](Dominance d) {
    if (d == Dominance::f_dominates) return Dominance::g_dominates;
    if (d == Dominance::g_dominates) return Dominance::f_dominates;
    return d;
  };
  for (const auto& f : specs) {
    for (const auto& g : specs) {
      CHECK(trader_optimality_compare(f, g, 100.0).verdict == flip(trader_optimality_compare(g, f, 100.0).verdict));
    }
  }
}

TEST_CASE("default trade grid stops at the first depth failure") {
  const auto r = trader_optimality_compare(AmmSpec::constant_sum({1, 1}), AmmSpec::cpmm(), 100.0);
  // From 100 units of A on, the constant sum would have to hand over its whole reserve.
  CHECK(r.rows.size() == 2);
}

TEST_CASE("price stability") {
  const auto cp = AmmSpec::cpmm();
  const auto h = AmmSpec::symmetric_cemm(-1.0, 2);
  const auto s = price_stability_compare(cp, h, 100.0, 1.0);
  CHECK(s.verdict == Stability::f_more_stable);
  CHECK(s.move_f < s.move_g);
  CHECK(price_stability_compare(cp, cp, 100.0, 1.0).verdict == Stability::tie);
  const auto cs = price_stability_compare(cp, AmmSpec::constant_sum({1, 1}), 100.0, 1.0);
  CHECK(cs.verdict == Stability::g_more_stable);
  CHECK(cs.move_g == 0.0);
}

TEST_CASE("separable forms") {
  const auto cp = separable_form_of(AmmSpec::cpmm());
  REQUIRE(cp.components.size() == 2);
  CHECK(cp.components[0].kind == ComponentKind::log);
  CHECK(cp.components[0].c == doctest::Approx(0.5));

  const auto lm = separable_form_of(AmmSpec::lmsr(1.0, 2));
  CHECK(lm.components[0].kind == ComponentKind::exponential);
  CHECK(lm.components[0](0.0) == doctest::Approx(-1.0));
  CHECK(lm.components[0](1.0) == doctest::Approx(-std::exp(-1.0)));

  CHECK_THROWS_AS(separable_form_of(AmmSpec::curve(1.0, 2)), Unsupported);
  CHECK_THROWS_AS(separable_form_of(AmmSpec::uniswap_v3(1.0, 1.0)), Unsupported);
}

TEST_CASE("separable forms are equivalent to their specs") {
  for (const auto& spec : {AmmSpec::cpmm(3), AmmSpec::cemm(-1.0, {0.2, 0.3, 0.5}), AmmSpec::cemm(0.5, {0.2, 0.3, 0.5}),
                           AmmSpec::geometric_mean({1.0, 2.0, 0.5}), AmmSpec::constant_sum({1, 2, 3}),
                           AmmSpec::lmsr(2.0, 3, {0.1, 0.0, -0.3}), AmmSpec::lmsr(-1.0, 3)}) {
    const auto form = separable_form_of(spec);
    for (const auto& c : form.components) CHECK(c(2.0) > c(1.0));
    CHECK(check_equivalence(level_function(spec), form.level_function(), spec.dimension(), config()).verdict ==
          Verdict::pass);
  }
}
