#include "cfmm/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cfmm/engine.hpp"

namespace cfmm {

namespace {

double f2(const AmmSpec& spec, double a, double b) {
  const double x[2] = {a, b};
  return detail::evaluate_raw(spec, x);
}

double log_rate(const AmmSpec& spec, std::span<const double> x, std::size_t a, std::size_t b) {
  const auto g = detail::gradient_raw(spec, x);
  if (!(g[a] > 0.0 && g[b] > 0.0)) throw DomainError("non-positive marginal price");
  return std::log(g[a]) - std::log(g[b]);
}

std::vector<double> balanced(std::size_t n, double v) { return std::vector<double>(n, v); }

}  // namespace

NormalizedCurve extract_g(const AmmSpec& spec, std::size_t grid_size, const SamplerConfig& cfg,
                          const std::vector<double>& anchors) {
  if (spec.dimension() != 2) throw PreconditionFailed("extract_g needs a two-asset spec");
  if (grid_size < 4) throw std::invalid_argument("extract_g: grid_size must be at least 4");
  if (check_homogeneity(spec, cfg).verdict == Verdict::fail) {
    throw PreconditionFailed("extract_g: spec is not homogeneous");
  }
  if (check_symmetry(spec, cfg).verdict == Verdict::fail) {
    throw PreconditionFailed("extract_g: spec is not symmetric");
  }

  // Geometric towards 0 on the lower half, geometric towards 1 on the upper half.
  constexpr double z_min = 1e-4;
  const std::size_t lower = grid_size / 2;
  const std::size_t upper = grid_size - lower;
  std::vector<double> zs;
  for (std::size_t i = 0; i < lower; ++i) {
    zs.push_back(z_min * std::pow(0.5 / z_min, static_cast<double>(i) / static_cast<double>(lower - 1)));
  }
  for (std::size_t j = 0; j + 1 < upper; ++j) {
    zs.push_back(1.0 - 0.5 * std::pow(z_min / 0.5, static_cast<double>(j + 1) / static_cast<double>(upper - 1)));
  }
  zs.push_back(1.0);
  for (double z : anchors) {
    if (!(z > 0.0 && z < 1.0)) throw std::invalid_argument("extract_g: anchors must lie in (0, 1)");
    zs.push_back(z);
  }
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12 * b; }),
           zs.end());

  NormalizedCurve curve;
  curve.scale_c = f2(spec, 1.0, 1.0);
  if (!(curve.scale_c > 0.0)) throw PreconditionFailed("extract_g: f(1,1) must be positive");
  const double c = curve.scale_c;
  for (double z : zs) {
    CurvePoint p;
    p.z = z;
    p.g = z == 1.0 ? 1.0 : f2(spec, 1.0, z) / c;
    if (z < 1.0) {
      const double d = 1e-5 * z;
      p.derivative = (f2(spec, 1.0, z + d) - f2(spec, 1.0, z - d)) / (2.0 * d * c);
    }
    curve.grid.push_back(p);
  }
  constexpr double h = 1e-4;
  curve.left_derivative_at_one =
      (3.0 * 1.0 - 4.0 * f2(spec, 1.0, 1.0 - h) / c + f2(spec, 1.0, 1.0 - 2.0 * h) / c) / (2.0 * h);
  curve.g_at_smallest_z = curve.grid.front().g;

  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < curve.grid.size(); ++i) {
    const auto& l = curve.grid[i - 1];
    const auto& m = curve.grid[i];
    const auto& r = curve.grid[i + 1];
    const double s0 = (m.g - l.g) / (m.z - l.z);
    const double s1 = (r.g - m.g) / (r.z - m.z);
    const double rel = (s1 - s0) / std::max(std::abs(s0), std::abs(s1));
    worst = std::max(worst, rel);
    if (rel > cfg.pass_tol) curve.concavity_violations.push_back(m.z);
  }
  curve.max_second_difference = worst;
  return curve;
}

double exchange_rate_from_g(const NormalizedCurve& curve, double z) {
  if (!(z > 0.0 && z < 1.0)) throw OutOfGrid("exchange_rate_from_g: z must lie in (0, 1)");
  for (const auto& p : curve.grid) {
    if (std::abs(p.z - z) <= 1e-12 * z && p.derivative) return p.g / *p.derivative - p.z;
  }
  throw OutOfGrid("exchange_rate_from_g: z is not a grid point");
}

void write_curve_csv(std::ostream& os, const NormalizedCurve& curve) {
  char buf[64];
  os << "z,g\n";
  for (const auto& p : curve.grid) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", p.z, p.g);
    os << buf;
  }
}

namespace {

// Moves I_a by +/- step, level-solves I_b, and returns the two points.
std::pair<std::vector<double>, std::vector<double>> neighbours_on_curve(const AmmSpec& spec,
                                                                        const Inventory& inventory,
                                                                        std::size_t a, std::size_t b,
                                                                        bool multiplicative) {
  if (a == b) throw std::invalid_argument("assets must differ");
  constexpr double h = 1e-3;
  const auto F = level_function(spec);
  const auto& I = inventory.vector();
  const double k = detail::evaluate_raw(spec, I);
  const double lo = spec.whole_space_domain() ? -std::numeric_limits<double>::infinity() : 0.0;
  double cap = 1.0;
  for (double v : I) cap = std::max(cap, std::abs(v));
  cap *= 1e6;
  std::vector<double> out[2];
  for (int s = 0; s < 2; ++s) {
    const double sign = s == 0 ? 1.0 : -1.0;
    std::vector<double> x = I;
    x[a] = multiplicative ? I[a] * std::exp(sign * h) : I[a] + sign * h * std::max(1.0, std::abs(I[a]));
    if (!solve_coordinate(F, x, b, k, lo, cap)) throw DomainError("liquidity curve leaves the domain near I");
    out[s] = std::move(x);
  }
  return {out[0], out[1]};
}

}  // namespace

double estimate_elasticity(const AmmSpec& spec, const Inventory& inventory, const AssetId& a, const AssetId& b) {
  const std::size_t ia = spec.index_of(a);
  const std::size_t ib = spec.index_of(b);
  if (!inventory.interior()) throw DomainError("estimate_elasticity: inventory must be interior");
  const auto [up, down] = neighbours_on_curve(spec, inventory, ia, ib, true);
  const double dl = std::log(up[ib] / up[ia]) - std::log(down[ib] / down[ia]);
  return (log_rate(spec, up, ia, ib) - log_rate(spec, down, ia, ib)) / dl;
}

double estimate_lmsr_b(const AmmSpec& spec, const Inventory& inventory, const AssetId& a, const AssetId& b) {
  const std::size_t ia = spec.index_of(a);
  const std::size_t ib = spec.index_of(b);
  const auto [up, down] = neighbours_on_curve(spec, inventory, ia, ib, false);
  const double dd = (up[ib] - up[ia]) - (down[ib] - down[ia]);
  return (log_rate(spec, up, ia, ib) - log_rate(spec, down, ia, ib)) / dd;
}

AmmSpec CemmFit::spec(const std::vector<AssetId>& assets) const {
  return AmmSpec(assets, CemmParams{gamma, weights, scale, CemmForm::homogeneous});
}

CemmFit fit_cemm(const AmmSpec& spec, const SamplerConfig& cfg) {
  const std::size_t n = spec.dimension();
  const auto structural = n >= 3 ? check_independence(spec, cfg) : check_liquidity_additivity(spec, cfg);
  if (structural.verdict == Verdict::fail) {
    throw PreconditionFailed("fit_cemm: " + axiom_name(structural.axiom) + " fails");
  }
  if (check_scale_invariance(spec, cfg).verdict == Verdict::fail) {
    throw PreconditionFailed("fit_cemm: scale invariance fails");
  }
  const Inventory ones(balanced(n, 1.0));
  CemmFit fit;
  fit.gamma = 1.0 - estimate_elasticity(spec, ones, spec.assets()[0], spec.assets()[1]);
  auto grad = detail::gradient_raw(spec, ones.values());
  double total = 0.0;
  for (double g : grad) total += g;
  for (double& g : grad) g /= total;
  fit.weights = grad;
  const double level = detail::evaluate_raw(spec, ones.values());
  fit.scale = level > 0.0 ? level : 1.0;
  const auto rep = check_equivalence(spec, fit.spec(spec.assets()), cfg);
  fit.residual = rep.max_residual;
  return fit;
}

std::string dominance_name(Dominance d) {
  switch (d) {
    case Dominance::f_dominates:
      return "f_dominates";
    case Dominance::g_dominates:
      return "g_dominates";
    case Dominance::incomparable:
      return "incomparable";
    case Dominance::equivalent:
      return "equivalent";
  }
  return "?";
}

TraderComparison trader_optimality_compare(const AmmSpec& f, const AmmSpec& g, double balance,
                                           std::optional<std::vector<double>> x_grid, const SamplerConfig& cfg) {
  if (f.dimension() != g.dimension()) throw DimensionError("trader_optimality_compare: dimension mismatch");
  if (!(balance > 0.0)) throw std::invalid_argument("balance must be positive");
  const bool truncate = !x_grid.has_value();
  const std::vector<double> xs =
      x_grid ? *x_grid : std::vector<double>{0.1 * balance, 0.5 * balance, balance, 2.0 * balance, 5.0 * balance};
  const Inventory I(balanced(f.dimension(), balance));
  auto quote = [&](const AmmSpec& s, double x) -> std::optional<double> {
    try {
      return swap_quote(s, I, s.assets()[0], s.assets()[1], x).amount_out;
    } catch (const InsufficientDepth&) {
      return std::nullopt;
    }
  };

  TraderComparison cmp;
  bool pos = false, neg = false, f_ok = true, g_ok = true, any = false;
  for (double x : xs) {
    TradeRow row{x, quote(f, x), quote(g, x)};
    if (truncate && (!row.y_f || !row.y_g)) break;
    cmp.rows.push_back(row);
    if (!row.y_f || !row.y_g) continue;
    any = true;
    const double d = (*row.y_f - *row.y_g) / std::max({std::abs(*row.y_f), std::abs(*row.y_g), 1e-300});
    pos = pos || d >= cfg.fail_tol;
    neg = neg || d <= -cfg.fail_tol;
    f_ok = f_ok && d >= -cfg.pass_tol;
    g_ok = g_ok && d <= cfg.pass_tol;
  }
  if (!any) {
    cmp.verdict = Dominance::incomparable;
  } else if (pos && f_ok) {
    cmp.verdict = Dominance::f_dominates;
  } else if (neg && g_ok) {
    cmp.verdict = Dominance::g_dominates;
  } else if (pos || neg) {
    cmp.verdict = Dominance::incomparable;
  } else {
    cmp.verdict = Dominance::equivalent;
  }
  return cmp;
}

std::string stability_name(Stability s) {
  switch (s) {
    case Stability::f_more_stable:
      return "f_more_stable";
    case Stability::g_more_stable:
      return "g_more_stable";
    case Stability::tie:
      return "tie";
  }
  return "?";
}

StabilityComparison price_stability_compare(const AmmSpec& f, const AmmSpec& g, double balance, double x_small,
                                            const SamplerConfig& cfg) {
  auto move = [&](const AmmSpec& s) {
    const Inventory I(balanced(s.dimension(), balance));
    const auto& A = s.assets()[0];
    const auto& B = s.assets()[1];
    const double before = marginal_exchange_rate(s, I, A, B);
    const auto q = swap_quote(s, I, A, B, x_small);
    return std::abs(marginal_exchange_rate(s, q.new_inventory, A, B) - before);
  };
  StabilityComparison out;
  out.move_f = move(f);
  out.move_g = move(g);
  const double tol = cfg.pass_tol * std::max({1.0, out.move_f, out.move_g});
  if (std::abs(out.move_f - out.move_g) <= tol) {
    out.verdict = Stability::tie;
  } else {
    out.verdict = out.move_f < out.move_g ? Stability::f_more_stable : Stability::g_more_stable;
  }
  return out;
}

double SeparableComponent::operator()(double x) const {
  switch (kind) {
    case ComponentKind::power:
      if (x == 0.0 && gamma < 0.0) return -std::numeric_limits<double>::infinity();
      return c * std::pow(x, gamma) + d;
    case ComponentKind::log:
      if (x == 0.0) return -std::numeric_limits<double>::infinity();
      return c * std::log(x) + d;
    case ComponentKind::exponential:
      return c * std::exp((offset - x) / b) + d;
  }
  return 0.0;
}

double SeparableForm::operator()(std::span<const double> x) const {
  if (x.size() != components.size()) throw DimensionError("separable form: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += components[i](x[i]);
  return s;
}

LevelFn SeparableForm::level_function() const {
  return [self = *this](std::span<const double> x) { return self(x); };
}

SeparableForm separable_form_of(const AmmSpec& spec) {
  SeparableForm form;
  const std::size_t n = spec.dimension();
  auto power = [](double c, double gamma) {
    SeparableComponent s;
    s.kind = ComponentKind::power;
    s.c = c;
    s.gamma = gamma;
    return s;
  };
  auto log = [](double c) {
    SeparableComponent s;
    s.kind = ComponentKind::log;
    s.c = c;
    return s;
  };
  if (const auto* p = std::get_if<CemmParams>(&spec.params())) {
    const double mult = p->form == CemmForm::separable ? p->scale : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = mult * p->weights[i];
      form.components.push_back(p->gamma == 0.0 ? log(w) : power(p->gamma > 0.0 ? w : -w, p->gamma));
    }
  } else if (const auto* p = std::get_if<GeometricMeanParams>(&spec.params())) {
    for (double e : p->exponents) form.components.push_back(log(e));
  } else if (const auto* p = std::get_if<ConstantSumParams>(&spec.params())) {
    for (double c : p->coefficients) form.components.push_back(power(c, 1.0));
  } else if (const auto* p = std::get_if<LmsrParams>(&spec.params())) {
    for (double off : p->offsets) {
      SeparableComponent s;
      s.kind = ComponentKind::exponential;
      s.c = p->b > 0.0 ? -1.0 : 1.0;
      s.b = p->b;
      s.offset = off;
      form.components.push_back(s);
    }
  } else {
    throw Unsupported("separable_form_of: no closed-form additive representation for " +
                      family_name(spec.family()));
  }
  return form;
}

}  // namespace cfmm
