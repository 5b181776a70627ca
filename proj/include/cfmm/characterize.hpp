#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "cfmm/axioms.hpp"
#include "cfmm/catalog.hpp"

namespace cfmm {

struct CurvePoint {
  double z = 0.0;
  double g = 0.0;
  std::optional<double> derivative;  // interior points only
};

/// g(z) = f(1, z) / f(1, 1) on a grid in (0, 1].
struct NormalizedCurve {
  std::vector<CurvePoint> grid;  // increasing in z, last point z = 1
  double scale_c = 0.0;          // f(1, 1)
  double left_derivative_at_one = 0.0;
  double g_at_smallest_z = 0.0;
  /// z values where the slope increases by more than pass_tol (relative).
  std::vector<double> concavity_violations;
  double max_second_difference = 0.0;
};

/// Throws PreconditionFailed unless the spec has two assets and neither the
/// homogeneity nor the symmetry check fails. Anchors are extra z values in
/// (0, 1) added to the grid.
NormalizedCurve extract_g(const AmmSpec& spec, std::size_t grid_size, const SamplerConfig& cfg = {},
                          const std::vector<double>& anchors = {});

/// g(z)/g'(z) - z at a grid point; OutOfGrid otherwise.
double exchange_rate_from_g(const NormalizedCurve& curve, double z);

/// Two columns z,g for plotting.
void write_curve_csv(std::ostream& os, const NormalizedCurve& curve);

/// Slope of log p_{a,b} against log(I_b / I_a) along the liquidity curve through I.
double estimate_elasticity(const AmmSpec& spec, const Inventory& inventory, const AssetId& a, const AssetId& b);

/// Slope of log p_{a,b} against I_b - I_a along the liquidity curve through I.
double estimate_lmsr_b(const AmmSpec& spec, const Inventory& inventory, const AssetId& a, const AssetId& b);

struct CemmFit {
  double gamma = 0.0;
  std::vector<double> weights;
  double scale = 1.0;
  /// Max relative level mismatch of the fitted CEMM over same-level pairs of the spec.
  double residual = 0.0;

  AmmSpec spec(const std::vector<AssetId>& assets) const;
};

/// Throws PreconditionFailed when independence (n >= 3) or liquidity
/// additivity (n = 2), or scale invariance, fails.
CemmFit fit_cemm(const AmmSpec& spec, const SamplerConfig& cfg);

enum class Dominance { f_dominates, g_dominates, incomparable, equivalent };
std::string dominance_name(Dominance d);

struct TradeRow {
  double x = 0.0;
  std::optional<double> y_f;
  std::optional<double> y_g;
};

struct TraderComparison {
  Dominance verdict = Dominance::incomparable;
  std::vector<TradeRow> rows;
};

/// Swap outputs for A -> B from the balanced inventory. Without an explicit
/// grid, {0.1, 0.5, 1, 2, 5} * balance truncated at the first depth failure.
TraderComparison trader_optimality_compare(const AmmSpec& f, const AmmSpec& g, double balance,
                                           std::optional<std::vector<double>> x_grid = std::nullopt,
                                           const SamplerConfig& cfg = {});

enum class Stability { f_more_stable, g_more_stable, tie };
std::string stability_name(Stability s);

struct StabilityComparison {
  Stability verdict = Stability::tie;
  double move_f = 0.0;  // |p_{A,B}(after) - p_{A,B}(before)|
  double move_g = 0.0;
};

StabilityComparison price_stability_compare(const AmmSpec& f, const AmmSpec& g, double balance, double x_small,
                                            const SamplerConfig& cfg = {});

enum class ComponentKind { power, log, exponential };

/// power: c I^gamma + d; log: c log I + d; exponential: c exp((offset - I)/b) + d.
struct SeparableComponent {
  ComponentKind kind = ComponentKind::power;
  double c = 1.0;
  double gamma = 1.0;
  double b = 1.0;
  double offset = 0.0;
  double d = 0.0;

  double operator()(double x) const;
};

struct SeparableForm {
  std::vector<SeparableComponent> components;

  double operator()(std::span<const double> x) const;
  LevelFn level_function() const;
};

/// Closed-form additive representation for cemm, geometric_mean, constant_sum
/// and lmsr; Unsupported otherwise.
SeparableForm separable_form_of(const AmmSpec& spec);

}  // namespace cfmm
