#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cfmm/core.hpp"

namespace cfmm {

enum class Family { cemm, geometric_mean, constant_sum, uniswap_v3, curve, lmsr, counterexample };

enum class CemmForm {
  /// c * (sum_A w_A I_A^gamma)^(1/gamma), or c * prod_A I_A^w_A for gamma == 0.
  homogeneous,
  /// sign(gamma) * c * sum_A w_A I_A^gamma, or c * sum_A w_A log I_A for gamma == 0.
  separable,
};

/// Constant inventory elasticity. Weights are positive and sum to one; any
/// real gamma is accepted (gamma > 1 gives non-convex liquidity curves).
struct CemmParams {
  double gamma = 0.0;
  std::vector<double> weights;
  double scale = 1.0;
  CemmForm form = CemmForm::homogeneous;

  double elasticity() const { return 1.0 / (1.0 - gamma); }
};

/// prod_A I_A^e_A with arbitrary positive exponents (not necessarily summing to one).
struct GeometricMeanParams {
  std::vector<double> exponents;
  double scale = 1.0;
};

struct ConstantSumParams {
  std::vector<double> coefficients;
};

/// sqrt((I_A + alpha)(I_B + beta)); two assets only.
struct V3Params {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Stableswap invariant; n is the asset count of the spec.
struct CurveParams {
  double amplification = 1.0;
};

/// -b log sum_A exp((c_A - I_A)/b), b != 0.
struct LmsrParams {
  double b = 1.0;
  std::vector<double> offsets;
};

enum class CounterexampleKind {
  pairwise_products,        // sum_{A<B} I_A I_B
  pairwise_products_sqrt,   // sqrt(sum_{A<B} I_A I_B)
  linear_plus_sqrt,         // sum_A (I_A + sqrt(I_A))
  triple_product_pairwise,  // prod_A I_A * sum_{A<B} I_A I_B
  cemm_pair_sum,            // -sum_A (I_A^g1 + I_A^g2), g1 != g2 < 0
  smoothed_translation,     // (1/n)(sum I - 1/(n-1) sum_{A<B} sqrt(1 + (I_A - I_B)^2))
  piecewise_norm_product,   // |I| on I_B/2 <= I_A <= 2 I_B, sqrt(2.5 I_A I_B) elsewhere
  mixed_cubic,              // (I_A I_B^2 + I_A^2 I_B)^(1/3)
};

struct CounterexampleParams {
  CounterexampleKind kind = CounterexampleKind::pairwise_products;
  double gamma1 = -1.0;
  double gamma2 = -2.0;
};

using FamilyParams = std::variant<CemmParams, GeometricMeanParams, ConstantSumParams, V3Params,
                                  CurveParams, LmsrParams, CounterexampleParams>;

/// A trading-function family with parameters over an ordered asset universe.
/// Immutable after construction; the constructor validates the parameters.
class AmmSpec {
 public:
  AmmSpec(std::vector<AssetId> assets, FamilyParams params);

  Family family() const;
  const std::vector<AssetId>& assets() const { return assets_; }
  std::size_t dimension() const { return assets_.size(); }
  const FamilyParams& params() const { return params_; }
  std::size_t index_of(const AssetId& asset) const;

  /// Defined on all of R^A (the LMSR and the smoothed translation example);
  /// other families live on the non-negative orthant.
  bool whole_space_domain() const;
  /// False only for the piecewise example, which has kinks.
  bool differentiable() const;

  static AmmSpec cpmm(std::size_t n = 2);
  static AmmSpec cemm(double gamma, std::vector<double> weights, double scale = 1.0,
                      CemmForm form = CemmForm::homogeneous);
  static AmmSpec symmetric_cemm(double gamma, std::size_t n, double scale = 1.0);
  static AmmSpec geometric_mean(std::vector<double> exponents, double scale = 1.0);
  static AmmSpec constant_sum(std::vector<double> coefficients);
  static AmmSpec uniswap_v3(double alpha, double beta);
  static AmmSpec curve(double amplification, std::size_t n);
  static AmmSpec lmsr(double b, std::size_t n, std::vector<double> offsets = {});
  static AmmSpec counterexample(CounterexampleKind kind, std::size_t n, double gamma1 = -1.0,
                                double gamma2 = -2.0);

 private:
  std::vector<AssetId> assets_;
  FamilyParams params_;
};

std::string family_name(Family family);
std::optional<Family> family_from_name(std::string_view name);
std::string counterexample_name(CounterexampleKind kind);
std::optional<CounterexampleKind> counterexample_from_name(std::string_view name);

/// f(I). Strictly increasing in every coordinate on the interior.
Level evaluate(const AmmSpec& spec, const Inventory& inventory);

/// Root D of the stableswap invariant. Throws DomainError unless I > 0.
Level curve_invariant_solve(const CurveParams& params, const Inventory& inventory);

/// |G(I, D)| divided by the sum of the magnitudes of the terms of G.
double curve_invariant_residual(const CurveParams& params, std::span<const double> inventory,
                                double d);

/// Analytic marginal prices df/dI_A. Curve uses implicit differentiation.
PriceVector gradient(const AmmSpec& spec, const Inventory& inventory);

/// Central differences with step h * max(1, I_A).
PriceVector finite_diff_gradient(const AmmSpec& spec, const Inventory& inventory, double h);

/// p_{a,b} = (df/dI_a) / (df/dI_b).
double marginal_exchange_rate(const AmmSpec& spec, const Inventory& inventory, const AssetId& a,
                              const AssetId& b);

namespace detail {

/// Evaluation on raw coordinates. Throws DomainError where evaluate would;
/// whole-space families accept negative coordinates.
double evaluate_raw(const AmmSpec& spec, std::span<const double> x);

/// Like evaluate_raw, but returns the boundary limit value instead of throwing
/// at a zero coordinate (0 for the curve invariant, -inf for log/negative-power
/// separable forms).
double evaluate_limit(const AmmSpec& spec, std::span<const double> x);

std::vector<double> gradient_raw(const AmmSpec& spec, std::span<const double> x);

}  // namespace detail

// ---------------------------------------------------------------------------
// Axiom identifiers and the registry of catalog entries with the verdicts the
// literature states for them.

enum class Axiom {
  scale_invariance,
  homogeneity,
  translation_invariance,
  one_invariance,
  symmetry,
  independence,
  liquidity_additivity,
  sufficient_funds,
  permanent_loss_aversion,
};

inline constexpr Axiom kAllAxioms[] = {
    Axiom::scale_invariance,     Axiom::homogeneity,      Axiom::translation_invariance,
    Axiom::one_invariance,       Axiom::symmetry,         Axiom::independence,
    Axiom::liquidity_additivity, Axiom::sufficient_funds, Axiom::permanent_loss_aversion,
};

enum class Verdict { pass, fail, inconclusive };

std::string axiom_name(Axiom axiom);
std::optional<Axiom> axiom_from_name(std::string_view name);
std::string verdict_name(Verdict verdict);

struct CatalogEntry {
  std::string key;
  AmmSpec spec;
  /// Only verdicts stated in the source; absent axioms are not adjudicated.
  std::map<Axiom, Verdict> expected;
  std::string description;
};

std::vector<CatalogEntry> catalog_entries();
std::optional<CatalogEntry> find_catalog_entry(std::string_view key);

}  // namespace cfmm
