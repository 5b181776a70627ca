#pragma once

#include <string>

#include "cfmm/axioms.hpp"
#include "cfmm/catalog.hpp"

namespace cfmm {

/// V_k(p) = inf { p.I : f(I) >= k } and a minimiser.
struct PortfolioValue {
  double value = 0.0;
  Inventory argmin;
  /// Largest relative improvement found by probing around argmin along the level set.
  double optimality_gap = 0.0;
  std::string method;  // "closed", "vertex", "newton", "coordinate"
};

/// Minimises over the closed non-negative orthant. The constructor runs the
/// permanent-loss-aversion check once and throws PreconditionFailed if it fails.
class PortfolioValueSolver {
 public:
  explicit PortfolioValueSolver(AmmSpec spec, const SamplerConfig& cfg = {});

  const AmmSpec& spec() const { return spec_; }

  /// Throws DomainError if k is not attainable, Unbounded if the minimiser runs
  /// off to infinity.
  PortfolioValue value(Level k, const PriceVector& p) const;

 private:
  AmmSpec spec_;
};

PortfolioValue portfolio_value_numeric(const AmmSpec& spec, Level k, const PriceVector& p,
                                       const SamplerConfig& cfg = {});

/// CES dual of a homogeneous CEMM in its own (primal) parameters:
/// V = (k/c) (sum_A w_A^(1/(1-g)) p_A^(g/(g-1)))^((g-1)/g), or (k/c) prod_A (p_A/w_A)^w_A for g = 0.
/// Unsupported for g >= 1 and for the separable form.
PortfolioValue portfolio_value_closed(const CemmParams& params, Level k, const PriceVector& p);

/// p.J - V_{f(J)}(p).
double arbitrage_value(const AmmSpec& spec, const Inventory& J, const PriceVector& p, const SamplerConfig& cfg = {});

/// Independence of p -> V_k(p) on sampled price vectors. Throws PreconditionFailed
/// for fewer than three assets or a spec that is not quasiconcave.
AxiomReport check_portfolio_independence(const AmmSpec& spec, Level k, const SamplerConfig& cfg);

}  // namespace cfmm
