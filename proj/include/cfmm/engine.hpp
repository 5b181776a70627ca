#pragma once

#include <vector>

#include "cfmm/catalog.hpp"

namespace cfmm {

struct SwapQuote {
  AssetId asset_in;
  AssetId asset_out;
  double amount_in = 0.0;
  double amount_out = 0.0;
  Inventory new_inventory;
  /// |f(new) - f(old)| / max(1, |f(old)|).
  double level_residual = 0.0;
};

/// Solves f(I + x e_in - y e_out) = f(I) for y in [0, I_out (1 - 1e-12)].
/// Throws InsufficientDepth when the level cannot be closed inside that range.
SwapQuote swap_quote(const AmmSpec& spec, const Inventory& inventory, const AssetId& asset_in,
                     const AssetId& asset_out, double amount_in);

struct LiquidityChange {
  Inventory new_inventory;
  double numeraire_delta = 0.0;
};

/// Proportional add (lam > 0) or remove (-1 <= lam < 0).
LiquidityChange liquidity_change(const AmmSpec& spec, const Inventory& inventory, double lam);

struct TradeResult {
  Inventory new_inventory;
  double numeraire_cost = 0.0;
};

/// Settles r against I: new = I - r, cost = f(I) - f(I - r).
TradeResult execute_trade(const AmmSpec& spec, const Inventory& inventory, const TradeVector& trade);

/// Prediction-market view C(r) = -f(I0 - r). Holds only the cumulative trade;
/// applying a trade returns a new session.
class CostSession {
 public:
  explicit CostSession(Inventory initial);
  CostSession(Inventory initial, TradeVector cumulative);

  const Inventory& initial_inventory() const { return initial_; }
  const TradeVector& cumulative_trade() const { return cumulative_; }

  /// I0 - sum r. May leave the orthant for whole-space specs such as the LMSR.
  std::vector<double> current_inventory() const;

  CostSession apply(const AmmSpec& spec, const TradeVector& trade) const;

 private:
  Inventory initial_;
  TradeVector cumulative_;
};

/// f(I^T) - f(I^T - r) at the session's current inventory.
double cost_of_trade(const CostSession& session, const AmmSpec& spec, const TradeVector& trade);

double path_cost(const CostSession& session, const AmmSpec& spec, const std::vector<TradeVector>& trades);

}  // namespace cfmm
