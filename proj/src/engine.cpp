#include "cfmm/engine.hpp"

#include <algorithm>
#include <cmath>

namespace cfmm {

namespace {

void check_feasible(const AmmSpec& spec, std::span<const double> current, const TradeVector& trade,
                    bool enforce_orthant) {
  if (trade.size() != current.size()) throw DimensionError("trade: dimension mismatch");
  if (!enforce_orthant) return;
  for (std::size_t i = 0; i < current.size(); ++i) {
    if (current[i] < trade[i]) {
      throw InfeasibleTrade("trade removes more " + spec.assets()[i].label + " than the pool holds");
    }
  }
}

}  // namespace

SwapQuote swap_quote(const AmmSpec& spec, const Inventory& inventory, const AssetId& asset_in,
                     const AssetId& asset_out, double amount_in) {
  if (inventory.size() != spec.dimension()) throw DimensionError("swap: inventory dimension mismatch");
  const std::size_t in = spec.index_of(asset_in);
  const std::size_t out = spec.index_of(asset_out);
  if (in == out) throw std::invalid_argument("swap: input and output assets must differ");
  if (!(amount_in >= 0.0) || !std::isfinite(amount_in)) throw DomainError("swap: amount must be non-negative");
  if (amount_in == 0.0) return SwapQuote{asset_in, asset_out, 0.0, 0.0, inventory, 0.0};
  if (!(inventory[out] > 0.0)) throw InsufficientDepth("swap: output reserve is empty");

  const double level = detail::evaluate_raw(spec, inventory.values());
  std::vector<double> x(inventory.vector());
  x[in] += amount_in;
  const double base_out = x[out];
  auto excess = [&](double y) {
    x[out] = base_out - y;
    return detail::evaluate_limit(spec, x) - level;
  };
  const double y_max = inventory[out] * (1.0 - 1e-12);
  if (excess(y_max) > 0.0) {
    throw InsufficientDepth("swap: the level cannot be closed before the " + asset_out.label +
                            " reserve is exhausted");
  }
  const double y = std::clamp(scalar_root(excess, 0.0, y_max), 0.0, y_max);
  x[out] = base_out - y;

  SwapQuote q;
  q.asset_in = asset_in;
  q.asset_out = asset_out;
  q.amount_in = amount_in;
  q.amount_out = y;
  q.new_inventory = Inventory(x);
  q.level_residual = std::abs(detail::evaluate_raw(spec, x) - level) / std::max(1.0, std::abs(level));
  return q;
}

LiquidityChange liquidity_change(const AmmSpec& spec, const Inventory& inventory, double lam) {
  if (!(lam >= -1.0) || !std::isfinite(lam)) throw std::invalid_argument("liquidity_change: lam must be >= -1");
  std::vector<double> x(inventory.vector());
  for (double& v : x) v *= 1.0 + lam;
  LiquidityChange out{Inventory(x), 0.0};
  if (lam != 0.0) {
    out.numeraire_delta = detail::evaluate_limit(spec, x) - detail::evaluate_limit(spec, inventory.values());
  }
  return out;
}

TradeResult execute_trade(const AmmSpec& spec, const Inventory& inventory, const TradeVector& trade) {
  check_feasible(spec, inventory.values(), trade, true);
  std::vector<double> x(inventory.vector());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= trade[i];
  const double before = detail::evaluate_raw(spec, inventory.values());
  const double after = detail::evaluate_raw(spec, x);
  return {Inventory(std::move(x)), before - after};
}

CostSession::CostSession(Inventory initial)
    : initial_(std::move(initial)), cumulative_(TradeVector::zero(initial_.size())) {}

CostSession::CostSession(Inventory initial, TradeVector cumulative)
    : initial_(std::move(initial)), cumulative_(std::move(cumulative)) {
  if (initial_.size() != cumulative_.size()) throw DimensionError("cost session: dimension mismatch");
}

std::vector<double> CostSession::current_inventory() const {
  std::vector<double> x(initial_.vector());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= cumulative_[i];
  return x;
}

CostSession CostSession::apply(const AmmSpec& spec, const TradeVector& trade) const {
  const auto x = current_inventory();
  check_feasible(spec, x, trade, !spec.whole_space_domain());
  return CostSession(initial_, cumulative_ + trade);
}

double cost_of_trade(const CostSession& session, const AmmSpec& spec, const TradeVector& trade) {
  auto x = session.current_inventory();
  check_feasible(spec, x, trade, !spec.whole_space_domain());
  const double before = detail::evaluate_raw(spec, x);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= trade[i];
  return before - detail::evaluate_raw(spec, x);
}

double path_cost(const CostSession& session, const AmmSpec& spec, const std::vector<TradeVector>& trades) {
  double total = 0.0;
  CostSession s = session;
  for (const auto& r : trades) {
    total += cost_of_trade(s, spec, r);
    s = s.apply(spec, r);
  }
  return total;
}

}  // namespace cfmm
