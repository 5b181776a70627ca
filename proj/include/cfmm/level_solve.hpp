#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cfmm/catalog.hpp"

namespace cfmm {

using LevelFn = std::function<double(std::span<const double>)>;

/// f with boundary limits instead of DomainError at zero coordinates.
LevelFn level_function(const AmmSpec& spec);

/// Root of g(t) = target for increasing g. The search starts at `start`, walks
/// down no further than `lo` (may be -inf) and up no further than `cap`.
/// Empty when the target is not bracketed inside [lo, cap].
std::optional<double> solve_increasing(const std::function<double(double)>& g, double target,
                                       double start, double lo, double cap);

/// Replaces x[idx] so that F(x) = target; x is left at the solution.
std::optional<double> solve_coordinate(const LevelFn& F, std::vector<double>& x, std::size_t idx,
                                       double target, double lo, double cap);

}  // namespace cfmm
