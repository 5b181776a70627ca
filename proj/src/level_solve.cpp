#include "cfmm/level_solve.hpp"

#include <cmath>
#include <limits>

namespace cfmm {

LevelFn level_function(const AmmSpec& spec) {
  return [spec](std::span<const double> x) { return detail::evaluate_limit(spec, x); };
}

std::optional<double> solve_increasing(const std::function<double(double)>& g, double target,
                                       double start, double lo, double cap) {
  auto phi = [&](double t) { return g(t) - target; };
  const double v = phi(start);
  if (v == 0.0) return start;
  if (std::isnan(v)) return std::nullopt;
  double a = start;
  double b = start;
  if (v < 0.0) {
    double step = std::max(1.0, std::abs(start));
    for (;;) {
      a = b;
      b = std::min(start + step, cap);
      const double vb = phi(b);
      if (vb >= 0.0) break;
      if (b >= cap) return std::nullopt;
      step *= 2.0;
    }
  } else {
    if (std::isfinite(lo)) {
      a = lo;
      const double va = phi(lo);
      if (va > 0.0 || std::isnan(va)) return std::nullopt;
    } else {
      double step = std::max(1.0, std::abs(start));
      for (int i = 0;; ++i) {
        b = a;
        a = start - step;
        if (phi(a) <= 0.0) break;
        if (i > 200) return std::nullopt;
        step *= 2.0;
      }
    }
  }
  try {
    return scalar_root(phi, a, b);
  } catch (const NoBracket&) {
    return std::nullopt;
  }
}

std::optional<double> solve_coordinate(const LevelFn& F, std::vector<double>& x, std::size_t idx,
                                       double target, double lo, double cap) {
  const double start = x[idx];
  auto g = [&](double t) {
    x[idx] = t;
    return F(x);
  };
  auto t = solve_increasing(g, target, start, lo, cap);
  x[idx] = t ? *t : start;
  return t;
}

}  // namespace cfmm
