#pragma once

// Reference formulas written out directly, with no calls into the library.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

inline double cemm(double gamma, const std::vector<double>& w, double c, const std::vector<double>& x) {
  if (gamma == 0.0) {
    double p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) p *= std::pow(x[i], w[i]);
    return c * p;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], gamma);
  return c * std::pow(s, 1.0 / gamma);
}

inline double lmsr(double b, const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += std::exp(-v / b);
  return -b * std::log(s);
}

// x units of A into a product pool, amount of B out.
inline double cpmm_out(double in_reserve, double out_reserve, double x) {
  return out_reserve * x / (in_reserve + x);
}

// Two-asset CEMM from a balanced pool: the level curve is (2 I^g - I_A^g)^(1/g).
inline double cemm_balanced_out(double balance, double gamma, double x) {
  const double ia = balance + x;
  return balance - std::pow(2.0 * std::pow(balance, gamma) - std::pow(ia, gamma), 1.0 / gamma);
}

// Stableswap implicit equation G(I, D).
inline double stableswap_g(double amp, const std::vector<double>& x, double d) {
  const double n = static_cast<double>(x.size());
  const double nn = std::pow(n, n);
  const double s = std::accumulate(x.begin(), x.end(), 0.0);
  const double prod = std::accumulate(x.begin(), x.end(), 1.0, std::multiplies<>());
  return amp * nn * s + d - amp * nn * d - std::pow(d, n + 1.0) / (nn * prod);
}

// Stableswap D by plain bisection on (0, sum].
inline double stableswap_d(double amp, const std::vector<double>& x) {
  double lo = 0.0;
  double hi = std::accumulate(x.begin(), x.end(), 0.0);
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (stableswap_g(amp, x, mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Minimum of p.I over a homogeneous CES level set by the tangency ray
// I_A ~ (w_A / p_A)^(1/(1-g)), rescaled onto the level.
inline double ces_portfolio_value(double gamma, const std::vector<double>& w, double c, double k,
                                  const std::vector<double>& p) {
  std::vector<double> u(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) u[i] = std::pow(w[i] / p[i], 1.0 / (1.0 - gamma));
  const double t = k / cemm(gamma, w, c, u);
  double v = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) v += p[i] * t * u[i];
  return v;
}

// Fourth-order central difference.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       const std::vector<double>& x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(x[i]));
    auto at = [&](double d) {
      auto y = x;
      y[i] += d;
      return f(y);
    };
    g[i] = (8.0 * (at(step) - at(-step)) - (at(2 * step) - at(-2 * step))) / (12.0 * step);
  }
  return g;
}

inline double rel_diff(double a, double b, double floor = 1e-12) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace oracle
