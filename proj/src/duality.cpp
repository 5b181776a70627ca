#include "cfmm/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cfmm/level_solve.hpp"

namespace cfmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// In-place Cholesky solve of H d = rhs; false if H is not positive definite.
bool cholesky_solve(std::vector<std::vector<double>> H, std::vector<double>& rhs) {
  const std::size_t m = rhs.size();
  for (std::size_t j = 0; j < m; ++j) {
    double s = H[j][j];
    for (std::size_t k = 0; k < j; ++k) s -= H[j][k] * H[j][k];
    if (!(s > 0.0)) return false;
    H[j][j] = std::sqrt(s);
    for (std::size_t i = j + 1; i < m; ++i) {
      double t = H[i][j];
      for (std::size_t k = 0; k < j; ++k) t -= H[i][k] * H[j][k];
      H[i][j] = t / H[j][j];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    double t = rhs[i];
    for (std::size_t k = 0; k < i; ++k) t -= H[i][k] * rhs[k];
    rhs[i] = t / H[i][i];
  }
  for (std::size_t i = m; i-- > 0;) {
    double t = rhs[i];
    for (std::size_t k = i + 1; k < m; ++k) t -= H[k][i] * rhs[k];
    rhs[i] = t / H[i][i];
  }
  return true;
}

// The last coordinate is eliminated through the level constraint; the free
// coordinates y live in the closed orthant.
class Problem {
 public:
  Problem(const AmmSpec& spec, double k, const PriceVector& p)
      : spec_(spec), F_(level_function(spec)), k_(k), p_(p.values().begin(), p.values().end()), n_(spec.dimension()) {
    if (p_.size() != n_) throw DimensionError("prices: dimension mismatch");
    // Start on the ray proportional to 1/p.
    std::vector<double> dir(n_);
    for (std::size_t i = 0; i < n_; ++i) dir[i] = 1.0 / p_[i];
    std::vector<double> x(n_);
    auto g = [&](double s) {
      for (std::size_t i = 0; i < n_; ++i) x[i] = s * dir[i];
      return F_(x);
    };
    auto s = solve_increasing(g, k_, 1.0, 0.0, 1e15);
    if (!s) throw DomainError("portfolio value: level not attainable");
    g(*s);
    start_ = x;
    scale_ = *std::max_element(x.begin(), x.end());
    cap_ = 1e8 * scale_;
  }

  std::size_t n() const { return n_; }
  double scale() const { return scale_; }
  const std::vector<double>& start() const { return start_; }
  double cap() const { return cap_; }

  double cost(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += p_[i] * x[i];
    return s;
  }

  // Full inventory for free coordinates y; last entry +inf if the level cannot be reached.
  std::vector<double> full(const std::vector<double>& y) const {
    std::vector<double> x(y);
    x.push_back(0.0);
    if (F_(x) >= k_) return x;
    x.back() = std::max(1e-12 * scale_, start_.back());
    if (!solve_coordinate(F_, x, n_ - 1, k_, 0.0, cap_)) x.back() = kInf;
    return x;
  }

  double reduced_cost(const std::vector<double>& y) const {
    for (double v : y) {
      if (!(v >= 0.0)) return kInf;
    }
    const auto x = full(y);
    return std::isfinite(x.back()) ? cost(x) : kInf;
  }

  std::vector<double> reduced_gradient(const std::vector<double>& y) const {
    const auto x = full(y);
    if (!std::isfinite(x.back())) throw DomainError("portfolio value: level unreachable");
    std::vector<double> g(n_ - 1);
    if (x.back() == 0.0) {
      for (std::size_t j = 0; j + 1 < n_; ++j) g[j] = p_[j];
      return g;
    }
    const auto df = detail::gradient_raw(spec_, x);
    for (std::size_t j = 0; j + 1 < n_; ++j) g[j] = p_[j] - p_[n_ - 1] * df[j] / df[n_ - 1];
    return g;
  }

  // Re-solves coordinate `a` after the caller changed x; clips at zero.
  bool resolve(std::vector<double>& x, std::size_t a) const {
    const double keep = x[a];
    x[a] = 0.0;
    if (F_(x) >= k_) return true;
    x[a] = keep > 0.0 ? keep : scale_;
    return solve_coordinate(F_, x, a, k_, 0.0, cap_).has_value();
  }

  std::optional<std::vector<double>> vertex(std::size_t a) const {
    std::vector<double> x(n_, 0.0);
    x[a] = scale_;
    if (!solve_coordinate(F_, x, a, k_, 0.0, cap_)) return std::nullopt;
    return x;
  }

  bool differentiable() const { return spec_.differentiable(); }

 private:
  const AmmSpec& spec_;
  LevelFn F_;
  double k_;
  std::vector<double> p_;
  std::size_t n_;
  std::vector<double> start_;
  double scale_ = 1.0;
  double cap_ = 1.0;
};

std::vector<double> newton(const Problem& pb) {
  const std::size_t m = pb.n() - 1;
  std::vector<double> y(pb.start().begin(), pb.start().end() - 1);
  double c = pb.reduced_cost(y);
  for (int iter = 0; iter < 100; ++iter) {
    const auto g = pb.reduced_gradient(y);
    std::vector<std::vector<double>> H(m, std::vector<double>(m));
    for (std::size_t j = 0; j < m; ++j) {
      const double h = 1e-5 * std::max(y[j], 1e-6 * pb.scale());
      auto yp = y, ym = y;
      yp[j] += h;
      ym[j] = std::max(0.0, ym[j] - h);
      const auto gp = pb.reduced_gradient(yp);
      const auto gm = pb.reduced_gradient(ym);
      for (std::size_t i = 0; i < m; ++i) H[i][j] = (gp[i] - gm[i]) / (yp[j] - ym[j]);
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) H[i][j] = H[j][i] = 0.5 * (H[i][j] + H[j][i]);
    }
    std::vector<double> d(m);
    for (std::size_t i = 0; i < m; ++i) d[i] = -g[i];
    if (!cholesky_solve(H, d)) {
      double gn = 0.0, yn = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        gn += g[i] * g[i];
        yn += y[i] * y[i];
      }
      const double len = 0.5 * std::sqrt(std::max(yn, pb.scale() * pb.scale()) / gn);
      for (std::size_t i = 0; i < m; ++i) d[i] = -g[i] * len;
    }
    double slope = 0.0;
    for (std::size_t i = 0; i < m; ++i) slope += g[i] * d[i];
    double t = 1.0;
    std::vector<double> trial(m);
    double c_new = kInf;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      for (std::size_t i = 0; i < m; ++i) trial[i] = y[i] + t * d[i];
      c_new = pb.reduced_cost(trial);
      if (c_new <= c + 1e-4 * t * slope) break;
    }
    if (!(c_new <= c)) break;
    double step = 0.0, size = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      step = std::max(step, std::abs(trial[i] - y[i]));
      size = std::max(size, std::abs(trial[i]));
    }
    y = trial;
    const double improvement = c - c_new;
    c = c_new;
    if (size > pb.cap()) throw Unbounded("portfolio value: minimiser diverges");
    if (step <= 1e-13 * std::max(size, pb.scale()) || improvement <= 1e-16 * std::abs(c)) break;
  }
  return pb.full(y);
}

std::vector<double> coordinate_descent(const Problem& pb) {
  const std::size_t m = pb.n() - 1;
  std::vector<double> y(pb.start().begin(), pb.start().end() - 1);
  double c = pb.reduced_cost(y);
  constexpr double phi = 0.6180339887498949;
  for (int sweep = 0; sweep < 200; ++sweep) {
    const double before = c;
    for (std::size_t j = 0; j < m; ++j) {
      double lo = 0.0;
      double hi = 2.0 * y[j] + pb.scale();
      auto at = [&](double v) {
        auto t = y;
        t[j] = v;
        return pb.reduced_cost(t);
      };
      while (at(hi) < c && hi < pb.cap()) hi *= 2.0;
      double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
      double fa = at(a), fb = at(b);
      for (int it = 0; it < 120; ++it) {
        if (fa <= fb) {
          hi = b;
          b = a;
          fb = fa;
          a = hi - phi * (hi - lo);
          fa = at(a);
        } else {
          lo = a;
          a = b;
          fa = fb;
          b = lo + phi * (hi - lo);
          fb = at(b);
        }
      }
      const double v = fa <= fb ? a : b;
      const double cv = std::min(fa, fb);
      if (cv < c) {
        y[j] = v;
        c = cv;
      }
    }
    if (before - c <= 1e-15 * std::abs(c)) break;
  }
  return pb.full(y);
}

double optimality_gap(const Problem& pb, const std::vector<double>& best) {
  const double c_best = pb.cost(best);
  double gap = 0.0;
  const std::size_t n = pb.n();
  for (std::size_t a = 0; a < n; ++a) {
    if (!(best[a] > 0.0)) continue;
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      for (double sign : {1.0, -1.0}) {
        const double eps = 1e-4 * std::max(best[b], 1e-3 * pb.scale());
        if (best[b] + sign * eps < 0.0) continue;
        auto x = best;
        x[b] += sign * eps;
        if (!pb.resolve(x, a)) continue;
        gap = std::max(gap, (c_best - pb.cost(x)) / std::abs(c_best));
      }
    }
  }
  return gap;
}

PortfolioValue make_value(const Problem& pb, std::vector<double> x, std::string method) {
  PortfolioValue v;
  v.value = pb.cost(x);
  v.optimality_gap = optimality_gap(pb, x);
  v.argmin = Inventory(std::move(x));
  v.method = std::move(method);
  return v;
}

}  // namespace

PortfolioValueSolver::PortfolioValueSolver(AmmSpec spec, const SamplerConfig& cfg) : spec_(std::move(spec)) {
  if (check_permanent_loss_aversion(spec_, cfg).verdict == Verdict::fail) {
    throw PreconditionFailed("portfolio value: upper level sets are not convex");
  }
}

PortfolioValue PortfolioValueSolver::value(Level k, const PriceVector& p) const {
  const Problem pb(spec_, k, p);

  std::optional<std::vector<double>> interior;
  std::string method;
  if (pb.differentiable()) {
    try {
      interior = newton(pb);
      method = "newton";
    } catch (const DomainError&) {
      interior.reset();
    }
  }
  if (!interior || !std::isfinite(pb.cost(*interior))) {
    interior = coordinate_descent(pb);
    method = "coordinate";
  }

  // Vertices in label order; a vertex wins ties so that degenerate optima
  // resolve to the lowest label.
  std::optional<std::vector<double>> best_vertex;
  for (std::size_t a = 0; a < pb.n(); ++a) {
    auto v = pb.vertex(a);
    if (v && (!best_vertex || pb.cost(*v) < pb.cost(*best_vertex))) best_vertex = v;
  }
  if (best_vertex) {
    const double cv = pb.cost(*best_vertex);
    const double ci = std::isfinite(pb.cost(*interior)) ? pb.cost(*interior) : kInf;
    if (!(ci < cv - 1e-12 * std::abs(cv))) return make_value(pb, *best_vertex, "vertex");
  }
  if (!std::isfinite(pb.cost(*interior))) throw Unbounded("portfolio value: no feasible minimiser found");
  return make_value(pb, *interior, method);
}

PortfolioValue portfolio_value_numeric(const AmmSpec& spec, Level k, const PriceVector& p, const SamplerConfig& cfg) {
  return PortfolioValueSolver(spec, cfg).value(k, p);
}

PortfolioValue portfolio_value_closed(const CemmParams& params, Level k, const PriceVector& p) {
  const double g = params.gamma;
  if (g >= 1.0) throw Unsupported("closed-form dual needs gamma < 1");
  if (params.form != CemmForm::homogeneous) throw Unsupported("closed-form dual needs the homogeneous form");
  const std::size_t n = params.weights.size();
  if (p.size() != n) throw DimensionError("prices: dimension mismatch");
  const auto& w = params.weights;
  const double kc = k / params.scale;
  std::vector<double> x(n);
  double value = 0.0;
  if (g == 0.0) {
    double logv = std::log(kc);
    for (std::size_t i = 0; i < n; ++i) logv += w[i] * std::log(p[i] / w[i]);
    value = std::exp(logv);
    for (std::size_t i = 0; i < n; ++i) x[i] = w[i] * value / p[i];
  } else {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::pow(w[i], 1.0 / (1.0 - g)) * std::pow(p[i], g / (g - 1.0));
    const double e = (g - 1.0) / g;
    value = kc * std::pow(s, e);
    const double lambda = std::pow(kc, 1.0 - g) * std::pow(s, e);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(p[i] / (lambda * w[i]), 1.0 / (g - 1.0));
  }
  PortfolioValue out;
  out.value = value;
  out.argmin = Inventory(std::move(x));
  out.method = "closed";
  return out;
}

double arbitrage_value(const AmmSpec& spec, const Inventory& J, const PriceVector& p, const SamplerConfig& cfg) {
  const double k = evaluate(spec, J);
  return p.dot(J.values()) - portfolio_value_numeric(spec, k, p, cfg).value;
}

AxiomReport check_portfolio_independence(const AmmSpec& spec, Level k, const SamplerConfig& cfg) {
  if (spec.dimension() < 3) throw PreconditionFailed("portfolio independence needs at least three assets");
  const PortfolioValueSolver solver(spec, cfg);
  LevelFn V = [&solver, k](std::span<const double> p) {
    for (double v : p) {
      if (!(v > 0.0)) return 0.0;  // lower bracket end; V is non-negative
    }
    return solver.value(k, PriceVector(std::vector<double>(p.begin(), p.end()))).value;
  };
  return check_independence(V, spec.dimension(), cfg);
}

}  // namespace cfmm
