#include "cfmm/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cfmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_size(const std::vector<double>& v, std::size_t n, const char* what) {
  if (v.size() != n) throw DimensionError(std::string(what) + ": one entry per asset required");
}

void require_positive(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be positive");
  }
}

bool any_zero(std::span<const double> x) {
  return std::any_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

double sum(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); }

double pairwise_sum(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) s += x[i] * x[j];
  }
  return s;
}

double ipow(double base, std::size_t e) {
  double r = 1.0;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

// --- CEMM ------------------------------------------------------------------

// sum_A w_A (x_A/m)^g - 1, accurate for small |g| (weights sum to one).
double ces_excess(const CemmParams& p, std::span<const double> x, double m) {
  double t = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    t += p.weights[i] * (x[i] == 0.0 ? -1.0 : std::expm1(p.gamma * std::log(x[i] / m)));
  }
  return t;
}

double cemm_value(const CemmParams& p, std::span<const double> x, bool limit) {
  const double g = p.gamma;
  if (p.form == CemmForm::separable) {
    if (g > 0.0) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += p.weights[i] * std::pow(x[i], g);
      return p.scale * s;
    }
    if (any_zero(x)) {
      if (limit) return -kInf;
      throw DomainError("cemm (separable form): zero coordinate");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      s += p.weights[i] * (g == 0.0 ? std::log(x[i]) : -std::pow(x[i], g));
    }
    return p.scale * s;
  }
  if (g == 0.0) {
    if (any_zero(x)) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += p.weights[i] * std::log(x[i]);
    return p.scale * std::exp(s);
  }
  if (g < 0.0 && any_zero(x)) return 0.0;
  const double m = *std::max_element(x.begin(), x.end());
  if (m == 0.0) return 0.0;
  return p.scale * m * std::exp(std::log1p(ces_excess(p, x, m)) / g);
}

std::vector<double> cemm_gradient(const CemmParams& p, std::span<const double> x) {
  const double g = p.gamma;
  std::vector<double> out(x.size());
  if (p.form == CemmForm::separable) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      out[i] = g == 0.0 ? p.scale * p.weights[i] / x[i]
                        : p.scale * std::abs(g) * p.weights[i] * std::pow(x[i], g - 1.0);
    }
    return out;
  }
  const double f = cemm_value(p, x, false);
  if (g == 0.0) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f * p.weights[i] / x[i];
    return out;
  }
  const double m = *std::max_element(x.begin(), x.end());
  const double s = 1.0 + ces_excess(p, x, m);
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = f * p.weights[i] * std::pow(x[i] / m, g) / (x[i] * s);
  }
  return out;
}

// --- Curve -----------------------------------------------------------------

struct CurveTerms {
  double a;      // amplification * n^n
  double n_pow;  // n^n
};

CurveTerms curve_terms(const CurveParams& p, std::size_t n) {
  const double n_pow = ipow(static_cast<double>(n), n);
  return {p.amplification * n_pow, n_pow};
}

double curve_solve_raw(const CurveParams& p, std::span<const double> x) {
  for (double v : x) {
    if (!(v > 0.0)) throw DomainError("curve: every coordinate must be strictly positive");
  }
  const std::size_t n = x.size();
  const auto [a, n_pow] = curve_terms(p, n);
  const double s = sum(x);
  double prod = 1.0;
  for (double v : x) prod *= v / s;
  const double denom = n_pow * prod;  // <= 1 by AM-GM, == 1 for a balanced pool

  // F(d) = a + d(1 - a) - d^(n+1)/denom, d = D/S. F is concave, F(0) > 0 and
  // F(1) <= 0, so Newton from d = 1 decreases monotonically onto the root.
  auto F = [&](double d) { return a + d * (1.0 - a) - ipow(d, n + 1) / denom; };
  auto dF = [&](double d) { return (1.0 - a) - static_cast<double>(n + 1) * ipow(d, n) / denom; };

  double lo = 0.0;
  double hi = 1.0;
  double d = 1.0;
  double fd = F(d);
  if (fd > 0.0) {
    // Only possible through rounding; widen geometrically.
    while (fd > 0.0 && hi < 1e6) {
      lo = hi;
      hi *= 2.0;
      fd = F(hi);
    }
    d = hi;
  }
  for (int iter = 0; iter < 200 && fd != 0.0; ++iter) {
    if (fd > 0.0) {
      lo = std::max(lo, d);
    } else {
      hi = std::min(hi, d);
    }
    double next = d - fd / dF(d);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - d) <= 2.0 * std::numeric_limits<double>::epsilon() * d) {
      d = next;
      break;
    }
    d = next;
    fd = F(d);
  }
  return d * s;
}

std::vector<double> curve_gradient(const CurveParams& p, std::span<const double> x) {
  const std::size_t n = x.size();
  const double D = curve_solve_raw(p, x);
  const auto [a, n_pow] = curve_terms(p, n);
  // r = D^(n+1) / (n^n prod I), computed in ratios to stay finite.
  double r = D;
  for (double v : x) r *= D / v;
  r /= n_pow;
  const double g_d = 1.0 - a - static_cast<double>(n + 1) * r / D;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = -(a + r / x[k]) / g_d;
  return out;
}

// --- LMSR ------------------------------------------------------------------

double lmsr_value(const LmsrParams& p, std::span<const double> x) {
  double m = -kInf;
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    z[i] = (p.offsets[i] - x[i]) / p.b;
    m = std::max(m, z[i]);
  }
  double s = 0.0;
  for (double zi : z) s += std::exp(zi - m);
  return -p.b * (m + std::log(s));
}

std::vector<double> lmsr_gradient(const LmsrParams& p, std::span<const double> x) {
  double m = -kInf;
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    z[i] = (p.offsets[i] - x[i]) / p.b;
    m = std::max(m, z[i]);
  }
  double s = 0.0;
  for (double& zi : z) {
    zi = std::exp(zi - m);
    s += zi;
  }
  for (double& zi : z) zi /= s;
  return z;
}

// --- Counterexamples -------------------------------------------------------

bool in_norm_region(std::span<const double> x) { return x[1] / 2.0 <= x[0] && x[0] <= 2.0 * x[1]; }

double counterexample_value(const CounterexampleParams& p, std::span<const double> x, bool limit) {
  const std::size_t n = x.size();
  switch (p.kind) {
    case CounterexampleKind::pairwise_products:
      return pairwise_sum(x);
    case CounterexampleKind::pairwise_products_sqrt:
      return std::sqrt(pairwise_sum(x));
    case CounterexampleKind::linear_plus_sqrt: {
      double s = 0.0;
      for (double v : x) s += v + std::sqrt(v);
      return s;
    }
    case CounterexampleKind::triple_product_pairwise: {
      double prod = 1.0;
      for (double v : x) prod *= v;
      return prod * pairwise_sum(x);
    }
    case CounterexampleKind::cemm_pair_sum: {
      if (any_zero(x)) {
        if (limit) return -kInf;
        throw DomainError("cemm_pair_sum: zero coordinate");
      }
      double s = 0.0;
      for (double v : x) s -= std::pow(v, p.gamma1) + std::pow(v, p.gamma2);
      return s;
    }
    case CounterexampleKind::smoothed_translation: {
      double pen = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) pen += std::hypot(1.0, x[i] - x[j]);
      }
      return (sum(x) - pen / static_cast<double>(n - 1)) / static_cast<double>(n);
    }
    case CounterexampleKind::piecewise_norm_product:
      if (in_norm_region(x)) return std::hypot(x[0], x[1]);
      return std::sqrt(2.5 * x[0] * x[1]);
    case CounterexampleKind::mixed_cubic:
      return std::cbrt(x[0] * x[1] * x[1] + x[0] * x[0] * x[1]);
  }
  throw Unsupported("unknown counterexample kind");
}

std::vector<double> counterexample_gradient(const CounterexampleParams& p, std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  const double s = sum(x);
  switch (p.kind) {
    case CounterexampleKind::pairwise_products:
      for (std::size_t i = 0; i < n; ++i) out[i] = s - x[i];
      return out;
    case CounterexampleKind::pairwise_products_sqrt: {
      const double root = std::sqrt(pairwise_sum(x));
      for (std::size_t i = 0; i < n; ++i) out[i] = (s - x[i]) / (2.0 * root);
      return out;
    }
    case CounterexampleKind::linear_plus_sqrt:
      for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 + 0.5 / std::sqrt(x[i]);
      return out;
    case CounterexampleKind::triple_product_pairwise: {
      const double e2 = pairwise_sum(x);
      double prod = 1.0;
      for (double v : x) prod *= v;
      for (std::size_t i = 0; i < n; ++i) {
        double others = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i) others *= x[j];
        }
        out[i] = others * e2 + prod * (s - x[i]);
      }
      return out;
    }
    case CounterexampleKind::cemm_pair_sum:
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = -p.gamma1 * std::pow(x[i], p.gamma1 - 1.0) - p.gamma2 * std::pow(x[i], p.gamma2 - 1.0);
      }
      return out;
    case CounterexampleKind::smoothed_translation:
      for (std::size_t i = 0; i < n; ++i) {
        double t = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          const double d = x[i] - x[j];
          t += d / std::hypot(1.0, d);
        }
        out[i] = (1.0 - t / static_cast<double>(n - 1)) / static_cast<double>(n);
      }
      return out;
    case CounterexampleKind::piecewise_norm_product: {
      if (in_norm_region(x)) {
        const double f = std::hypot(x[0], x[1]);
        return {x[0] / f, x[1] / f};
      }
      const double f = std::sqrt(2.5 * x[0] * x[1]);
      return {2.5 * x[1] / (2.0 * f), 2.5 * x[0] / (2.0 * f)};
    }
    case CounterexampleKind::mixed_cubic: {
      const double u = x[0] * x[1] * x[1] + x[0] * x[0] * x[1];
      const double d = 3.0 * std::cbrt(u * u);
      return {(x[1] * x[1] + 2.0 * x[0] * x[1]) / d, (2.0 * x[0] * x[1] + x[0] * x[0]) / d};
    }
  }
  throw Unsupported("unknown counterexample kind");
}

double evaluate_impl(const AmmSpec& spec, std::span<const double> x, bool limit) {
  if (x.size() != spec.dimension()) throw DimensionError("evaluate: inventory dimension mismatch");
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError("evaluate: non-finite coordinate");
  }
  if (!spec.whole_space_domain()) {
    for (double v : x) {
      if (v < 0.0) throw DomainError("evaluate: negative coordinate");
    }
  }
  return std::visit(
      Overloaded{
          [&](const CemmParams& p) { return cemm_value(p, x, limit); },
          [&](const GeometricMeanParams& p) {
            if (any_zero(x)) return 0.0;
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) s += p.exponents[i] * std::log(x[i]);
            return p.scale * std::exp(s);
          },
          [&](const ConstantSumParams& p) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) s += p.coefficients[i] * x[i];
            return s;
          },
          [&](const V3Params& p) { return std::sqrt((x[0] + p.alpha) * (x[1] + p.beta)); },
          [&](const CurveParams& p) {
            if (limit && any_zero(x)) return 0.0;
            return curve_solve_raw(p, x);
          },
          [&](const LmsrParams& p) { return lmsr_value(p, x); },
          [&](const CounterexampleParams& p) { return counterexample_value(p, x, limit); },
      },
      spec.params());
}

}  // namespace

// ---------------------------------------------------------------------------

AmmSpec::AmmSpec(std::vector<AssetId> assets, FamilyParams params)
    : assets_(std::move(assets)), params_(std::move(params)) {
  const std::size_t n = assets_.size();
  if (n < 2) throw DimensionError("spec: an asset universe needs at least two assets");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (assets_[i] == assets_[j]) throw std::invalid_argument("spec: duplicate asset " + assets_[i].label);
    }
  }
  std::visit(
      Overloaded{
          [&](const CemmParams& p) {
            require_size(p.weights, n, "cemm weights");
            require_positive(p.weights, "cemm weights");
            const double total = std::accumulate(p.weights.begin(), p.weights.end(), 0.0);
            if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("cemm weights must sum to 1");
            if (!(p.scale > 0.0) || !std::isfinite(p.gamma)) throw std::invalid_argument("cemm: scale > 0 and finite gamma required");
          },
          [&](const GeometricMeanParams& p) {
            require_size(p.exponents, n, "geometric mean exponents");
            require_positive(p.exponents, "geometric mean exponents");
            if (!(p.scale > 0.0)) throw std::invalid_argument("geometric mean: scale must be positive");
          },
          [&](const ConstantSumParams& p) {
            require_size(p.coefficients, n, "constant sum coefficients");
            require_positive(p.coefficients, "constant sum coefficients");
          },
          [&](const V3Params& p) {
            if (n != 2) throw DimensionError("uniswap_v3: exactly two assets");
            if (!(p.alpha >= 0.0 && p.beta >= 0.0)) throw std::invalid_argument("uniswap_v3: offsets must be >= 0");
          },
          [&](const CurveParams& p) {
            if (!(p.amplification > 0.0)) throw std::invalid_argument("curve: amplification must be positive");
          },
          [&](LmsrParams const& p) {
            if (p.b == 0.0 || !std::isfinite(p.b)) throw std::invalid_argument("lmsr: b must be finite and non-zero");
            require_size(p.offsets, n, "lmsr offsets");
          },
          [&](const CounterexampleParams& p) {
            switch (p.kind) {
              case CounterexampleKind::piecewise_norm_product:
              case CounterexampleKind::mixed_cubic:
                if (n != 2) throw DimensionError(counterexample_name(p.kind) + ": exactly two assets");
                break;
              case CounterexampleKind::cemm_pair_sum:
                if (!(p.gamma1 < 0.0 && p.gamma2 < 0.0 && p.gamma1 != p.gamma2)) {
                  throw std::invalid_argument("cemm_pair_sum: need distinct negative exponents");
                }
                break;
              default:
                break;
            }
          },
      },
      params_);
}

Family AmmSpec::family() const {
  constexpr Family kByIndex[] = {Family::cemm,       Family::geometric_mean, Family::constant_sum,
                                 Family::uniswap_v3, Family::curve,          Family::lmsr,
                                 Family::counterexample};
  return kByIndex[params_.index()];
}

std::size_t AmmSpec::index_of(const AssetId& asset) const {
  auto it = std::find(assets_.begin(), assets_.end(), asset);
  if (it == assets_.end()) throw std::invalid_argument("unknown asset " + asset.label);
  return static_cast<std::size_t>(it - assets_.begin());
}

bool AmmSpec::whole_space_domain() const {
  if (std::holds_alternative<LmsrParams>(params_)) return true;
  if (const auto* c = std::get_if<CounterexampleParams>(&params_)) {
    return c->kind == CounterexampleKind::smoothed_translation;
  }
  return false;
}

bool AmmSpec::differentiable() const {
  const auto* c = std::get_if<CounterexampleParams>(&params_);
  return c == nullptr || c->kind != CounterexampleKind::piecewise_norm_product;
}

AmmSpec AmmSpec::cpmm(std::size_t n) { return symmetric_cemm(0.0, n); }

AmmSpec AmmSpec::cemm(double gamma, std::vector<double> weights, double scale, CemmForm form) {
  const std::size_t n = weights.size();
  return AmmSpec(default_assets(n), CemmParams{gamma, std::move(weights), scale, form});
}

AmmSpec AmmSpec::symmetric_cemm(double gamma, std::size_t n, double scale) {
  return cemm(gamma, std::vector<double>(n, 1.0 / static_cast<double>(n)), scale);
}

AmmSpec AmmSpec::geometric_mean(std::vector<double> exponents, double scale) {
  const std::size_t n = exponents.size();
  return AmmSpec(default_assets(n), GeometricMeanParams{std::move(exponents), scale});
}

AmmSpec AmmSpec::constant_sum(std::vector<double> coefficients) {
  const std::size_t n = coefficients.size();
  return AmmSpec(default_assets(n), ConstantSumParams{std::move(coefficients)});
}

AmmSpec AmmSpec::uniswap_v3(double alpha, double beta) {
  return AmmSpec(default_assets(2), V3Params{alpha, beta});
}

AmmSpec AmmSpec::curve(double amplification, std::size_t n) {
  return AmmSpec(default_assets(n), CurveParams{amplification});
}

AmmSpec AmmSpec::lmsr(double b, std::size_t n, std::vector<double> offsets) {
  if (offsets.empty()) offsets.assign(n, 0.0);
  return AmmSpec(default_assets(n), LmsrParams{b, std::move(offsets)});
}

AmmSpec AmmSpec::counterexample(CounterexampleKind kind, std::size_t n, double gamma1, double gamma2) {
  return AmmSpec(default_assets(n), CounterexampleParams{kind, gamma1, gamma2});
}

namespace {

constexpr std::pair<Family, std::string_view> kFamilyNames[] = {
    {Family::cemm, "cemm"},
    {Family::geometric_mean, "geometric_mean"},
    {Family::constant_sum, "constant_sum"},
    {Family::uniswap_v3, "uniswap_v3"},
    {Family::curve, "curve"},
    {Family::lmsr, "lmsr"},
    {Family::counterexample, "counterexample"},
};

constexpr std::pair<CounterexampleKind, std::string_view> kCounterexampleNames[] = {
    {CounterexampleKind::pairwise_products, "pairwise_products"},
    {CounterexampleKind::pairwise_products_sqrt, "pairwise_products_sqrt"},
    {CounterexampleKind::linear_plus_sqrt, "linear_plus_sqrt"},
    {CounterexampleKind::triple_product_pairwise, "triple_product_pairwise"},
    {CounterexampleKind::cemm_pair_sum, "cemm_pair_sum"},
    {CounterexampleKind::smoothed_translation, "smoothed_translation"},
    {CounterexampleKind::piecewise_norm_product, "piecewise_norm_product"},
    {CounterexampleKind::mixed_cubic, "mixed_cubic"},
};

constexpr std::pair<Axiom, std::string_view> kAxiomNames[] = {
    {Axiom::scale_invariance, "scale_invariance"},
    {Axiom::homogeneity, "homogeneity"},
    {Axiom::translation_invariance, "translation_invariance"},
    {Axiom::one_invariance, "one_invariance"},
    {Axiom::symmetry, "symmetry"},
    {Axiom::independence, "independence"},
    {Axiom::liquidity_additivity, "liquidity_additivity"},
    {Axiom::sufficient_funds, "sufficient_funds"},
    {Axiom::permanent_loss_aversion, "permanent_loss_aversion"},
};

template <class E, std::size_t N>
std::string name_of(const std::pair<E, std::string_view> (&table)[N], E value) {
  for (const auto& [e, name] : table) {
    if (e == value) return std::string(name);
  }
  return "?";
}

template <class E, std::size_t N>
std::optional<E> parse_name(const std::pair<E, std::string_view> (&table)[N], std::string_view s) {
  for (const auto& [e, name] : table) {
    if (name == s) return e;
  }
  return std::nullopt;
}

}  // namespace

std::string family_name(Family family) { return name_of(kFamilyNames, family); }
std::optional<Family> family_from_name(std::string_view name) { return parse_name(kFamilyNames, name); }
std::string counterexample_name(CounterexampleKind kind) { return name_of(kCounterexampleNames, kind); }
std::optional<CounterexampleKind> counterexample_from_name(std::string_view name) {
  return parse_name(kCounterexampleNames, name);
}
std::string axiom_name(Axiom axiom) { return name_of(kAxiomNames, axiom); }
std::optional<Axiom> axiom_from_name(std::string_view name) { return parse_name(kAxiomNames, name); }

std::string verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------------------

namespace detail {

double evaluate_raw(const AmmSpec& spec, std::span<const double> x) { return evaluate_impl(spec, x, false); }

double evaluate_limit(const AmmSpec& spec, std::span<const double> x) { return evaluate_impl(spec, x, true); }

std::vector<double> gradient_raw(const AmmSpec& spec, std::span<const double> x) {
  if (x.size() != spec.dimension()) throw DimensionError("gradient: inventory dimension mismatch");
  if (!spec.whole_space_domain()) {
    for (double v : x) {
      if (!(v >= 0.0)) throw DomainError("gradient: negative inventory");
    }
  }
  // Boundary points are fine where the partials stay finite (polynomial
  // counterexamples, constant sum); elsewhere the division by zero shows up here.
  auto out = std::visit(
      Overloaded{
          [&](const CemmParams& p) { return cemm_gradient(p, x); },
          [&](const GeometricMeanParams& p) {
            const double f = evaluate_impl(spec, x, false);
            std::vector<double> out(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = f * p.exponents[i] / x[i];
            return out;
          },
          [&](const ConstantSumParams& p) { return p.coefficients; },
          [&](const V3Params& p) {
            const double f = std::sqrt((x[0] + p.alpha) * (x[1] + p.beta));
            return std::vector<double>{(x[1] + p.beta) / (2.0 * f), (x[0] + p.alpha) / (2.0 * f)};
          },
          [&](const CurveParams& p) { return curve_gradient(p, x); },
          [&](const LmsrParams& p) { return lmsr_gradient(p, x); },
          [&](const CounterexampleParams& p) { return counterexample_gradient(p, x); },
      },
      spec.params());
  for (double g : out) {
    if (!std::isfinite(g)) throw DomainError("gradient: not defined at this inventory");
  }
  return out;
}

}  // namespace detail

Level evaluate(const AmmSpec& spec, const Inventory& inventory) {
  return detail::evaluate_raw(spec, inventory.values());
}

Level curve_invariant_solve(const CurveParams& params, const Inventory& inventory) {
  if (inventory.size() < 2) throw DimensionError("curve: at least two assets");
  return curve_solve_raw(params, inventory.values());
}

double curve_invariant_residual(const CurveParams& params, std::span<const double> inventory, double d) {
  const std::size_t n = inventory.size();
  const auto [a, n_pow] = curve_terms(params, n);
  double r = d;
  for (double v : inventory) r *= d / v;
  r /= n_pow;
  const double s = sum(inventory);
  const double g = a * s + d - a * d - r;
  return std::abs(g) / (a * s + d + a * d + r);
}

PriceVector gradient(const AmmSpec& spec, const Inventory& inventory) {
  return PriceVector(detail::gradient_raw(spec, inventory.values()));
}

PriceVector finite_diff_gradient(const AmmSpec& spec, const Inventory& inventory, double h) {
  std::vector<double> x(inventory.vector());
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double step = h * std::max(1.0, x[i]);
    const double xi = x[i];
    if (!spec.whole_space_domain() && xi - step <= 0.0) {
      throw DomainError("finite_diff_gradient: step leaves the domain");
    }
    x[i] = xi + step;
    const double up = detail::evaluate_raw(spec, x);
    x[i] = xi - step;
    const double down = detail::evaluate_raw(spec, x);
    x[i] = xi;
    out[i] = (up - down) / (2.0 * step);
  }
  return PriceVector(std::move(out));
}

double marginal_exchange_rate(const AmmSpec& spec, const Inventory& inventory, const AssetId& a,
                              const AssetId& b) {
  const std::size_t ia = spec.index_of(a);
  const std::size_t ib = spec.index_of(b);
  if (ia == ib) throw std::invalid_argument("marginal_exchange_rate: assets must differ");
  const auto g = detail::gradient_raw(spec, inventory.values());
  if (!(g[ia] > 0.0 && g[ib] > 0.0)) throw DomainError("marginal_exchange_rate: non-positive marginal price");
  return g[ia] / g[ib];
}

// ---------------------------------------------------------------------------

std::vector<CatalogEntry> catalog_entries() {
  using enum Axiom;
  constexpr Verdict P = Verdict::pass;
  constexpr Verdict F = Verdict::fail;
  using CK = CounterexampleKind;

  std::vector<CatalogEntry> out;
  auto add = [&](std::string key, AmmSpec spec, std::map<Axiom, Verdict> expected, std::string description) {
    out.push_back({std::move(key), std::move(spec), std::move(expected), std::move(description)});
  };

  add("cpmm", AmmSpec::cpmm(2),
      {{scale_invariance, P}, {homogeneity, P}, {translation_invariance, F}, {symmetry, P},
       {sufficient_funds, P}, {permanent_loss_aversion, P}, {liquidity_additivity, P}},
      "constant product sqrt(I_A I_B)");
  add("cpmm3", AmmSpec::cpmm(3),
      {{scale_invariance, P}, {homogeneity, P}, {translation_invariance, F}, {symmetry, P},
       {independence, P}, {sufficient_funds, P}, {permanent_loss_aversion, P}},
      "three-asset constant product");
  add("balancer3", AmmSpec::cemm(0.0, {0.2, 0.3, 0.5}),
      {{scale_invariance, P}, {homogeneity, P}, {independence, P}, {sufficient_funds, P},
       {permanent_loss_aversion, P}},
      "weighted geometric mean with weights (0.2, 0.3, 0.5)");
  add("cemm_gm1", AmmSpec::symmetric_cemm(-1.0, 3),
      {{scale_invariance, P}, {homogeneity, P}, {independence, P}, {symmetry, P},
       {sufficient_funds, P}, {permanent_loss_aversion, P}},
      "CEMM gamma = -1 (elasticity 1/2)");
  add("cemm_half", AmmSpec::symmetric_cemm(0.5, 3),
      {{scale_invariance, P}, {homogeneity, P}, {independence, P}, {symmetry, P},
       {sufficient_funds, F}, {permanent_loss_aversion, P}},
      "CEMM gamma = 0.5 (elasticity 2); liquidity curves meet the axes");
  add("cemm_gamma2", AmmSpec::symmetric_cemm(2.0, 3),
      {{scale_invariance, P}, {independence, P}, {permanent_loss_aversion, F}},
      "CEMM gamma = 2 (negative elasticity)");
  add("constant_sum", AmmSpec::constant_sum({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}),
      {{scale_invariance, P}, {homogeneity, P}, {translation_invariance, P}, {one_invariance, P},
       {symmetry, P}, {independence, P}, {sufficient_funds, F}, {permanent_loss_aversion, P}},
      "constant sum with coefficients summing to one");
  add("constant_sum2", AmmSpec::constant_sum({1.0, 1.0}),
      {{scale_invariance, P}, {homogeneity, P}, {translation_invariance, P}, {symmetry, P},
       {sufficient_funds, F}, {permanent_loss_aversion, P}, {liquidity_additivity, P}},
      "I_A + I_B");
  add("uniswap_v3", AmmSpec::uniswap_v3(1.0, 1.0),
      {{scale_invariance, F}, {symmetry, P}, {sufficient_funds, F}, {permanent_loss_aversion, P}},
      "sqrt((I_A + 1)(I_B + 1))");
  add("curve2", AmmSpec::curve(1.0, 2),
      {{scale_invariance, P}, {homogeneity, P}, {symmetry, P}, {sufficient_funds, P},
       {permanent_loss_aversion, P}},
      "two-asset stableswap, amplification 1");
  add("curve3", AmmSpec::curve(1.0, 3),
      {{scale_invariance, P}, {symmetry, P}, {independence, F}, {permanent_loss_aversion, P}},
      "three-asset stableswap, amplification 1");
  add("lmsr_b1", AmmSpec::lmsr(1.0, 3),
      {{scale_invariance, F}, {translation_invariance, P}, {one_invariance, P}, {symmetry, P},
       {independence, P}, {permanent_loss_aversion, P}},
      "LMSR b = 1, zero offsets");
  add("lmsr2", AmmSpec::lmsr(1.0, 2),
      {{scale_invariance, F}, {translation_invariance, P}, {one_invariance, P}, {symmetry, P},
       {liquidity_additivity, P}, {permanent_loss_aversion, P}},
      "two-asset LMSR b = 1");
  add("lmsr_bneg", AmmSpec::lmsr(-1.0, 3),
      {{translation_invariance, P}, {one_invariance, P}, {independence, P}, {permanent_loss_aversion, F}},
      "LMSR b = -1");
  add("pairwise_products", AmmSpec::counterexample(CK::pairwise_products, 3),
      {{scale_invariance, P}, {independence, F}, {permanent_loss_aversion, P}},
      "I_A I_B + I_A I_C + I_B I_C");
  add("pairwise_products_sqrt", AmmSpec::counterexample(CK::pairwise_products_sqrt, 3),
      {{scale_invariance, P}, {homogeneity, P}, {independence, F}, {permanent_loss_aversion, P}},
      "sqrt(I_A I_B + I_A I_C + I_B I_C)");
  add("linear_plus_sqrt", AmmSpec::counterexample(CK::linear_plus_sqrt, 3),
      {{scale_invariance, F}, {independence, P}, {permanent_loss_aversion, P}},
      "sum_A (I_A + sqrt(I_A))");
  add("triple_product_pairwise", AmmSpec::counterexample(CK::triple_product_pairwise, 3),
      {{scale_invariance, P}, {sufficient_funds, P}, {independence, F}},
      "I_A I_B I_C (I_A I_B + I_B I_C + I_A I_C)");
  add("cemm_pair_sum", AmmSpec::counterexample(CK::cemm_pair_sum, 3, -1.0, -2.0),
      {{scale_invariance, F}, {sufficient_funds, P}, {independence, P}},
      "sum of two separable CEMMs, gamma = -1 and -2");
  add("smoothed_translation", AmmSpec::counterexample(CK::smoothed_translation, 3),
      {{translation_invariance, P}, {one_invariance, P}, {permanent_loss_aversion, P}, {independence, F}},
      "(1/n)(sum I - 1/(n-1) sum_{A<B} sqrt(1 + (I_A - I_B)^2))");
  add("unscaled_product", AmmSpec::geometric_mean({1.0, 1.0}),
      {{homogeneity, F}, {symmetry, P}, {sufficient_funds, P}, {permanent_loss_aversion, P}},
      "I_A I_B");
  add("asymmetric_geometric", AmmSpec::geometric_mean({0.3, 0.7}),
      {{homogeneity, P}, {symmetry, F}, {sufficient_funds, P}, {permanent_loss_aversion, P}},
      "I_A^0.3 I_B^0.7");
  add("piecewise_norm_product", AmmSpec::counterexample(CK::piecewise_norm_product, 2),
      {{homogeneity, P}, {symmetry, P}, {sufficient_funds, P}, {permanent_loss_aversion, F}},
      "sqrt(I_A^2 + I_B^2) near the diagonal, sqrt(2.5 I_A I_B) elsewhere");
  add("mixed_cubic", AmmSpec::counterexample(CK::mixed_cubic, 2),
      {{scale_invariance, P}, {homogeneity, P}, {liquidity_additivity, F}, {sufficient_funds, P},
       {permanent_loss_aversion, P}},
      "(I_A I_B^2 + I_A^2 I_B)^(1/3)");
  return out;
}

std::optional<CatalogEntry> find_catalog_entry(std::string_view key) {
  for (auto& e : catalog_entries()) {
    if (e.key == key) return e;
  }
  return std::nullopt;
}

}  // namespace cfmm
