#include "cfmm/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

namespace cfmm {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite coordinate");
  }
}

constexpr std::array<unsigned, 32> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23,  29,  31,
                                              37, 41, 43, 47, 53, 59, 61, 67, 71,  73,  79,
                                              83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

double radical_inverse(std::size_t index, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

std::vector<AssetId> default_assets(std::size_t n) {
  std::vector<AssetId> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string label;
    std::size_t k = i;
    do {
      label.insert(label.begin(), static_cast<char>('A' + k % 26));
      k /= 26;
    } while (k-- > 0);
    out.push_back({label});
  }
  return out;
}

Inventory::Inventory(std::vector<double> quantities) : q_(std::move(quantities)) {
  require_finite(q_, "inventory");
  for (double x : q_) {
    if (x < 0.0) throw DomainError("inventory: negative quantity");
  }
}

Inventory::Inventory(std::initializer_list<double> quantities)
    : Inventory(std::vector<double>(quantities)) {}

bool Inventory::interior() const {
  return std::all_of(q_.begin(), q_.end(), [](double x) { return x > 0.0; });
}

TradeVector::TradeVector(std::vector<double> deltas) : d_(std::move(deltas)) {
  require_finite(d_, "trade");
}

TradeVector::TradeVector(std::initializer_list<double> deltas)
    : TradeVector(std::vector<double>(deltas)) {}

TradeVector TradeVector::operator+(const TradeVector& other) const {
  if (other.size() != size()) throw DimensionError("trade: dimension mismatch");
  std::vector<double> out(d_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.d_[i];
  return TradeVector(std::move(out));
}

TradeVector TradeVector::operator-() const {
  std::vector<double> out(d_);
  for (double& x : out) x = -x;
  return TradeVector(std::move(out));
}

PriceVector::PriceVector(std::vector<double> prices) : p_(std::move(prices)) {
  require_finite(p_, "prices");
  for (double x : p_) {
    if (!(x > 0.0)) throw DomainError("prices: non-positive entry");
  }
}

PriceVector::PriceVector(std::initializer_list<double> prices)
    : PriceVector(std::vector<double>(prices)) {}

double PriceVector::dot(std::span<const double> quantities) const {
  if (quantities.size() != p_.size()) throw DimensionError("prices: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p_.size(); ++i) s += p_[i] * quantities[i];
  return s;
}

void SamplerConfig::validate() const {
  if (!(box_low > 0.0 && box_low < box_high)) {
    throw std::invalid_argument("sampler: require 0 < box_low < box_high");
  }
  if (!(pass_tol > 0.0 && pass_tol < fail_tol)) {
    throw std::invalid_argument("sampler: require 0 < pass_tol < fail_tol");
  }
}

HaltonSampler::HaltonSampler(std::uint64_t seed, std::size_t dims) {
  if (dims > kPrimes.size()) throw DimensionError("halton: too many dimensions");
  std::mt19937_64 rng(seed);
  shift_.resize(dims);
  for (double& s : shift_) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> HaltonSampler::point(std::size_t index) const {
  std::vector<double> u(shift_.size());
  for (std::size_t d = 0; d < u.size(); ++d) {
    double x = radical_inverse(index + 1, kPrimes[d]) + shift_[d];
    u[d] = x - std::floor(x);
  }
  return u;
}

std::vector<Inventory> sample_inventories(const SamplerConfig& cfg, std::size_t dim) {
  cfg.validate();
  if (dim < 2) throw DimensionError("sample_inventories: dim must be >= 2");
  HaltonSampler sampler(cfg.seed, dim);
  std::vector<Inventory> out;
  out.reserve(cfg.samples);
  const double width = cfg.box_high - cfg.box_low;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    auto u = sampler.point(i);
    for (double& x : u) x = std::clamp(cfg.box_low + width * x, cfg.box_low, cfg.box_high);
    out.emplace_back(std::move(u));
  }
  return out;
}

double scalar_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                   int max_iter) {
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo);
  double fhi = f(hi);
  double scale = 1.0;
  if (std::isfinite(flo)) scale = std::max(scale, std::abs(flo));
  if (std::isfinite(fhi)) scale = std::max(scale, std::abs(fhi));
  const double accept = tol * scale;

  if (flo == 0.0 || (tol > 0.0 && std::abs(flo) <= accept)) return lo;
  if (fhi == 0.0 || (tol > 0.0 && std::abs(fhi) <= accept)) return hi;
  if (std::isnan(flo) || std::isnan(fhi) || (flo > 0.0) == (fhi > 0.0)) {
    throw NoBracket("scalar_root: function values at the bracket ends share a sign");
  }

  // Illinois bookkeeping: which side was retained on the previous step.
  int retained = 0;
  double width_before = hi - lo;
  int stalled = 0;
  for (int iter = 0; iter < max_iter; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;

    double x = mid;
    if (std::isfinite(flo) && std::isfinite(fhi) && stalled < 2) {
      double s = hi - fhi * (hi - lo) / (fhi - flo);
      if (std::isfinite(s) && s > lo && s < hi) x = s;
    }
    const double fx = f(x);
    if (fx == 0.0 || (tol > 0.0 && std::isfinite(fx) && std::abs(fx) <= accept)) return x;

    if (std::isnan(fx)) {
      // Treat as on the lower-bound side only if the function is undefined there;
      // fall back to halving towards the finite end.
      throw DomainError("scalar_root: function returned NaN inside the bracket");
    }
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
      if (retained == 1 && std::isfinite(fhi)) fhi *= 0.5;
      retained = 1;
    } else {
      hi = x;
      fhi = fx;
      if (retained == -1 && std::isfinite(flo)) flo *= 0.5;
      retained = -1;
    }
    const double width = hi - lo;
    stalled = (width > 0.5 * width_before) ? stalled + 1 : 0;
    width_before = width;
  }
  // Bracket collapsed; recompute true residuals (Illinois may have halved them).
  const double rlo = f(lo);
  const double rhi = f(hi);
  if (!std::isfinite(rlo)) return hi;
  if (!std::isfinite(rhi)) return lo;
  return std::abs(rlo) <= std::abs(rhi) ? lo : hi;
}

double relative_scale(double a, double b, double floor) {
  double s = floor;
  if (std::isfinite(a)) s = std::max(s, std::abs(a));
  if (std::isfinite(b)) s = std::max(s, std::abs(b));
  return s;
}

}  // namespace cfmm
