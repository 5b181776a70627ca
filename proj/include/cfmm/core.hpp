#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfmm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the domain of a trading function (zero coordinate for a
/// log/implicit form, negative quantity, non-finite value).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};
using DimensionMismatch = DimensionError;

class NoBracket : public Error {
 public:
  using Error::Error;
};

/// A swap cannot close the level before the output reserve is exhausted.
class InsufficientDepth : public Error {
 public:
  using Error::Error;
};

class InfeasibleTrade : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class Unbounded : public Error {
 public:
  using Error::Error;
};

class OutOfGrid : public Error {
 public:
  using Error::Error;
};

struct AssetId {
  std::string label;

  auto operator<=>(const AssetId&) const = default;
};

/// Labels "A", "B", ... for an n-asset universe.
std::vector<AssetId> default_assets(std::size_t n);

/// Non-negative quantity per asset, positionally aligned with an asset universe.
class Inventory {
 public:
  Inventory() = default;
  explicit Inventory(std::vector<double> quantities);
  Inventory(std::initializer_list<double> quantities);

  std::size_t size() const { return q_.size(); }
  double operator[](std::size_t i) const { return q_[i]; }
  std::span<const double> values() const { return q_; }
  const std::vector<double>& vector() const { return q_; }

  /// True when every coordinate is strictly positive.
  bool interior() const;

  bool operator==(const Inventory&) const = default;

 private:
  std::vector<double> q_;
};

/// Signed quantity per asset; positive entries leave the pool.
class TradeVector {
 public:
  TradeVector() = default;
  explicit TradeVector(std::vector<double> deltas);
  TradeVector(std::initializer_list<double> deltas);

  static TradeVector zero(std::size_t n) { return TradeVector(std::vector<double>(n, 0.0)); }

  std::size_t size() const { return d_.size(); }
  double operator[](std::size_t i) const { return d_[i]; }
  std::span<const double> values() const { return d_; }

  TradeVector operator+(const TradeVector& other) const;
  TradeVector operator-() const;

 private:
  std::vector<double> d_;
};

/// Strictly positive price per asset in the numeraire.
class PriceVector {
 public:
  PriceVector() = default;
  explicit PriceVector(std::vector<double> prices);
  PriceVector(std::initializer_list<double> prices);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> values() const { return p_; }

  double dot(std::span<const double> quantities) const;

 private:
  std::vector<double> p_;
};

using Level = double;

struct SamplerConfig {
  std::uint64_t seed = 1;
  std::size_t samples = 200;
  double box_low = 0.1;
  double box_high = 10.0;
  double pass_tol = 1e-6;
  double fail_tol = 1e-3;

  /// Throws std::invalid_argument unless 0 < box_low < box_high and
  /// 0 < pass_tol < fail_tol.
  void validate() const;
};

/// Randomly shifted Halton sequence on [0,1)^dims. The shift is drawn from the
/// seed, so equal seeds give identical sequences.
class HaltonSampler {
 public:
  HaltonSampler(std::uint64_t seed, std::size_t dims);

  std::size_t dims() const { return shift_.size(); }
  std::vector<double> point(std::size_t index) const;

 private:
  std::vector<double> shift_;
};

std::vector<Inventory> sample_inventories(const SamplerConfig& cfg, std::size_t dim);

/// Bracketing root of a monotone function: regula falsi (Illinois variant)
/// with bisection fallback. Non-finite function values are tolerated inside the
/// bracket; they force a bisection step.
///
/// With tol > 0 returns as soon as |f(x)| <= tol * max(1, |f(lo)|, |f(hi)|);
/// with tol == 0 runs until the bracket collapses to adjacent doubles and
/// returns the endpoint with the smaller residual.
double scalar_root(const std::function<double(double)>& f, double lo, double hi, double tol = 0.0,
                   int max_iter = 600);

/// max(|a|, |b|, floor) -- denominator for relative level comparisons.
double relative_scale(double a, double b, double floor = 1e-9);

}  // namespace cfmm
