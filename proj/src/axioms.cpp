#include "cfmm/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <utility>

namespace cfmm {

namespace {

constexpr double kLambdas[] = {0.5, 2.0, 5.0};
constexpr double kThetas[] = {0.25, 0.5, 0.75};
// Floor of the denominator in relative level comparisons; levels can cross zero
// for the LMSR and the separable forms.
constexpr double kScaleFloor = 1e-6;

struct Draw {
  std::vector<double> point;  // inventory coordinates in the box
  std::vector<double> extra;  // uniforms in [0,1)
};

class Draws {
 public:
  Draws(const SamplerConfig& cfg, std::size_t n, std::size_t extra)
      : cfg_(cfg), n_(n), sampler_(cfg.seed, n + extra) {}

  Draw operator()(std::size_t i) const {
    auto u = sampler_.point(i);
    Draw d;
    const double width = cfg_.box_high - cfg_.box_low;
    for (std::size_t k = 0; k < n_; ++k) d.point.push_back(cfg_.box_low + width * u[k]);
    d.extra.assign(u.begin() + static_cast<std::ptrdiff_t>(n_), u.end());
    return d;
  }

 private:
  const SamplerConfig& cfg_;
  std::size_t n_;
  HaltonSampler sampler_;
};

class Tracker {
 public:
  Tracker(Axiom axiom, const SamplerConfig& cfg) : cfg_(cfg) {
    report_.axiom = axiom;
    report_.pass_tol = cfg.pass_tol;
    report_.fail_tol = cfg.fail_tol;
  }

  void offer(Witness w) {
    if (!std::isfinite(w.residual)) w.residual = 1.0;
    if (!worst_ || w.residual > worst_->residual) worst_ = std::move(w);
  }
  void sample_done() { ++report_.samples_used; }
  void note(std::string s) { report_.note = std::move(s); }

  AxiomReport finish() {
    if (report_.samples_used == 0 || !worst_) {
      report_.verdict = Verdict::inconclusive;
      if (report_.note.empty()) report_.note = "no usable samples";
      return report_;
    }
    report_.max_residual = worst_->residual;
    if (worst_->residual >= cfg_.fail_tol) {
      report_.verdict = Verdict::fail;
      report_.witness = worst_;
    } else if (worst_->residual <= cfg_.pass_tol) {
      report_.verdict = Verdict::pass;
    } else {
      report_.verdict = Verdict::inconclusive;
      report_.witness = worst_;
    }
    return report_;
  }

 private:
  const SamplerConfig& cfg_;
  AxiomReport report_;
  std::optional<Witness> worst_;
};

Witness equality_witness(const LevelFn& F, std::vector<double> x, std::vector<double> y, double mult,
                         double offset, std::string description) {
  Witness w;
  w.relation = WitnessRelation::level_equality;
  w.x = std::move(x);
  w.y = std::move(y);
  w.multiplier = mult;
  w.offset = offset;
  w.description = std::move(description);
  w.residual = witness_residual(F, w);
  return w;
}

double search_cap(const SamplerConfig& cfg) { return 1e6 * cfg.box_high; }

// Multiplies coordinate a by exp(log_factor) and level-solves coordinate b.
// The factor is pulled towards one when the level cannot be closed.
std::optional<std::vector<double>> same_level_partner(const LevelFn& F, const std::vector<double>& I,
                                                      std::size_t a, std::size_t b, double log_factor,
                                                      double cap) {
  const double k = F(I);
  for (int attempt = 0; attempt < 10; ++attempt) {
    std::vector<double> J = I;
    J[a] = I[a] * std::exp(log_factor);
    auto t = solve_coordinate(F, J, b, k, 0.0, cap);
    if (t && *t > 0.0 && std::isfinite(F(J))) return J;
    log_factor *= 0.5;
  }
  return std::nullopt;
}

template <class Body>
void for_pairs(const LevelFn& F, std::size_t n, const SamplerConfig& cfg, Tracker& tracker, Body&& body) {
  Draws draws(cfg, n, 1);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const Draw d = draws(i);
    const std::size_t a = i % n;
    const std::size_t b = (i + 1) % n;
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    const double lf = sign * (0.2 + 0.9 * d.extra[0]);
    auto J = same_level_partner(F, d.point, a, b, lf, search_cap(cfg));
    if (!J) continue;
    body(d.point, *J);
    tracker.sample_done();
  }
}

std::string fmt_vec(const std::vector<double>& v) {
  std::string s = "(";
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6g", v[i]);
    s += (i ? ", " : "") + std::string(buf);
  }
  return s + ")";
}

std::vector<double> shifted(const std::vector<double>& v, double alpha) {
  std::vector<double> out(v);
  for (double& x : out) x += alpha;
  return out;
}

std::vector<double> scaled(const std::vector<double>& v, double lambda) {
  std::vector<double> out(v);
  for (double& x : out) x *= lambda;
  return out;
}

AxiomReport scale_invariance_impl(const LevelFn& F, std::size_t n, const SamplerConfig& cfg) {
  Tracker t(Axiom::scale_invariance, cfg);
  for_pairs(F, n, cfg, t, [&](const std::vector<double>& I, const std::vector<double>& J) {
    for (double lam : kLambdas) {
      t.offer(equality_witness(F, scaled(I, lam), scaled(J, lam), 1.0, 0.0,
                               "f(I) = f(J) but f(lI) != f(lJ), l = " + std::to_string(lam) + ", I = " +
                                   fmt_vec(I) + ", J = " + fmt_vec(J)));
    }
  });
  return t.finish();
}

AxiomReport translation_impl(const LevelFn& F, std::size_t n, const SamplerConfig& cfg) {
  Tracker t(Axiom::translation_invariance, cfg);
  for_pairs(F, n, cfg, t, [&](const std::vector<double>& I, const std::vector<double>& J) {
    const double m = std::min(*std::min_element(I.begin(), I.end()), *std::min_element(J.begin(), J.end()));
    for (double alpha : {-0.5 * m, 0.5, 3.0}) {
      t.offer(equality_witness(F, shifted(I, alpha), shifted(J, alpha), 1.0, 0.0,
                               "f(I) = f(J) but f(I + a1) != f(J + a1), a = " + std::to_string(alpha) +
                                   ", I = " + fmt_vec(I) + ", J = " + fmt_vec(J)));
    }
  });
  return t.finish();
}

AxiomReport independence_impl(const LevelFn& F, std::size_t n, const SamplerConfig& cfg, bool swap_roles) {
  if (n < 3) throw DimensionError("independence needs at least three assets");
  Tracker tracker(Axiom::independence, cfg);
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t i = 0; i < n; ++i) subsets.push_back({i});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) subsets.push_back({i, j});
  }
  const double cap = search_cap(cfg);
  HaltonSampler sampler(cfg.seed, 2 * n);
  const double width = cfg.box_high - cfg.box_low;
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    const auto u = sampler.point(s);
    std::vector<double> J(n), I(n);
    for (std::size_t k = 0; k < n; ++k) {
      J[k] = cfg.box_low + width * u[k];
      I[k] = cfg.box_low + width * u[n + k];
    }
    const auto& base = swap_roles ? I : J;
    const auto& other = swap_roles ? J : I;
    const double k_base = F(base);
    bool used = false;
    for (const auto& B : subsets) {
      std::vector<double> x = base;
      double rmin = std::numeric_limits<double>::infinity();
      for (std::size_t idx : B) rmin = std::min(rmin, other[idx]);
      auto g = [&](double t) {
        for (std::size_t idx : B) x[idx] = t * other[idx];
        return F(x);
      };
      auto tstar = solve_increasing(g, k_base, 1.0, 0.0, cap / rmin);
      if (!tstar || !(*tstar > 0.0)) continue;
      std::vector<double> X = other;
      std::vector<double> Y = other;
      for (std::size_t idx : B) {
        X[idx] = *tstar * other[idx];
        Y[idx] = base[idx];
      }
      tracker.offer(equality_witness(F, X, Y, 1.0, 0.0,
                                     "terms of trade within a subset depend on the other inventories: X = " +
                                         fmt_vec(X) + ", Y = " + fmt_vec(Y)));
      used = true;
    }
    if (used) tracker.sample_done();
  }
  return tracker.finish();
}

AxiomReport aversion_impl(const LevelFn& F, std::size_t n, const SamplerConfig& cfg) {
  Tracker t(Axiom::permanent_loss_aversion, cfg);
  for_pairs(F, n, cfg, t, [&](const std::vector<double>& I, const std::vector<double>& J) {
    for (double th : kThetas) {
      std::vector<double> M(n);
      for (std::size_t k = 0; k < n; ++k) M[k] = th * I[k] + (1.0 - th) * J[k];
      Witness w;
      w.relation = WitnessRelation::level_deficit;
      w.x = M;
      w.y = I;
      w.description = "upper level set not convex: f(tI + (1-t)J) < f(I) = f(J), I = " + fmt_vec(I) +
                      ", J = " + fmt_vec(J);
      w.residual = witness_residual(F, w);
      t.offer(std::move(w));
    }
  });
  return t.finish();
}

}  // namespace

double witness_residual(const LevelFn& F, const Witness& w) {
  switch (w.relation) {
    case WitnessRelation::level_equality: {
      const double a = F(w.x);
      const double b = w.multiplier * F(w.y) + w.offset;
      if (a == b) return 0.0;
      return std::abs(a - b) / relative_scale(a, b, kScaleFloor);
    }
    case WitnessRelation::level_deficit: {
      const double a = F(w.x);
      const double b = F(w.y);
      return std::max(0.0, b - a) / relative_scale(a, b, kScaleFloor);
    }
    case WitnessRelation::boundary_reach: {
      const bool on_boundary = std::any_of(w.x.begin(), w.x.end(), [](double v) { return v == 0.0; });
      if (!on_boundary) return 0.0;
      const double a = F(w.x);
      const double b = F(w.y);
      return a >= b - 1e-9 * relative_scale(a, b, kScaleFloor) ? 1.0 : 0.0;
    }
  }
  return 0.0;
}

double recompute_witness_residual(const AmmSpec& spec, const Witness& w) {
  return witness_residual(level_function(spec), w);
}

AxiomReport check_scale_invariance(const AmmSpec& spec, const SamplerConfig& cfg) {
  cfg.validate();
  return scale_invariance_impl(level_function(spec), spec.dimension(), cfg);
}

AxiomReport check_homogeneity(const AmmSpec& spec, const SamplerConfig& cfg) {
  cfg.validate();
  const auto F = level_function(spec);
  Tracker t(Axiom::homogeneity, cfg);
  const auto inventories = sample_inventories(cfg, spec.dimension());
  for (const auto& inv : inventories) {
    const auto& I = inv.vector();
    for (double lam : kLambdas) {
      t.offer(equality_witness(F, scaled(I, lam), I, lam, 0.0,
                               "f(lI) != l f(I), l = " + std::to_string(lam) + ", I = " + fmt_vec(I)));
    }
    t.sample_done();
  }
  return t.finish();
}

AxiomReport check_translation_invariance(const AmmSpec& spec, const SamplerConfig& cfg) {
  cfg.validate();
  return translation_impl(level_function(spec), spec.dimension(), cfg);
}

AxiomReport check_one_invariance(const AmmSpec& spec, const SamplerConfig& cfg) {
  cfg.validate();
  const auto F = level_function(spec);
  Tracker t(Axiom::one_invariance, cfg);
  for (const auto& inv : sample_inventories(cfg, spec.dimension())) {
    const auto& I = inv.vector();
    const double m = *std::min_element(I.begin(), I.end());
    for (double alpha : {-0.5 * m, 0.5, 3.0}) {
      t.offer(equality_witness(F, shifted(I, alpha), I, 1.0, alpha,
                               "f(I + a1) != f(I) + a, a = " + std::to_string(alpha) + ", I = " + fmt_vec(I)));
    }
    t.sample_done();
  }
  return t.finish();
}

AxiomReport check_symmetry(const AmmSpec& spec, const SamplerConfig& cfg) {
  cfg.validate();
  const auto F = level_function(spec);
  const std::size_t n = spec.dimension();
  Tracker t(Axiom::symmetry, cfg);
  for (const auto& inv : sample_inventories(cfg, n)) {
    const auto& I = inv.vector();
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        std::vector<double> X = I;
        std::swap(X[p], X[q]);
        t.offer(equality_witness(F, X, I, 1.0, 0.0,
                                 "f changes when " + spec.assets()[p].label + " and " + spec.assets()[q].label +
                                     " are relabelled, I = " + fmt_vec(I)));
      }
    }
    t.sample_done();
  }
  return t.finish();
}

AxiomReport check_independence(const AmmSpec& spec, const SamplerConfig& cfg, bool swap_roles) {
  cfg.validate();
  return independence_impl(level_function(spec), spec.dimension(), cfg, swap_roles);
}

AxiomReport check_independence(const LevelFn& F, std::size_t n, const SamplerConfig& cfg, bool swap_roles) {
  cfg.validate();
  return independence_impl(F, n, cfg, swap_roles);
}

AxiomReport check_liquidity_additivity(const AmmSpec& spec, const SamplerConfig& cfg) {
  cfg.validate();
  if (spec.dimension() != 2) throw DimensionError("liquidity additivity is a two-asset condition");
  const auto F = level_function(spec);
  const double cap = search_cap(cfg);
  Tracker t(Axiom::liquidity_additivity, cfg);
  Draws draws(cfg, 2, 2);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const Draw d = draws(i);
    const double ia = d.point[0];
    const double ib = d.point[1];
    const double x = ia * (0.05 + 1.5 * d.extra[0]);
    const double xt = ia * (0.05 + 1.5 * d.extra[1]);

    // f(I_A + x, I_B) = f(I_A, I_B + y)
    std::vector<double> p{ia, ib};
    const double k1 = F(std::vector<double>{ia + x, ib});
    auto yb = solve_coordinate(F, p, 1, k1, ib, cap);
    if (!yb) continue;
    const double y = *yb - ib;

    // f(I_A + x + xt, I_B + y) = f(I_A + x, I_B + y + yt)
    std::vector<double> q{ia + x, ib + y};
    const double k2 = F(std::vector<double>{ia + x + xt, ib + y});
    auto ytb = solve_coordinate(F, q, 1, k2, ib + y, cap);
    if (!ytb) continue;
    const double yt = *ytb - (ib + y);

    std::vector<double> X{ia + x + xt, ib};
    std::vector<double> Y{ia, ib + y + yt};
    t.offer(equality_witness(F, X, Y, 1.0, 0.0,
                             "Thomsen condition fails from I = " + fmt_vec(d.point) + " with x = " +
                                 std::to_string(x) + ", x~ = " + std::to_string(xt)));
    t.sample_done();
  }
  return t.finish();
}

AxiomReport check_sufficient_funds(const AmmSpec& spec, const SamplerConfig& cfg) {
  cfg.validate();
  const auto F = level_function(spec);
  const std::size_t n = spec.dimension();
  Tracker t(Axiom::sufficient_funds, cfg);
  bool any_witness = false;
  for (const auto& inv : sample_inventories(cfg, n)) {
    const auto& I = inv.vector();
    const double k = F(I);
    for (std::size_t a = 0; a < n; ++a) {
      double top = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != a) top = std::max(top, I[j]);
      }
      std::vector<double> J(n);
      auto g = [&](double s) {
        for (std::size_t j = 0; j < n; ++j) J[j] = (j == a) ? 0.0 : s * I[j];
        return F(J);
      };
      const double cap = search_cap(cfg) / top;
      Witness w;
      w.relation = WitnessRelation::boundary_reach;
      w.y = I;
      if (g(cap) >= k) {
        auto s = solve_increasing(g, k, 1.0, 0.0, cap);
        // Nudge outward so the witness reaches the level despite rounding.
        const double s_hit = s ? std::min(cap, *s * (1.0 + 1e-9)) : cap;
        g(s_hit);
        w.x = J;
        w.description = "liquidity curve through " + fmt_vec(I) + " meets the " + spec.assets()[a].label +
                        " = 0 face at " + fmt_vec(J);
        w.residual = witness_residual(F, w);
        any_witness = true;
      } else {
        g(cap);
        w.x = J;
        w.residual = 0.0;
      }
      t.offer(std::move(w));
    }
    t.sample_done();
  }
  if (!any_witness) {
    t.note("level not reached on any face within 1e6 * box_high; asymptotes cannot be certified numerically");
  }
  return t.finish();
}

AxiomReport check_permanent_loss_aversion(const AmmSpec& spec, const SamplerConfig& cfg) {
  cfg.validate();
  return aversion_impl(level_function(spec), spec.dimension(), cfg);
}

AxiomReport check_axiom(const AmmSpec& spec, Axiom axiom, const SamplerConfig& cfg) {
  switch (axiom) {
    case Axiom::scale_invariance:
      return check_scale_invariance(spec, cfg);
    case Axiom::homogeneity:
      return check_homogeneity(spec, cfg);
    case Axiom::translation_invariance:
      return check_translation_invariance(spec, cfg);
    case Axiom::one_invariance:
      return check_one_invariance(spec, cfg);
    case Axiom::symmetry:
      return check_symmetry(spec, cfg);
    case Axiom::independence:
      return check_independence(spec, cfg);
    case Axiom::liquidity_additivity:
      return check_liquidity_additivity(spec, cfg);
    case Axiom::sufficient_funds:
      return check_sufficient_funds(spec, cfg);
    case Axiom::permanent_loss_aversion:
      return check_permanent_loss_aversion(spec, cfg);
  }
  throw std::invalid_argument("unknown axiom");
}

EquivalenceReport check_equivalence(const LevelFn& f, const LevelFn& g, std::size_t n, const SamplerConfig& cfg) {
  cfg.validate();
  Tracker t(Axiom::scale_invariance, cfg);
  EquivalenceReport rep;
  rep.pass_tol = cfg.pass_tol;
  rep.fail_tol = cfg.fail_tol;
  for_pairs(f, n, cfg, t, [&](const std::vector<double>& I, const std::vector<double>& J) {
    t.offer(equality_witness(g, J, I, 1.0, 0.0,
                             "f(I) = f(J) but g(I) != g(J), I = " + fmt_vec(I) + ", J = " + fmt_vec(J)));
    rep.link_samples.emplace_back(f(I), g(I));
  });
  // The link M with g = M(f) must be non-decreasing.
  std::vector<std::pair<std::pair<double, double>, std::vector<double>>> pts;
  {
    Draws draws(cfg, n, 1);
    for (std::size_t i = 0; i < cfg.samples; ++i) {
      const auto p = draws(i).point;
      pts.push_back({{f(p), g(p)}, p});
    }
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!(pts[i].first.first < pts[i + 1].first.first)) continue;
    Witness w;
    w.relation = WitnessRelation::level_deficit;
    w.x = pts[i + 1].second;
    w.y = pts[i].second;
    w.description = "f orders " + fmt_vec(w.y) + " below " + fmt_vec(w.x) + " but g reverses the order";
    w.residual = witness_residual(g, w);
    t.offer(std::move(w));
  }
  std::sort(rep.link_samples.begin(), rep.link_samples.end());
  const auto ar = t.finish();
  rep.verdict = ar.verdict;
  rep.witness = ar.witness;
  rep.samples_used = ar.samples_used;
  rep.max_residual = ar.max_residual;
  return rep;
}

EquivalenceReport check_equivalence(const AmmSpec& f, const AmmSpec& g, const SamplerConfig& cfg) {
  if (f.assets() != g.assets()) throw DimensionError("equivalence needs the same asset universe");
  return check_equivalence(level_function(f), level_function(g), f.dimension(), cfg);
}

std::string cell_name(Cell cell) {
  switch (cell) {
    case Cell::pass:
      return "pass";
    case Cell::fail:
      return "fail";
    case Cell::inconclusive:
      return "inconclusive";
    case Cell::not_applicable:
      return "n/a";
    case Cell::untested:
      return "untested";
  }
  return "?";
}

namespace {

Cell to_cell(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return Cell::pass;
    case Verdict::fail:
      return Cell::fail;
    case Verdict::inconclusive:
      return Cell::inconclusive;
  }
  return Cell::inconclusive;
}

bool applicable(const AmmSpec& spec, Axiom axiom) {
  if (axiom == Axiom::independence) return spec.dimension() >= 3;
  if (axiom == Axiom::liquidity_additivity) return spec.dimension() == 2;
  return true;
}

MatrixRow run_row(const CatalogEntry& entry, const SamplerConfig& cfg, bool run_all) {
  MatrixRow row;
  row.key = entry.key;
  for (Axiom ax : kAllAxioms) {
    Cell cell = Cell::untested;
    if (!applicable(entry.spec, ax)) {
      cell = Cell::not_applicable;
    } else if (run_all || entry.expected.count(ax)) {
      auto rep = check_axiom(entry.spec, ax, cfg);
      cell = to_cell(rep.verdict);
      row.reports.emplace(ax, std::move(rep));
    }
    row.cells.emplace_back(ax, cell);
  }
  return row;
}

}  // namespace

AxiomMatrix axiom_matrix(const std::vector<CatalogEntry>& entries, const SamplerConfig& cfg, bool run_all) {
  cfg.validate();
  std::vector<std::future<MatrixRow>> jobs;
  jobs.reserve(entries.size());
  for (const auto& e : entries) {
    jobs.push_back(std::async(std::launch::async, [&e, &cfg, run_all] { return run_row(e, cfg, run_all); }));
  }
  AxiomMatrix m;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    m.rows.push_back(jobs[i].get());
    const auto& row = m.rows.back();
    for (const auto& [ax, expected] : entries[i].expected) {
      const auto it = std::find_if(row.cells.begin(), row.cells.end(), [&](const auto& c) { return c.first == ax; });
      const Cell actual = it->second;
      if (actual == to_cell(expected)) continue;
      std::optional<Witness> w;
      if (auto r = row.reports.find(ax); r != row.reports.end()) w = r->second.witness;
      m.mismatches.push_back({row.key, ax, expected, actual, w});
    }
  }
  return m;
}

}  // namespace cfmm
