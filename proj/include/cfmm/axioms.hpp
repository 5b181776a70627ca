#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfmm/catalog.hpp"
#include "cfmm/level_solve.hpp"

namespace cfmm {

enum class WitnessRelation {
  /// f(X) = multiplier * f(Y) + offset is violated.
  level_equality,
  /// f(X) falls below f(Y): X is a convex combination of two points on the level of Y.
  level_deficit,
  /// X has a zero coordinate yet reaches the level of Y.
  boundary_reach,
};

/// Enough to recompute the violation from scratch by direct evaluation.
struct Witness {
  WitnessRelation relation = WitnessRelation::level_equality;
  std::vector<double> x;
  std::vector<double> y;
  double multiplier = 1.0;
  double offset = 0.0;
  double residual = 0.0;
  std::string description;
};

/// Relative residual of a witness under the level function F.
double witness_residual(const LevelFn& F, const Witness& w);
double recompute_witness_residual(const AmmSpec& spec, const Witness& w);

struct AxiomReport {
  Axiom axiom = Axiom::scale_invariance;
  Verdict verdict = Verdict::inconclusive;
  std::optional<Witness> witness;  // present for fail
  std::size_t samples_used = 0;
  double pass_tol = 0.0;
  double fail_tol = 0.0;
  double max_residual = 0.0;
  std::string note;
};

AxiomReport check_scale_invariance(const AmmSpec& spec, const SamplerConfig& cfg);
AxiomReport check_homogeneity(const AmmSpec& spec, const SamplerConfig& cfg);
AxiomReport check_translation_invariance(const AmmSpec& spec, const SamplerConfig& cfg);
AxiomReport check_one_invariance(const AmmSpec& spec, const SamplerConfig& cfg);
AxiomReport check_symmetry(const AmmSpec& spec, const SamplerConfig& cfg);
/// Throws DimensionError for fewer than three assets. With swap_roles the
/// sampled inventories I and J trade places, exercising the other direction of
/// the biconditional.
AxiomReport check_independence(const AmmSpec& spec, const SamplerConfig& cfg, bool swap_roles = false);
/// Throws DimensionError unless there are exactly two assets.
AxiomReport check_liquidity_additivity(const AmmSpec& spec, const SamplerConfig& cfg);
AxiomReport check_sufficient_funds(const AmmSpec& spec, const SamplerConfig& cfg);
AxiomReport check_permanent_loss_aversion(const AmmSpec& spec, const SamplerConfig& cfg);

/// Dispatch by id.
AxiomReport check_axiom(const AmmSpec& spec, Axiom axiom, const SamplerConfig& cfg);

/// Independence on an arbitrary increasing function of n >= 3 positive
/// arguments (used for portfolio value functions).
AxiomReport check_independence(const LevelFn& F, std::size_t n, const SamplerConfig& cfg,
                               bool swap_roles = false);

struct EquivalenceReport {
  Verdict verdict = Verdict::inconclusive;
  std::optional<Witness> witness;
  /// (f-level, g-level) pairs sorted by f-level.
  std::vector<std::pair<double, double>> link_samples;
  std::size_t samples_used = 0;
  double pass_tol = 0.0;
  double fail_tol = 0.0;
  double max_residual = 0.0;
};

/// Witness points are to be evaluated with g.
EquivalenceReport check_equivalence(const AmmSpec& f, const AmmSpec& g, const SamplerConfig& cfg);
EquivalenceReport check_equivalence(const LevelFn& f, const LevelFn& g, std::size_t n, const SamplerConfig& cfg);

enum class Cell { pass, fail, inconclusive, not_applicable, untested };

std::string cell_name(Cell cell);

struct MatrixRow {
  std::string key;
  std::vector<std::pair<Axiom, Cell>> cells;  // in kAllAxioms order
  std::map<Axiom, AxiomReport> reports;
};

struct Mismatch {
  std::string key;
  Axiom axiom;
  Verdict expected;
  Cell actual;
  std::optional<Witness> witness;
};

struct AxiomMatrix {
  std::vector<MatrixRow> rows;
  std::vector<Mismatch> mismatches;
};

/// Runs every adjudicated (entry, axiom) pair; with run_all also the cells the
/// registry leaves open. Entries are processed on worker threads; the result is
/// ordered like the input.
AxiomMatrix axiom_matrix(const std::vector<CatalogEntry>& entries, const SamplerConfig& cfg,
                         bool run_all = false);

}  // namespace cfmm
