#include "cfmm/cli.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "cfmm/axioms.hpp"
#include "cfmm/characterize.hpp"
#include "cfmm/duality.hpp"
#include "cfmm/engine.hpp"
#include "cfmm/level_solve.hpp"
#include "cfmm/spec_io.hpp"

namespace cfmm {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string inventory_text(const std::vector<AssetId>& assets, std::span<const double> x) {
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ";" : "") + assets[i].label + "=" + num(x[i]);
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw std::invalid_argument("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& os, const std::string& format) const {
    if (format == "csv") {
      print_row_csv(os, header_);
      for (const auto& r : rows_) print_row_csv(os, r);
      return;
    }
    std::vector<std::size_t> width(header_.size());
    for (std::size_t i = 0; i < header_.size(); ++i) width[i] = header_[i].size();
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    auto line = [&](const std::vector<std::string>& r) {
      std::string s;
      for (std::size_t i = 0; i < r.size(); ++i) {
        s += r[i];
        if (i + 1 < r.size()) s += std::string(width[i] - r[i].size() + 2, ' ');
      }
      os << s << "\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
  }

 private:
  static void print_row_csv(std::ostream& os, const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      const bool quote = r[i].find_first_of(",\"\n") != std::string::npos;
      if (i) os << ',';
      if (quote) {
        os << '"';
        for (char c : r[i]) os << (c == '"' ? "\"\"" : std::string(1, c));
        os << '"';
      } else {
        os << r[i];
      }
    }
    os << "\n";
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Common {
  std::string spec_path;
  std::uint64_t seed = 1;
  std::size_t samples = 200;
  double tol = 1e-6;
  double fail_tol = 1e-3;
  std::string out_path;
  std::string format = "table";

  SamplerConfig sampler() const {
    SamplerConfig cfg;
    cfg.seed = seed;
    cfg.samples = samples;
    cfg.pass_tol = tol;
    cfg.fail_tol = fail_tol;
    cfg.validate();
    return cfg;
  }
};

void add_output_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out_path, "Write output to this file instead of stdout");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"table", "csv"}));
}

void add_sampler_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Sampler seed");
  cmd->add_option("--samples", c.samples, "Samples per check");
  cmd->add_option("--tol", c.tol, "Pass tolerance (relative)");
  cmd->add_option("--fail-tol", c.fail_tol, "Fail tolerance (relative)");
}

std::size_t pair_index(const AmmSpec& spec, const std::string& label) { return spec.index_of(AssetId{label}); }

const Inventory& require_inventory(const SpecDocument& doc) {
  if (!doc.inventory) throw std::invalid_argument("spec document has no reference inventory");
  return *doc.inventory;
}

// Level-set dump: I_A on a geometric grid, I_B level-solved, other coordinates
// held at the reference inventory (or one).
Table curve_table(const SpecDocument& doc, std::optional<double> level, const std::string& pair, std::size_t points) {
  const AmmSpec& spec = doc.spec;
  std::size_t ia = 0, ib = 1;
  if (!pair.empty()) {
    const auto labels = split(pair, ',');
    if (labels.size() != 2) throw std::invalid_argument("--pair expects two labels A,B");
    ia = pair_index(spec, labels[0]);
    ib = pair_index(spec, labels[1]);
    if (ia == ib) throw std::invalid_argument("--pair needs two different assets");
  }
  if (points < 2) throw std::invalid_argument("--points must be at least 2");
  std::vector<double> base(spec.dimension(), 1.0);
  if (doc.inventory) base = doc.inventory->vector();
  const auto F = level_function(spec);
  const double k = level ? *level : F(base);

  // Diagonal point on the level fixes the scale of the dump.
  std::vector<double> x = base;
  auto diag = solve_increasing(
      [&](double t) {
        x[ia] = x[ib] = t;
        return F(x);
      },
      k, 1.0, 0.0, 1e15);
  if (!diag) throw DomainError("level not attainable along the diagonal");
  const double center = *diag;
  double lo = center / 100.0;
  double hi = center * 100.0;
  // Where the curve meets the I_B = 0 axis, end the dump there.
  x = base;
  x[ib] = 0.0;
  auto axis = solve_increasing(
      [&](double t) {
        x[ia] = t;
        return F(x);
      },
      k, center, 0.0, hi);
  if (axis) hi = *axis;

  Table t({"I_" + spec.assets()[ia].label, "I_" + spec.assets()[ib].label});
  for (std::size_t i = 0; i < points; ++i) {
    const double a = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(points - 1));
    std::vector<double> y = base;
    y[ia] = a;
    y[ib] = 0.0;
    if (F(y) < k) {
      y[ib] = center;
      if (!solve_coordinate(F, y, ib, k, 0.0, 1e6 * hi)) continue;
    }
    t.add({num(a), num(y[ib])});
  }
  return t;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constant-function market maker toolkit"};
  app.require_subcommand(1);
  Common c;

  std::string in_asset, out_asset, pair, filter, prices, key, axiom_names, curve_out;
  double amount = 0.0;
  std::optional<double> level;
  std::size_t points = 50;
  bool run_all = false;
  std::optional<double> dump_inventory;

  auto* quote = app.add_subcommand("quote", "Quote a swap against the spec's reference inventory");
  quote->add_option("--spec", c.spec_path, "Spec document")->required();
  quote->add_option("--in", in_asset, "Asset paid in")->required();
  quote->add_option("--out-asset", out_asset, "Asset received")->required();
  quote->add_option("--amount", amount, "Amount paid in")->required();
  add_output_flags(quote, c);

  auto* curve = app.add_subcommand("curve", "Dump a liquidity curve");
  curve->add_option("--spec", c.spec_path, "Spec document")->required();
  curve->add_option("--level", level, "Level k (default: level of the reference inventory)");
  curve->add_option("--pair", pair, "Two asset labels, e.g. A,B");
  curve->add_option("--points", points, "Number of rows");
  add_output_flags(curve, c);

  auto* axioms = app.add_subcommand("axioms", "Check axioms for one spec");
  axioms->add_option("--spec", c.spec_path, "Spec document")->required();
  axioms->add_option("--axiom", axiom_names, "Comma-separated axiom ids (default: all)");
  add_sampler_flags(axioms, c);
  add_output_flags(axioms, c);

  auto* matrix = app.add_subcommand("matrix", "Axiom matrix over the catalog");
  matrix->add_option("--filter", filter, "Comma-separated catalog keys");
  matrix->add_flag("--all", run_all, "Also run cells without a registered verdict");
  add_sampler_flags(matrix, c);
  add_output_flags(matrix, c);

  auto* charz = app.add_subcommand("characterize", "Elasticity, CEMM fit and normalized curve");
  charz->add_option("--spec", c.spec_path, "Spec document")->required();
  charz->add_option("--points", points, "Grid size for the normalized curve");
  charz->add_option("--curve-out", curve_out, "Write the (z, g) grid to this CSV file");
  add_sampler_flags(charz, c);
  add_output_flags(charz, c);

  auto* dual = app.add_subcommand("dual", "Portfolio value and arbitrage value");
  dual->add_option("--spec", c.spec_path, "Spec document")->required();
  dual->add_option("--level", level, "Level k (default: level of the reference inventory)");
  dual->add_option("--prices", prices, "Comma-separated prices")->required();
  add_sampler_flags(dual, c);
  add_output_flags(dual, c);

  auto* catalog = app.add_subcommand("catalog", "List catalog entries or print one as a spec document");
  catalog->add_option("key", key, "Catalog key");
  catalog->add_option("--inventory", dump_inventory, "Attach a balanced reference inventory");
  add_output_flags(catalog, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  std::ofstream file;
  std::ostream* os = &out;
  if (!c.out_path.empty()) {
    file.open(c.out_path);
    if (!file) {
      err << "error: cannot open '" << c.out_path << "' for writing\n";
      return 1;
    }
    os = &file;
  }

  try {
    if (quote->parsed()) {
      const auto doc = load_spec_document(c.spec_path);
      const auto& I = require_inventory(doc);
      try {
        const auto q = swap_quote(doc.spec, I, AssetId{in_asset}, AssetId{out_asset}, amount);
        Table t({"asset_in", "asset_out", "amount_in", "amount_out", "new_inventory", "level_residual"});
        t.add({q.asset_in.label, q.asset_out.label, num(q.amount_in), num(q.amount_out),
               inventory_text(doc.spec.assets(), q.new_inventory.values()), num(q.level_residual)});
        t.print(*os, c.format);
      } catch (const InsufficientDepth& e) {
        err << "insufficient depth: " << e.what() << "\n";
        return 2;
      }
    } else if (curve->parsed()) {
      const auto doc = load_spec_document(c.spec_path);
      // Curve dumps are always CSV so they can be fed straight to a plotter.
      curve_table(doc, level, pair, points).print(*os, "csv");
    } else if (axioms->parsed()) {
      const auto doc = load_spec_document(c.spec_path);
      const auto cfg = c.sampler();
      std::vector<Axiom> which;
      if (axiom_names.empty()) {
        which.assign(std::begin(kAllAxioms), std::end(kAllAxioms));
      } else {
        for (const auto& name : split(axiom_names, ',')) {
          auto ax = axiom_from_name(name);
          if (!ax) throw std::invalid_argument("unknown axiom '" + name + "'");
          which.push_back(*ax);
        }
      }
      Table t({"axiom", "verdict", "max_residual", "samples", "witness"});
      for (Axiom ax : which) {
        try {
          const auto r = check_axiom(doc.spec, ax, cfg);
          t.add({axiom_name(ax), verdict_name(r.verdict), num(r.max_residual), std::to_string(r.samples_used),
                 r.witness ? r.witness->description : r.note});
        } catch (const DimensionError& e) {
          t.add({axiom_name(ax), "n/a", "", "0", e.what()});
        }
      }
      t.print(*os, c.format);
    } else if (matrix->parsed()) {
      const auto cfg = c.sampler();
      std::vector<CatalogEntry> entries;
      if (filter.empty()) {
        entries = catalog_entries();
      } else {
        for (const auto& k : split(filter, ',')) {
          auto e = find_catalog_entry(k);
          if (!e) {
            err << "error: unknown catalog key '" << k << "'\n";
            return 1;
          }
          entries.push_back(*e);
        }
      }
      const auto m = axiom_matrix(entries, cfg, run_all);
      std::vector<std::string> header{"key"};
      for (Axiom ax : kAllAxioms) header.push_back(axiom_name(ax));
      Table t(header);
      for (const auto& row : m.rows) {
        std::vector<std::string> r{row.key};
        for (const auto& [ax, cell] : row.cells) r.push_back(cell_name(cell));
        t.add(r);
      }
      t.print(*os, c.format);
      for (const auto& mm : m.mismatches) {
        err << "mismatch: " << mm.key << " " << axiom_name(mm.axiom) << " expected " << verdict_name(mm.expected)
            << " got " << cell_name(mm.actual);
        if (mm.witness) err << " (" << mm.witness->description << ")";
        err << "\n";
      }
      if (!m.mismatches.empty()) return 3;
    } else if (charz->parsed()) {
      const auto doc = load_spec_document(c.spec_path);
      const auto cfg = c.sampler();
      const AmmSpec& spec = doc.spec;
      const Inventory I = doc.inventory ? *doc.inventory : Inventory(std::vector<double>(spec.dimension(), 1.0));
      const auto& A = spec.assets()[0];
      const auto& B = spec.assets()[1];
      Table t({"quantity", "value"});
      auto attempt = [&](const std::string& name, auto&& fn) {
        try {
          t.add({name, fn()});
        } catch (const std::exception& e) {
          t.add({name, std::string("unavailable: ") + e.what()});
        }
      };
      attempt("elasticity_slope", [&] { return num(estimate_elasticity(spec, I, A, B)); });
      attempt("lmsr_slope", [&] { return num(estimate_lmsr_b(spec, I, A, B)); });
      attempt("cemm_fit", [&] {
        const auto f = fit_cemm(spec, cfg);
        std::string w;
        for (std::size_t i = 0; i < f.weights.size(); ++i) w += (i ? ";" : "") + num(f.weights[i]);
        return "gamma=" + num(f.gamma) + " weights=" + w + " scale=" + num(f.scale) + " residual=" + num(f.residual);
      });
      attempt("separable_form", [&] {
        const auto form = separable_form_of(spec);
        std::string s;
        for (std::size_t i = 0; i < form.components.size(); ++i) {
          const auto& comp = form.components[i];
          s += i ? "; " : "";
          switch (comp.kind) {
            case ComponentKind::power:
              s += num(comp.c) + "*I^" + num(comp.gamma);
              break;
            case ComponentKind::log:
              s += num(comp.c) + "*log(I)";
              break;
            case ComponentKind::exponential:
              s += num(comp.c) + "*exp((" + num(comp.offset) + "-I)/" + num(comp.b) + ")";
              break;
          }
        }
        return s;
      });
      if (spec.dimension() == 2) {
        attempt("g_curve", [&] {
          const auto g = extract_g(spec, points, cfg);
          if (!curve_out.empty()) {
            std::ofstream csv(curve_out);
            if (!csv) throw std::runtime_error("cannot open '" + curve_out + "'");
            write_curve_csv(csv, g);
          }
          return "points=" + std::to_string(g.grid.size()) + " left_derivative_at_1=" +
                 num(g.left_derivative_at_one) + " g_at_smallest_z=" + num(g.g_at_smallest_z) +
                 " concavity_violations=" + std::to_string(g.concavity_violations.size());
        });
      }
      t.print(*os, c.format);
    } else if (dual->parsed()) {
      const auto doc = load_spec_document(c.spec_path);
      const auto cfg = c.sampler();
      const PriceVector p(parse_numbers(prices));
      if (!level && !doc.inventory) throw std::invalid_argument("--level is required without a reference inventory");
      const double k = level ? *level : evaluate(doc.spec, *doc.inventory);
      const PortfolioValueSolver solver(doc.spec, cfg);
      const auto v = solver.value(k, p);
      Table t({"quantity", "value"});
      t.add({"level", num(k)});
      t.add({"portfolio_value", num(v.value)});
      t.add({"argmin", inventory_text(doc.spec.assets(), v.argmin.values())});
      t.add({"optimality_gap", num(v.optimality_gap)});
      t.add({"method", v.method});
      if (doc.inventory) {
        const double kj = evaluate(doc.spec, *doc.inventory);
        t.add({"arbitrage_value", num(p.dot(doc.inventory->values()) - solver.value(kj, p).value)});
      }
      t.print(*os, c.format);
    } else if (catalog->parsed()) {
      if (key.empty()) {
        Table t({"key", "family", "assets", "description"});
        for (const auto& e : catalog_entries()) {
          t.add({e.key, family_name(e.spec.family()), std::to_string(e.spec.dimension()), e.description});
        }
        t.print(*os, c.format);
      } else {
        auto e = find_catalog_entry(key);
        if (!e) {
          err << "error: unknown catalog key '" << key << "'\n";
          return 1;
        }
        std::optional<Inventory> inv;
        if (dump_inventory) inv = Inventory(std::vector<double>(e->spec.dimension(), *dump_inventory));
        *os << dump_spec_document(e->spec, inv);
      }
    }
  } catch (const PreconditionFailed& e) {
    err << "precondition failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace cfmm
