#include "cfmm/spec_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cfmm {

namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ParseError(where + ": unknown field '" + key + "'");
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ParseError(what + ": expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, key);
}

std::vector<double> per_asset(const json& v, const std::vector<AssetId>& assets, const std::string& what) {
  if (!v.is_object()) throw ParseError(what + ": expected an object keyed by asset");
  if (v.size() != assets.size()) throw ParseError(what + ": one entry per asset required");
  std::vector<double> out;
  for (const auto& a : assets) {
    auto it = v.find(a.label);
    if (it == v.end()) throw ParseError(what + ": missing asset '" + a.label + "'");
    out.push_back(number(*it, what + "." + a.label));
  }
  return out;
}

json per_asset_json(const std::vector<double>& v, const std::vector<AssetId>& assets) {
  json out = json::object();
  for (std::size_t i = 0; i < assets.size(); ++i) out[assets[i].label] = v[i];
  return out;
}

FamilyParams parse_params(Family family, const json& p, const std::vector<AssetId>& assets) {
  switch (family) {
    case Family::cemm: {
      only_keys(p, {"gamma", "weights", "scale", "form"}, "params");
      CemmParams c;
      c.gamma = number(require(p, "gamma", "params"), "gamma");
      c.weights = per_asset(require(p, "weights", "params"), assets, "weights");
      c.scale = number_or(p, "scale", 1.0);
      if (auto it = p.find("form"); it != p.end()) {
        const auto form = it->get<std::string>();
        if (form == "homogeneous") {
          c.form = CemmForm::homogeneous;
        } else if (form == "separable") {
          c.form = CemmForm::separable;
        } else {
          throw ParseError("params.form: expected 'homogeneous' or 'separable'");
        }
      }
      return c;
    }
    case Family::geometric_mean:
      only_keys(p, {"exponents", "scale"}, "params");
      return GeometricMeanParams{per_asset(require(p, "exponents", "params"), assets, "exponents"),
                                 number_or(p, "scale", 1.0)};
    case Family::constant_sum:
      only_keys(p, {"coefficients"}, "params");
      return ConstantSumParams{per_asset(require(p, "coefficients", "params"), assets, "coefficients")};
    case Family::uniswap_v3:
      only_keys(p, {"alpha", "beta"}, "params");
      return V3Params{number(require(p, "alpha", "params"), "alpha"), number(require(p, "beta", "params"), "beta")};
    case Family::curve:
      only_keys(p, {"amplification"}, "params");
      return CurveParams{number(require(p, "amplification", "params"), "amplification")};
    case Family::lmsr: {
      only_keys(p, {"b", "offsets"}, "params");
      LmsrParams l;
      l.b = number(require(p, "b", "params"), "b");
      if (auto it = p.find("offsets"); it != p.end()) {
        l.offsets = per_asset(*it, assets, "offsets");
      } else {
        l.offsets.assign(assets.size(), 0.0);
      }
      return l;
    }
    case Family::counterexample: {
      only_keys(p, {"kind", "gamma1", "gamma2"}, "params");
      const auto& k = require(p, "kind", "params");
      if (!k.is_string()) throw ParseError("params.kind: expected a string");
      auto kind = counterexample_from_name(k.get<std::string>());
      if (!kind) throw ParseError("params.kind: unknown counterexample '" + k.get<std::string>() + "'");
      return CounterexampleParams{*kind, number_or(p, "gamma1", -1.0), number_or(p, "gamma2", -2.0)};
    }
  }
  throw ParseError("unknown family");
}

}  // namespace

SpecDocument parse_spec_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("spec: ") + e.what());
  }
  only_keys(doc, {"family", "assets", "params", "inventory"}, "spec");
  const auto& fam = require(doc, "family", "spec");
  if (!fam.is_string()) throw ParseError("spec.family: expected a string");
  auto family = family_from_name(fam.get<std::string>());
  if (!family) throw ParseError("spec.family: unknown family '" + fam.get<std::string>() + "'");

  const auto& jassets = require(doc, "assets", "spec");
  if (!jassets.is_array()) throw ParseError("spec.assets: expected an array of labels");
  std::vector<AssetId> assets;
  for (const auto& a : jassets) {
    if (!a.is_string()) throw ParseError("spec.assets: labels must be strings");
    assets.push_back({a.get<std::string>()});
  }
  try {
    auto params = parse_params(*family, require(doc, "params", "spec"), assets);
    SpecDocument out{AmmSpec(assets, std::move(params)), std::nullopt};
    if (auto it = doc.find("inventory"); it != doc.end()) {
      out.inventory = Inventory(per_asset(*it, assets, "inventory"));
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("spec: ") + e.what());
  }
}

SpecDocument load_spec_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_document(ss.str());
}

std::string dump_spec_document(const AmmSpec& spec, const std::optional<Inventory>& inventory) {
  const auto& assets = spec.assets();
  json doc;
  doc["family"] = family_name(spec.family());
  doc["assets"] = json::array();
  for (const auto& a : assets) doc["assets"].push_back(a.label);
  json p = json::object();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CemmParams>) {
          p["gamma"] = v.gamma;
          p["weights"] = per_asset_json(v.weights, assets);
          p["scale"] = v.scale;
          p["form"] = v.form == CemmForm::homogeneous ? "homogeneous" : "separable";
        } else if constexpr (std::is_same_v<T, GeometricMeanParams>) {
          p["exponents"] = per_asset_json(v.exponents, assets);
          p["scale"] = v.scale;
        } else if constexpr (std::is_same_v<T, ConstantSumParams>) {
          p["coefficients"] = per_asset_json(v.coefficients, assets);
        } else if constexpr (std::is_same_v<T, V3Params>) {
          p["alpha"] = v.alpha;
          p["beta"] = v.beta;
        } else if constexpr (std::is_same_v<T, CurveParams>) {
          p["amplification"] = v.amplification;
        } else if constexpr (std::is_same_v<T, LmsrParams>) {
          p["b"] = v.b;
          p["offsets"] = per_asset_json(v.offsets, assets);
        } else {
          p["kind"] = counterexample_name(v.kind);
          if (v.kind == CounterexampleKind::cemm_pair_sum) {
            p["gamma1"] = v.gamma1;
            p["gamma2"] = v.gamma2;
          }
        }
      },
      spec.params());
  doc["params"] = p;
  if (inventory) doc["inventory"] = per_asset_json(inventory->vector(), assets);
  return doc.dump(2) + "\n";
}

}  // namespace cfmm
