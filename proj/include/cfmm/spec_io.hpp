#pragma once

#include <optional>
#include <string>

#include "cfmm/catalog.hpp"

namespace cfmm {

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A spec document: {"family", "assets", "params", "inventory"?}. Per-asset
/// parameters (weights, exponents, coefficients, offsets) are objects keyed by
/// asset label. Unknown fields are rejected.
struct SpecDocument {
  AmmSpec spec;
  std::optional<Inventory> inventory;
};

SpecDocument parse_spec_document(const std::string& text);
SpecDocument load_spec_document(const std::string& path);
std::string dump_spec_document(const AmmSpec& spec, const std::optional<Inventory>& inventory = std::nullopt);

}  // namespace cfmm
