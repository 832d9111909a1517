#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "framelet/filters.hpp"
#include "framelet/quadrature.hpp"
#include "framelet/transform.hpp"

namespace framelet::io {

using Json = nlohmann::json;

/// A document that parses but does not match the expected schema, or does not parse.
/// The message names the offending JSON path or line/column.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[nodiscard]] Json to_json(const QuadratureRule& rule);
[[nodiscard]] QuadratureRule rule_from_json(const Json& j);

[[nodiscard]] Json to_json(const SpectralVector& v);
[[nodiscard]] SpectralVector spectral_from_json(const Json& j, const std::string& path = "");

[[nodiscard]] Json to_json(const SpectralSymbol& s);
[[nodiscard]] SpectralSymbol symbol_from_json(const Json& j, const std::string& path = "");

/// The shipped bank serializes by name only; other banks enumerate their pieces.
[[nodiscard]] Json to_json(const FilterBank& bank);
[[nodiscard]] FilterBank bank_from_json(const Json& j);

[[nodiscard]] Json to_json(const CoefficientSequence& seq);
[[nodiscard]] CoefficientSequence sequence_from_json(const Json& j, const std::string& path = "");

/// {J, r, levels: [{j, channel, n, level, rule_ref, v, spectral}, ...]}
[[nodiscard]] Json to_json(const CoefficientTree& tree, int r);
[[nodiscard]] CoefficientTree tree_from_json(const Json& j);

/// Parses text, turning parser errors into SchemaError with line/column.
[[nodiscard]] Json parse(const std::string& text);
[[nodiscard]] Json read_json(const std::filesystem::path& path);

/// Writes via a temporary sibling file and rename, so readers never see partial output.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace framelet::io
