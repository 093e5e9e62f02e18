#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sgrlab/model.hpp"

namespace sgrlab {

/// Parses a model document.
///
/// Matrix form:
///   { "n": 2, "environments": [ { "label": "wet", "matrix": [[...], ...] }, ... ],
///     "chain": { "type": "iid", "pi": [...] } | { "type": "markov", "P": [[...], ...] },
///     "z0": [...] }
/// Leslie-2 shorthand:
///   { "leslie2": [ { "f": 0.5, "F": 1.3, "s": 0.5 }, ... ], "chain": ... }
///
/// Throws ValidationError on malformed JSON or invalid content.
ModelSpec parse_model(std::string_view json_text);

ModelSpec load_model(const std::filesystem::path& path);

/// Matrix-form serialization (the Leslie shorthand is always expanded).
std::string model_to_json(const ModelSpec& model, int indent = 2);

}  // namespace sgrlab
