#pragma once

#include "jetfield/charts.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace jetfield {

/// Reads a model document:
///   {"base": [...], "fibers": [...], "parameters": {name: null | number | "p/q"},
///    "lagrangian": "...", "sources": ["...", ...], "hamiltonian": "...", "source_sign": 1}
/// Only base, fibers and lagrangian are required; unknown keys are rejected.
/// Expressions are checked against their charts and stored normalized.
/// Throws InvalidModel, NameCollision, SyntaxError, UnknownSymbol or ArityError.
FieldModel parse_model(std::string_view json_text, const std::string& name = "model");

/// A file path, or "builtin:<name>" for one of the built-in models.
FieldModel load_model(const std::string& source);

/// Canonical serialization; parse_model(print_model(m), m.name) == m.
std::string print_model(const FieldModel& model);

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string model_digest(const FieldModel& model);

const std::vector<std::string>& builtin_names();
/// Throws InvalidModel for unknown names.
FieldModel builtin_model(std::string_view name);

}  // namespace jetfield
