#pragma once

#include <nlohmann/json.hpp>

#include "extconvex/form.hpp"
#include "extconvex/quadratic.hpp"
#include "extconvex/quasiaffine.hpp"

namespace extconvex {

/// Sparse form encoding: {"n": 6, "k": 2, "coeffs": {"1,2": 1.0}}.  Keys
/// are comma-joined ascending indices (the degree-0 key is "").  Exact
/// mode uses strings "p/q" for the values.
nlohmann::json form_to_json(const Form& x);
nlohmann::json form_to_json(const ExactForm& x);
Form form_from_json(const nlohmann::json& j);
ExactForm exact_form_from_json(const nlohmann::json& j);

/// Dense row-major matrix: {"n": 6, "k": 2, "M": [...]}.
nlohmann::json quadratic_to_json(const QuadraticFormOnForms& q);
QuadraticFormOnForms quadratic_from_json(const nlohmann::json& j);

/// {"n":, "k":, "c": [form, ...]}.
nlohmann::json rep_to_json(const PolyaffineRep& rep);
PolyaffineRep rep_from_json(const nlohmann::json& j);

}  // namespace extconvex
