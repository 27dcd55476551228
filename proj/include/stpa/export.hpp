#pragma once

#include <string>
#include <string_view>

#include "stpa/model.hpp"
#include "stpa/safety_case.hpp"

namespace stpa {

/// Control-structure diagram in Graphviz DOT. One node per entity
/// (label = display name), control-action edges in red with the CA id as
/// label, feedback edges in blue. With cluster_by_boundary, entities
/// outside the system boundary are drawn in a dashed cluster. Output is
/// deterministic: nodes and edges sorted by id.
std::string to_dot(const StpaModel& model, bool cluster_by_boundary);

/// Report tables (CommonMark tables extension): Losses, Hazards,
/// Constraints, Control Actions, Unsafe Control Actions, Loss Scenarios,
/// Mitigations. Rows sorted by id; headers emitted even when empty.
std::string to_markdown(const StpaModel& model);

/// Canonical JSON mirror of the model, information-equivalent to the
/// text form. Stable key ordering, byte-identical across runs.
std::string to_json(const StpaModel& model);

/// Inverse of to_json(). Enforces structure and duplicate ids only, like
/// the text parser; throws std::invalid_argument on malformed input.
StpaModel from_json(std::string_view json_text);

/// Safety-case tree in DOT: claims as boxes, arguments as ellipses,
/// evidence as notes; undeveloped nodes dashed.
std::string cae_to_dot(const CaeNode& root);

}  // namespace stpa
