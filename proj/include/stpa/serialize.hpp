#pragma once

#include <string>

#include "stpa/model.hpp"

namespace stpa {

/// Canonical text form: statements grouped by kind in fixed order, each
/// group sorted lexicographically by id, LF line endings. Serialization
/// is a fixpoint: serialize(parse(serialize(m))) == serialize(m).
std::string serialize(const StpaModel& model);

}  // namespace stpa
