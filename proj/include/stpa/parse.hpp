#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stpa/diagnostics.hpp"
#include "stpa/model.hpp"

namespace stpa {

struct ParseResult {
  /// Engaged iff no error diagnostics were produced.
  std::optional<StpaModel> model;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

/// Parses the `.stpa` modelling language. Grammar errors recover at line
/// granularity, so one bad statement yields one diagnostic. Parsing
/// enforces grammar and duplicate-id-per-kind only; cross-reference
/// integrity is validate()'s job.
ParseResult parse(std::string_view text, std::string file_name);

}  // namespace stpa
