#pragma once

#include <string>
#include <vector>

#include "stpa/model.hpp"

namespace stpa {

enum class Severity { Error, Warning };

/// A source-located finding. Codes (`E0xx`, `W0xx`) are a stable contract;
/// see docs/diagnostics.md for the full list.
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceSpan span;
};

/// `file:line:col: severity[code]: message`, optionally ANSI-coloured.
std::string format_diagnostic(const Diagnostic& diagnostic, bool color = false);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

}  // namespace stpa
