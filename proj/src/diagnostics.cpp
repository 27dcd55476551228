#include "stpa/diagnostics.hpp"

#include <algorithm>
#include <sstream>

namespace stpa {

std::string format_diagnostic(const Diagnostic& diagnostic, bool color) {
  const bool is_error = diagnostic.severity == Severity::Error;
  const char* severity = is_error ? "error" : "warning";
  std::ostringstream out;
  out << diagnostic.span.file << ':' << diagnostic.span.line << ':' << diagnostic.span.column
      << ": ";
  if (color) {
    out << (is_error ? "\x1b[31m" : "\x1b[33m") << severity << '[' << diagnostic.code << ']'
        << "\x1b[0m";
  } else {
    out << severity << '[' << diagnostic.code << ']';
  }
  out << ": " << diagnostic.message;
  return out.str();
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

}  // namespace stpa
