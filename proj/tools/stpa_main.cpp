// stpa: command-line front end for the STPA analysis library.
//
// Exit codes: 0 success (warnings allowed), 1 validation errors,
// 2 parse/usage/IO errors, 3 analysis gate failed (unassessed cells).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "stpa/analysis.hpp"
#include "stpa/errors.hpp"
#include "stpa/export.hpp"
#include "stpa/graph.hpp"
#include "stpa/parse.hpp"
#include "stpa/safety_case.hpp"
#include "stpa/serialize.hpp"

namespace {

using nlohmann::ordered_json;
using namespace stpa;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGate = 3;

bool use_color() {
  if (std::getenv("STPA_NO_COLOR") != nullptr) return false;
  return isatty(fileno(stderr)) != 0;
}

void print_diagnostics(const std::vector<Diagnostic>& diagnostics, bool errors_only) {
  const bool color = use_color();
  for (const Diagnostic& diagnostic : diagnostics) {
    if (errors_only && diagnostic.severity != Severity::Error) continue;
    std::cerr << format_diagnostic(diagnostic, color) << '\n';
  }
}

// Reads, parses and validates the model file. Returns the exit code to
// use, or kExitOk with `out` filled. Warnings are printed only when
// `print_warnings` is set (the validate subcommand).
int load_model(const std::string& path, StpaModel& out, bool print_warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    return kExitUsage;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();

  ParseResult parsed = parse(buffer.str(), path);
  if (!parsed.ok()) {
    print_diagnostics(parsed.diagnostics, false);
    return kExitUsage;
  }

  std::vector<Diagnostic> findings = validate(*parsed.model);
  print_diagnostics(findings, !print_warnings);
  if (has_errors(findings)) return kExitValidation;

  out = std::move(*parsed.model);
  return kExitOk;
}

int write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return kExitOk;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return kExitUsage;
  }
  file << content;
  return kExitOk;
}

std::string join(const std::vector<Identifier>& ids, const char* separator) {
  std::string out;
  for (const Identifier& id : ids) {
    if (!out.empty()) out += separator;
    out += id.str();
  }
  return out;
}

std::string cell_status_text(const CandidateCell& cell) {
  switch (cell.status) {
    case CellStatus::CoveredByUca: return "covered:" + join(cell.covering_ucas, ",");
    case CellStatus::AssessedNoHazard: return "assessed";
    case CellStatus::Unassessed: return "unassessed";
  }
  return "unassessed";
}

ordered_json cell_to_json(const CandidateCell& cell) {
  ordered_json out;
  out["ca"] = cell.ca.str();
  out["phrase"] = std::string(to_keyword(cell.phrase));
  switch (cell.status) {
    case CellStatus::CoveredByUca: out["status"] = "covered"; break;
    case CellStatus::AssessedNoHazard: out["status"] = "assessed"; break;
    case CellStatus::Unassessed: out["status"] = "unassessed"; break;
  }
  out["ucas"] = ordered_json::array();
  for (const UcaId& uca : cell.covering_ucas) out["ucas"].push_back(uca.str());
  return out;
}

std::vector<Identifier> split_id_list(const std::string& text) {
  std::vector<Identifier> out;
  std::string current;
  std::istringstream in(text);
  while (std::getline(in, current, ',')) {
    if (current.empty()) continue;
    if (!Identifier::valid(current)) {
      throw NotFoundError("invalid identifier '" + current + "'");
    }
    out.push_back(Identifier(current));
  }
  return out;
}

struct CommonOptions {
  std::string file;
  std::string output;
  std::string format = "text";
};

void add_common(CLI::App* cmd, CommonOptions& options, bool with_format = true) {
  cmd->add_option("file", options.file, "model file (.stpa)")->required();
  cmd->add_option("-o,--output", options.output, "write to file instead of standard output");
  if (with_format) {
    cmd->add_option("--format", options.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
  }
}

int cmd_validate(const std::string& file) {
  StpaModel model;
  return load_model(file, model, /*print_warnings=*/true);
}

int cmd_enumerate(const CommonOptions& options, const std::string& ca, bool unassessed_only) {
  StpaModel model;
  if (int rc = load_model(options.file, model, false); rc != kExitOk) return rc;

  std::optional<CaId> filter;
  if (!ca.empty()) filter = Identifier(ca);
  std::vector<CandidateCell> cells = enumerate_candidates(model, filter);

  if (unassessed_only) {
    std::erase_if(cells, [](const CandidateCell& c) { return c.status != CellStatus::Unassessed; });
  }

  std::string content;
  if (options.format == "json") {
    ordered_json out = ordered_json::array();
    for (const CandidateCell& cell : cells) out.push_back(cell_to_json(cell));
    content = out.dump(2) + "\n";
  } else {
    std::ostringstream out;
    out << "ca\tphrase\tstatus\n";
    for (const CandidateCell& cell : cells) {
      out << cell.ca.str() << '\t' << to_keyword(cell.phrase) << '\t' << cell_status_text(cell)
          << '\n';
    }
    content = out.str();
  }
  if (int rc = write_output(options.output, content); rc != kExitOk) return rc;
  if (unassessed_only && !cells.empty()) return kExitGate;
  return kExitOk;
}

int cmd_coverage(const CommonOptions& options) {
  StpaModel model;
  if (int rc = load_model(options.file, model, false); rc != kExitOk) return rc;
  CoverageReport report = coverage(model);

  std::string content;
  if (options.format == "json") {
    ordered_json out;
    out["cells_total"] = report.cells_total();
    out["cells"] = ordered_json::array();
    for (const CandidateCell& cell : report.cells) out["cells"].push_back(cell_to_json(cell));
    out["cells_unassessed"] = report.cells_unassessed();
    out["unassessed_cells"] = ordered_json::array();
    for (const CandidateCell& cell : report.unassessed_cells) {
      out["unassessed_cells"].push_back(cell_to_json(cell));
    }
    auto id_list = [](const std::vector<Identifier>& ids) {
      ordered_json array = ordered_json::array();
      for (const Identifier& id : ids) array.push_back(id.str());
      return array;
    };
    out["cas_without_any_uca"] = id_list(report.cas_without_any_uca);
    out["hazards_without_constraint"] = id_list(report.hazards_without_constraint);
    out["ucas_without_scenario"] = id_list(report.ucas_without_scenario);
    out["scenarios_without_mitigation"] = id_list(report.scenarios_without_mitigation);
    out["cas_without_return_feedback"] = id_list(report.cas_without_return_feedback);
    content = out.dump(2) + "\n";
  } else {
    std::ostringstream out;
    out << "cells_total: " << report.cells_total() << '\n';
    out << "cells_unassessed: " << report.cells_unassessed() << '\n';
    auto line = [&](const char* label, const std::vector<Identifier>& ids) {
      out << label << " (" << ids.size() << "):";
      if (!ids.empty()) out << ' ' << join(ids, " ");
      out << '\n';
    };
    line("cas_without_any_uca", report.cas_without_any_uca);
    line("hazards_without_constraint", report.hazards_without_constraint);
    line("ucas_without_scenario", report.ucas_without_scenario);
    line("scenarios_without_mitigation", report.scenarios_without_mitigation);
    line("cas_without_return_feedback", report.cas_without_return_feedback);
    content = out.str();
  }
  return write_output(options.output, content);
}

int cmd_focus(const CommonOptions& options, const std::string& loss) {
  StpaModel model;
  if (int rc = load_model(options.file, model, false); rc != kExitOk) return rc;
  FocusReport report = focus(model, Identifier(loss));

  std::string content;
  if (options.format == "json") {
    ordered_json out;
    out["loss"] = report.loss.str();
    auto id_list = [](const std::vector<Identifier>& ids) {
      ordered_json array = ordered_json::array();
      for (const Identifier& id : ids) array.push_back(id.str());
      return array;
    };
    out["hazards"] = id_list(report.hazards);
    out["ucas"] = id_list(report.ucas);
    out["scenarios"] = id_list(report.scenarios);
    out["mitigations"] = id_list(report.mitigations);
    out["unassessed_cells"] = ordered_json::array();
    for (const CandidateCell& cell : report.unassessed_cells_relevant) {
      ordered_json entry;
      entry["ca"] = cell.ca.str();
      entry["phrase"] = std::string(to_keyword(cell.phrase));
      out["unassessed_cells"].push_back(std::move(entry));
    }
    content = out.dump(2) + "\n";
  } else {
    std::ostringstream out;
    out << "loss: " << report.loss.str() << '\n';
    auto line = [&](const char* label, const std::vector<Identifier>& ids) {
      out << label << " (" << ids.size() << "):";
      if (!ids.empty()) out << ' ' << join(ids, " ");
      out << '\n';
    };
    line("hazards", report.hazards);
    line("ucas", report.ucas);
    line("scenarios", report.scenarios);
    line("mitigations", report.mitigations);
    out << "unassessed cells (" << report.unassessed_cells_relevant.size() << "):\n";
    for (const CandidateCell& cell : report.unassessed_cells_relevant) {
      out << "  " << cell.ca.str() << ' ' << to_keyword(cell.phrase) << '\n';
    }
    content = out.str();
  }
  return write_output(options.output, content);
}

int cmd_trace(const CommonOptions& options, const std::string& from, const std::string& to) {
  StpaModel model;
  if (int rc = load_model(options.file, model, false); rc != kExitOk) return rc;

  std::optional<ElementKind> to_kind = element_kind_from_plural(to);
  if (!to_kind) {
    std::cerr << "error: unknown element kind '" << to << "'\n";
    return kExitUsage;
  }
  TraceGraph graph = build_trace_graph(model);
  std::vector<std::vector<NodeRef>> paths = trace(graph, Identifier(from), *to_kind);

  std::string content;
  if (options.format == "json") {
    ordered_json out = ordered_json::array();
    for (const std::vector<NodeRef>& path : paths) {
      ordered_json entry = ordered_json::array();
      for (const NodeRef& node : path) entry.push_back(node.id.str());
      out.push_back(std::move(entry));
    }
    content = out.dump(2) + "\n";
  } else {
    std::ostringstream out;
    for (const std::vector<NodeRef>& path : paths) {
      for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0) out << " -> ";
        out << path[i].id.str();
      }
      out << '\n';
    }
    content = out.str();
  }
  return write_output(options.output, content);
}

int cmd_impact(const CommonOptions& options, const std::string& changed_list) {
  StpaModel model;
  if (int rc = load_model(options.file, model, false); rc != kExitOk) return rc;

  std::vector<Identifier> changed = split_id_list(changed_list);
  std::vector<Identifier> impacted = impact(model, changed);
  std::vector<Identifier> context = impact_context(model, changed);

  std::string content;
  if (options.format == "json") {
    ordered_json out;
    out["impacted"] = ordered_json::array();
    for (const Identifier& id : impacted) out["impacted"].push_back(id.str());
    out["context"] = ordered_json::array();
    for (const Identifier& id : context) out["context"].push_back(id.str());
    content = out.dump(2) + "\n";
  } else {
    std::ostringstream out;
    out << "impacted (" << impacted.size() << "):";
    if (!impacted.empty()) out << ' ' << join(impacted, " ");
    out << '\n';
    out << "context (" << context.size() << "):";
    if (!context.empty()) out << ' ' << join(context, " ");
    out << '\n';
    content = out.str();
  }
  return write_output(options.output, content);
}

int cmd_scaffold(const CommonOptions& options) {
  StpaModel model;
  if (int rc = load_model(options.file, model, false); rc != kExitOk) return rc;
  std::vector<ConstraintSuggestion> suggestions = scaffold_constraints(model);

  std::string content;
  if (options.format == "json") {
    ordered_json out = ordered_json::array();
    for (const ConstraintSuggestion& suggestion : suggestions) {
      ordered_json entry;
      entry["hazard"] = suggestion.hazard.str();
      entry["suggestion"] = suggestion.description;
      out.push_back(std::move(entry));
    }
    content = out.dump(2) + "\n";
  } else {
    std::ostringstream out;
    for (const ConstraintSuggestion& suggestion : suggestions) {
      out << suggestion.hazard.str() << '\t' << suggestion.description << '\n';
    }
    content = out.str();
  }
  return write_output(options.output, content);
}

int cmd_diagram(const CommonOptions& options, bool cluster, const std::string& entities) {
  StpaModel model;
  if (int rc = load_model(options.file, model, false); rc != kExitOk) return rc;

  if (!entities.empty()) {
    std::vector<Identifier> keep = split_id_list(entities);
    for (const Identifier& id : keep) {
      if (!model.entities.count(id)) {
        throw NotFoundError("unknown entity '" + id.str() + "'");
      }
    }
    std::set<Identifier> keep_set(keep.begin(), keep.end());
    std::erase_if(model.entities, [&](const auto& e) { return !keep_set.count(e.first); });
    std::erase_if(model.control_actions, [&](const auto& e) {
      return !keep_set.count(e.second.source) || !keep_set.count(e.second.target);
    });
    std::erase_if(model.feedback_links, [&](const auto& e) {
      return !keep_set.count(e.second.source) || !keep_set.count(e.second.target);
    });
  }
  return write_output(options.output, to_dot(model, cluster));
}

int cmd_report(const CommonOptions& options) {
  StpaModel model;
  if (int rc = load_model(options.file, model, false); rc != kExitOk) return rc;
  return write_output(options.output, to_markdown(model));
}

int cmd_case(const CommonOptions& options, const std::string& context, bool context_given,
             bool emit_dot) {
  StpaModel model;
  if (int rc = load_model(options.file, model, false); rc != kExitOk) return rc;
  CaeNode root = generate_case(model, context_given ? context : model.context);
  if (emit_dot) return write_output(options.output, cae_to_dot(root));
  return write_output(options.output, case_document_to_json(model, root));
}

int cmd_format(const CommonOptions& options) {
  StpaModel model;
  if (int rc = load_model(options.file, model, false); rc != kExitOk) return rc;
  if (options.format == "json") return write_output(options.output, to_json(model));
  return write_output(options.output, serialize(model));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STPA hazard-analysis toolkit"};
  app.require_subcommand(1);

  CommonOptions validate_options;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check a model against the well-formedness rules");
  validate_cmd->add_option("file", validate_options.file, "model file (.stpa)")->required();

  CommonOptions enumerate_options;
  std::string enumerate_ca;
  bool unassessed_only = false;
  CLI::App* enumerate_cmd =
      app.add_subcommand("enumerate", "enumerate UCA candidate cells per control action");
  add_common(enumerate_cmd, enumerate_options);
  enumerate_cmd->add_option("--ca", enumerate_ca, "restrict to one control action");
  enumerate_cmd->add_flag("--unassessed-only", unassessed_only,
                          "print only unassessed cells; exit 3 if any exist");

  CommonOptions coverage_options;
  CLI::App* coverage_cmd = app.add_subcommand("coverage", "report completeness metrics");
  add_common(coverage_cmd, coverage_options);

  CommonOptions focus_options;
  std::string focus_loss;
  CLI::App* focus_cmd =
      app.add_subcommand("focus", "restrict the analysis to one prioritised loss");
  add_common(focus_cmd, focus_options);
  focus_cmd->add_option("--loss", focus_loss, "loss identifier")->required();

  CommonOptions trace_options;
  std::string trace_from;
  std::string trace_to = "losses";
  CLI::App* trace_cmd = app.add_subcommand("trace", "list traceability paths from an element");
  add_common(trace_cmd, trace_options);
  trace_cmd->add_option("--from", trace_from, "starting element identifier")->required();
  trace_cmd->add_option("--to", trace_to,
                        "target element kind (losses|hazards|constraints|entities|"
                        "control_actions|feedback|ucas|scenarios|mitigations)");

  CommonOptions impact_options;
  std::string impact_changed;
  CLI::App* impact_cmd =
      app.add_subcommand("impact", "list elements downstream of changed elements");
  add_common(impact_cmd, impact_options);
  impact_cmd->add_option("--changed", impact_changed, "comma-separated identifiers")->required();

  CommonOptions scaffold_options;
  CLI::App* scaffold_cmd =
      app.add_subcommand("scaffold", "suggest constraints for unconstrained hazards");
  add_common(scaffold_cmd, scaffold_options);

  CommonOptions diagram_options;
  bool diagram_cluster = false;
  std::string diagram_entities;
  CLI::App* diagram_cmd =
      app.add_subcommand("diagram", "render the control structure as Graphviz DOT");
  add_common(diagram_cmd, diagram_options, /*with_format=*/false);
  diagram_cmd->add_flag("--cluster", diagram_cluster,
                        "draw outside-boundary entities in a dashed cluster");
  diagram_cmd->add_option("--entities", diagram_entities,
                          "comma-separated entity subset to draw");

  CommonOptions report_options;
  CLI::App* report_cmd = app.add_subcommand("report", "render the model as Markdown tables");
  add_common(report_cmd, report_options, /*with_format=*/false);

  CommonOptions case_options;
  std::string case_context;
  bool case_dot = false;
  CLI::App* case_cmd =
      app.add_subcommand("case", "generate a CAE safety-case skeleton (JSON, or DOT with --dot)");
  add_common(case_cmd, case_options, /*with_format=*/false);
  CLI::Option* context_option =
      case_cmd->add_option("--context", case_context, "deployment context for the top claim");
  case_cmd->add_flag("--dot", case_dot, "emit the case tree as Graphviz DOT");

  CommonOptions format_options;
  CLI::App* format_cmd =
      app.add_subcommand("format", "rewrite a model in canonical form (text or JSON)");
  add_common(format_cmd, format_options);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(validate_cmd)) return cmd_validate(validate_options.file);
    if (app.got_subcommand(enumerate_cmd)) {
      return cmd_enumerate(enumerate_options, enumerate_ca, unassessed_only);
    }
    if (app.got_subcommand(coverage_cmd)) return cmd_coverage(coverage_options);
    if (app.got_subcommand(focus_cmd)) return cmd_focus(focus_options, focus_loss);
    if (app.got_subcommand(trace_cmd)) return cmd_trace(trace_options, trace_from, trace_to);
    if (app.got_subcommand(impact_cmd)) return cmd_impact(impact_options, impact_changed);
    if (app.got_subcommand(scaffold_cmd)) return cmd_scaffold(scaffold_options);
    if (app.got_subcommand(diagram_cmd)) {
      return cmd_diagram(diagram_options, diagram_cluster, diagram_entities);
    }
    if (app.got_subcommand(report_cmd)) return cmd_report(report_options);
    if (app.got_subcommand(case_cmd)) {
      return cmd_case(case_options, case_context, context_option->count() > 0, case_dot);
    }
    if (app.got_subcommand(format_cmd)) return cmd_format(format_options);
  } catch (const NotFoundError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
