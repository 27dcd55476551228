#include "stpa/analysis.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "stpa/errors.hpp"
#include "stpa/graph.hpp"

namespace stpa {

namespace {

using Cell = std::pair<CaId, GuidePhrase>;

std::map<Cell, std::vector<UcaId>> ucas_by_cell(const StpaModel& model) {
  std::map<Cell, std::vector<UcaId>> out;
  for (const auto& [id, uca] : model.ucas) {
    out[{uca.on, uca.phrase}].push_back(id);  // map order keeps lists sorted
  }
  return out;
}

std::set<Cell> assessed_cells(const StpaModel& model) {
  std::set<Cell> out;
  for (const AssessmentRecord& record : model.assessments) {
    out.insert({record.on, record.phrase});
  }
  return out;
}

std::vector<CandidateCell> cells_for_ca(const CaId& ca,
                                        const std::map<Cell, std::vector<UcaId>>& by_cell,
                                        const std::set<Cell>& assessed) {
  std::vector<CandidateCell> out;
  for (GuidePhrase phrase : kGuidePhrases) {
    CandidateCell cell{ca, phrase, CellStatus::Unassessed, {}};
    auto it = by_cell.find({ca, phrase});
    if (it != by_cell.end()) {
      cell.status = CellStatus::CoveredByUca;
      cell.covering_ucas = it->second;
    } else if (assessed.count({ca, phrase})) {
      cell.status = CellStatus::AssessedNoHazard;
    }
    out.push_back(std::move(cell));
  }
  return out;
}

}  // namespace

std::vector<Diagnostic> validate(const StpaModel& model) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string code, std::string message, const SourceSpan& span) {
    out.push_back(Diagnostic{Severity::Error, std::move(code), std::move(message), span});
  };
  auto warning = [&](std::string code, std::string message, const SourceSpan& span) {
    out.push_back(Diagnostic{Severity::Warning, std::move(code), std::move(message), span});
  };

  for (const auto& [id, loss] : model.losses) {
    if (loss.description.empty()) {
      error("E020", "loss '" + id.str() + "' has an empty description", loss.span);
    }
  }

  for (const auto& [id, hazard] : model.hazards) {
    if (hazard.leads_to.empty()) {
      error("E021", "hazard '" + id.str() + "' leads to no loss", hazard.span);
    }
    for (const LossId& loss : hazard.leads_to) {
      if (!model.losses.count(loss)) {
        error("E011", "hazard '" + id.str() + "' references unresolved loss '" + loss.str() + "'",
              hazard.span);
      }
    }
  }

  std::map<HazardId, ConstraintId> constraint_by_hazard;
  for (const auto& [id, constraint] : model.constraints) {
    if (!model.hazards.count(constraint.inverts)) {
      error("E012",
            "constraint '" + id.str() + "' references unresolved hazard '" +
                constraint.inverts.str() + "'",
            constraint.span);
      continue;
    }
    auto [it, inserted] = constraint_by_hazard.emplace(constraint.inverts, id);
    if (!inserted) {
      error("E017",
            "hazard '" + constraint.inverts.str() + "' already has constraint '" +
                it->second.str() + "'; '" + id.str() + "' is a duplicate",
            constraint.span);
    }
  }

  auto check_endpoints = [&](const Identifier& id, const Identifier& source,
                             const Identifier& target, const SourceSpan& span,
                             std::string_view what) {
    bool ok = true;
    for (const Identifier& endpoint : {source, target}) {
      if (!model.entities.count(endpoint)) {
        error("E013",
              std::string(what) + " '" + id.str() + "' references unresolved entity '" +
                  endpoint.str() + "'",
              span);
        ok = false;
      }
    }
    if (ok && source == target) {
      error("E019", std::string(what) + " '" + id.str() + "' has identical source and target",
            span);
    }
    return ok;
  };

  for (const auto& [id, ca] : model.control_actions) {
    if (!check_endpoints(id, ca.source, ca.target, ca.span, "control action")) continue;
    const Entity& source = model.entities.at(ca.source);
    if (source.kind == EntityKind::Process) {
      error("E016",
            "entity '" + ca.source.str() + "' is the source of control action '" + id.str() +
                "' but has kind process",
            ca.span);
    }
    const Entity& target = model.entities.at(ca.target);
    if (target.kind == EntityKind::Controller) {
      error("E016",
            "entity '" + ca.target.str() + "' is the target of control action '" + id.str() +
                "' but has kind controller",
            ca.span);
    }
  }

  for (const auto& [id, fb] : model.feedback_links) {
    check_endpoints(id, fb.source, fb.target, fb.span, "feedback link");
  }

  for (const AssessmentRecord& record : model.assessments) {
    if (!model.control_actions.count(record.on)) {
      error("E010",
            "assessment references unresolved control action '" + record.on.str() + "'",
            record.span);
    }
  }

  for (const auto& [id, uca] : model.ucas) {
    if (!model.control_actions.count(uca.on)) {
      error("E010",
            "uca '" + id.str() + "' references unresolved control action '" + uca.on.str() + "'",
            uca.span);
    }
    if (uca.hazards.empty()) {
      error("E022", "uca '" + id.str() + "' cites no hazard", uca.span);
    }
    for (const HazardId& hazard : uca.hazards) {
      if (!model.hazards.count(hazard)) {
        error("E012",
              "uca '" + id.str() + "' references unresolved hazard '" + hazard.str() + "'",
              uca.span);
      }
    }
  }

  for (const auto& [id, scenario] : model.scenarios) {
    if (!model.ucas.count(scenario.on)) {
      error("E014",
            "scenario '" + id.str() + "' references unresolved uca '" + scenario.on.str() + "'",
            scenario.span);
    }
  }

  for (const auto& [id, mitigation] : model.mitigations) {
    if (mitigation.addresses.empty()) {
      error("E023", "mitigation '" + id.str() + "' addresses no scenario", mitigation.span);
    }
    for (const ScenarioId& scenario : mitigation.addresses) {
      if (!model.scenarios.count(scenario)) {
        error("E015",
              "mitigation '" + id.str() + "' references unresolved scenario '" + scenario.str() +
                  "'",
              mitigation.span);
      }
    }
  }

  // A cell may carry UCAs or a no-hazard assessment, never both.
  const auto by_cell = ucas_by_cell(model);
  for (const AssessmentRecord& record : model.assessments) {
    auto it = by_cell.find({record.on, record.phrase});
    if (it != by_cell.end()) {
      std::string ucas;
      for (const UcaId& uca : it->second) {
        if (!ucas.empty()) ucas += ", ";
        ucas += uca.str();
      }
      error("E018",
            "cell (" + record.on.str() + ", " + std::string(to_keyword(record.phrase)) +
                ") has both a no-hazard assessment and uca(s) " + ucas,
            record.span);
    }
  }

  std::set<HazardId> constrained;
  for (const auto& [id, constraint] : model.constraints) constrained.insert(constraint.inverts);
  for (const auto& [id, hazard] : model.hazards) {
    if (!constrained.count(id)) {
      warning("W001", "hazard '" + id.str() + "' has no system constraint", hazard.span);
    }
  }

  std::set<UcaId> with_scenario;
  for (const auto& [id, scenario] : model.scenarios) with_scenario.insert(scenario.on);
  for (const auto& [id, uca] : model.ucas) {
    if (!with_scenario.count(id)) {
      warning("W002", "uca '" + id.str() + "' has no loss scenario", uca.span);
    }
  }

  std::set<ScenarioId> with_mitigation;
  for (const auto& [id, mitigation] : model.mitigations) {
    with_mitigation.insert(mitigation.addresses.begin(), mitigation.addresses.end());
  }
  for (const auto& [id, scenario] : model.scenarios) {
    if (!with_mitigation.count(id)) {
      warning("W003", "scenario '" + id.str() + "' has no mitigation", scenario.span);
    }
  }

  std::set<EntityId> ca_sources;
  for (const auto& [id, ca] : model.control_actions) ca_sources.insert(ca.source);
  for (const auto& [id, entity] : model.entities) {
    if (entity.boundary == Boundary::Outside && ca_sources.count(id)) {
      warning("W004",
              "entity '" + id.str() + "' is outside the system boundary but issues control actions",
              entity.span);
    }
  }

  // Open-loop control: no feedback from the target back to the source.
  std::set<std::pair<EntityId, EntityId>> feedback_pairs;
  for (const auto& [id, fb] : model.feedback_links) {
    feedback_pairs.insert({fb.source, fb.target});
  }
  for (const auto& [id, ca] : model.control_actions) {
    if (!feedback_pairs.count({ca.target, ca.source})) {
      warning("W005",
              "control action '" + id.str() + "' has no return feedback from '" +
                  ca.target.str() + "' to '" + ca.source.str() + "'",
              ca.span);
    }
  }

  return out;
}

std::vector<CandidateCell> enumerate_candidates(const StpaModel& model,
                                                const std::optional<CaId>& ca_filter) {
  if (ca_filter && !model.control_actions.count(*ca_filter)) {
    throw NotFoundError("unknown control action '" + ca_filter->str() + "'");
  }
  const auto by_cell = ucas_by_cell(model);
  const auto assessed = assessed_cells(model);

  std::vector<CandidateCell> out;
  for (const auto& [id, ca] : model.control_actions) {
    if (ca_filter && id != *ca_filter) continue;
    std::vector<CandidateCell> cells = cells_for_ca(id, by_cell, assessed);
    out.insert(out.end(), cells.begin(), cells.end());
  }
  return out;
}

CoverageReport coverage(const StpaModel& model) {
  CoverageReport report;
  report.cells = enumerate_candidates(model);
  for (const CandidateCell& cell : report.cells) {
    if (cell.status == CellStatus::Unassessed) report.unassessed_cells.push_back(cell);
  }

  std::set<CaId> cas_with_uca;
  for (const auto& [id, uca] : model.ucas) cas_with_uca.insert(uca.on);
  for (const auto& [id, ca] : model.control_actions) {
    if (!cas_with_uca.count(id)) report.cas_without_any_uca.push_back(id);
  }

  std::set<HazardId> constrained;
  for (const auto& [id, constraint] : model.constraints) constrained.insert(constraint.inverts);
  for (const auto& [id, hazard] : model.hazards) {
    if (!constrained.count(id)) report.hazards_without_constraint.push_back(id);
  }

  std::set<UcaId> with_scenario;
  for (const auto& [id, scenario] : model.scenarios) with_scenario.insert(scenario.on);
  for (const auto& [id, uca] : model.ucas) {
    if (!with_scenario.count(id)) report.ucas_without_scenario.push_back(id);
  }

  std::set<ScenarioId> with_mitigation;
  for (const auto& [id, mitigation] : model.mitigations) {
    with_mitigation.insert(mitigation.addresses.begin(), mitigation.addresses.end());
  }
  for (const auto& [id, scenario] : model.scenarios) {
    if (!with_mitigation.count(id)) report.scenarios_without_mitigation.push_back(id);
  }

  std::set<std::pair<EntityId, EntityId>> feedback_pairs;
  for (const auto& [id, fb] : model.feedback_links) {
    feedback_pairs.insert({fb.source, fb.target});
  }
  for (const auto& [id, ca] : model.control_actions) {
    if (!feedback_pairs.count({ca.target, ca.source})) {
      report.cas_without_return_feedback.push_back(id);
    }
  }

  return report;
}

FocusReport focus(const StpaModel& model, const LossId& loss) {
  if (!model.losses.count(loss)) {
    throw NotFoundError("unknown loss '" + loss.str() + "'");
  }

  FocusReport report;
  report.loss = loss;

  std::set<HazardId> focus_hazards;
  for (const auto& [id, hazard] : model.hazards) {
    if (std::find(hazard.leads_to.begin(), hazard.leads_to.end(), loss) !=
        hazard.leads_to.end()) {
      focus_hazards.insert(id);
      report.hazards.push_back(id);
    }
  }

  std::set<UcaId> focus_ucas;
  std::set<CaId> relevant_cas;
  for (const auto& [id, uca] : model.ucas) {
    bool cites = std::any_of(uca.hazards.begin(), uca.hazards.end(),
                             [&](const HazardId& h) { return focus_hazards.count(h) > 0; });
    if (cites) {
      focus_ucas.insert(id);
      report.ucas.push_back(id);
      relevant_cas.insert(uca.on);
    }
  }

  std::set<ScenarioId> focus_scenarios;
  for (const auto& [id, scenario] : model.scenarios) {
    if (focus_ucas.count(scenario.on)) {
      focus_scenarios.insert(id);
      report.scenarios.push_back(id);
    }
  }

  for (const auto& [id, mitigation] : model.mitigations) {
    bool addresses = std::any_of(mitigation.addresses.begin(), mitigation.addresses.end(),
                                 [&](const ScenarioId& s) { return focus_scenarios.count(s) > 0; });
    if (addresses) report.mitigations.push_back(id);
  }

  // Conservative inclusion: a control action nobody has looked at yet may
  // well relate to the focus hazards, so its cells count as relevant too.
  std::set<CaId> assessed_cas;
  for (const auto& [id, uca] : model.ucas) assessed_cas.insert(uca.on);
  for (const AssessmentRecord& record : model.assessments) assessed_cas.insert(record.on);

  const auto by_cell = ucas_by_cell(model);
  const auto assessed = assessed_cells(model);
  for (const auto& [id, ca] : model.control_actions) {
    bool never_assessed = !assessed_cas.count(id);
    if (!relevant_cas.count(id) && !never_assessed) continue;
    for (CandidateCell& cell : cells_for_ca(id, by_cell, assessed)) {
      if (cell.status == CellStatus::Unassessed) {
        report.unassessed_cells_relevant.push_back(std::move(cell));
      }
    }
  }

  return report;
}

std::vector<ConstraintSuggestion> scaffold_constraints(const StpaModel& model) {
  std::set<HazardId> constrained;
  for (const auto& [id, constraint] : model.constraints) constrained.insert(constraint.inverts);

  std::vector<ConstraintSuggestion> out;
  for (const auto& [id, hazard] : model.hazards) {
    if (constrained.count(id)) continue;
    out.push_back(ConstraintSuggestion{id, "It must be prevented that: " + hazard.description});
  }
  return out;
}

namespace {

// Reference edges of the model, used forwards (what an element depends
// on) and backwards (what depends on an element).
std::map<NodeRef, std::vector<NodeRef>> reference_edges(const StpaModel& model, bool reversed) {
  std::map<NodeRef, std::vector<NodeRef>> adjacency;
  auto add = [&](NodeRef from, NodeRef to) {
    if (reversed) std::swap(from, to);
    adjacency[from].push_back(to);
  };
  for (const auto& [id, hazard] : model.hazards) {
    for (const LossId& loss : hazard.leads_to) {
      add({ElementKind::Hazard, id}, {ElementKind::Loss, loss});
    }
  }
  for (const auto& [id, constraint] : model.constraints) {
    add({ElementKind::Constraint, id}, {ElementKind::Hazard, constraint.inverts});
  }
  for (const auto& [id, ca] : model.control_actions) {
    add({ElementKind::ControlAction, id}, {ElementKind::Entity, ca.source});
    add({ElementKind::ControlAction, id}, {ElementKind::Entity, ca.target});
  }
  for (const auto& [id, fb] : model.feedback_links) {
    add({ElementKind::Feedback, id}, {ElementKind::Entity, fb.source});
    add({ElementKind::Feedback, id}, {ElementKind::Entity, fb.target});
  }
  for (const auto& [id, uca] : model.ucas) {
    add({ElementKind::Uca, id}, {ElementKind::ControlAction, uca.on});
    for (const HazardId& hazard : uca.hazards) {
      add({ElementKind::Uca, id}, {ElementKind::Hazard, hazard});
    }
  }
  for (const auto& [id, scenario] : model.scenarios) {
    add({ElementKind::Scenario, id}, {ElementKind::Uca, scenario.on});
  }
  for (const auto& [id, mitigation] : model.mitigations) {
    for (const ScenarioId& scenario : mitigation.addresses) {
      add({ElementKind::Mitigation, id}, {ElementKind::Scenario, scenario});
    }
  }
  return adjacency;
}

std::vector<NodeRef> resolve_in_model(const StpaModel& model, const Identifier& id) {
  std::vector<NodeRef> out;
  if (model.losses.count(id)) out.push_back({ElementKind::Loss, id});
  if (model.hazards.count(id)) out.push_back({ElementKind::Hazard, id});
  if (model.constraints.count(id)) out.push_back({ElementKind::Constraint, id});
  if (model.entities.count(id)) out.push_back({ElementKind::Entity, id});
  if (model.control_actions.count(id)) out.push_back({ElementKind::ControlAction, id});
  if (model.feedback_links.count(id)) out.push_back({ElementKind::Feedback, id});
  if (model.ucas.count(id)) out.push_back({ElementKind::Uca, id});
  if (model.scenarios.count(id)) out.push_back({ElementKind::Scenario, id});
  if (model.mitigations.count(id)) out.push_back({ElementKind::Mitigation, id});
  return out;
}

// Union of the strict reachable sets of every seed: a seed appears in the
// result only when it is reachable from another seed, which keeps the
// closure monotone in the seed set.
std::vector<Identifier> closure(const StpaModel& model, const std::vector<Identifier>& changed,
                                bool reversed) {
  const auto adjacency = reference_edges(model, reversed);

  std::vector<NodeRef> seeds;
  for (const Identifier& id : changed) {
    std::vector<NodeRef> matches = resolve_in_model(model, id);
    if (matches.empty()) {
      throw NotFoundError("unknown identifier '" + id.str() + "'");
    }
    seeds.insert(seeds.end(), matches.begin(), matches.end());
  }

  std::set<NodeRef> reached;
  std::vector<NodeRef> frontier = seeds;
  while (!frontier.empty()) {
    NodeRef node = frontier.back();
    frontier.pop_back();
    auto it = adjacency.find(node);
    if (it == adjacency.end()) continue;
    for (const NodeRef& next : it->second) {
      if (reached.insert(next).second) frontier.push_back(next);
    }
  }

  std::set<Identifier> ids;
  for (const NodeRef& node : reached) ids.insert(node.id);
  return {ids.begin(), ids.end()};
}

}  // namespace

std::vector<Identifier> impact(const StpaModel& model, const std::vector<Identifier>& changed) {
  return closure(model, changed, /*reversed=*/true);
}

std::vector<Identifier> impact_context(const StpaModel& model,
                                       const std::vector<Identifier>& changed) {
  return closure(model, changed, /*reversed=*/false);
}

}  // namespace stpa
