#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stpa/diagnostics.hpp"
#include "stpa/model.hpp"

namespace stpa {

enum class CellStatus { CoveredByUca, AssessedNoHazard, Unassessed };

/// One (control action, guide phrase) cell of the UCA candidate table.
struct CandidateCell {
  CaId ca;
  GuidePhrase phrase = GuidePhrase::NotProvided;
  CellStatus status = CellStatus::Unassessed;
  std::vector<UcaId> covering_ucas;  // non-empty iff CoveredByUca

  friend bool operator==(const CandidateCell&, const CandidateCell&) = default;
};

/// Completeness metrics; each count equals the length of its list.
struct CoverageReport {
  std::vector<CandidateCell> cells;             // all cells
  std::vector<CandidateCell> unassessed_cells;  // subset with status Unassessed
  std::vector<CaId> cas_without_any_uca;
  std::vector<HazardId> hazards_without_constraint;
  std::vector<UcaId> ucas_without_scenario;
  std::vector<ScenarioId> scenarios_without_mitigation;
  std::vector<CaId> cas_without_return_feedback;

  std::size_t cells_total() const { return cells.size(); }
  std::size_t cells_unassessed() const { return unassessed_cells.size(); }
};

/// Everything that traces to one prioritised loss.
struct FocusReport {
  LossId loss;
  std::vector<HazardId> hazards;
  std::vector<UcaId> ucas;
  std::vector<ScenarioId> scenarios;
  std::vector<MitigationId> mitigations;
  std::vector<CandidateCell> unassessed_cells_relevant;
};

struct ConstraintSuggestion {
  HazardId hazard;
  std::string description;
};

/// Checks referential integrity and the STPA well-formedness rules.
/// Returns errors and warnings in a deterministic order; never throws.
std::vector<Diagnostic> validate(const StpaModel& model);

/// Exactly four cells per in-scope control action, ordered by
/// (ca id, guide-phrase declaration order). Throws NotFoundError for an
/// unknown ca_filter.
std::vector<CandidateCell> enumerate_candidates(
    const StpaModel& model, const std::optional<CaId>& ca_filter = std::nullopt);

CoverageReport coverage(const StpaModel& model);

/// Restricts the analysis to elements from which `loss` is reachable.
/// Unassessed cells are included for any control action that already has
/// a UCA citing one of the loss's hazards, plus any control action that
/// has never been assessed at all. Throws NotFoundError.
FocusReport focus(const StpaModel& model, const LossId& loss);

/// One suggested constraint per hazard lacking one; a scaffold for human
/// editing, never auto-inserted.
std::vector<ConstraintSuggestion> scaffold_constraints(const StpaModel& model);

/// Elements downstream of any changed element, i.e. the transitive set of
/// elements that reference a changed element directly or indirectly.
/// Sorted and deduplicated; a changed id appears only if it is itself
/// downstream of another changed element. Throws NotFoundError.
std::vector<Identifier> impact(const StpaModel& model, const std::vector<Identifier>& changed);

/// Upstream counterpart of impact(): the elements the changed ones
/// reference, transitively. Reported by the CLI as context, not impact.
std::vector<Identifier> impact_context(const StpaModel& model,
                                       const std::vector<Identifier>& changed);

}  // namespace stpa
