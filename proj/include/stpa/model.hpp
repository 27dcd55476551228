#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stpa {

/// Location of a token or statement in a source file. Lines and columns
/// are 1-based; columns count bytes.
struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int length = 0;
};

/// Element identifier: `[A-Za-z][A-Za-z0-9_.]*`, compared byte-wise.
/// Dots are permitted so ids like `UCA7.3` or `LS7.3.1` are legal; the
/// tool never parses structure out of them.
class Identifier {
 public:
  Identifier() = default;
  explicit Identifier(std::string text);  // throws std::invalid_argument

  static bool valid(std::string_view text);

  const std::string& str() const { return text_; }
  bool empty() const { return text_.empty(); }

  friend auto operator<=>(const Identifier&, const Identifier&) = default;
  friend bool operator==(const Identifier&, const Identifier&) = default;

 private:
  std::string text_;
};

using LossId = Identifier;
using HazardId = Identifier;
using ConstraintId = Identifier;
using EntityId = Identifier;
using CaId = Identifier;
using FbId = Identifier;
using UcaId = Identifier;
using ScenarioId = Identifier;
using MitigationId = Identifier;

/// Harm, damage or cost unacceptable to the stakeholders.
struct Loss {
  LossId id;
  std::string description;
  std::optional<int> priority;  // 1 = highest
  SourceSpan span;
};

/// System state that, with worst-case environmental conditions, leads to
/// one or more losses.
struct Hazard {
  HazardId id;
  std::string description;
  std::vector<LossId> leads_to;  // must be non-empty in a valid model
  SourceSpan span;
};

/// Condition that must hold to prevent a hazard; obtained by inverting
/// it. At most one constraint per hazard.
struct SystemConstraint {
  ConstraintId id;
  HazardId inverts;
  std::string description;
  SourceSpan span;
};

enum class EntityKind { Controller, Process, Both };
enum class Boundary { Inside, Outside };

/// A controller or controlled process (person, team, program, agent).
struct Entity {
  EntityId id;
  std::string display_name;
  EntityKind kind = EntityKind::Process;
  Boundary boundary = Boundary::Inside;
  SourceSpan span;
};

/// Command or directive issued by a controller to a controlled process.
struct ControlAction {
  CaId id;
  EntityId source;
  EntityId target;
  std::string description;
  SourceSpan span;
};

/// Information flow from a controlled process back to a controller.
struct FeedbackLink {
  FbId id;
  EntityId source;
  EntityId target;
  std::string description;
  SourceSpan span;
};

/// The four ways a control action can be unsafe. Declaration order is the
/// canonical enumeration order everywhere in the tool.
enum class GuidePhrase {
  NotProvided,
  ProvidedUnsafe,
  WrongTimingOrOrder,
  WrongDuration,
};

inline constexpr std::array<GuidePhrase, 4> kGuidePhrases = {
    GuidePhrase::NotProvided,
    GuidePhrase::ProvidedUnsafe,
    GuidePhrase::WrongTimingOrOrder,
    GuidePhrase::WrongDuration,
};

/// A control action that, in a particular context and worst-case
/// environment, will lead to one or more hazards.
struct UcaRecord {
  UcaId id;
  CaId on;
  GuidePhrase phrase = GuidePhrase::NotProvided;
  std::string context;
  std::vector<HazardId> hazards;  // must be non-empty in a valid model
  SourceSpan span;
};

/// Explicit "assessed, no hazard identified" verdict for one
/// (control action, guide phrase) cell. Assessments carry no identifier.
struct AssessmentRecord {
  CaId on;
  GuidePhrase phrase = GuidePhrase::NotProvided;
  std::string justification;
  SourceSpan span;
};

enum class ScenarioCategory { Human, Organisational, Operational, Technical, Feedback };

enum class CausalMechanism {
  PhysicalFailure,
  InadequateControlAlgorithm,
  UnsafeControlInput,
  InadequateProcessModel,
};

/// Causal factors that can lead to an unsafe control action.
struct LossScenario {
  ScenarioId id;
  UcaId on;
  ScenarioCategory category = ScenarioCategory::Technical;
  std::string description;
  std::optional<CausalMechanism> mechanism;
  SourceSpan span;
};

enum class MitigationStatus { Proposed, Implemented, Verified };

/// Safety requirement or measure addressing one or more loss scenarios.
struct Mitigation {
  MitigationId id;
  std::vector<ScenarioId> addresses;  // must be non-empty in a valid model
  std::string description;
  MitigationStatus status = MitigationStatus::Proposed;
  SourceSpan span;
};

/// Root container for one analysis. Collections are keyed by identifier,
/// so iteration order is the canonical lexicographic order. Models are
/// treated as immutable once constructed; all mutation happens by
/// building a new model.
struct StpaModel {
  std::string name;
  std::string context;
  SourceSpan span;

  std::map<LossId, Loss> losses;
  std::map<HazardId, Hazard> hazards;
  std::map<ConstraintId, SystemConstraint> constraints;
  std::map<EntityId, Entity> entities;
  std::map<CaId, ControlAction> control_actions;
  std::map<FbId, FeedbackLink> feedback_links;
  std::vector<AssessmentRecord> assessments;  // sorted by (on, phrase, justification)
  std::map<UcaId, UcaRecord> ucas;
  std::map<ScenarioId, LossScenario> scenarios;
  std::map<MitigationId, Mitigation> mitigations;
};

/// Restores the canonical assessment ordering after direct construction.
void sort_assessments(StpaModel& model);

// Keyword spellings shared by the DSL, the JSON mirror and report output.
std::string_view to_keyword(GuidePhrase phrase);
std::string_view to_keyword(EntityKind kind);
std::string_view to_keyword(Boundary boundary);
std::string_view to_keyword(ScenarioCategory category);
std::string_view to_keyword(CausalMechanism mechanism);
std::string_view to_keyword(MitigationStatus status);

std::optional<GuidePhrase> guide_phrase_from_keyword(std::string_view word);
std::optional<EntityKind> entity_kind_from_keyword(std::string_view word);
std::optional<Boundary> boundary_from_keyword(std::string_view word);
std::optional<ScenarioCategory> category_from_keyword(std::string_view word);
std::optional<CausalMechanism> mechanism_from_keyword(std::string_view word);
std::optional<MitigationStatus> status_from_keyword(std::string_view word);

}  // namespace stpa
