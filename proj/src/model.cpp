#include "stpa/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace stpa {

namespace {

bool is_id_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}

bool is_id_char(char c) {
  return is_id_start(c) || (c >= '0' && c <= '9') || c == '_' || c == '.';
}

}  // namespace

Identifier::Identifier(std::string text) : text_(std::move(text)) {
  if (!valid(text_)) {
    throw std::invalid_argument("invalid identifier '" + text_ + "'");
  }
}

bool Identifier::valid(std::string_view text) {
  if (text.empty() || !is_id_start(text.front())) return false;
  return std::all_of(text.begin(), text.end(), is_id_char);
}

void sort_assessments(StpaModel& model) {
  std::sort(model.assessments.begin(), model.assessments.end(),
            [](const AssessmentRecord& a, const AssessmentRecord& b) {
              return std::tie(a.on, a.phrase, a.justification) <
                     std::tie(b.on, b.phrase, b.justification);
            });
}

std::string_view to_keyword(GuidePhrase phrase) {
  switch (phrase) {
    case GuidePhrase::NotProvided: return "not_provided";
    case GuidePhrase::ProvidedUnsafe: return "provided_unsafe";
    case GuidePhrase::WrongTimingOrOrder: return "wrong_timing";
    case GuidePhrase::WrongDuration: return "wrong_duration";
  }
  return "not_provided";
}

std::string_view to_keyword(EntityKind kind) {
  switch (kind) {
    case EntityKind::Controller: return "controller";
    case EntityKind::Process: return "process";
    case EntityKind::Both: return "both";
  }
  return "process";
}

std::string_view to_keyword(Boundary boundary) {
  return boundary == Boundary::Outside ? "outside" : "inside";
}

std::string_view to_keyword(ScenarioCategory category) {
  switch (category) {
    case ScenarioCategory::Human: return "human";
    case ScenarioCategory::Organisational: return "organisational";
    case ScenarioCategory::Operational: return "operational";
    case ScenarioCategory::Technical: return "technical";
    case ScenarioCategory::Feedback: return "feedback";
  }
  return "technical";
}

std::string_view to_keyword(CausalMechanism mechanism) {
  switch (mechanism) {
    case CausalMechanism::PhysicalFailure: return "physical_failure";
    case CausalMechanism::InadequateControlAlgorithm: return "inadequate_control_algorithm";
    case CausalMechanism::UnsafeControlInput: return "unsafe_control_input";
    case CausalMechanism::InadequateProcessModel: return "inadequate_process_model";
  }
  return "physical_failure";
}

std::string_view to_keyword(MitigationStatus status) {
  switch (status) {
    case MitigationStatus::Proposed: return "proposed";
    case MitigationStatus::Implemented: return "implemented";
    case MitigationStatus::Verified: return "verified";
  }
  return "proposed";
}

std::optional<GuidePhrase> guide_phrase_from_keyword(std::string_view word) {
  for (GuidePhrase phrase : kGuidePhrases) {
    if (word == to_keyword(phrase)) return phrase;
  }
  return std::nullopt;
}

std::optional<EntityKind> entity_kind_from_keyword(std::string_view word) {
  for (EntityKind kind : {EntityKind::Controller, EntityKind::Process, EntityKind::Both}) {
    if (word == to_keyword(kind)) return kind;
  }
  return std::nullopt;
}

std::optional<Boundary> boundary_from_keyword(std::string_view word) {
  for (Boundary boundary : {Boundary::Inside, Boundary::Outside}) {
    if (word == to_keyword(boundary)) return boundary;
  }
  return std::nullopt;
}

std::optional<ScenarioCategory> category_from_keyword(std::string_view word) {
  for (ScenarioCategory category :
       {ScenarioCategory::Human, ScenarioCategory::Organisational, ScenarioCategory::Operational,
        ScenarioCategory::Technical, ScenarioCategory::Feedback}) {
    if (word == to_keyword(category)) return category;
  }
  return std::nullopt;
}

std::optional<CausalMechanism> mechanism_from_keyword(std::string_view word) {
  for (CausalMechanism mechanism :
       {CausalMechanism::PhysicalFailure, CausalMechanism::InadequateControlAlgorithm,
        CausalMechanism::UnsafeControlInput, CausalMechanism::InadequateProcessModel}) {
    if (word == to_keyword(mechanism)) return mechanism;
  }
  return std::nullopt;
}

std::optional<MitigationStatus> status_from_keyword(std::string_view word) {
  for (MitigationStatus status : {MitigationStatus::Proposed, MitigationStatus::Implemented,
                                  MitigationStatus::Verified}) {
    if (word == to_keyword(status)) return status;
  }
  return std::nullopt;
}

}  // namespace stpa
