#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stpa/model.hpp"

namespace stpa {

enum class CaeKind { Claim, Argument, Evidence };
enum class ArgumentType { Decomposition, Enumeration, EvidenceIncorporation };

std::string_view to_keyword(CaeKind kind);
std::string_view to_keyword(ArgumentType type);

/// Node of a Claim-Argument-Evidence tree. Claim children are Arguments,
/// Argument children are Claims or Evidence, Evidence nodes are leaves.
/// `developed` is false exactly when the pattern required children but
/// the model had none to offer.
struct CaeNode {
  std::string id;  // deterministic: <kind-prefix>-<source-id>, numeric suffix on collision
  CaeKind kind = CaeKind::Claim;
  std::string text;
  std::optional<ArgumentType> argument_type;
  std::optional<Identifier> source_element;
  bool developed = true;
  std::vector<CaeNode> children;
};

/// Expands the model into a CAE skeleton: top claim, decomposition over
/// losses, per-loss claims, decomposition over hazards, per-hazard
/// claims, enumeration of the control actions whose UCAs cite the hazard,
/// per-control-action claims, per-UCA arguments over loss scenarios, and
/// evidence nodes for the mitigations in place. Under-populated branches
/// end in undeveloped claims rather than being omitted, so reviewers see
/// the gaps. Pure function of (model, context).
CaeNode generate_case(const StpaModel& model, const std::string& context);

/// Canonical JSON for one tree; see docs/cae-schema.md. Stable across runs.
std::string case_to_json(const CaeNode& root);

/// Canonical JSON document wrapping the tree with a preamble that lists
/// the model's system constraints (constraints do not appear as claims).
std::string case_document_to_json(const StpaModel& model, const CaeNode& root);

}  // namespace stpa
