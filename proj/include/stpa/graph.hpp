#pragma once

#include <map>
#include <set>
#include <string_view>
#include <vector>

#include "stpa/model.hpp"

namespace stpa {

/// Kinds of model elements that appear as traceability-graph nodes.
/// Identifiers are unique per kind, not globally, so a node is always the
/// pair (kind, id).
enum class ElementKind {
  Loss,
  Hazard,
  Constraint,
  Entity,
  ControlAction,
  Feedback,
  Uca,
  Scenario,
  Mitigation,
};

std::string_view element_kind_name(ElementKind kind);    // singular, for messages
std::string_view element_kind_plural(ElementKind kind);  // CLI spelling
std::optional<ElementKind> element_kind_from_plural(std::string_view word);

struct NodeRef {
  ElementKind kind = ElementKind::Loss;
  Identifier id;

  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

/// Edge labels. Every edge points from the referring element to the
/// element it references, so following edges walks the causal chain
/// scenario -> uca -> hazard -> loss.
enum class Relation {
  HazardLeadsToLoss,
  ConstraintInvertsHazard,
  UcaOnCa,
  UcaCausesHazard,
  ScenarioOnUca,
  MitigationAddressesScenario,
  CaFromEntity,
  CaToEntity,
  FeedbackFromEntity,
  FeedbackToEntity,
};

std::string_view relation_name(Relation relation);

struct TraceEdge {
  NodeRef from;
  NodeRef to;
  Relation relation = Relation::HazardLeadsToLoss;

  friend auto operator<=>(const TraceEdge&, const TraceEdge&) = default;
  friend bool operator==(const TraceEdge&, const TraceEdge&) = default;
};

/// Directed multigraph over all model elements, derived deterministically
/// from a model. Immutable once built; safe to share across readers.
class TraceGraph {
 public:
  const std::vector<TraceEdge>& edges() const { return edges_; }
  const std::set<NodeRef>& nodes() const { return nodes_; }

  bool contains(const NodeRef& node) const { return nodes_.count(node) > 0; }

  /// All nodes whose id matches, across kinds.
  std::vector<NodeRef> resolve(const Identifier& id) const;

  /// Outgoing edges, sorted by (target kind, target id, relation).
  const std::vector<TraceEdge>& out_edges(const NodeRef& node) const;

 private:
  friend TraceGraph build_trace_graph(const StpaModel& model);

  std::vector<TraceEdge> edges_;
  std::set<NodeRef> nodes_;
  std::map<NodeRef, std::vector<TraceEdge>> out_;
};

/// Builds the traceability graph: one edge per reference instance.
/// Throws IntegrityError on an unresolved reference, naming the
/// offending id and site.
TraceGraph build_trace_graph(const StpaModel& model);

/// All simple paths from `from` to any element of `to_kind`, following
/// edges in the reference direction. A path stops at the first node of
/// the target kind; if `from` already has that kind the single degenerate
/// path is returned. Paths are ordered lexicographically by their node-id
/// sequence. Throws NotFoundError for an unknown node.
std::vector<std::vector<NodeRef>> trace(const TraceGraph& graph, const NodeRef& from,
                                        ElementKind to_kind);

/// Convenience overload resolving `from` by id alone. Throws
/// NotFoundError if the id is unknown or matches elements of more than
/// one kind.
std::vector<std::vector<NodeRef>> trace(const TraceGraph& graph, const Identifier& from,
                                        ElementKind to_kind);

}  // namespace stpa
