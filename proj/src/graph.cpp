#include "stpa/graph.hpp"

#include <algorithm>

#include "stpa/errors.hpp"

namespace stpa {

namespace {

const std::vector<TraceEdge> kNoEdges;

void require(bool resolved, const Identifier& ref, ElementKind ref_kind, const Identifier& site,
             std::string_view site_what) {
  if (resolved) return;
  throw IntegrityError("unresolved " + std::string(element_kind_name(ref_kind)) + " '" +
                       ref.str() + "' referenced by " + std::string(site_what) + " '" +
                       site.str() + "'");
}

}  // namespace

std::string_view element_kind_name(ElementKind kind) {
  switch (kind) {
    case ElementKind::Loss: return "loss";
    case ElementKind::Hazard: return "hazard";
    case ElementKind::Constraint: return "constraint";
    case ElementKind::Entity: return "entity";
    case ElementKind::ControlAction: return "control action";
    case ElementKind::Feedback: return "feedback link";
    case ElementKind::Uca: return "uca";
    case ElementKind::Scenario: return "scenario";
    case ElementKind::Mitigation: return "mitigation";
  }
  return "element";
}

std::string_view element_kind_plural(ElementKind kind) {
  switch (kind) {
    case ElementKind::Loss: return "losses";
    case ElementKind::Hazard: return "hazards";
    case ElementKind::Constraint: return "constraints";
    case ElementKind::Entity: return "entities";
    case ElementKind::ControlAction: return "control_actions";
    case ElementKind::Feedback: return "feedback";
    case ElementKind::Uca: return "ucas";
    case ElementKind::Scenario: return "scenarios";
    case ElementKind::Mitigation: return "mitigations";
  }
  return "elements";
}

std::optional<ElementKind> element_kind_from_plural(std::string_view word) {
  for (ElementKind kind :
       {ElementKind::Loss, ElementKind::Hazard, ElementKind::Constraint, ElementKind::Entity,
        ElementKind::ControlAction, ElementKind::Feedback, ElementKind::Uca, ElementKind::Scenario,
        ElementKind::Mitigation}) {
    if (word == element_kind_plural(kind)) return kind;
  }
  return std::nullopt;
}

std::string_view relation_name(Relation relation) {
  switch (relation) {
    case Relation::HazardLeadsToLoss: return "hazard_leads_to_loss";
    case Relation::ConstraintInvertsHazard: return "constraint_inverts_hazard";
    case Relation::UcaOnCa: return "uca_on_ca";
    case Relation::UcaCausesHazard: return "uca_causes_hazard";
    case Relation::ScenarioOnUca: return "scenario_on_uca";
    case Relation::MitigationAddressesScenario: return "mitigation_addresses_scenario";
    case Relation::CaFromEntity: return "ca_from_entity";
    case Relation::CaToEntity: return "ca_to_entity";
    case Relation::FeedbackFromEntity: return "feedback_from_entity";
    case Relation::FeedbackToEntity: return "feedback_to_entity";
  }
  return "relation";
}

std::vector<NodeRef> TraceGraph::resolve(const Identifier& id) const {
  std::vector<NodeRef> matches;
  for (ElementKind kind :
       {ElementKind::Loss, ElementKind::Hazard, ElementKind::Constraint, ElementKind::Entity,
        ElementKind::ControlAction, ElementKind::Feedback, ElementKind::Uca, ElementKind::Scenario,
        ElementKind::Mitigation}) {
    NodeRef ref{kind, id};
    if (nodes_.count(ref)) matches.push_back(ref);
  }
  return matches;
}

const std::vector<TraceEdge>& TraceGraph::out_edges(const NodeRef& node) const {
  auto it = out_.find(node);
  return it == out_.end() ? kNoEdges : it->second;
}

TraceGraph build_trace_graph(const StpaModel& model) {
  TraceGraph graph;

  auto add_node = [&](ElementKind kind, const Identifier& id) {
    graph.nodes_.insert(NodeRef{kind, id});
  };
  for (const auto& [id, loss] : model.losses) add_node(ElementKind::Loss, id);
  for (const auto& [id, hazard] : model.hazards) add_node(ElementKind::Hazard, id);
  for (const auto& [id, constraint] : model.constraints) add_node(ElementKind::Constraint, id);
  for (const auto& [id, entity] : model.entities) add_node(ElementKind::Entity, id);
  for (const auto& [id, ca] : model.control_actions) add_node(ElementKind::ControlAction, id);
  for (const auto& [id, fb] : model.feedback_links) add_node(ElementKind::Feedback, id);
  for (const auto& [id, uca] : model.ucas) add_node(ElementKind::Uca, id);
  for (const auto& [id, scenario] : model.scenarios) add_node(ElementKind::Scenario, id);
  for (const auto& [id, mitigation] : model.mitigations) add_node(ElementKind::Mitigation, id);

  auto add_edge = [&](ElementKind from_kind, const Identifier& from, Relation relation,
                      ElementKind to_kind, const Identifier& to, std::string_view site_what) {
    NodeRef target{to_kind, to};
    require(graph.nodes_.count(target) > 0, to, to_kind, from, site_what);
    graph.edges_.push_back(TraceEdge{NodeRef{from_kind, from}, target, relation});
  };

  for (const auto& [id, hazard] : model.hazards) {
    for (const LossId& loss : hazard.leads_to) {
      add_edge(ElementKind::Hazard, id, Relation::HazardLeadsToLoss, ElementKind::Loss, loss,
               "hazard");
    }
  }
  for (const auto& [id, constraint] : model.constraints) {
    add_edge(ElementKind::Constraint, id, Relation::ConstraintInvertsHazard, ElementKind::Hazard,
             constraint.inverts, "constraint");
  }
  for (const auto& [id, ca] : model.control_actions) {
    add_edge(ElementKind::ControlAction, id, Relation::CaFromEntity, ElementKind::Entity,
             ca.source, "control action");
    add_edge(ElementKind::ControlAction, id, Relation::CaToEntity, ElementKind::Entity, ca.target,
             "control action");
  }
  for (const auto& [id, fb] : model.feedback_links) {
    add_edge(ElementKind::Feedback, id, Relation::FeedbackFromEntity, ElementKind::Entity,
             fb.source, "feedback link");
    add_edge(ElementKind::Feedback, id, Relation::FeedbackToEntity, ElementKind::Entity, fb.target,
             "feedback link");
  }
  for (const auto& [id, uca] : model.ucas) {
    add_edge(ElementKind::Uca, id, Relation::UcaOnCa, ElementKind::ControlAction, uca.on, "uca");
    for (const HazardId& hazard : uca.hazards) {
      add_edge(ElementKind::Uca, id, Relation::UcaCausesHazard, ElementKind::Hazard, hazard,
               "uca");
    }
  }
  for (const auto& [id, scenario] : model.scenarios) {
    add_edge(ElementKind::Scenario, id, Relation::ScenarioOnUca, ElementKind::Uca, scenario.on,
             "scenario");
  }
  for (const auto& [id, mitigation] : model.mitigations) {
    for (const ScenarioId& scenario : mitigation.addresses) {
      add_edge(ElementKind::Mitigation, id, Relation::MitigationAddressesScenario,
               ElementKind::Scenario, scenario, "mitigation");
    }
  }

  for (const TraceEdge& edge : graph.edges_) {
    graph.out_[edge.from].push_back(edge);
  }
  for (auto& [node, edges] : graph.out_) {
    std::sort(edges.begin(), edges.end(), [](const TraceEdge& a, const TraceEdge& b) {
      return std::tie(a.to.kind, a.to.id, a.relation) < std::tie(b.to.kind, b.to.id, b.relation);
    });
  }
  return graph;
}

namespace {

// All reference chains cross from one element kind to another in a fixed
// partial order, so the graph is acyclic and plain DFS enumerates every
// simple path.
void collect_paths(const TraceGraph& graph, ElementKind to_kind, std::vector<NodeRef>& path,
                   std::vector<std::vector<NodeRef>>& out) {
  const NodeRef& current = path.back();
  if (current.kind == to_kind) {
    out.push_back(path);
    return;
  }
  for (const TraceEdge& edge : graph.out_edges(current)) {
    path.push_back(edge.to);
    collect_paths(graph, to_kind, path, out);
    path.pop_back();
  }
}

bool path_less(const std::vector<NodeRef>& a, const std::vector<NodeRef>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const NodeRef& x, const NodeRef& y) {
                                        return std::tie(x.id, x.kind) < std::tie(y.id, y.kind);
                                      });
}

}  // namespace

std::vector<std::vector<NodeRef>> trace(const TraceGraph& graph, const NodeRef& from,
                                        ElementKind to_kind) {
  if (!graph.contains(from)) {
    throw NotFoundError("unknown " + std::string(element_kind_name(from.kind)) + " '" +
                        from.id.str() + "'");
  }
  std::vector<std::vector<NodeRef>> paths;
  std::vector<NodeRef> path{from};
  collect_paths(graph, to_kind, path, paths);
  std::sort(paths.begin(), paths.end(), path_less);
  return paths;
}

std::vector<std::vector<NodeRef>> trace(const TraceGraph& graph, const Identifier& from,
                                        ElementKind to_kind) {
  std::vector<NodeRef> matches = graph.resolve(from);
  if (matches.empty()) {
    throw NotFoundError("unknown identifier '" + from.str() + "'");
  }
  if (matches.size() > 1) {
    throw NotFoundError("ambiguous identifier '" + from.str() +
                        "' (declared for more than one element kind)");
  }
  return trace(graph, matches.front(), to_kind);
}

}  // namespace stpa
