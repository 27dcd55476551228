#include "stpa/export.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <json.hpp>

namespace stpa {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string dot_quoted(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 2);
  out += '"';
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

void write_entity_node(std::ostringstream& out, const Entity& entity, std::string_view indent) {
  out << indent << dot_quoted(entity.id.str()) << " [label=" << dot_quoted(entity.display_name)
      << "];\n";
}

std::string markdown_cell(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') {
      out += "\\|";
    } else if (c == '\n' || c == '\r') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

std::string join_ids_md(const std::vector<Identifier>& ids) {
  std::string out;
  for (const Identifier& id : ids) {
    if (!out.empty()) out += ", ";
    out += id.str();
  }
  return out;
}

void table_header(std::ostringstream& out, std::initializer_list<const char*> columns) {
  out << '|';
  for (const char* column : columns) out << ' ' << column << " |";
  out << "\n|";
  for (std::size_t i = 0; i < columns.size(); ++i) out << " --- |";
  out << '\n';
}

}  // namespace

std::string to_dot(const StpaModel& model, bool cluster_by_boundary) {
  std::ostringstream out;
  out << "digraph control_structure {\n";
  out << "  node [shape=box];\n";

  bool any_outside = false;
  for (const auto& [id, entity] : model.entities) {
    if (entity.boundary == Boundary::Outside) any_outside = true;
  }

  if (cluster_by_boundary && any_outside) {
    for (const auto& [id, entity] : model.entities) {
      if (entity.boundary == Boundary::Inside) write_entity_node(out, entity, "  ");
    }
    out << "  subgraph cluster_outside {\n";
    out << "    label=\"Outside system boundary\";\n";
    out << "    style=dashed;\n";
    for (const auto& [id, entity] : model.entities) {
      if (entity.boundary == Boundary::Outside) write_entity_node(out, entity, "    ");
    }
    out << "  }\n";
  } else {
    for (const auto& [id, entity] : model.entities) {
      write_entity_node(out, entity, "  ");
    }
  }

  for (const auto& [id, ca] : model.control_actions) {
    out << "  " << dot_quoted(ca.source.str()) << " -> " << dot_quoted(ca.target.str())
        << " [color=\"red\", label=" << dot_quoted(id.str()) << "];\n";
  }
  for (const auto& [id, fb] : model.feedback_links) {
    out << "  " << dot_quoted(fb.source.str()) << " -> " << dot_quoted(fb.target.str())
        << " [color=\"blue\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string to_markdown(const StpaModel& model) {
  std::ostringstream out;
  out << "# STPA report";
  if (!model.name.empty()) out << ": " << markdown_cell(model.name);
  out << "\n\n";
  if (!model.context.empty()) out << model.context << "\n\n";

  out << "## Losses\n\n";
  table_header(out, {"Id", "Description", "Priority"});
  for (const auto& [id, loss] : model.losses) {
    out << "| " << id.str() << " | " << markdown_cell(loss.description) << " | ";
    if (loss.priority) out << *loss.priority;
    out << " |\n";
  }

  out << "\n## Hazards\n\n";
  table_header(out, {"Id", "Description", "Leads to"});
  for (const auto& [id, hazard] : model.hazards) {
    out << "| " << id.str() << " | " << markdown_cell(hazard.description) << " | "
        << join_ids_md(hazard.leads_to) << " |\n";
  }

  out << "\n## Constraints\n\n";
  table_header(out, {"Id", "Inverts", "Description"});
  for (const auto& [id, constraint] : model.constraints) {
    out << "| " << id.str() << " | " << constraint.inverts.str() << " | "
        << markdown_cell(constraint.description) << " |\n";
  }

  out << "\n## Control Actions\n\n";
  table_header(out, {"Id", "From", "To", "Description"});
  for (const auto& [id, ca] : model.control_actions) {
    out << "| " << id.str() << " | " << ca.source.str() << " | " << ca.target.str() << " | "
        << markdown_cell(ca.description) << " |\n";
  }

  out << "\n## Unsafe Control Actions\n\n";
  table_header(out, {"Id", "Control action", "Guide phrase", "Context", "Hazards"});
  for (const auto& [id, uca] : model.ucas) {
    out << "| " << id.str() << " | " << uca.on.str() << " | " << to_keyword(uca.phrase) << " | "
        << markdown_cell(uca.context) << " | " << join_ids_md(uca.hazards) << " |\n";
  }

  out << "\n## Loss Scenarios\n\n";
  table_header(out, {"Id", "UCA", "Category", "Description"});
  for (const auto& [id, scenario] : model.scenarios) {
    out << "| " << id.str() << " | " << scenario.on.str() << " | "
        << to_keyword(scenario.category) << " | " << markdown_cell(scenario.description)
        << " |\n";
  }

  out << "\n## Mitigations\n\n";
  table_header(out, {"Id", "Addresses", "Status", "Description"});
  for (const auto& [id, mitigation] : model.mitigations) {
    out << "| " << id.str() << " | " << join_ids_md(mitigation.addresses) << " | "
        << to_keyword(mitigation.status) << " | " << markdown_cell(mitigation.description)
        << " |\n";
  }

  return out.str();
}

std::string to_json(const StpaModel& model) {
  ordered_json doc;
  doc["name"] = model.name;
  doc["context"] = model.context;

  doc["losses"] = ordered_json::array();
  for (const auto& [id, loss] : model.losses) {
    ordered_json entry;
    entry["id"] = id.str();
    entry["description"] = loss.description;
    if (loss.priority) entry["priority"] = *loss.priority;
    doc["losses"].push_back(std::move(entry));
  }

  doc["hazards"] = ordered_json::array();
  for (const auto& [id, hazard] : model.hazards) {
    ordered_json entry;
    entry["id"] = id.str();
    entry["description"] = hazard.description;
    entry["leads_to"] = ordered_json::array();
    for (const LossId& loss : hazard.leads_to) entry["leads_to"].push_back(loss.str());
    doc["hazards"].push_back(std::move(entry));
  }

  doc["constraints"] = ordered_json::array();
  for (const auto& [id, constraint] : model.constraints) {
    ordered_json entry;
    entry["id"] = id.str();
    entry["inverts"] = constraint.inverts.str();
    entry["description"] = constraint.description;
    doc["constraints"].push_back(std::move(entry));
  }

  doc["entities"] = ordered_json::array();
  for (const auto& [id, entity] : model.entities) {
    ordered_json entry;
    entry["id"] = id.str();
    entry["display_name"] = entity.display_name;
    entry["kind"] = std::string(to_keyword(entity.kind));
    entry["boundary"] = std::string(to_keyword(entity.boundary));
    doc["entities"].push_back(std::move(entry));
  }

  doc["control_actions"] = ordered_json::array();
  for (const auto& [id, ca] : model.control_actions) {
    ordered_json entry;
    entry["id"] = id.str();
    entry["source"] = ca.source.str();
    entry["target"] = ca.target.str();
    entry["description"] = ca.description;
    doc["control_actions"].push_back(std::move(entry));
  }

  doc["feedback_links"] = ordered_json::array();
  for (const auto& [id, fb] : model.feedback_links) {
    ordered_json entry;
    entry["id"] = id.str();
    entry["source"] = fb.source.str();
    entry["target"] = fb.target.str();
    entry["description"] = fb.description;
    doc["feedback_links"].push_back(std::move(entry));
  }

  doc["assessments"] = ordered_json::array();
  {
    std::vector<AssessmentRecord> assessments = model.assessments;
    std::sort(assessments.begin(), assessments.end(),
              [](const AssessmentRecord& a, const AssessmentRecord& b) {
                return std::tie(a.on, a.phrase, a.justification) <
                       std::tie(b.on, b.phrase, b.justification);
              });
    for (const AssessmentRecord& record : assessments) {
      ordered_json entry;
      entry["on"] = record.on.str();
      entry["phrase"] = std::string(to_keyword(record.phrase));
      entry["justification"] = record.justification;
      doc["assessments"].push_back(std::move(entry));
    }
  }

  doc["ucas"] = ordered_json::array();
  for (const auto& [id, uca] : model.ucas) {
    ordered_json entry;
    entry["id"] = id.str();
    entry["on"] = uca.on.str();
    entry["phrase"] = std::string(to_keyword(uca.phrase));
    entry["context"] = uca.context;
    entry["hazards"] = ordered_json::array();
    for (const HazardId& hazard : uca.hazards) entry["hazards"].push_back(hazard.str());
    doc["ucas"].push_back(std::move(entry));
  }

  doc["scenarios"] = ordered_json::array();
  for (const auto& [id, scenario] : model.scenarios) {
    ordered_json entry;
    entry["id"] = id.str();
    entry["on"] = scenario.on.str();
    entry["category"] = std::string(to_keyword(scenario.category));
    entry["description"] = scenario.description;
    if (scenario.mechanism) entry["mechanism"] = std::string(to_keyword(*scenario.mechanism));
    doc["scenarios"].push_back(std::move(entry));
  }

  doc["mitigations"] = ordered_json::array();
  for (const auto& [id, mitigation] : model.mitigations) {
    ordered_json entry;
    entry["id"] = id.str();
    entry["addresses"] = ordered_json::array();
    for (const ScenarioId& scenario : mitigation.addresses) {
      entry["addresses"].push_back(scenario.str());
    }
    entry["description"] = mitigation.description;
    entry["status"] = std::string(to_keyword(mitigation.status));
    doc["mitigations"].push_back(std::move(entry));
  }

  return doc.dump(2) + "\n";
}

namespace {

[[noreturn]] void bad_json(const std::string& message) {
  throw std::invalid_argument("malformed model JSON: " + message);
}

const nlohmann::json& require_field(const nlohmann::json& object, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) bad_json(std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const nlohmann::json& object, const char* key) {
  const nlohmann::json& value = require_field(object, key);
  if (!value.is_string()) bad_json(std::string("field '") + key + "' must be a string");
  return value.get<std::string>();
}

Identifier require_id(const nlohmann::json& object, const char* key) {
  std::string text = require_string(object, key);
  if (!Identifier::valid(text)) bad_json("invalid identifier '" + text + "'");
  return Identifier(text);
}

std::vector<Identifier> require_id_list(const nlohmann::json& object, const char* key) {
  const nlohmann::json& value = require_field(object, key);
  if (!value.is_array()) bad_json(std::string("field '") + key + "' must be an array");
  std::vector<Identifier> out;
  for (const nlohmann::json& item : value) {
    if (!item.is_string() || !Identifier::valid(item.get<std::string>())) {
      bad_json(std::string("field '") + key + "' must contain identifiers");
    }
    out.push_back(Identifier(item.get<std::string>()));
  }
  return out;
}

const nlohmann::json& require_array(const nlohmann::json& object, const char* key) {
  const nlohmann::json& value = require_field(object, key);
  if (!value.is_array()) bad_json(std::string("field '") + key + "' must be an array");
  return value;
}

template <typename Map, typename Element>
void insert_from_json(Map& map, Element element, const char* kind) {
  Identifier id = element.id;
  if (!map.emplace(id, std::move(element)).second) {
    bad_json(std::string("duplicate ") + kind + " id '" + id.str() + "'");
  }
}

}  // namespace

StpaModel from_json(std::string_view json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) bad_json("not a JSON object");

  StpaModel model;
  model.name = require_string(doc, "name");
  model.context = require_string(doc, "context");

  for (const nlohmann::json& entry : require_array(doc, "losses")) {
    Loss loss;
    loss.id = require_id(entry, "id");
    loss.description = require_string(entry, "description");
    if (entry.contains("priority")) {
      if (!entry["priority"].is_number_integer() || entry["priority"].get<int>() < 1) {
        bad_json("loss priority must be a positive integer");
      }
      loss.priority = entry["priority"].get<int>();
    }
    insert_from_json(model.losses, std::move(loss), "loss");
  }

  for (const nlohmann::json& entry : require_array(doc, "hazards")) {
    Hazard hazard;
    hazard.id = require_id(entry, "id");
    hazard.description = require_string(entry, "description");
    hazard.leads_to = require_id_list(entry, "leads_to");
    insert_from_json(model.hazards, std::move(hazard), "hazard");
  }

  for (const nlohmann::json& entry : require_array(doc, "constraints")) {
    SystemConstraint constraint;
    constraint.id = require_id(entry, "id");
    constraint.inverts = require_id(entry, "inverts");
    constraint.description = require_string(entry, "description");
    insert_from_json(model.constraints, std::move(constraint), "constraint");
  }

  for (const nlohmann::json& entry : require_array(doc, "entities")) {
    Entity entity;
    entity.id = require_id(entry, "id");
    entity.display_name = require_string(entry, "display_name");
    std::optional<EntityKind> kind = entity_kind_from_keyword(require_string(entry, "kind"));
    if (!kind) bad_json("unknown entity kind");
    entity.kind = *kind;
    if (entry.contains("boundary")) {
      std::optional<Boundary> boundary = boundary_from_keyword(require_string(entry, "boundary"));
      if (!boundary) bad_json("unknown boundary");
      entity.boundary = *boundary;
    }
    insert_from_json(model.entities, std::move(entity), "entity");
  }

  for (const nlohmann::json& entry : require_array(doc, "control_actions")) {
    ControlAction ca;
    ca.id = require_id(entry, "id");
    ca.source = require_id(entry, "source");
    ca.target = require_id(entry, "target");
    ca.description = require_string(entry, "description");
    insert_from_json(model.control_actions, std::move(ca), "control action");
  }

  for (const nlohmann::json& entry : require_array(doc, "feedback_links")) {
    FeedbackLink fb;
    fb.id = require_id(entry, "id");
    fb.source = require_id(entry, "source");
    fb.target = require_id(entry, "target");
    fb.description = require_string(entry, "description");
    insert_from_json(model.feedback_links, std::move(fb), "feedback link");
  }

  for (const nlohmann::json& entry : require_array(doc, "assessments")) {
    AssessmentRecord record;
    record.on = require_id(entry, "on");
    std::optional<GuidePhrase> phrase = guide_phrase_from_keyword(require_string(entry, "phrase"));
    if (!phrase) bad_json("unknown guide phrase");
    record.phrase = *phrase;
    record.justification = require_string(entry, "justification");
    model.assessments.push_back(std::move(record));
  }

  for (const nlohmann::json& entry : require_array(doc, "ucas")) {
    UcaRecord uca;
    uca.id = require_id(entry, "id");
    uca.on = require_id(entry, "on");
    std::optional<GuidePhrase> phrase = guide_phrase_from_keyword(require_string(entry, "phrase"));
    if (!phrase) bad_json("unknown guide phrase");
    uca.phrase = *phrase;
    uca.context = require_string(entry, "context");
    uca.hazards = require_id_list(entry, "hazards");
    insert_from_json(model.ucas, std::move(uca), "uca");
  }

  for (const nlohmann::json& entry : require_array(doc, "scenarios")) {
    LossScenario scenario;
    scenario.id = require_id(entry, "id");
    scenario.on = require_id(entry, "on");
    std::optional<ScenarioCategory> category =
        category_from_keyword(require_string(entry, "category"));
    if (!category) bad_json("unknown scenario category");
    scenario.category = *category;
    scenario.description = require_string(entry, "description");
    if (entry.contains("mechanism")) {
      std::optional<CausalMechanism> mechanism =
          mechanism_from_keyword(require_string(entry, "mechanism"));
      if (!mechanism) bad_json("unknown mechanism");
      scenario.mechanism = *mechanism;
    }
    insert_from_json(model.scenarios, std::move(scenario), "scenario");
  }

  for (const nlohmann::json& entry : require_array(doc, "mitigations")) {
    Mitigation mitigation;
    mitigation.id = require_id(entry, "id");
    mitigation.addresses = require_id_list(entry, "addresses");
    mitigation.description = require_string(entry, "description");
    if (entry.contains("status")) {
      std::optional<MitigationStatus> status =
          status_from_keyword(require_string(entry, "status"));
      if (!status) bad_json("unknown mitigation status");
      mitigation.status = *status;
    }
    insert_from_json(model.mitigations, std::move(mitigation), "mitigation");
  }

  sort_assessments(model);
  return model;
}

namespace {

void write_cae_nodes(std::ostringstream& out, const CaeNode& node) {
  const char* shape = "box";
  if (node.kind == CaeKind::Argument) shape = "ellipse";
  if (node.kind == CaeKind::Evidence) shape = "note";
  out << "  " << dot_quoted(node.id) << " [shape=" << shape << ", label=" << dot_quoted(node.text);
  if (!node.developed) out << ", style=dashed";
  out << "];\n";
  for (const CaeNode& child : node.children) write_cae_nodes(out, child);
}

void write_cae_edges(std::ostringstream& out, const CaeNode& node) {
  for (const CaeNode& child : node.children) {
    out << "  " << dot_quoted(node.id) << " -> " << dot_quoted(child.id) << ";\n";
    write_cae_edges(out, child);
  }
}

}  // namespace

std::string cae_to_dot(const CaeNode& root) {
  std::ostringstream out;
  out << "digraph safety_case {\n";
  write_cae_nodes(out, root);
  write_cae_edges(out, root);
  out << "}\n";
  return out.str();
}

}  // namespace stpa
