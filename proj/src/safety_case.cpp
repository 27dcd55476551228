#include "stpa/safety_case.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

namespace stpa {

namespace {

using ordered_json = nlohmann::ordered_json;

class IdAllocator {
 public:
  std::string allocate(const std::string& base) {
    int count = ++used_[base];
    if (count == 1) return base;
    return base + "-" + std::to_string(count);
  }

 private:
  std::map<std::string, int> used_;
};

std::string join_ids(const std::vector<Identifier>& ids) {
  std::string out;
  for (const Identifier& id : ids) {
    if (!out.empty()) out += ", ";
    out += id.str();
  }
  return out;
}

struct CaseBuilder {
  const StpaModel& model;
  IdAllocator ids;

  CaeNode claim(const std::string& base, std::string text, std::optional<Identifier> source) {
    CaeNode node;
    node.id = ids.allocate("c-" + base);
    node.kind = CaeKind::Claim;
    node.text = std::move(text);
    node.source_element = std::move(source);
    return node;
  }

  CaeNode argument(const std::string& base, ArgumentType type, std::string text,
                   std::optional<Identifier> source) {
    CaeNode node;
    node.id = ids.allocate("a-" + base);
    node.kind = CaeKind::Argument;
    node.text = std::move(text);
    node.argument_type = type;
    node.source_element = std::move(source);
    return node;
  }

  CaeNode evidence(const Mitigation& mitigation) {
    CaeNode node;
    node.id = ids.allocate("e-" + mitigation.id.str());
    node.kind = CaeKind::Evidence;
    node.text = "Mitigation " + mitigation.id.str() + " (" +
                std::string(to_keyword(mitigation.status)) + "): " + mitigation.description;
    node.source_element = mitigation.id;
    return node;
  }

  // Control actions with at least one UCA citing the hazard, with those
  // UCAs; this link is the only machine-checkable connection between a
  // hazard and the control actions meant to prevent it.
  std::map<CaId, std::vector<UcaId>> cas_for_hazard(const HazardId& hazard) const {
    std::map<CaId, std::vector<UcaId>> out;
    for (const auto& [id, uca] : model.ucas) {
      if (std::find(uca.hazards.begin(), uca.hazards.end(), hazard) != uca.hazards.end()) {
        out[uca.on].push_back(id);
      }
    }
    return out;
  }

  CaeNode build_uca_argument(const UcaId& uca_id) {
    std::vector<ScenarioId> scenario_ids;
    for (const auto& [id, scenario] : model.scenarios) {
      if (scenario.on == uca_id) scenario_ids.push_back(id);
    }

    std::string text;
    if (scenario_ids.empty()) {
      text = "Unsafe control action " + uca_id.str() +
             " is prevented; no loss scenarios identified";
    } else {
      text = "Unsafe control action " + uca_id.str() +
             " is prevented by mitigating its loss scenarios: " + join_ids(scenario_ids);
    }
    CaeNode node =
        argument(uca_id.str(), ArgumentType::EvidenceIncorporation, std::move(text), uca_id);

    std::set<ScenarioId> scenario_set(scenario_ids.begin(), scenario_ids.end());
    for (const auto& [id, mitigation] : model.mitigations) {
      bool addresses =
          std::any_of(mitigation.addresses.begin(), mitigation.addresses.end(),
                      [&](const ScenarioId& s) { return scenario_set.count(s) > 0; });
      if (addresses) node.children.push_back(evidence(mitigation));
    }

    if (node.children.empty()) {
      // Arguments are never leaves: an evidence gap ends the branch in an
      // undeveloped claim so the hole stays visible.
      CaeNode gap = claim(uca_id.str(),
                          "Loss scenarios for " + uca_id.str() + " are identified and mitigated",
                          uca_id);
      gap.developed = false;
      node.children.push_back(std::move(gap));
    }
    return node;
  }

  CaeNode build_ca_claim(const CaId& ca_id, const std::vector<UcaId>& ucas) {
    CaeNode node = claim(ca_id.str(),
                         "Control action " + ca_id.str() +
                             " is not provided in an unsafe manner (" + join_ids(ucas) + ")",
                         ca_id);
    for (const UcaId& uca : ucas) {
      node.children.push_back(build_uca_argument(uca));
    }
    return node;
  }

  CaeNode build_hazard_claim(const HazardId& hazard_id) {
    CaeNode node = claim(hazard_id.str(), "Hazard " + hazard_id.str() + " is prevented",
                         hazard_id);
    const std::map<CaId, std::vector<UcaId>> cas = cas_for_hazard(hazard_id);
    if (cas.empty()) {
      node.developed = false;
      return node;
    }
    std::vector<CaId> ca_ids;
    for (const auto& [id, ucas] : cas) ca_ids.push_back(id);
    CaeNode arg = argument(hazard_id.str(), ArgumentType::Enumeration,
                           "Hazard " + hazard_id.str() +
                               " is prevented by safe provision of control actions: " +
                               join_ids(ca_ids),
                           hazard_id);
    for (const auto& [id, ucas] : cas) {
      arg.children.push_back(build_ca_claim(id, ucas));
    }
    node.children.push_back(std::move(arg));
    return node;
  }

  CaeNode build_loss_claim(const Loss& loss) {
    CaeNode node = claim(loss.id.str(), "Loss " + loss.id.str() + " is prevented", loss.id);
    std::vector<HazardId> hazard_ids;
    for (const auto& [id, hazard] : model.hazards) {
      if (std::find(hazard.leads_to.begin(), hazard.leads_to.end(), loss.id) !=
          hazard.leads_to.end()) {
        hazard_ids.push_back(id);
      }
    }
    if (hazard_ids.empty()) {
      node.developed = false;
      return node;
    }
    CaeNode arg = argument(loss.id.str(), ArgumentType::Decomposition,
                           "Loss " + loss.id.str() +
                               " is prevented if each hazard that can lead to it is prevented: " +
                               join_ids(hazard_ids),
                           loss.id);
    for (const HazardId& hazard : hazard_ids) {
      arg.children.push_back(build_hazard_claim(hazard));
    }
    node.children.push_back(std::move(arg));
    return node;
  }

  CaeNode build_top(const std::string& context) {
    std::string text = context.empty() ? "The system is safe to deploy"
                                       : "The system is safe to deploy in context: " + context;
    CaeNode top = claim("top", std::move(text), std::nullopt);
    if (model.losses.empty()) {
      top.developed = false;
      return top;
    }
    CaeNode arg = argument("losses", ArgumentType::Decomposition,
                           "The system is safe if each identified loss is prevented",
                           std::nullopt);
    for (const auto& [id, loss] : model.losses) {
      arg.children.push_back(build_loss_claim(loss));
    }
    top.children.push_back(std::move(arg));
    return top;
  }
};

ordered_json node_to_json(const CaeNode& node) {
  ordered_json out;
  out["id"] = node.id;
  out["kind"] = std::string(to_keyword(node.kind));
  out["text"] = node.text;
  if (node.argument_type) out["argument_type"] = std::string(to_keyword(*node.argument_type));
  if (node.source_element) out["source_element"] = node.source_element->str();
  out["developed"] = node.developed;
  out["children"] = ordered_json::array();
  for (const CaeNode& child : node.children) {
    out["children"].push_back(node_to_json(child));
  }
  return out;
}

}  // namespace

std::string_view to_keyword(CaeKind kind) {
  switch (kind) {
    case CaeKind::Claim: return "claim";
    case CaeKind::Argument: return "argument";
    case CaeKind::Evidence: return "evidence";
  }
  return "claim";
}

std::string_view to_keyword(ArgumentType type) {
  switch (type) {
    case ArgumentType::Decomposition: return "decomposition";
    case ArgumentType::Enumeration: return "enumeration";
    case ArgumentType::EvidenceIncorporation: return "evidence_incorporation";
  }
  return "decomposition";
}

CaeNode generate_case(const StpaModel& model, const std::string& context) {
  CaseBuilder builder{model, {}};
  return builder.build_top(context);
}

std::string case_to_json(const CaeNode& root) {
  return node_to_json(root).dump(2) + "\n";
}

std::string case_document_to_json(const StpaModel& model, const CaeNode& root) {
  ordered_json doc;
  doc["model"] = model.name;
  doc["constraints"] = ordered_json::array();
  for (const auto& [id, constraint] : model.constraints) {
    ordered_json entry;
    entry["id"] = id.str();
    entry["inverts"] = constraint.inverts.str();
    entry["description"] = constraint.description;
    doc["constraints"].push_back(std::move(entry));
  }
  doc["case"] = node_to_json(root);
  return doc.dump(2) + "\n";
}

}  // namespace stpa
