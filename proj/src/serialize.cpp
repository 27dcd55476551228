#include "stpa/serialize.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace stpa {

namespace {

std::string quoted(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 2);
  out += '"';
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

void write_id_list(std::ostringstream& out, const std::vector<Identifier>& ids) {
  out << '[';
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out << ", ";
    out << ids[i].str();
  }
  out << ']';
}

}  // namespace

std::string serialize(const StpaModel& model) {
  std::ostringstream out;
  out << "model " << quoted(model.name) << " context " << quoted(model.context) << '\n';

  for (const auto& [id, loss] : model.losses) {
    out << "loss " << id.str() << ' ' << quoted(loss.description);
    if (loss.priority) out << " priority " << *loss.priority;
    out << '\n';
  }
  for (const auto& [id, hazard] : model.hazards) {
    out << "hazard " << id.str() << ' ' << quoted(hazard.description) << " leads_to ";
    write_id_list(out, hazard.leads_to);
    out << '\n';
  }
  for (const auto& [id, constraint] : model.constraints) {
    out << "constraint " << id.str() << " inverts " << constraint.inverts.str() << ' '
        << quoted(constraint.description) << '\n';
  }
  for (const auto& [id, entity] : model.entities) {
    out << "entity " << id.str() << ' ' << quoted(entity.display_name) << " kind "
        << to_keyword(entity.kind);
    if (entity.boundary != Boundary::Inside) out << " boundary " << to_keyword(entity.boundary);
    out << '\n';
  }
  for (const auto& [id, ca] : model.control_actions) {
    out << "ca " << id.str() << " from " << ca.source.str() << " to " << ca.target.str() << ' '
        << quoted(ca.description) << '\n';
  }
  for (const auto& [id, fb] : model.feedback_links) {
    out << "fb " << id.str() << " from " << fb.source.str() << " to " << fb.target.str() << ' '
        << quoted(fb.description) << '\n';
  }

  std::vector<AssessmentRecord> assessments = model.assessments;
  std::sort(assessments.begin(), assessments.end(),
            [](const AssessmentRecord& a, const AssessmentRecord& b) {
              return std::tie(a.on, a.phrase, a.justification) <
                     std::tie(b.on, b.phrase, b.justification);
            });
  for (const AssessmentRecord& record : assessments) {
    out << "assessed " << record.on.str() << " type " << to_keyword(record.phrase) << " none "
        << quoted(record.justification) << '\n';
  }

  for (const auto& [id, uca] : model.ucas) {
    out << "uca " << id.str() << " on " << uca.on.str() << " type " << to_keyword(uca.phrase)
        << " context " << quoted(uca.context) << " hazards ";
    write_id_list(out, uca.hazards);
    out << '\n';
  }
  for (const auto& [id, scenario] : model.scenarios) {
    out << "scenario " << id.str() << " on " << scenario.on.str() << " category "
        << to_keyword(scenario.category) << ' ' << quoted(scenario.description);
    if (scenario.mechanism) out << " mechanism " << to_keyword(*scenario.mechanism);
    out << '\n';
  }
  for (const auto& [id, mitigation] : model.mitigations) {
    out << "mitigation " << id.str() << " addresses ";
    write_id_list(out, mitigation.addresses);
    out << ' ' << quoted(mitigation.description);
    if (mitigation.status != MitigationStatus::Proposed) {
      out << " status " << to_keyword(mitigation.status);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace stpa
