#pragma once

#include <string>

#include "pax/solver.hpp"

namespace pax {

// model and mechanism files are JSON; parse errors carry the offending field.
// Serializers are deterministic: sorted keys, locale-independent numbers.
CrisisModel parse_model(const std::string& text);
CrisisModel load_model(const std::string& path);
std::string model_to_json(const CrisisModel& m);
void save_model(const std::string& path, const CrisisModel& m);

DirectMechanism parse_mechanism(const std::string& text);
DirectMechanism load_mechanism(const std::string& path);
std::string mechanism_to_json(const DirectMechanism& mech);
void save_mechanism(const std::string& path, const DirectMechanism& mech);

// report renderings, text for humans and JSON for machines; both deterministic
std::string to_text(const PlausibilityReport& r);
std::string to_json(const PlausibilityReport& r);
std::string to_text(const AuditReport& r);
std::string to_json(const AuditReport& r);
std::string to_text(const ConstructionResult& r);
std::string to_json(const ConstructionResult& r);
std::string to_text(const WarRegionReport& r);
std::string to_json(const WarRegionReport& r);
std::string to_text(const SolveResult& r);
std::string to_json(const SolveResult& r);

// lhs = 1 within this slack counts as the knife-edge verdict in reports

}  // namespace pax
