#ifndef RADAR_JSON_IO_H
#define RADAR_JSON_IO_H

#include "advisor.h"

#include <json.hpp>

#include <vector>

namespace radar {
// Integral quantities encode as JSON integers, others as "p/q" strings.
nlohmann::json to_json(const Quantity &q);
Quantity quantity_from_json(const nlohmann::json &j);
std::string quantity_text(const nlohmann::json &j);

// Relaxed levels; null encodes "unreachable".
nlohmann::json level_json(int level);

nlohmann::json to_json(const ActionClassification &c);
ActionClassification classification_from_json(const nlohmann::json &j);

nlohmann::json to_json(const State &s);
State state_from_json(const nlohmann::json &j);

nlohmann::json to_json(const GroundAction &a);
nlohmann::json to_json(const RelaxedPlanningGraph &rpg);

// Statuses are optional; when given they are attached per node.
nlohmann::json to_json(const LandmarkGraph &graph,
                       const std::vector<LandmarkStatus> *statuses = nullptr);

nlohmann::json to_json(const ShortfallAlternative &alt);
nlohmann::json to_json(const Advisory &a);
Advisory advisory_from_json(const nlohmann::json &j);
nlohmann::json to_json(const std::vector<Advisory> &advisories);
nlohmann::json to_json(const PlanValidationReport &report);
nlohmann::json to_json(const SearchResult &result);
}

#endif
