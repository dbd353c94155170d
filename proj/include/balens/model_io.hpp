#pragma once

#include <string>

#include <json.hpp>

#include "balens/ensemble.hpp"

namespace balens {

// JSON persistence for fitted models. Field order is fixed (ordered_json)
// and doubles use shortest round-trip form, so serializing the same model
// twice yields identical bytes.

nlohmann::ordered_json tree_to_json(const TreeModel& model);
TreeModel tree_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json ensemble_to_json(const EnsembleModel& model);
EnsembleModel ensemble_from_json(const nlohmann::ordered_json& j);

// File variants. Throws IoError on unreadable or unwritable paths,
// InvalidArgument on documents that do not describe a model.
void save_ensemble(const EnsembleModel& model, const std::string& path);
EnsembleModel load_ensemble(const std::string& path);

}  // namespace balens
