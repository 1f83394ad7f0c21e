#pragma once

#include <string>
#include <vector>

#include "pathqv/experiments.hpp"
#include "pathqv/models.hpp"

namespace pathqv {

/// Named model presets (see docs/config_schema.md).
ProcessModel preset_model(const std::string& name);
std::vector<std::string> preset_model_names();

/// JSON text of a model object, or a JSON string naming a preset.
/// Unknown keys and ill-typed values raise ConfigError.
ProcessModel model_from_json(const std::string& json_text);
std::string model_to_json(const ProcessModel& model);

CoupledSequence sequence_from_json(const std::string& json_text);
std::string sequence_to_json(const CoupledSequence& seq);

/// An experiment object; a "scenario" naming a preset supplies defaults that
/// the remaining keys override.
ExperimentSpec experiment_from_json(const std::string& json_text);
std::string experiment_to_json(const ExperimentSpec& spec);

}  // namespace pathqv
