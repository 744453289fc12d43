#pragma once

#include "streamclean/injector.hpp"
#include "streamclean/pipeline.hpp"
#include "streamclean/schema.hpp"

#include <optional>
#include <string>
#include <vector>

namespace streamclean {

/// Schema documents are JSON objects with keys `attributes`, `functional_dependencies`,
/// `expected_cadence_ms`, `contradiction_scope` and `arrival_attribute`. Throws ConfigError
/// on malformed documents or schema faults.
Schema schema_from_json(const std::string& text);
std::string schema_to_json(const Schema& schema);

/// Everything a config document can set.
struct RunConfig {
    PipelineConfig pipeline;
    /// Present when the document has an `injection` section.
    std::optional<InjectionSpec> injection;
    bool include_synthetic = false;
};

/// Config documents hold `seed`, `type_repair`, `horizon`, `modules`, `injection` and
/// `include_synthetic`; every key is optional. Throws ConfigError.
RunConfig config_from_json(const std::string& text, const Schema& schema);
std::string config_to_json(const RunConfig& config);

/// Reorders or replaces the module list by error-type names. Types the config already
/// configures keep their settings; others run detection only. Throws ConfigError.
void select_modules(PipelineConfig& config, const std::vector<std::string>& names);

}  // namespace streamclean
