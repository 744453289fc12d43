#pragma once

#include "streamclean/detectors.hpp"
#include "streamclean/repairers.hpp"
#include "streamclean/schema.hpp"
#include "streamclean/state.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace streamclean {

/// One optional cleaning stage: a detector plus an optional repair.
struct ModuleConfig {
    ErrorType type = ErrorType::Missing;
    /// Absent means detection only.
    std::optional<RepairStrategy> repair;
    OutlierParams outlier;
    /// Statistics come from this window instead of the full prefix.
    std::optional<WindowSpec> window;
};

struct PipelineConfig {
    Schema schema;
    std::vector<ModuleConfig> modules;
    std::uint64_t seed = 0;
    Horizon horizon;
    /// Repair used by the mandatory type-check stage; absent means detection only.
    std::optional<WrongTypeRepair> type_repair = WrongTypeRepair::ConvertWithFixups;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> faults);
    const std::vector<std::string>& faults() const { return faults_; }

private:
    std::vector<std::string> faults_;
};

class OrderingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything the pipeline did with one input vector.
struct VectorLog {
    std::uint64_t index = 0;
    /// Merged over all stages: changes, findings and notes in stage order.
    CleaningDecision summary;
    /// One decision per stage that ran; the type check comes first.
    std::vector<CleaningDecision> stages;
};

struct RunLog {
    std::vector<VectorLog> entries;
    /// Committed output, synthetic vectors included and tagged.
    std::vector<DataVector> committed;

    std::size_t deletions() const;
    std::vector<Finding> findings() const;
};

/// Fault list for a configuration; empty when it can be built.
std::vector<std::string> validate_config(const PipelineConfig& config);

/// Copy of `config` with every repair removed.
PipelineConfig detection_only(PipelineConfig config);

class Pipeline {
public:
    /// Throws ConfigError when validate_config reports faults.
    static Pipeline build(PipelineConfig config);

    /// Runs the type check and every module on `v`, then commits it unless a stage deleted it.
    /// Throws OrderingError, leaving the pipeline untouched, when `v` is out of order.
    VectorLog process(const DataVector& v, std::vector<DataVector>* committed = nullptr);

    const PipelineConfig& config() const { return config_; }
    const StreamState& state() const { return state_; }
    std::uint64_t processed() const { return processed_; }

private:
    explicit Pipeline(PipelineConfig config);

    CleaningDecision run_module(const ModuleConfig& module, DataVector& v, std::vector<DataVector>* committed);

    PipelineConfig config_;
    StreamState state_;
    std::mt19937_64 rng_;
    std::uint64_t processed_ = 0;
    std::optional<Instant> last_arrival_;
};

RunLog run_stream(Pipeline& pipeline, const std::vector<DataVector>& source);

/// Same contract as run_stream, with the source pulled on a producer thread through a
/// bounded queue. `next` returns nullopt at end of stream.
RunLog run_stream_threaded(Pipeline& pipeline, std::function<std::optional<DataVector>()> next,
                           std::size_t queue_capacity = 256);

}  // namespace streamclean
