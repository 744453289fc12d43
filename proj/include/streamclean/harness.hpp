#pragma once

#include "streamclean/config.hpp"
#include "streamclean/evaluator.hpp"
#include "streamclean/injector.hpp"
#include "streamclean/pipeline.hpp"
#include "streamclean/schema.hpp"
#include "streamclean/vector.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace streamclean {

struct PrepResult {
    std::vector<DataVector> data;
    /// One line per filled gap edge, dropped row or other adjustment.
    std::vector<std::string> log;
};

struct IntelPrepOptions {
    /// Attribute holding the measurement time; defaults to the schema's arrival attribute.
    std::optional<std::string> time_attribute;
    /// Grid start; defaults to the earliest measurement.
    std::optional<Instant> start;
    /// Grid size; defaults to the span of the measurements.
    std::optional<std::size_t> slots;
};

/// Resamples a measured series onto the schema's cadence grid. Gaps are filled by linear
/// interpolation between the neighbouring present values of each attribute; leading and
/// trailing gaps take the nearest present value. Throws ConfigError without a cadence or
/// time attribute.
PrepResult prep_intel(const std::vector<DataVector>& raw, const Schema& schema, const IntelPrepOptions& options = {});

struct TaxiPrepOptions {
    std::string dropoff_attribute = "tpep_dropoff_datetime";
    std::string cancel_attribute = "storno_flag";
    std::string cancel_value = "cancel_out";
    std::int64_t min_delay_ms = 5'000;
    std::int64_t max_delay_ms = 60'000;
    std::int64_t cancel_extra_ms = 60'000;
};

/// Stamps each trip with an arrival time after its dropoff and orders the stream by it.
/// The arrival is also written to the schema's arrival attribute when there is one.
PrepResult prep_taxi(const std::vector<DataVector>& raw, const Schema& schema, std::uint64_t seed,
                     const TaxiPrepOptions& options = {});

enum class SyntheticProfile { IntelLike, TaxiLike };

std::optional<SyntheticProfile> synthetic_profile_from_string(std::string_view name);

struct Dataset {
    Schema schema;
    std::vector<DataVector> data;
};

Schema intel_like_schema();
Schema taxi_like_schema();

/// Throws ConfigError for size < 100.
Dataset synthesize_dataset(SyntheticProfile profile, std::size_t size, std::uint64_t seed);

struct ExperimentSpec {
    Dataset truth;
    InjectionSpec injection;
    PipelineConfig pipeline;
    std::filesystem::path out_dir;
    std::uint64_t seed = 0;
    bool include_synthetic = false;
    /// Reproduction runs hold at most one module, matching the injected type.
    bool single_error_type = true;
};

struct ExperimentResult {
    InjectionResult injection;
    RunLog run;
    MetricsReport report;
};

/// Injects, cleans and scores without touching the file system.
ExperimentResult evaluate_experiment(const ExperimentSpec& spec);

/// evaluate_experiment plus persistence: corrupted.csv, injection_log.csv, run_log.json,
/// cleaned.csv, report.csv, report.json, schema.json, config.json and manifest.json under
/// out_dir. Files are staged next to out_dir and moved into place only when all are written.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace streamclean
