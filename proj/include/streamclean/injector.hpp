#pragma once

#include "streamclean/findings.hpp"
#include "streamclean/pipeline.hpp"
#include "streamclean/schema.hpp"
#include "streamclean/vector.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace streamclean {

struct InjectionSpec {
    ErrorType type = ErrorType::Missing;
    /// Attributes to corrupt; empty picks the type's default columns.
    std::vector<std::string> targets;
    /// Fraction of vectors per target column (value errors) or per stream (key errors)...
    std::optional<double> rate;
    /// ...or an absolute count, which wins over `rate`. With neither, default_rate applies.
    std::optional<std::size_t> count;
    std::uint64_t seed = 0;

    /// Distance beyond the violated bound, as a fraction of the interval width, drawn from (min, max].
    double interval_min_fraction = 0.0;
    double interval_max_fraction = 0.5;
    /// Outlier shift in column standard deviations, drawn from [min, max].
    double outlier_min_sigma = 4.0;
    double outlier_max_sigma = 8.0;
    /// FDs (declaration indices) to violate; empty means all.
    std::vector<std::size_t> fds;
    /// Surface form recorded for missing values; must be one of the attribute's markers.
    std::optional<std::string> missing_marker;
};

struct InjectionEntry {
    std::uint64_t vector_index = 0;
    std::optional<std::string> attribute;
    ErrorType type = ErrorType::Missing;
    AttributeValue original;
    AttributeValue injected;

    friend bool operator==(const InjectionEntry&, const InjectionEntry&) = default;
};

struct InjectionLog {
    std::vector<InjectionEntry> entries;

    /// Entries per attribute name; whole-vector entries count under every column.
    std::map<std::string, std::size_t> per_column(const Schema& schema) const;
    std::size_t total() const { return entries.size(); }

    friend bool operator==(const InjectionLog&, const InjectionLog&) = default;
};

struct InjectionResult {
    std::vector<DataVector> corrupted;
    InjectionLog log;
};

class InjectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 5 % of the stream for key and whole-vector errors, 2.5 % per column for value errors.
double default_rate(ErrorType type);

/// Default columns a spec of this type corrupts when it names none.
std::vector<std::size_t> default_targets(const Schema& schema, ErrorType type);

/// Corrupts a copy of `dataset`. Throws InjectionError when the spec is infeasible.
InjectionResult inject(const std::vector<DataVector>& dataset, const Schema& schema, const InjectionSpec& spec);

/// Every rule-based detector the schema supports, detection only. Outlier detection is
/// statistical and is not part of certification.
PipelineConfig certification_config(const Schema& schema);

/// Findings of a detection-only run; empty certifies `dataset` as ground truth.
std::vector<Finding> verify_ground_truth(const std::vector<DataVector>& dataset, const PipelineConfig& config);

}  // namespace streamclean
