#pragma once

#include "streamclean/findings.hpp"
#include "streamclean/schema.hpp"
#include "streamclean/state.hpp"
#include "streamclean/vector.hpp"

#include <optional>
#include <span>
#include <vector>

namespace streamclean {

// Every detector reads only the incoming vector and the state of the committed
// prefix. Null values are left to detect_missing.

std::vector<Finding> detect_wrong_type(const DataVector& v, const Schema& schema);

/// Requires a key (or unique attributes); throws UsageError otherwise. A null key
/// value yields a missing finding instead of a uniqueness finding.
std::vector<Finding> detect_uniqueness(const DataVector& v, const StreamState& state, const Schema& schema);

std::vector<Finding> detect_interval(const DataVector& v, const Schema& schema);

/// `state` supplies mappings learned under the learn-first-seen policy; it may be null.
std::vector<Finding> detect_fd(const DataVector& v, const Schema& schema, const StreamState* state = nullptr);

std::vector<Finding> detect_missing(const DataVector& v, const Schema& schema);

/// Number of expected slots between two arrivals, rounding the gap to whole cadences.
std::int64_t missing_slots(Instant previous, Instant current, Duration cadence);

/// Throws UsageError when the schema has no expected cadence.
std::vector<Finding> detect_missing_vectors(const StreamState& state, const DataVector& v, const Schema& schema);

std::optional<Finding> detect_duplicate(const DataVector& v, const StreamState& state);

std::vector<Finding> detect_contradiction(const DataVector& v, const StreamState& state, const Schema& schema);

struct OutlierParams {
    double threshold = 3.0;
    std::uint64_t warmup = 30;
    /// Attribute positions to check; empty checks every numeric non-key attribute.
    std::vector<std::size_t> targets;
};

/// Rolling z-score rule over the supplied per-attribute statistics.
bool is_outlier(double x, const RunningStats& stats, const OutlierParams& params);

std::vector<Finding> detect_outlier(const DataVector& v, std::span<const RunningStats> stats, const Schema& schema,
                                    const OutlierParams& params);

/// Attribute positions detect_outlier examines under `params`.
std::vector<std::size_t> outlier_targets(const Schema& schema, const OutlierParams& params);

}  // namespace streamclean
