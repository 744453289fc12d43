#pragma once

#include "streamclean/detectors.hpp"
#include "streamclean/findings.hpp"
#include "streamclean/schema.hpp"
#include "streamclean/state.hpp"
#include "streamclean/vector.hpp"

#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace streamclean {

enum class WrongTypeRepair { Convert, ConvertWithFixups, DeleteValue };
enum class IntervalRepair { ClampNearest, RandomInInterval, DistributionMean, CostBased };
enum class MissingRepair { DeleteVector, LeaveNullWithRule, Mean, Median, Mode, LastValue, PreviousOnlyInterpolation };
enum class OrderConflictRepair { RejectVector, AlignToFirst };
enum class OutlierRepair { NearestNonOutlier, DistributionMean, DeleteValue };
enum class FdRepair { SetDependentFromMapping, RejectVector };
enum class MissingVectorRepair { SynthesizeLastValue, SynthesizeInterpolated };

/// Missing-value strategy per attribute, with a fallback for unlisted ones.
struct MissingRepairPlan {
    MissingRepair fallback = MissingRepair::Mean;
    std::map<std::string, MissingRepair> per_attribute;

    MissingRepair for_attribute(const std::string& name) const;
};

using RepairStrategy = std::variant<WrongTypeRepair, IntervalRepair, MissingRepairPlan, OrderConflictRepair,
                                    OutlierRepair, FdRepair, MissingVectorRepair>;

std::string_view to_string(WrongTypeRepair s);
std::string_view to_string(IntervalRepair s);
std::string_view to_string(MissingRepair s);
std::string_view to_string(OrderConflictRepair s);
std::string_view to_string(OutlierRepair s);
std::string_view to_string(FdRepair s);
std::string_view to_string(MissingVectorRepair s);

/// Parses a strategy name for the given error type. nullopt for names illegal for that type.
std::optional<RepairStrategy> parse_repair_strategy(ErrorType type, std::string_view name);
std::optional<MissingRepair> parse_missing_repair(std::string_view name);
/// True when `strategy` belongs to `type`.
bool strategy_fits(ErrorType type, const RepairStrategy& strategy);

struct Change {
    std::string attribute;
    AttributeValue old_value;
    AttributeValue new_value;
    std::string strategy;

    friend bool operator==(const Change&, const Change&) = default;
};

enum class Outcome { Pass, Repaired, Deleted };
std::string_view to_string(Outcome o);

/// Audit record of what one stage did to one vector.
struct CleaningDecision {
    std::uint64_t vector_index = 0;
    Outcome outcome = Outcome::Pass;
    std::vector<Change> changes;
    std::vector<Finding> findings;
    /// Deferrals, fallbacks and failed conversions.
    std::vector<std::string> notes;

    friend bool operator==(const CleaningDecision&, const CleaningDecision&) = default;
};

struct RepairResult {
    DataVector vector;
    CleaningDecision decision;

    bool deleted() const { return decision.outcome == Outcome::Deleted; }
};

/// Lenient conversion: surrounding whitespace, boolean spellings, and cross-variant
/// numeric conversion.
std::optional<AttributeValue> convert_plain(const AttributeValue& value, ValueType type);
/// convert_plain plus decimal-comma, thousands-separator, day-first and compact date fixes.
std::optional<AttributeValue> convert_with_fixups(const AttributeValue& value, ValueType type);

RepairResult repair_wrong_type(const DataVector& v, std::span<const Finding> findings, const Schema& schema,
                               WrongTypeRepair strategy);

/// Nearest value inside the attribute's interval; nullopt for non-ordinal discrete sets.
std::optional<AttributeValue> clamp_into(const AttributeValue& value, const SchemaAttribute& attr);

RepairResult repair_interval(const DataVector& v, std::span<const Finding> findings, const Profile& profile,
                             const Schema& schema, IntervalRepair strategy, std::mt19937_64& rng);

/// `profile` feeds mean/median/mode; last-value and interpolation read the committed prefix in `state`.
RepairResult repair_missing(const DataVector& v, std::span<const Finding> findings, const StreamState& state,
                            const Profile& profile, const Schema& schema, const MissingRepairPlan& plan);

/// Throws UsageError for align_to_first on anything but contradiction findings.
RepairResult repair_order_conflict(const DataVector& v, std::span<const Finding> findings, const StreamState& state,
                                   const Schema& schema, OrderConflictRepair strategy);

/// Replacement for an outlier: closest value the detector accepts on the same statistics.
std::optional<double> nearest_non_outlier(double x, const RunningStats& stats, const OutlierParams& params,
                                          ValueType type);

RepairResult repair_outlier(const DataVector& v, std::span<const Finding> findings,
                            std::span<const RunningStats> stats, const Schema& schema, OutlierRepair strategy,
                            const OutlierParams& params);

/// Overlapping FDs are applied in declaration order; a later FD overwrites an earlier one.
RepairResult repair_fd(const DataVector& v, std::span<const Finding> findings, const Schema& schema,
                       FdRepair strategy, const StreamState* state = nullptr);

/// Vectors for the slots missing before `v`, tagged synthetic, in slot order.
std::vector<DataVector> synthesize_missing_vectors(const StreamState& state, const DataVector& v,
                                                   const Schema& schema, MissingVectorRepair strategy);

}  // namespace streamclean
