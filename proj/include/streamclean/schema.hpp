#pragma once

#include "streamclean/value.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace streamclean {

/// Closed or half-open numeric range. Instants are bounded by epoch milliseconds.
struct ContinuousInterval {
    double lower = 0.0;
    double upper = 0.0;
    bool lower_inclusive = true;
    bool upper_inclusive = true;

    bool contains(double x) const {
        const bool above = lower_inclusive ? x >= lower : x > lower;
        const bool below = upper_inclusive ? x <= upper : x < upper;
        return above && below;
    }
    double width() const { return upper - lower; }
};

struct DiscreteInterval {
    std::vector<AttributeValue> allowed;

    bool contains(const AttributeValue& v) const;
};

class IntervalConstraint {
public:
    IntervalConstraint(ContinuousInterval c) : bounds_(c) {}
    IntervalConstraint(DiscreteInterval d) : bounds_(std::move(d)) {}

    bool is_continuous() const { return std::holds_alternative<ContinuousInterval>(bounds_); }
    const ContinuousInterval& continuous() const { return std::get<ContinuousInterval>(bounds_); }
    const DiscreteInterval& discrete() const { return std::get<DiscreteInterval>(bounds_); }

    /// Null values are never checked here.
    bool contains(const AttributeValue& v) const;

private:
    std::variant<ContinuousInterval, DiscreteInterval> bounds_;
};

enum class UnknownTuplePolicy { Ignore, LearnFirstSeen, Reject };

struct FunctionalDependency {
    std::vector<std::string> determinant;
    std::string dependent;
    std::map<ValueTuple, AttributeValue> mapping;
    UnknownTuplePolicy unknown = UnknownTuplePolicy::Ignore;

    std::string label() const;
};

struct SchemaAttribute {
    std::string name;
    ValueType type = ValueType::Float;
    bool nullable = false;
    bool unique = false;
    bool key_member = false;
    std::optional<IntervalConstraint> interval;
    /// Surface encodings treated as missing, matched against raw text.
    std::set<std::string> missing_markers;
};

struct SchemaFault {
    std::string subject;
    std::string message;
};

class Schema {
public:
    std::vector<SchemaAttribute> attributes;
    std::vector<FunctionalDependency> functional_dependencies;
    std::optional<Duration> expected_cadence;
    std::vector<std::string> contradiction_scope;
    /// Attribute whose value is the arrival time when a stream file carries none.
    std::optional<std::string> arrival_attribute;

    std::size_t arity() const { return attributes.size(); }
    std::optional<std::size_t> position(std::string_view name) const;
    /// Throws std::out_of_range for unknown names.
    std::size_t require_position(std::string_view name) const;

    /// Key columns: key_member attributes, or the unique attributes when no key is declared.
    std::vector<std::size_t> key_positions() const;
    std::vector<std::size_t> scope_positions() const;
    /// Column participates in mean/std ratios (numeric and not categorical).
    bool is_ratio_column(std::size_t pos) const;
    bool is_numeric(std::size_t pos) const;
};

/// Empty iff every schema invariant holds.
std::vector<SchemaFault> validate_schema(const Schema& schema);

}  // namespace streamclean
