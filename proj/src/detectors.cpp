#include "streamclean/detectors.hpp"

#include <algorithm>
#include <cmath>

namespace streamclean {

namespace {

Finding value_finding(const DataVector& v, const Schema& schema, std::size_t pos, ErrorType type,
                      std::string detail) {
    return Finding{v.index, schema.attributes[pos].name, type, std::move(detail)};
}

std::string render(const AttributeValue& value) { return value.is_null() ? "null" : format_value(value); }

}  // namespace

std::vector<Finding> detect_wrong_type(const DataVector& v, const Schema& schema) {
    std::vector<Finding> out;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const auto& value = v.values[i];
        if (value.is_null()) continue;
        const auto declared = schema.attributes[i].type;
        if (v.has_type_fault(i) || !value.matches(declared)) {
            out.push_back(value_finding(v, schema, i, ErrorType::WrongType,
                                        "'" + format_value(value) + "' is not a valid " +
                                            std::string(to_string(declared))));
        }
    }
    return out;
}

std::vector<Finding> detect_uniqueness(const DataVector& v, const StreamState& state, const Schema& schema) {
    const auto keys = schema.key_positions();
    if (keys.empty()) throw UsageError("uniqueness detection needs a key or unique attribute");

    std::vector<Finding> out;
    for (auto p : keys) {
        if (v.values[p].is_null()) {
            out.push_back(value_finding(v, schema, p, ErrorType::Missing, "null in unique attribute"));
        }
    }
    if (!out.empty()) return out;

    const auto key = state.key_of(v);
    if (!state.keys().contains(key, state.probe(v.arrival))) return out;
    for (auto p : keys) {
        out.push_back(value_finding(v, schema, p, ErrorType::Uniqueness,
                                    "value " + render(v.values[p]) + " already seen"));
    }
    return out;
}

std::vector<Finding> detect_interval(const DataVector& v, const Schema& schema) {
    std::vector<Finding> out;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const auto& attr = schema.attributes[i];
        const auto& value = v.values[i];
        if (!attr.interval || value.is_null() || v.has_type_fault(i)) continue;
        if (!attr.interval->contains(value)) {
            out.push_back(value_finding(v, schema, i, ErrorType::Interval, render(value) + " outside permitted range"));
        }
    }
    return out;
}

std::vector<Finding> detect_fd(const DataVector& v, const Schema& schema, const StreamState* state) {
    std::vector<Finding> out;
    for (std::size_t f = 0; f < schema.functional_dependencies.size(); ++f) {
        const auto& fd = schema.functional_dependencies[f];
        const auto dep_pos = schema.require_position(fd.dependent);
        const auto& dep = v.values[dep_pos];
        if (dep.is_null()) continue;

        ValueTuple det;
        bool complete = true;
        for (const auto& name : fd.determinant) {
            const auto& x = v.values[schema.require_position(name)];
            complete = complete && !x.is_null();
            det.push_back(x);
        }
        if (!complete) continue;

        const AttributeValue* expected = nullptr;
        if (auto it = fd.mapping.find(det); it != fd.mapping.end()) {
            expected = &it->second;
        } else if (fd.unknown == UnknownTuplePolicy::LearnFirstSeen && state) {
            expected = state->learned_dependent(f, det);
        } else if (fd.unknown == UnknownTuplePolicy::Reject) {
            out.push_back(value_finding(v, schema, dep_pos, ErrorType::Fd, fd.label() + ": unknown determinant"));
            continue;
        }
        if (expected && !(*expected == dep)) {
            out.push_back(value_finding(v, schema, dep_pos, ErrorType::Fd,
                                        fd.label() + ": expected " + render(*expected) + ", got " + render(dep)));
        }
    }
    return out;
}

std::vector<Finding> detect_missing(const DataVector& v, const Schema& schema) {
    std::vector<Finding> out;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        if (v.values[i].is_null() && !schema.attributes[i].nullable) {
            out.push_back(value_finding(v, schema, i, ErrorType::Missing, "missing value"));
        }
    }
    return out;
}

std::int64_t missing_slots(Instant previous, Instant current, Duration cadence) {
    const std::int64_t gap = (current - previous).millis;
    if (gap <= 0) return 0;
    // Slot k is missing while previous + k*cadence + cadence/2 <= current.
    const std::int64_t slots = (2 * gap + cadence.millis) / (2 * cadence.millis);
    return std::max<std::int64_t>(0, slots - 1);
}

std::vector<Finding> detect_missing_vectors(const StreamState& state, const DataVector& v, const Schema& schema) {
    if (!schema.expected_cadence) throw UsageError("missing-vector detection needs an expected cadence");
    std::vector<Finding> out;
    const auto previous = state.latest_arrival();
    if (!previous) return out;
    const auto cadence = *schema.expected_cadence;
    const auto n = missing_slots(*previous, v.arrival, cadence);
    for (std::int64_t k = 1; k <= n; ++k) {
        out.push_back(Finding{v.index, std::nullopt, ErrorType::MissingVector,
                              "expected vector at " + format_instant(*previous + Duration{k * cadence.millis})});
    }
    return out;
}

std::optional<Finding> detect_duplicate(const DataVector& v, const StreamState& state) {
    if (!state.vectors().contains(v.values, state.probe(v.arrival))) return std::nullopt;
    return Finding{v.index, std::nullopt, ErrorType::Duplicate, "identical to an earlier vector"};
}

std::vector<Finding> detect_contradiction(const DataVector& v, const StreamState& state, const Schema& schema) {
    std::vector<Finding> out;
    const auto scope = schema.scope_positions();
    if (schema.key_positions().empty() || scope.empty()) return out;
    const auto key = state.key_of(v);
    if (std::any_of(key.begin(), key.end(), [](const auto& x) { return x.is_null(); })) return out;
    const auto* first = state.keys().first_payload(key, state.probe(v.arrival));
    if (!first) return out;
    for (std::size_t s = 0; s < scope.size(); ++s) {
        const auto& now = v.values[scope[s]];
        const auto& then = (*first)[s];
        if (now.is_null() || then.is_null() || now == then) continue;
        out.push_back(value_finding(v, schema, scope[s], ErrorType::Contradiction,
                                    "first seen as " + render(then) + ", now " + render(now)));
    }
    return out;
}

bool is_outlier(double x, const RunningStats& stats, const OutlierParams& params) {
    if (stats.count == 0 || stats.count < params.warmup) return false;
    const double sd = stats.stddev();
    const double dev = std::abs(x - stats.mean);
    if (sd == 0.0) return x != stats.mean;
    return dev > params.threshold * sd;
}

std::vector<std::size_t> outlier_targets(const Schema& schema, const OutlierParams& params) {
    if (!params.targets.empty()) return params.targets;
    std::vector<std::size_t> out;
    const auto keys = schema.key_positions();
    for (std::size_t i = 0; i < schema.arity(); ++i) {
        if (schema.is_numeric(i) && std::find(keys.begin(), keys.end(), i) == keys.end()) out.push_back(i);
    }
    return out;
}

std::vector<Finding> detect_outlier(const DataVector& v, std::span<const RunningStats> stats, const Schema& schema,
                                    const OutlierParams& params) {
    std::vector<Finding> out;
    for (auto i : outlier_targets(schema, params)) {
        const auto& value = v.values[i];
        if (value.is_null() || v.has_type_fault(i) || !schema.is_numeric(i)) continue;
        const auto x = value.numeric();
        if (!x || !is_outlier(*x, stats[i], params)) continue;
        const auto& s = stats[i];
        out.push_back(value_finding(v, schema, i, ErrorType::Outlier,
                                    render(value) + " deviates from mean " + format_float(s.mean) + " (std " +
                                        format_float(s.stddev()) + ")"));
    }
    return out;
}

}  // namespace streamclean
