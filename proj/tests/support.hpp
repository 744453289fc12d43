#pragma once

#include "streamclean/schema.hpp"
#include "streamclean/vector.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

using namespace streamclean;

inline SchemaAttribute attr(std::string name, ValueType type) {
    SchemaAttribute a;
    a.name = std::move(name);
    a.type = type;
    return a;
}

inline SchemaAttribute keyed(std::string name, ValueType type) {
    auto a = attr(std::move(name), type);
    a.key_member = true;
    return a;
}

inline SchemaAttribute bounded(std::string name, double lo, double hi, ValueType type = ValueType::Float) {
    auto a = attr(std::move(name), type);
    a.interval = IntervalConstraint(ContinuousInterval{lo, hi, true, true});
    return a;
}

inline Schema schema_of(std::vector<SchemaAttribute> attrs) {
    Schema s;
    s.attributes = std::move(attrs);
    return s;
}

/// id (key), a, b: integers; c: float. Contradiction scope {a, b}.
inline Schema keyed_schema() {
    auto s = schema_of({keyed("id", ValueType::Integer), attr("a", ValueType::Integer), attr("b", ValueType::Integer),
                        attr("c", ValueType::Float)});
    s.contradiction_scope = {"a", "b"};
    return s;
}

inline Instant at_seconds(std::int64_t s) { return Instant{s * 1000}; }

inline DataVector vec(std::uint64_t index, Instant arrival, ValueTuple values) {
    DataVector v;
    v.index = index;
    v.arrival = arrival;
    v.values = std::move(values);
    return v;
}

/// Random stream over keyed_schema with small domains so that keys, payloads and whole
/// tuples collide often.
inline std::vector<DataVector> colliding_stream(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> key(0, static_cast<int>(n / 3) + 1), small(0, 2), fine(0, 3);
    std::vector<DataVector> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(vec(i + 1, at_seconds(static_cast<std::int64_t>(i)),
                          {AttributeValue(key(rng)), AttributeValue(small(rng)), AttributeValue(small(rng)),
                           AttributeValue(0.5 * fine(rng))}));
    }
    return out;
}

}  // namespace testsupport
