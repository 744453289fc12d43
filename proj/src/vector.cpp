#include "streamclean/vector.hpp"

#include <algorithm>

namespace streamclean {

bool DataVector::has_type_fault(std::size_t pos) const {
    return std::find(type_faults.begin(), type_faults.end(), pos) != type_faults.end();
}

ParseError::ParseError(std::size_t expected, std::size_t actual)
    : std::runtime_error("arity mismatch: expected " + std::to_string(expected) + " fields, got " +
                         std::to_string(actual)),
      expected_(expected),
      actual_(actual) {}

DataVector parse_vector(const std::vector<std::string>& raw, const Schema& schema, std::uint64_t index,
                        Instant arrival) {
    if (raw.size() != schema.arity()) throw ParseError(schema.arity(), raw.size());

    DataVector v;
    v.index = index;
    v.arrival = arrival;
    v.values.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto& attr = schema.attributes[i];
        const auto& text = raw[i];
        if (text.empty() || attr.missing_markers.count(text)) {
            v.values.emplace_back();
            continue;
        }
        if (auto converted = convert_strict(text, attr.type)) {
            v.values.push_back(std::move(*converted));
        } else {
            v.values.emplace_back(text);
            v.type_faults.push_back(i);
        }
    }
    return v;
}

std::vector<std::string> serialize_vector(const DataVector& v) {
    std::vector<std::string> out;
    out.reserve(v.values.size());
    for (const auto& value : v.values) out.push_back(format_value(value));
    return out;
}

}  // namespace streamclean
