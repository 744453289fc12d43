#include "streamclean/schema.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace streamclean {

bool DiscreteInterval::contains(const AttributeValue& v) const {
    return std::find(allowed.begin(), allowed.end(), v) != allowed.end();
}

bool IntervalConstraint::contains(const AttributeValue& v) const {
    if (v.is_null()) return true;
    if (is_continuous()) {
        const auto x = v.numeric();
        return x && continuous().contains(*x);
    }
    return discrete().contains(v);
}

std::string FunctionalDependency::label() const {
    std::string out = "{";
    for (std::size_t i = 0; i < determinant.size(); ++i) {
        if (i) out += ",";
        out += determinant[i];
    }
    return out + "}->" + dependent;
}

std::optional<std::size_t> Schema::position(std::string_view name) const {
    for (std::size_t i = 0; i < attributes.size(); ++i) {
        if (attributes[i].name == name) return i;
    }
    return std::nullopt;
}

std::size_t Schema::require_position(std::string_view name) const {
    if (auto p = position(name)) return *p;
    throw std::out_of_range("unknown attribute '" + std::string(name) + "'");
}

std::vector<std::size_t> Schema::key_positions() const {
    std::vector<std::size_t> keys;
    for (std::size_t i = 0; i < attributes.size(); ++i) {
        if (attributes[i].key_member) keys.push_back(i);
    }
    if (!keys.empty()) return keys;
    for (std::size_t i = 0; i < attributes.size(); ++i) {
        if (attributes[i].unique) keys.push_back(i);
    }
    return keys;
}

std::vector<std::size_t> Schema::scope_positions() const {
    std::vector<std::size_t> out;
    for (const auto& name : contradiction_scope) {
        if (auto p = position(name)) out.push_back(*p);
    }
    return out;
}

bool Schema::is_numeric(std::size_t pos) const {
    const auto t = attributes.at(pos).type;
    return t == ValueType::Integer || t == ValueType::Float;
}

bool Schema::is_ratio_column(std::size_t pos) const {
    const auto& a = attributes.at(pos);
    if (a.type != ValueType::Integer && a.type != ValueType::Float && a.type != ValueType::Instant) return false;
    return !(a.interval && !a.interval->is_continuous());
}

std::vector<SchemaFault> validate_schema(const Schema& schema) {
    std::vector<SchemaFault> faults;
    std::unordered_set<std::string> names;
    for (const auto& a : schema.attributes) {
        if (a.name.empty()) faults.push_back({"<unnamed>", "attribute name is empty"});
        if (!names.insert(a.name).second) faults.push_back({a.name, "duplicate attribute name"});
        if (a.interval) {
            if (a.interval->is_continuous()) {
                const auto& c = a.interval->continuous();
                if (!(c.lower <= c.upper)) faults.push_back({a.name, "interval lower bound exceeds upper bound"});
                if (a.type == ValueType::Text || a.type == ValueType::Boolean) {
                    faults.push_back({a.name, "continuous interval on a non-numeric attribute"});
                }
            } else if (a.interval->discrete().allowed.empty()) {
                faults.push_back({a.name, "discrete interval has no allowed values"});
            } else {
                for (const auto& v : a.interval->discrete().allowed) {
                    if (!v.matches(a.type)) {
                        faults.push_back({a.name, "discrete interval value does not match declared type"});
                        break;
                    }
                }
            }
        }
        for (const auto& marker : a.missing_markers) {
            // Markers are surface text, so any text is acceptable; an empty one is meaningless.
            if (marker.empty()) faults.push_back({a.name, "empty missing marker"});
        }
    }

    for (const auto& fd : schema.functional_dependencies) {
        const auto label = fd.label();
        if (fd.determinant.empty()) faults.push_back({label, "functional dependency has no determinant"});
        if (std::find(fd.determinant.begin(), fd.determinant.end(), fd.dependent) != fd.determinant.end()) {
            faults.push_back({label, "dependent attribute is part of the determinant"});
        }
        if (!schema.position(fd.dependent)) faults.push_back({label, "unknown dependent attribute"});
        for (const auto& d : fd.determinant) {
            if (!schema.position(d)) faults.push_back({label, "unknown determinant attribute '" + d + "'"});
        }
        for (const auto& [tuple, value] : fd.mapping) {
            if (tuple.size() != fd.determinant.size()) {
                faults.push_back({label, "mapping key arity differs from determinant"});
                break;
            }
        }
    }

    if (schema.expected_cadence && schema.expected_cadence->millis <= 0) {
        faults.push_back({"expected_cadence", "cadence must be positive"});
    }
    const auto keys = schema.key_positions();
    for (const auto& name : schema.contradiction_scope) {
        auto p = schema.position(name);
        if (!p) {
            faults.push_back({name, "contradiction scope names an unknown attribute"});
        } else if (std::find(keys.begin(), keys.end(), *p) != keys.end()) {
            faults.push_back({name, "contradiction scope contains a key attribute"});
        }
    }
    if (schema.arrival_attribute) {
        auto p = schema.position(*schema.arrival_attribute);
        if (!p || schema.attributes[*p].type != ValueType::Instant) {
            faults.push_back({*schema.arrival_attribute, "arrival attribute must be an instant attribute"});
        }
    }
    return faults;
}

}  // namespace streamclean
