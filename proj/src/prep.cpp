#include "streamclean/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace streamclean {

PrepResult prep_intel(const std::vector<DataVector>& raw, const Schema& schema, const IntelPrepOptions& options) {
    if (!schema.expected_cadence) throw ConfigError({"intel preparation needs an expected cadence"});
    const auto time_name = options.time_attribute ? options.time_attribute : schema.arrival_attribute;
    if (!time_name) throw ConfigError({"intel preparation needs a time attribute"});
    const auto time_pos = schema.position(*time_name);
    if (!time_pos || schema.attributes[*time_pos].type != ValueType::Instant) {
        throw ConfigError({"time attribute '" + *time_name + "' is not an instant attribute"});
    }
    const std::int64_t cadence = schema.expected_cadence->millis;

    PrepResult result;
    std::vector<const DataVector*> timed;
    for (const auto& v : raw) {
        if (v.values.at(*time_pos).is_instant()) {
            timed.push_back(&v);
        } else {
            result.log.push_back("row " + std::to_string(v.index) + ": no measurement time, dropped");
        }
    }
    std::stable_sort(timed.begin(), timed.end(), [&](const DataVector* a, const DataVector* b) {
        return a->values[*time_pos].as_instant() < b->values[*time_pos].as_instant();
    });
    if (timed.empty() && !(options.start && options.slots)) return result;

    const Instant start = options.start ? *options.start : timed.front()->values[*time_pos].as_instant();
    std::size_t slots = 0;
    if (options.slots) {
        slots = *options.slots;
    } else {
        const auto span = timed.back()->values[*time_pos].as_instant().millis - start.millis;
        slots = static_cast<std::size_t>(std::max<std::int64_t>(0, span) / cadence) + 1;
    }

    // Snap every row to its nearest grid slot; first row wins a slot.
    std::vector<const DataVector*> grid(slots, nullptr);
    std::size_t present = 0;
    for (const auto* v : timed) {
        const auto offset = v->values[*time_pos].as_instant().millis - start.millis;
        const auto slot = static_cast<std::int64_t>(std::llround(static_cast<double>(offset) / cadence));
        if (slot < 0 || slot >= static_cast<std::int64_t>(slots)) {
            result.log.push_back("row " + std::to_string(v->index) + ": outside the grid, dropped");
            continue;
        }
        auto& cell = grid[static_cast<std::size_t>(slot)];
        if (cell) {
            result.log.push_back("row " + std::to_string(v->index) + ": slot " + std::to_string(slot) +
                                 " already filled, dropped");
            continue;
        }
        if (offset != slot * cadence) {
            result.log.push_back("row " + std::to_string(v->index) + ": snapped to slot " + std::to_string(slot));
        }
        cell = v;
        ++present;
    }
    result.log.push_back(std::to_string(present) + " of " + std::to_string(slots) + " slots present");

    result.data.resize(slots);
    for (std::size_t k = 0; k < slots; ++k) {
        auto& out = result.data[k];
        out.index = k + 1;
        out.arrival = Instant{start.millis + static_cast<std::int64_t>(k) * cadence};
        out.values.assign(schema.arity(), AttributeValue::null());
        out.values[*time_pos] = AttributeValue(out.arrival);
    }

    for (std::size_t pos = 0; pos < schema.arity(); ++pos) {
        if (pos == *time_pos) continue;
        const auto& attr = schema.attributes[pos];
        auto has = [&](std::size_t k) { return grid[k] && !grid[k]->values[pos].is_null() && !grid[k]->has_type_fault(pos); };

        std::vector<std::size_t> known;
        for (std::size_t k = 0; k < slots; ++k) {
            if (has(k)) known.push_back(k);
        }
        if (known.empty()) {
            result.log.push_back(attr.name + ": no present values, left empty");
            continue;
        }
        if (known.front() > 0) {
            result.log.push_back(attr.name + ": leading gap of " + std::to_string(known.front()) +
                                 " slots filled with the first present value");
        }
        if (known.back() + 1 < slots) {
            result.log.push_back(attr.name + ": trailing gap of " + std::to_string(slots - 1 - known.back()) +
                                 " slots filled with the last present value");
        }

        const bool numeric = schema.is_numeric(pos) || attr.type == ValueType::Instant;
        std::size_t next = 0;  // index into known of the first present slot >= k
        for (std::size_t k = 0; k < slots; ++k) {
            while (next < known.size() && known[next] < k) ++next;
            if (next < known.size() && known[next] == k) {
                result.data[k].values[pos] = grid[k]->values[pos];
                continue;
            }
            if (next == 0) {
                result.data[k].values[pos] = grid[known.front()]->values[pos];
            } else if (next == known.size()) {
                result.data[k].values[pos] = grid[known.back()]->values[pos];
            } else {
                const auto lo = known[next - 1], hi = known[next];
                const auto& a = grid[lo]->values[pos];
                if (!numeric) {
                    result.data[k].values[pos] = a;
                    continue;
                }
                const double x0 = *a.numeric(), x1 = *grid[hi]->values[pos].numeric();
                const double f = static_cast<double>(k - lo) / static_cast<double>(hi - lo);
                result.data[k].values[pos] = from_numeric(x0 + f * (x1 - x0), attr.type);
            }
        }
    }
    return result;
}

PrepResult prep_taxi(const std::vector<DataVector>& raw, const Schema& schema, std::uint64_t seed,
                     const TaxiPrepOptions& options) {
    const auto dropoff = schema.position(options.dropoff_attribute);
    if (!dropoff) throw ConfigError({"taxi preparation: no attribute '" + options.dropoff_attribute + "'"});
    const auto cancel = schema.position(options.cancel_attribute);
    std::optional<std::size_t> arrival_pos;
    if (schema.arrival_attribute) {
        arrival_pos = schema.position(*schema.arrival_attribute);
        if (arrival_pos && schema.attributes[*arrival_pos].type != ValueType::Instant) arrival_pos.reset();
    }
    if (options.min_delay_ms > options.max_delay_ms) throw ConfigError({"taxi preparation: delay bounds reversed"});

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> delay(options.min_delay_ms, options.max_delay_ms);

    PrepResult result;
    for (const auto& v : raw) {
        // Draw for every row so that exclusions do not shift later draws.
        const auto d = delay(rng);
        const auto& t = v.values.at(*dropoff);
        if (!t.is_instant()) {
            result.log.push_back("row " + std::to_string(v.index) + ": no dropoff time, excluded");
            continue;
        }
        DataVector out = v;
        std::int64_t at = t.as_instant().millis + d;
        if (cancel && v.values[*cancel].is_text() && v.values[*cancel].as_text() == options.cancel_value) {
            at += options.cancel_extra_ms;
        }
        out.arrival = Instant{at};
        if (arrival_pos) out.values[*arrival_pos] = AttributeValue(out.arrival);
        result.data.push_back(std::move(out));
    }
    std::stable_sort(result.data.begin(), result.data.end(),
                     [](const DataVector& a, const DataVector& b) { return a.arrival < b.arrival; });
    for (std::size_t i = 0; i < result.data.size(); ++i) result.data[i].index = i + 1;
    return result;
}

}  // namespace streamclean
