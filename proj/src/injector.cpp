#include "streamclean/injector.hpp"

#include "streamclean/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

namespace streamclean {

namespace {

using Rng = std::mt19937_64;

std::size_t injection_count(const InjectionSpec& spec, std::size_t n) {
    if (spec.count) return *spec.count;
    const double rate = spec.rate.value_or(default_rate(spec.type));
    if (rate < 0.0 || rate > 1.0) throw InjectionError("injection rate must lie in [0, 1]");
    return static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
}

std::vector<std::size_t> resolve_targets(const Schema& schema, const InjectionSpec& spec) {
    if (spec.targets.empty()) return default_targets(schema, spec.type);
    std::vector<std::size_t> out;
    for (const auto& name : spec.targets) {
        auto p = schema.position(name);
        if (!p) throw InjectionError("unknown target attribute '" + name + "'");
        out.push_back(*p);
    }
    return out;
}

/// k distinct members of `pool`, in pool order.
std::vector<std::size_t> sample(const std::vector<std::size_t>& pool, std::size_t k, Rng& rng) {
    std::vector<std::size_t> out;
    out.reserve(k);
    std::sample(pool.begin(), pool.end(), std::back_inserter(out), k, rng);
    return out;
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

bool coin(Rng& rng) { return std::bernoulli_distribution(0.5)(rng); }

void record(InjectionLog& log, const DataVector& v, const Schema& schema, std::size_t pos, ErrorType type,
            const AttributeValue& original) {
    log.entries.push_back({v.index, schema.attributes[pos].name, type, original, v.values[pos]});
}

// Value errors

AttributeValue out_of_interval(const AttributeValue& value, const SchemaAttribute& attr, const InjectionSpec& spec,
                               Rng& rng) {
    const auto& interval = *attr.interval;
    if (interval.is_continuous()) {
        const auto& c = interval.continuous();
        const double width = c.width() > 0 ? c.width() : std::max(1.0, std::abs(c.upper));
        // (min, max] rather than [min, max): a zero distance would not violate an inclusive bound.
        double distance = width * (spec.interval_max_fraction -
                                   uniform(rng, 0.0, spec.interval_max_fraction - spec.interval_min_fraction));
        const bool below = coin(rng);
        if (attr.type != ValueType::Float) distance = std::max(1.0, std::ceil(distance));
        double x = below ? c.lower - distance : c.upper + distance;
        if (attr.type != ValueType::Float) x = below ? std::floor(x) : std::ceil(x);
        return from_numeric(x, attr.type);
    }
    const auto& allowed = interval.discrete().allowed;
    if (attr.type == ValueType::Integer || attr.type == ValueType::Float) {
        double lo = *allowed.front().numeric(), hi = lo;
        for (const auto& a : allowed) {
            lo = std::min(lo, *a.numeric());
            hi = std::max(hi, *a.numeric());
        }
        const double step = 1.0 + std::floor(uniform(rng, 0.0, std::max(1.0, hi - lo)));
        return from_numeric(coin(rng) ? lo - step : hi + step, attr.type);
    }
    (void)value;
    return AttributeValue(std::string("invalid_") + std::to_string(rng() % 1000));
}

std::string decimal_comma(double x) {
    std::string text = format_float(x);
    if (text.find_first_of("eE") != std::string::npos) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10f", x);
        text = buf;
    }
    if (auto dot = text.find('.'); dot != std::string::npos) {
        text[dot] = ',';
    } else {
        text += ",0";
    }
    return text;
}

std::string corrupt_surface(const AttributeValue& value) {
    if (value.is_float()) return decimal_comma(value.as_float());
    if (value.is_integer()) {
        const auto x = value.as_integer();
        if (std::abs(x) < 1000) return std::to_string(x) + ".0";
        std::string digits = std::to_string(std::abs(x)), grouped;
        for (std::size_t i = 0; i < digits.size(); ++i) {
            if (i && (digits.size() - i) % 3 == 0) grouped += ',';
            grouped += digits[i];
        }
        return (x < 0 ? "-" : "") + grouped;
    }
    if (value.is_boolean()) return value.as_boolean() ? "yes" : "no";
    if (value.is_instant()) {
        // Day-first rendering of the canonical "YYYY-MM-DD HH:MM:SS[.mmm]".
        const auto iso = format_instant(value.as_instant());
        return iso.substr(8, 2) + "." + iso.substr(5, 2) + "." + iso.substr(0, 4) + iso.substr(10);
    }
    return format_value(value);
}

void inject_values(std::vector<DataVector>& data, const Schema& schema, const InjectionSpec& spec,
                   InjectionLog& log, Rng& rng) {
    const auto targets = resolve_targets(schema, spec);
    const auto n = injection_count(spec, data.size());

    for (auto pos : targets) {
        const auto& attr = schema.attributes[pos];
        if (spec.type == ErrorType::Interval && !attr.interval) {
            throw InjectionError("attribute '" + attr.name + "' has no interval to violate");
        }
        if ((spec.type == ErrorType::Outlier) && !schema.is_numeric(pos)) {
            throw InjectionError("outliers need a numeric attribute, '" + attr.name + "' is not");
        }
        if (spec.type == ErrorType::Missing && spec.missing_marker && !attr.missing_markers.count(*spec.missing_marker)) {
            throw InjectionError("'" + *spec.missing_marker + "' is not a missing marker of '" + attr.name + "'");
        }
        std::vector<std::size_t> pool;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (!data[i].values[pos].is_null()) pool.push_back(i);
        }
        if (n > pool.size()) {
            throw InjectionError("cannot inject " + std::to_string(n) + " errors into '" + attr.name + "' with " +
                                 std::to_string(pool.size()) + " non-null values");
        }

        double sigma = 1.0;
        if (spec.type == ErrorType::Outlier) {
            RunningStats s;
            for (auto i : pool) s = update_stats(s, *data[i].values[pos].numeric());
            if (s.stddev() > 0) sigma = s.stddev();
        }

        for (auto i : sample(pool, n, rng)) {
            auto& v = data[i];
            const auto original = v.values[pos];
            switch (spec.type) {
                case ErrorType::Missing:
                    // A marker is a surface form; once parsed the cell is null either way.
                    v.values[pos] = AttributeValue::null();
                    break;
                case ErrorType::Interval:
                    v.values[pos] = out_of_interval(original, attr, spec, rng);
                    break;
                case ErrorType::Outlier: {
                    const double shift = uniform(rng, spec.outlier_min_sigma, spec.outlier_max_sigma) * sigma;
                    const double x = *original.numeric() + (coin(rng) ? shift : -shift);
                    v.values[pos] = from_numeric(attr.type == ValueType::Float ? x : std::round(x), attr.type);
                    break;
                }
                case ErrorType::WrongType:
                    v.values[pos] = AttributeValue(corrupt_surface(original));
                    v.type_faults.push_back(pos);
                    std::sort(v.type_faults.begin(), v.type_faults.end());
                    break;
                default:
                    break;
            }
            record(log, v, schema, pos, spec.type, original);
            if (spec.type == ErrorType::Missing && spec.missing_marker) {
                log.entries.back().injected = AttributeValue(*spec.missing_marker);
            }
        }
    }
}

// Functional dependencies

void inject_fd(std::vector<DataVector>& data, const Schema& schema, const InjectionSpec& spec, InjectionLog& log,
               Rng& rng) {
    std::vector<std::size_t> fds = spec.fds;
    if (fds.empty()) {
        fds.resize(schema.functional_dependencies.size());
        std::iota(fds.begin(), fds.end(), 0);
    }
    if (fds.empty()) throw InjectionError("schema declares no functional dependency to violate");
    const auto n = injection_count(spec, data.size());
    std::set<std::size_t> used;

    for (auto f : fds) {
        if (f >= schema.functional_dependencies.size()) throw InjectionError("FD index out of range");
        const auto& fd = schema.functional_dependencies[f];
        const auto dep = schema.require_position(fd.dependent);
        std::vector<std::size_t> det;
        for (const auto& name : fd.determinant) det.push_back(schema.require_position(name));

        std::set<AttributeValue> values;
        for (const auto& [k, value] : fd.mapping) values.insert(value);
        if (values.size() < 2) throw InjectionError(fd.label() + " maps to a single value and cannot be violated");

        // Vectors whose determinant is mapped and whose dependent currently agrees with the mapping.
        std::vector<std::size_t> pool;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (used.count(i)) continue;
            ValueTuple key;
            for (auto p : det) key.push_back(data[i].values[p]);
            auto it = fd.mapping.find(key);
            if (it != fd.mapping.end() && it->second == data[i].values[dep]) pool.push_back(i);
        }
        if (n > pool.size()) throw InjectionError("not enough mapped vectors to violate " + fd.label());

        for (auto i : sample(pool, n, rng)) {
            used.insert(i);
            auto& v = data[i];
            const auto original = v.values[dep];
            std::vector<AttributeValue> others;
            for (const auto& x : values) {
                if (!(x == original)) others.push_back(x);
            }
            v.values[dep] = others[std::uniform_int_distribution<std::size_t>(0, others.size() - 1)(rng)];
            record(log, v, schema, dep, ErrorType::Fd, original);
        }
    }
}

// Key collisions

void inject_key_collisions(std::vector<DataVector>& data, const Schema& schema, const InjectionSpec& spec,
                           InjectionLog& log, Rng& rng) {
    const auto keys = schema.key_positions();
    if (keys.empty()) throw InjectionError("schema declares no key to collide");
    const auto scope = schema.scope_positions();
    const auto n = injection_count(spec, data.size());
    if (2 * n > data.size()) throw InjectionError("more key collisions requested than vector pairs available");

    std::vector<bool> used(data.size(), false);
    auto scope_differs = [&](std::size_t a, std::size_t b) {
        if (spec.type != ErrorType::Contradiction) return true;
        for (auto p : scope) {
            const auto &x = data[a].values[p], &y = data[b].values[p];
            if (!x.is_null() && !y.is_null() && !(x == y)) return true;
        }
        return false;
    };

    for (std::size_t k = 0; k < n; ++k) {
        std::vector<std::size_t> donors;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (!used[i]) donors.push_back(i);
        }
        bool placed = false;
        for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
            const auto donor = donors[std::uniform_int_distribution<std::size_t>(0, donors.size() - 1)(rng)];
            const bool before = coin(rng);
            std::vector<std::size_t> side;
            for (std::size_t i = 0; i < data.size(); ++i) {
                if (!used[i] && i != donor && (before ? i < donor : i > donor) && scope_differs(i, donor)) {
                    side.push_back(i);
                }
            }
            if (side.empty()) continue;
            const auto target = side[std::uniform_int_distribution<std::size_t>(0, side.size() - 1)(rng)];
            used[donor] = used[target] = true;
            for (auto p : keys) {
                const auto original = data[target].values[p];
                if (original == data[donor].values[p]) continue;
                data[target].values[p] = data[donor].values[p];
                record(log, data[target], schema, p, spec.type, original);
            }
            placed = true;
        }
        if (!placed) throw InjectionError("could not place key collision " + std::to_string(k + 1));
    }
}

// Duplicates

void inject_duplicates(std::vector<DataVector>& data, const InjectionSpec& spec, InjectionLog& log, Rng& rng) {
    const auto n = injection_count(spec, data.size());
    if (n > data.size()) throw InjectionError("more duplicates requested than vectors available");
    const std::size_t size = data.size();

    std::vector<std::size_t> all(size);
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::size_t> donors = sample(all, n, rng);
    std::shuffle(donors.begin(), donors.end(), rng);

    // gap g means "insert before original vector g"; g == size appends.
    std::vector<std::vector<std::size_t>> gaps(size + 1);
    for (auto d : donors) {
        const bool before = coin(rng);
        const std::size_t gap = before ? std::uniform_int_distribution<std::size_t>(0, d)(rng)
                                       : std::uniform_int_distribution<std::size_t>(d + 1, size)(rng);
        gaps[gap].push_back(d);
    }

    std::vector<DataVector> out;
    out.reserve(size + n);
    for (std::size_t g = 0; g <= size; ++g) {
        for (auto d : gaps[g]) {
            DataVector copy = data[d];
            copy.arrival = g > 0 ? data[g - 1].arrival : data[0].arrival;
            copy.index = out.size() + 1;
            log.entries.push_back({copy.index, std::nullopt, ErrorType::Duplicate, AttributeValue::null(),
                                   AttributeValue::null()});
            out.push_back(std::move(copy));
        }
        if (g < size) {
            out.push_back(data[g]);
            out.back().index = out.size();
        }
    }
    data = std::move(out);
}

}  // namespace

std::map<std::string, std::size_t> InjectionLog::per_column(const Schema& schema) const {
    std::map<std::string, std::size_t> out;
    for (const auto& a : schema.attributes) out[a.name] = 0;
    for (const auto& e : entries) {
        if (e.attribute) {
            ++out[*e.attribute];
        } else {
            for (const auto& a : schema.attributes) ++out[a.name];
        }
    }
    return out;
}

double default_rate(ErrorType type) {
    return is_key_collision(type) || is_whole_vector(type) ? 0.05 : 0.025;
}

std::vector<std::size_t> default_targets(const Schema& schema, ErrorType type) {
    const auto keys = schema.key_positions();
    auto is_key = [&](std::size_t i) { return std::find(keys.begin(), keys.end(), i) != keys.end(); };
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < schema.arity(); ++i) {
        const auto& a = schema.attributes[i];
        if (is_key(i)) continue;
        switch (type) {
            case ErrorType::Missing:
                if (!a.nullable) out.push_back(i);
                break;
            case ErrorType::Interval:
                if (a.interval) out.push_back(i);
                break;
            case ErrorType::Outlier:
                if (schema.is_numeric(i)) out.push_back(i);
                break;
            case ErrorType::WrongType:
                if (a.type != ValueType::Text) out.push_back(i);
                break;
            default:
                break;
        }
    }
    return out;
}

InjectionResult inject(const std::vector<DataVector>& dataset, const Schema& schema, const InjectionSpec& spec) {
    InjectionResult result{dataset, {}};
    Rng rng(spec.seed);
    if (injection_count(spec, dataset.size()) == 0) return result;

    switch (spec.type) {
        case ErrorType::Missing:
        case ErrorType::Interval:
        case ErrorType::Outlier:
        case ErrorType::WrongType:
            inject_values(result.corrupted, schema, spec, result.log, rng);
            break;
        case ErrorType::Fd:
            inject_fd(result.corrupted, schema, spec, result.log, rng);
            break;
        case ErrorType::Uniqueness:
        case ErrorType::Contradiction:
            inject_key_collisions(result.corrupted, schema, spec, result.log, rng);
            break;
        case ErrorType::Duplicate:
            inject_duplicates(result.corrupted, spec, result.log, rng);
            break;
        case ErrorType::MissingVector:
            throw InjectionError("missing vectors are not injected; drop rows from the source instead");
    }
    std::sort(result.log.entries.begin(), result.log.entries.end(), [](const auto& a, const auto& b) {
        return std::tie(a.vector_index, a.attribute) < std::tie(b.vector_index, b.attribute);
    });
    return result;
}

PipelineConfig certification_config(const Schema& schema) {
    PipelineConfig config;
    config.schema = schema;
    config.type_repair.reset();
    config.modules.push_back({ErrorType::Missing, std::nullopt, {}, std::nullopt});
    config.modules.push_back({ErrorType::Interval, std::nullopt, {}, std::nullopt});
    if (!schema.functional_dependencies.empty()) config.modules.push_back({ErrorType::Fd, std::nullopt, {}, std::nullopt});
    if (!schema.key_positions().empty()) {
        config.modules.push_back({ErrorType::Uniqueness, std::nullopt, {}, std::nullopt});
        if (!schema.contradiction_scope.empty()) {
            config.modules.push_back({ErrorType::Contradiction, std::nullopt, {}, std::nullopt});
        }
    }
    config.modules.push_back({ErrorType::Duplicate, std::nullopt, {}, std::nullopt});
    if (schema.expected_cadence) config.modules.push_back({ErrorType::MissingVector, std::nullopt, {}, std::nullopt});
    return config;
}

std::vector<Finding> verify_ground_truth(const std::vector<DataVector>& dataset, const PipelineConfig& config) {
    auto pipeline = Pipeline::build(detection_only(config));
    return run_stream(pipeline, dataset).findings();
}

}  // namespace streamclean
