#include "streamclean/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace streamclean {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fault(const std::string& message) { throw ConfigError({message}); }

json parse_document(const std::string& text, const char* what) {
    try {
        auto doc = json::parse(text);
        if (!doc.is_object()) fault(std::string(what) + " document must be a JSON object");
        return doc;
    } catch (const json::parse_error& e) {
        fault(std::string(what) + " document is not valid JSON: " + e.what());
    }
}

template <typename T>
T get(const json& j, const std::string& context) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        fault(context + ": unexpected value " + j.dump());
    }
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known, const std::string& context) {
    for (const auto& [key, _] : j.items()) {
        if (std::find_if(known.begin(), known.end(), [&](const char* k) { return key == k; }) == known.end()) {
            fault(context + ": unknown key '" + key + "'");
        }
    }
}

AttributeValue value_from_json(const json& j, ValueType type, const std::string& context) {
    if (j.is_null()) return AttributeValue::null();
    switch (type) {
        case ValueType::Integer:
            if (j.is_number_integer()) return AttributeValue(j.get<std::int64_t>());
            if (j.is_number_float() && std::trunc(j.get<double>()) == j.get<double>()) {
                return AttributeValue(static_cast<std::int64_t>(j.get<double>()));
            }
            break;
        case ValueType::Float:
            if (j.is_number()) return AttributeValue(j.get<double>());
            break;
        case ValueType::Text:
            if (j.is_string()) return AttributeValue(j.get<std::string>());
            break;
        case ValueType::Boolean:
            if (j.is_boolean()) return AttributeValue(j.get<bool>());
            break;
        case ValueType::Instant:
            if (j.is_number_integer()) return AttributeValue(Instant{j.get<std::int64_t>()});
            if (j.is_string()) {
                if (auto t = parse_instant(j.get<std::string>())) return AttributeValue(*t);
            }
            break;
    }
    fault(context + ": " + j.dump() + " is not a valid " + std::string(to_string(type)));
}

ordered_json value_to_json(const AttributeValue& v) {
    if (v.is_null()) return nullptr;
    if (v.is_integer()) return v.as_integer();
    if (v.is_float()) return v.as_float();
    if (v.is_boolean()) return v.as_boolean();
    return format_value(v);
}

double bound_from_json(const json& j, ValueType type, const std::string& context) {
    if (type == ValueType::Instant && j.is_string()) {
        if (auto t = parse_instant(j.get<std::string>())) return static_cast<double>(t->millis);
        fault(context + ": unreadable instant bound");
    }
    return get<double>(j, context);
}

UnknownTuplePolicy policy_from_string(const std::string& s) {
    if (s == "ignore") return UnknownTuplePolicy::Ignore;
    if (s == "learn_first_seen") return UnknownTuplePolicy::LearnFirstSeen;
    if (s == "reject") return UnknownTuplePolicy::Reject;
    fault("unknown FD policy '" + s + "'");
}

const char* to_string(UnknownTuplePolicy p) {
    switch (p) {
        case UnknownTuplePolicy::Ignore: return "ignore";
        case UnknownTuplePolicy::LearnFirstSeen: return "learn_first_seen";
        case UnknownTuplePolicy::Reject: return "reject";
    }
    return "ignore";
}

ErrorType error_type(const json& j, const std::string& context) {
    const auto name = get<std::string>(j, context);
    auto t = error_type_from_string(name);
    if (!t) fault(context + ": unknown error type '" + name + "'");
    return *t;
}

std::vector<std::size_t> positions(const json& j, const Schema& schema, const std::string& context) {
    std::vector<std::size_t> out;
    for (const auto& n : j) {
        const auto name = get<std::string>(n, context);
        auto p = schema.position(name);
        if (!p) fault(context + ": unknown attribute '" + name + "'");
        out.push_back(*p);
    }
    return out;
}

WindowSpec window_from_json(const json& j) {
    reject_unknown_keys(j, {"kind", "measure", "size", "slide"}, "window");
    WindowSpec w;
    const auto kind = get<std::string>(j.value("kind", json("tumbling")), "window.kind");
    if (kind == "tumbling") {
        w.kind = WindowSpec::Kind::Tumbling;
    } else if (kind == "sliding") {
        w.kind = WindowSpec::Kind::Sliding;
    } else {
        fault("window.kind must be tumbling or sliding");
    }
    const auto measure = get<std::string>(j.value("measure", json("count")), "window.measure");
    if (measure == "count") {
        w.measure = WindowSpec::Measure::Count;
    } else if (measure == "time") {
        w.measure = WindowSpec::Measure::Time;
    } else {
        fault("window.measure must be count or time");
    }
    w.size = get<std::int64_t>(j.at("size"), "window.size");
    w.slide = get<std::int64_t>(j.value("slide", json(0)), "window.slide");
    return w;
}

ModuleConfig module_from_json(const json& j, const Schema& schema) {
    if (!j.is_object()) fault("modules: each module must be an object");
    reject_unknown_keys(j, {"type", "repair", "per_attribute", "threshold", "warmup", "targets", "window"}, "module");
    ModuleConfig m;
    m.type = error_type(j.at("type"), "module.type");
    const std::string context = "module " + std::string(to_string(m.type));

    if (j.contains("repair") && !j["repair"].is_null()) {
        const auto name = get<std::string>(j["repair"], context + ".repair");
        if (m.type == ErrorType::Missing) {
            MissingRepairPlan plan;
            auto fallback = parse_missing_repair(name);
            if (!fallback) fault(context + ": unknown missing-value strategy '" + name + "'");
            plan.fallback = *fallback;
            const json per = j.value("per_attribute", json::object());
            for (const auto& [attr, strategy] : per.items()) {
                if (!schema.position(attr)) fault(context + ": unknown attribute '" + attr + "'");
                auto s = parse_missing_repair(get<std::string>(strategy, context));
                if (!s) fault(context + ": unknown missing-value strategy for '" + attr + "'");
                plan.per_attribute[attr] = *s;
            }
            m.repair = plan;
        } else {
            auto s = parse_repair_strategy(m.type, name);
            if (!s) fault(context + ": strategy '" + name + "' does not apply");
            m.repair = *s;
        }
    } else if (j.contains("per_attribute")) {
        fault(context + ": per_attribute needs a repair");
    }

    if (j.contains("threshold")) m.outlier.threshold = get<double>(j["threshold"], context + ".threshold");
    if (j.contains("warmup")) m.outlier.warmup = get<std::uint64_t>(j["warmup"], context + ".warmup");
    if (j.contains("targets")) m.outlier.targets = positions(j["targets"], schema, context + ".targets");
    if (j.contains("window") && !j["window"].is_null()) m.window = window_from_json(j["window"]);
    return m;
}

std::string strategy_name(const RepairStrategy& s) {
    return std::visit(
        [](const auto& x) -> std::string {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, MissingRepairPlan>) {
                return std::string(to_string(x.fallback));
            } else {
                return std::string(to_string(x));
            }
        },
        s);
}

InjectionSpec injection_from_json(const json& j, const Schema& schema) {
    if (!j.is_object()) fault("injection must be an object");
    reject_unknown_keys(j,
                        {"type", "targets", "rate", "count", "seed", "interval_fraction", "outlier_sigma", "fds",
                         "missing_marker"},
                        "injection");
    InjectionSpec s;
    s.type = error_type(j.at("type"), "injection.type");
    if (j.contains("targets")) {
        for (auto p : positions(j["targets"], schema, "injection.targets")) s.targets.push_back(schema.attributes[p].name);
    }
    if (j.contains("rate")) s.rate = get<double>(j["rate"], "injection.rate");
    if (j.contains("count")) s.count = get<std::size_t>(j["count"], "injection.count");
    if (s.rate && (*s.rate < 0.0 || *s.rate > 1.0)) fault("injection.rate must lie in [0, 1]");
    if (j.contains("seed")) s.seed = get<std::uint64_t>(j["seed"], "injection.seed");
    if (j.contains("interval_fraction")) {
        const auto r = get<std::vector<double>>(j["interval_fraction"], "injection.interval_fraction");
        if (r.size() != 2 || r[0] < 0 || r[0] >= r[1]) fault("injection.interval_fraction must be [min, max], 0 <= min < max");
        s.interval_min_fraction = r[0];
        s.interval_max_fraction = r[1];
    }
    if (j.contains("outlier_sigma")) {
        const auto r = get<std::vector<double>>(j["outlier_sigma"], "injection.outlier_sigma");
        if (r.size() != 2 || r[0] <= 0 || r[0] > r[1]) fault("injection.outlier_sigma must be [min, max], 0 < min <= max");
        s.outlier_min_sigma = r[0];
        s.outlier_max_sigma = r[1];
    }
    if (j.contains("fds")) {
        s.fds = get<std::vector<std::size_t>>(j["fds"], "injection.fds");
        for (auto f : s.fds) {
            if (f >= schema.functional_dependencies.size()) fault("injection.fds: no FD number " + std::to_string(f));
        }
    }
    if (j.contains("missing_marker")) s.missing_marker = get<std::string>(j["missing_marker"], "injection.missing_marker");
    if (s.type == ErrorType::MissingVector) fault("injection.type missing_vector is not injectable");
    return s;
}

}  // namespace

Schema schema_from_json(const std::string& text) {
    const auto doc = parse_document(text, "schema");
    reject_unknown_keys(doc,
                        {"attributes", "functional_dependencies", "expected_cadence_ms", "contradiction_scope",
                         "arrival_attribute"},
                        "schema");
    Schema schema;
    if (!doc.contains("attributes") || !doc["attributes"].is_array()) fault("schema: attributes must be an array");

    for (const auto& a : doc["attributes"]) {
        reject_unknown_keys(a, {"name", "type", "nullable", "unique", "key", "interval", "missing_markers"},
                            "attribute");
        SchemaAttribute attr;
        attr.name = get<std::string>(a.at("name"), "attribute.name");
        const std::string context = "attribute " + attr.name;
        const auto type_name = get<std::string>(a.at("type"), context + ".type");
        auto type = value_type_from_string(type_name);
        if (!type) fault(context + ": unknown type '" + type_name + "'");
        attr.type = *type;
        attr.nullable = get<bool>(a.value("nullable", json(false)), context + ".nullable");
        attr.unique = get<bool>(a.value("unique", json(false)), context + ".unique");
        attr.key_member = get<bool>(a.value("key", json(false)), context + ".key");
        for (const auto& m : a.value("missing_markers", json::array())) {
            attr.missing_markers.insert(get<std::string>(m, context + ".missing_markers"));
        }
        if (a.contains("interval") && !a["interval"].is_null()) {
            const auto& iv = a["interval"];
            if (iv.contains("values")) {
                DiscreteInterval d;
                for (const auto& v : iv["values"]) d.allowed.push_back(value_from_json(v, attr.type, context + ".interval"));
                attr.interval = IntervalConstraint(std::move(d));
            } else {
                reject_unknown_keys(iv, {"lower", "upper", "lower_inclusive", "upper_inclusive"}, context + ".interval");
                ContinuousInterval c;
                c.lower = bound_from_json(iv.at("lower"), attr.type, context + ".interval.lower");
                c.upper = bound_from_json(iv.at("upper"), attr.type, context + ".interval.upper");
                c.lower_inclusive = get<bool>(iv.value("lower_inclusive", json(true)), context);
                c.upper_inclusive = get<bool>(iv.value("upper_inclusive", json(true)), context);
                attr.interval = IntervalConstraint(c);
            }
        }
        schema.attributes.push_back(std::move(attr));
    }

    for (const auto& f : doc.value("functional_dependencies", json::array())) {
        reject_unknown_keys(f, {"determinant", "dependent", "mapping", "unknown"}, "functional dependency");
        FunctionalDependency fd;
        fd.determinant = get<std::vector<std::string>>(f.at("determinant"), "fd.determinant");
        fd.dependent = get<std::string>(f.at("dependent"), "fd.dependent");
        fd.unknown = policy_from_string(get<std::string>(f.value("unknown", json("ignore")), "fd.unknown"));
        const std::string context = "fd " + fd.label();
        std::vector<ValueType> det_types;
        for (const auto& name : fd.determinant) {
            auto p = schema.position(name);
            if (!p) fault(context + ": unknown attribute '" + name + "'");
            det_types.push_back(schema.attributes[*p].type);
        }
        auto dep = schema.position(fd.dependent);
        if (!dep) fault(context + ": unknown attribute '" + fd.dependent + "'");
        for (const auto& entry : f.value("mapping", json::array())) {
            json when = entry.at("when");
            if (!when.is_array()) when = json::array({when});
            if (when.size() != det_types.size()) fault(context + ": mapping key arity does not match the determinant");
            ValueTuple key;
            for (std::size_t i = 0; i < when.size(); ++i) key.push_back(value_from_json(when[i], det_types[i], context));
            auto value = value_from_json(entry.at("then"), schema.attributes[*dep].type, context);
            if (!fd.mapping.emplace(std::move(key), std::move(value)).second) fault(context + ": mapping key repeated");
        }
        schema.functional_dependencies.push_back(std::move(fd));
    }

    if (doc.contains("expected_cadence_ms") && !doc["expected_cadence_ms"].is_null()) {
        schema.expected_cadence = Duration{get<std::int64_t>(doc["expected_cadence_ms"], "expected_cadence_ms")};
    }
    schema.contradiction_scope =
        get<std::vector<std::string>>(doc.value("contradiction_scope", json::array()), "contradiction_scope");
    if (doc.contains("arrival_attribute") && !doc["arrival_attribute"].is_null()) {
        schema.arrival_attribute = get<std::string>(doc["arrival_attribute"], "arrival_attribute");
    }

    if (auto faults = validate_schema(schema); !faults.empty()) {
        std::vector<std::string> messages;
        for (const auto& f : faults) messages.push_back("schema: " + f.subject + ": " + f.message);
        throw ConfigError(std::move(messages));
    }
    return schema;
}

std::string schema_to_json(const Schema& schema) {
    ordered_json doc;
    doc["attributes"] = ordered_json::array();
    for (const auto& a : schema.attributes) {
        ordered_json j;
        j["name"] = a.name;
        j["type"] = std::string(to_string(a.type));
        if (a.nullable) j["nullable"] = true;
        if (a.unique) j["unique"] = true;
        if (a.key_member) j["key"] = true;
        if (a.interval) {
            if (a.interval->is_continuous()) {
                const auto& c = a.interval->continuous();
                ordered_json iv;
                if (a.type == ValueType::Instant) {
                    iv["lower"] = format_instant(Instant{static_cast<std::int64_t>(c.lower)});
                    iv["upper"] = format_instant(Instant{static_cast<std::int64_t>(c.upper)});
                } else {
                    iv["lower"] = c.lower;
                    iv["upper"] = c.upper;
                }
                if (!c.lower_inclusive) iv["lower_inclusive"] = false;
                if (!c.upper_inclusive) iv["upper_inclusive"] = false;
                j["interval"] = iv;
            } else {
                ordered_json values = ordered_json::array();
                for (const auto& v : a.interval->discrete().allowed) values.push_back(value_to_json(v));
                j["interval"] = {{"values", values}};
            }
        }
        if (!a.missing_markers.empty()) j["missing_markers"] = a.missing_markers;
        doc["attributes"].push_back(std::move(j));
    }
    if (!schema.functional_dependencies.empty()) {
        doc["functional_dependencies"] = ordered_json::array();
        for (const auto& fd : schema.functional_dependencies) {
            ordered_json j;
            j["determinant"] = fd.determinant;
            j["dependent"] = fd.dependent;
            j["unknown"] = to_string(fd.unknown);
            j["mapping"] = ordered_json::array();
            for (const auto& [key, value] : fd.mapping) {
                ordered_json when = ordered_json::array();
                for (const auto& k : key) when.push_back(value_to_json(k));
                j["mapping"].push_back({{"when", when}, {"then", value_to_json(value)}});
            }
            doc["functional_dependencies"].push_back(std::move(j));
        }
    }
    if (schema.expected_cadence) doc["expected_cadence_ms"] = schema.expected_cadence->millis;
    if (!schema.contradiction_scope.empty()) doc["contradiction_scope"] = schema.contradiction_scope;
    if (schema.arrival_attribute) doc["arrival_attribute"] = *schema.arrival_attribute;
    return doc.dump(2) + "\n";
}

RunConfig config_from_json(const std::string& text, const Schema& schema) {
    const auto doc = parse_document(text, "config");
    reject_unknown_keys(doc, {"seed", "type_repair", "horizon", "modules", "injection", "include_synthetic"},
                        "config");
    RunConfig config;
    config.pipeline.schema = schema;
    if (doc.contains("seed")) config.pipeline.seed = get<std::uint64_t>(doc["seed"], "seed");
    if (doc.contains("type_repair")) {
        if (doc["type_repair"].is_null()) {
            config.pipeline.type_repair.reset();
        } else {
            const auto name = get<std::string>(doc["type_repair"], "type_repair");
            auto s = parse_repair_strategy(ErrorType::WrongType, name);
            if (!s) fault("type_repair: unknown strategy '" + name + "'");
            config.pipeline.type_repair = std::get<WrongTypeRepair>(*s);
        }
    }
    if (doc.contains("horizon")) {
        const auto& h = doc["horizon"];
        reject_unknown_keys(h, {"kind", "amount"}, "horizon");
        const auto kind = get<std::string>(h.at("kind"), "horizon.kind");
        const auto amount = get<std::int64_t>(h.value("amount", json(0)), "horizon.amount");
        if (kind == "none") {
            config.pipeline.horizon = Horizon::none();
        } else if (kind == "time") {
            config.pipeline.horizon = Horizon::time(Duration{amount});
        } else if (kind == "count") {
            config.pipeline.horizon = Horizon::count(amount);
        } else {
            fault("horizon.kind must be none, time or count");
        }
    }
    for (const auto& m : doc.value("modules", json::array())) {
        config.pipeline.modules.push_back(module_from_json(m, schema));
    }
    if (doc.contains("injection") && !doc["injection"].is_null()) {
        config.injection = injection_from_json(doc["injection"], schema);
    }
    config.include_synthetic = get<bool>(doc.value("include_synthetic", json(false)), "include_synthetic");

    if (auto faults = validate_config(config.pipeline); !faults.empty()) throw ConfigError(std::move(faults));
    return config;
}

std::string config_to_json(const RunConfig& config) {
    const auto& p = config.pipeline;
    ordered_json doc;
    doc["seed"] = p.seed;
    doc["type_repair"] = p.type_repair ? ordered_json(std::string(to_string(*p.type_repair))) : ordered_json(nullptr);
    switch (p.horizon.kind) {
        case Horizon::Kind::None: doc["horizon"] = {{"kind", "none"}}; break;
        case Horizon::Kind::Time: doc["horizon"] = {{"kind", "time"}, {"amount", p.horizon.amount}}; break;
        case Horizon::Kind::Count: doc["horizon"] = {{"kind", "count"}, {"amount", p.horizon.amount}}; break;
    }
    doc["modules"] = ordered_json::array();
    for (const auto& m : p.modules) {
        ordered_json j;
        j["type"] = std::string(to_string(m.type));
        if (m.repair) {
            j["repair"] = strategy_name(*m.repair);
            if (const auto* plan = std::get_if<MissingRepairPlan>(&*m.repair); plan && !plan->per_attribute.empty()) {
                ordered_json per = ordered_json::object();
                for (const auto& [attr, s] : plan->per_attribute) per[attr] = std::string(to_string(s));
                j["per_attribute"] = per;
            }
        }
        if (m.type == ErrorType::Outlier) {
            j["threshold"] = m.outlier.threshold;
            j["warmup"] = m.outlier.warmup;
            if (!m.outlier.targets.empty()) {
                ordered_json targets = ordered_json::array();
                for (auto t : m.outlier.targets) targets.push_back(p.schema.attributes.at(t).name);
                j["targets"] = targets;
            }
        }
        if (m.window) {
            j["window"] = {{"kind", m.window->kind == WindowSpec::Kind::Tumbling ? "tumbling" : "sliding"},
                           {"measure", m.window->measure == WindowSpec::Measure::Time ? "time" : "count"},
                           {"size", m.window->size},
                           {"slide", m.window->slide}};
        }
        doc["modules"].push_back(std::move(j));
    }
    if (config.injection) {
        const auto& s = *config.injection;
        ordered_json j;
        j["type"] = std::string(to_string(s.type));
        if (!s.targets.empty()) j["targets"] = s.targets;
        if (s.rate) j["rate"] = *s.rate;
        if (s.count) j["count"] = *s.count;
        j["seed"] = s.seed;
        j["interval_fraction"] = {s.interval_min_fraction, s.interval_max_fraction};
        j["outlier_sigma"] = {s.outlier_min_sigma, s.outlier_max_sigma};
        if (!s.fds.empty()) j["fds"] = s.fds;
        if (s.missing_marker) j["missing_marker"] = *s.missing_marker;
        doc["injection"] = std::move(j);
    }
    doc["include_synthetic"] = config.include_synthetic;
    return doc.dump(2) + "\n";
}

void select_modules(PipelineConfig& config, const std::vector<std::string>& names) {
    std::vector<ModuleConfig> selected;
    for (const auto& name : names) {
        auto type = error_type_from_string(name);
        if (!type) fault("--modules: unknown error type '" + name + "'");
        auto it = std::find_if(config.modules.begin(), config.modules.end(),
                               [&](const ModuleConfig& m) { return m.type == *type; });
        if (it != config.modules.end()) {
            selected.push_back(*it);
        } else {
            ModuleConfig m;
            m.type = *type;
            selected.push_back(m);
        }
    }
    config.modules = std::move(selected);
    if (auto faults = validate_config(config); !faults.empty()) throw ConfigError(std::move(faults));
}

}  // namespace streamclean
