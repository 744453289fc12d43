#include "streamclean/repairers.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <utility>

namespace streamclean {

namespace {

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<WrongTypeRepair, 3> kWrongType{{
    {WrongTypeRepair::Convert, "convert"},
    {WrongTypeRepair::ConvertWithFixups, "convert_with_fixups"},
    {WrongTypeRepair::DeleteValue, "delete_value"},
}};
constexpr NameTable<IntervalRepair, 4> kInterval{{
    {IntervalRepair::ClampNearest, "clamp_nearest"},
    {IntervalRepair::RandomInInterval, "random_in_interval"},
    {IntervalRepair::DistributionMean, "distribution_mean"},
    {IntervalRepair::CostBased, "cost_based"},
}};
constexpr NameTable<MissingRepair, 7> kMissing{{
    {MissingRepair::DeleteVector, "delete_vector"},
    {MissingRepair::LeaveNullWithRule, "leave_null_with_rule"},
    {MissingRepair::Mean, "mean"},
    {MissingRepair::Median, "median"},
    {MissingRepair::Mode, "mode"},
    {MissingRepair::LastValue, "last_value"},
    {MissingRepair::PreviousOnlyInterpolation, "previous_only_interpolation"},
}};
constexpr NameTable<OrderConflictRepair, 2> kOrder{{
    {OrderConflictRepair::RejectVector, "reject_vector"},
    {OrderConflictRepair::AlignToFirst, "align_to_first"},
}};
constexpr NameTable<OutlierRepair, 3> kOutlier{{
    {OutlierRepair::NearestNonOutlier, "nearest_non_outlier"},
    {OutlierRepair::DistributionMean, "distribution_mean"},
    {OutlierRepair::DeleteValue, "delete_value"},
}};
constexpr NameTable<FdRepair, 2> kFd{{
    {FdRepair::SetDependentFromMapping, "set_dependent_from_mapping"},
    {FdRepair::RejectVector, "reject_vector"},
}};
constexpr NameTable<MissingVectorRepair, 2> kMissingVector{{
    {MissingVectorRepair::SynthesizeLastValue, "synthesize_last_value"},
    {MissingVectorRepair::SynthesizeInterpolated, "synthesize_interpolated"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E value) {
    for (const auto& [e, name] : table) {
        if (e == value) return name;
    }
    return "unknown";
}

template <typename E, std::size_t N>
std::optional<E> lookup(const NameTable<E, N>& table, std::string_view name) {
    for (const auto& [e, n] : table) {
        if (n == name) return e;
    }
    return std::nullopt;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// "1,234,567" style grouping with the given separator (optionally signed).
bool grouped(std::string_view s, char sep) {
    if (!s.empty() && s.front() == '-') s.remove_prefix(1);
    const auto first = s.find(sep);
    if (first == std::string_view::npos || first == 0 || first > 3 || !is_digits(s.substr(0, first))) return false;
    s.remove_prefix(first);
    while (!s.empty()) {
        if (s.size() < 4 || s[0] != sep || !is_digits(s.substr(1, 3))) return false;
        s.remove_prefix(4);
    }
    return true;
}

std::string strip(std::string_view s, char c) {
    std::string out;
    for (char x : s) {
        if (x != c) out += x;
    }
    return out;
}

// Rewrites a number written with decimal commas or grouping separators into the canonical form.
std::optional<std::string> normalize_number(std::string_view s) {
    const auto comma = s.find(',');
    const auto dot = s.find('.');
    if (comma == std::string_view::npos && dot == std::string_view::npos) return std::string(s);
    if (comma != std::string_view::npos && dot != std::string_view::npos) {
        // The later separator is the decimal point.
        if (s.rfind(',') > s.rfind('.')) {
            std::string out = strip(s, '.');
            std::replace(out.begin(), out.end(), ',', '.');
            return out;
        }
        return strip(s, ',');
    }
    if (comma != std::string_view::npos) {
        if (std::count(s.begin(), s.end(), ',') > 1) {
            if (grouped(s, ',')) return strip(s, ',');
            return std::nullopt;
        }
        std::string out(s);
        out[comma] = '.';
        return out;
    }
    if (std::count(s.begin(), s.end(), '.') > 1 && grouped(s, '.')) return strip(s, '.');
    return std::string(s);
}

std::optional<AttributeValue> parse_fixed_date(std::string_view s) {
    // Day-first: DD.MM.YYYY or DD/MM/YYYY, optional " HH:MM[:SS]".
    if (s.size() >= 10 && (s[2] == '.' || s[2] == '/') && s[5] == s[2]) {
        std::string iso = std::string(s.substr(6, 4)) + "-" + std::string(s.substr(3, 2)) + "-" +
                          std::string(s.substr(0, 2));
        auto rest = trim(s.substr(10));
        if (!rest.empty()) {
            std::string time(rest);
            if (time.size() == 5) time += ":00";
            iso += " " + time;
        }
        if (auto t = parse_instant(iso)) return AttributeValue(*t);
        return std::nullopt;
    }
    // Compact: YYYYMMDD, optionally followed by [T]HHMMSS.
    std::string compact = strip(s, 'T');
    if (is_digits(compact) && (compact.size() == 8 || compact.size() == 14)) {
        std::string iso = compact.substr(0, 4) + "-" + compact.substr(4, 2) + "-" + compact.substr(6, 2);
        if (compact.size() == 14) {
            iso += " " + compact.substr(8, 2) + ":" + compact.substr(10, 2) + ":" + compact.substr(12, 2);
        }
        if (auto t = parse_instant(iso)) return AttributeValue(*t);
    }
    return std::nullopt;
}

CleaningDecision start_decision(const DataVector& v, std::span<const Finding> findings) {
    CleaningDecision d;
    d.vector_index = v.index;
    d.findings.assign(findings.begin(), findings.end());
    return d;
}

void set_value(RepairResult& r, const Schema& schema, std::size_t pos, AttributeValue value,
               std::string_view strategy) {
    auto& slot = r.vector.values[pos];
    if (slot == value) return;
    r.decision.changes.push_back(Change{schema.attributes[pos].name, slot, value, std::string(strategy)});
    slot = std::move(value);
    r.decision.outcome = Outcome::Repaired;
}

RepairResult deletion(const DataVector& v, std::span<const Finding> findings, std::string note) {
    RepairResult r{v, start_decision(v, findings)};
    r.decision.outcome = Outcome::Deleted;
    r.decision.notes.push_back(std::move(note));
    return r;
}

std::vector<std::size_t> finding_positions(std::span<const Finding> findings, const Schema& schema, ErrorType type) {
    std::vector<std::size_t> out;
    for (const auto& f : findings) {
        if (f.type != type || !f.attribute) continue;
        const auto p = schema.require_position(*f.attribute);
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
    return out;
}

double integral_lower(double bound, bool inclusive) {
    const double c = std::ceil(bound);
    return (!inclusive && c == bound) ? c + 1 : c;
}

double integral_upper(double bound, bool inclusive) {
    const double f = std::floor(bound);
    return (!inclusive && f == bound) ? f - 1 : f;
}

}  // namespace

MissingRepair MissingRepairPlan::for_attribute(const std::string& name) const {
    auto it = per_attribute.find(name);
    return it == per_attribute.end() ? fallback : it->second;
}

std::string_view to_string(WrongTypeRepair s) { return name_of(kWrongType, s); }
std::string_view to_string(IntervalRepair s) { return name_of(kInterval, s); }
std::string_view to_string(MissingRepair s) { return name_of(kMissing, s); }
std::string_view to_string(OrderConflictRepair s) { return name_of(kOrder, s); }
std::string_view to_string(OutlierRepair s) { return name_of(kOutlier, s); }
std::string_view to_string(FdRepair s) { return name_of(kFd, s); }
std::string_view to_string(MissingVectorRepair s) { return name_of(kMissingVector, s); }

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::Repaired: return "repaired";
        case Outcome::Deleted: return "deleted";
    }
    return "unknown";
}

std::optional<MissingRepair> parse_missing_repair(std::string_view name) { return lookup(kMissing, name); }

std::optional<RepairStrategy> parse_repair_strategy(ErrorType type, std::string_view name) {
    auto wrap = [](auto opt) -> std::optional<RepairStrategy> {
        if (opt) return RepairStrategy{*opt};
        return std::nullopt;
    };
    switch (type) {
        case ErrorType::WrongType: return wrap(lookup(kWrongType, name));
        case ErrorType::Interval: return wrap(lookup(kInterval, name));
        case ErrorType::Missing:
            if (auto m = lookup(kMissing, name)) return RepairStrategy{MissingRepairPlan{*m, {}}};
            return std::nullopt;
        case ErrorType::Uniqueness:
        case ErrorType::Duplicate:
        case ErrorType::Contradiction: {
            auto s = lookup(kOrder, name);
            if (s == OrderConflictRepair::AlignToFirst && type != ErrorType::Contradiction) return std::nullopt;
            return wrap(s);
        }
        case ErrorType::Outlier: return wrap(lookup(kOutlier, name));
        case ErrorType::Fd: return wrap(lookup(kFd, name));
        case ErrorType::MissingVector: return wrap(lookup(kMissingVector, name));
    }
    return std::nullopt;
}

bool strategy_fits(ErrorType type, const RepairStrategy& strategy) {
    switch (type) {
        case ErrorType::WrongType: return std::holds_alternative<WrongTypeRepair>(strategy);
        case ErrorType::Interval: return std::holds_alternative<IntervalRepair>(strategy);
        case ErrorType::Missing: return std::holds_alternative<MissingRepairPlan>(strategy);
        case ErrorType::Uniqueness:
        case ErrorType::Duplicate:
            return std::holds_alternative<OrderConflictRepair>(strategy) &&
                   std::get<OrderConflictRepair>(strategy) == OrderConflictRepair::RejectVector;
        case ErrorType::Contradiction: return std::holds_alternative<OrderConflictRepair>(strategy);
        case ErrorType::Outlier: return std::holds_alternative<OutlierRepair>(strategy);
        case ErrorType::Fd: return std::holds_alternative<FdRepair>(strategy);
        case ErrorType::MissingVector: return std::holds_alternative<MissingVectorRepair>(strategy);
    }
    return false;
}

// Conversions

std::optional<AttributeValue> convert_plain(const AttributeValue& value, ValueType type) {
    if (value.is_null()) return value;
    if (value.matches(type)) return value;
    if (value.is_text()) {
        const auto text = trim(value.as_text());
        if (type == ValueType::Boolean) {
            const auto l = lower(text);
            if (l == "true" || l == "t" || l == "yes" || l == "y" || l == "1") return AttributeValue(true);
            if (l == "false" || l == "f" || l == "no" || l == "n" || l == "0") return AttributeValue(false);
            return std::nullopt;
        }
        if (auto v = convert_strict(text, type)) return v;
        if (type == ValueType::Integer) {
            if (auto f = convert_strict(text, ValueType::Float)) {
                const double x = f->as_float();
                if (x == std::floor(x) && std::abs(x) < 9.0e15) return AttributeValue(static_cast<std::int64_t>(x));
            }
        }
        return std::nullopt;
    }
    switch (type) {
        case ValueType::Text: return AttributeValue(format_value(value));
        case ValueType::Float:
            if (value.is_integer()) return AttributeValue(static_cast<double>(value.as_integer()));
            if (value.is_boolean()) return AttributeValue(value.as_boolean() ? 1.0 : 0.0);
            return std::nullopt;
        case ValueType::Integer:
            if (value.is_float() && value.as_float() == std::floor(value.as_float())) {
                return AttributeValue(static_cast<std::int64_t>(value.as_float()));
            }
            if (value.is_boolean()) return AttributeValue(static_cast<std::int64_t>(value.as_boolean()));
            return std::nullopt;
        case ValueType::Boolean:
            if (value.is_integer() && (value.as_integer() == 0 || value.as_integer() == 1)) {
                return AttributeValue(value.as_integer() == 1);
            }
            return std::nullopt;
        case ValueType::Instant:
            if (value.is_integer()) return AttributeValue(Instant{value.as_integer()});
            return std::nullopt;
    }
    return std::nullopt;
}

std::optional<AttributeValue> convert_with_fixups(const AttributeValue& value, ValueType type) {
    if (auto v = convert_plain(value, type)) return v;
    if (!value.is_text()) return std::nullopt;
    const auto text = trim(value.as_text());
    switch (type) {
        case ValueType::Float:
        case ValueType::Integer: {
            std::string cleaned = strip(text, ' ');
            cleaned = strip(cleaned, '\'');
            if (type == ValueType::Integer && (grouped(cleaned, ',') || grouped(cleaned, '.'))) {
                return convert_plain(AttributeValue(strip(strip(cleaned, ','), '.')), type);
            }
            if (auto n = normalize_number(cleaned)) return convert_plain(AttributeValue(*n), type);
            return std::nullopt;
        }
        case ValueType::Instant:
            return parse_fixed_date(text);
        default:
            return std::nullopt;
    }
}

// Wrong data type

RepairResult repair_wrong_type(const DataVector& v, std::span<const Finding> findings, const Schema& schema,
                               WrongTypeRepair strategy) {
    RepairResult r{v, start_decision(v, findings)};
    const auto name = to_string(strategy);
    for (auto pos : finding_positions(findings, schema, ErrorType::WrongType)) {
        const auto& attr = schema.attributes[pos];
        std::optional<AttributeValue> converted;
        if (strategy == WrongTypeRepair::Convert) converted = convert_plain(v.values[pos], attr.type);
        if (strategy == WrongTypeRepair::ConvertWithFixups) converted = convert_with_fixups(v.values[pos], attr.type);
        if (!converted && strategy != WrongTypeRepair::DeleteValue) {
            r.decision.notes.push_back(attr.name + ": conversion of '" + format_value(v.values[pos]) + "' failed");
        }
        set_value(r, schema, pos, converted.value_or(AttributeValue::null()), name);
        auto& faults = r.vector.type_faults;
        faults.erase(std::remove(faults.begin(), faults.end(), pos), faults.end());
    }
    return r;
}

// Interval violations

std::optional<AttributeValue> clamp_into(const AttributeValue& value, const SchemaAttribute& attr) {
    if (!attr.interval) return value;
    const auto x = value.numeric();
    if (attr.interval->is_continuous()) {
        if (!x) return std::nullopt;
        const auto& c = attr.interval->continuous();
        if (c.contains(*x)) return value;
        double target = *x;
        if (attr.type == ValueType::Float) {
            if (*x <= c.lower) target = c.lower_inclusive ? c.lower : std::nextafter(c.lower, c.upper);
            if (*x >= c.upper) target = c.upper_inclusive ? c.upper : std::nextafter(c.upper, c.lower);
        } else {
            if (*x <= c.lower) target = integral_lower(c.lower, c.lower_inclusive);
            if (*x >= c.upper) target = integral_upper(c.upper, c.upper_inclusive);
        }
        return from_numeric(target, attr.type);
    }
    const auto& allowed = attr.interval->discrete().allowed;
    if (!x) return std::nullopt;
    std::optional<AttributeValue> best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& a : allowed) {
        const auto y = a.numeric();
        if (!y) return std::nullopt;  // non-ordinal set
        const double d = std::abs(*y - *x);
        if (d < best_dist || (d == best_dist && best && a < *best)) {
            best = a;
            best_dist = d;
        }
    }
    return best;
}

RepairResult repair_interval(const DataVector& v, std::span<const Finding> findings, const Profile& profile,
                             const Schema& schema, IntervalRepair strategy, std::mt19937_64& rng) {
    RepairResult r{v, start_decision(v, findings)};
    const auto name = to_string(strategy);
    for (auto pos : finding_positions(findings, schema, ErrorType::Interval)) {
        const auto& attr = schema.attributes[pos];
        if (!attr.interval) continue;
        const auto& value = r.vector.values[pos];

        auto clamp_or_mode = [&]() -> std::optional<AttributeValue> {
            if (auto c = clamp_into(value, attr)) return c;
            r.decision.notes.push_back(attr.name + ": no ordinal nearest value, using prefix mode");
            if (pos < profile.size() && profile[pos].mode) return profile[pos].mode;
            r.decision.notes.push_back(attr.name + ": no prefix mode available, value kept");
            return std::nullopt;
        };

        std::optional<AttributeValue> replacement;
        switch (strategy) {
            case IntervalRepair::ClampNearest:
            case IntervalRepair::CostBased:
                replacement = clamp_or_mode();
                break;
            case IntervalRepair::RandomInInterval:
                if (attr.interval->is_continuous()) {
                    const auto& c = attr.interval->continuous();
                    if (attr.type == ValueType::Float) {
                        std::uniform_real_distribution<double> dist(c.lower, c.upper);
                        double x = dist(rng);
                        if (!c.contains(x)) x = (c.lower + c.upper) / 2.0;
                        replacement = AttributeValue(x);
                    } else {
                        std::uniform_int_distribution<std::int64_t> dist(
                            static_cast<std::int64_t>(integral_lower(c.lower, c.lower_inclusive)),
                            static_cast<std::int64_t>(integral_upper(c.upper, c.upper_inclusive)));
                        replacement = from_numeric(static_cast<double>(dist(rng)), attr.type);
                    }
                } else {
                    const auto& allowed = attr.interval->discrete().allowed;
                    std::uniform_int_distribution<std::size_t> dist(0, allowed.size() - 1);
                    replacement = allowed[dist(rng)];
                }
                break;
            case IntervalRepair::DistributionMean:
                if (pos < profile.size() && profile[pos].stats.defined()) {
                    replacement = clamp_into(from_numeric(profile[pos].stats.mean, attr.type), attr);
                }
                if (!replacement) {
                    r.decision.notes.push_back(attr.name + ": no distribution available, clamping instead");
                    replacement = clamp_or_mode();
                }
                break;
        }
        if (replacement) set_value(r, schema, pos, *replacement, name);
    }
    return r;
}

// Missing values

RepairResult repair_missing(const DataVector& v, std::span<const Finding> findings, const StreamState& state,
                            const Profile& profile, const Schema& schema, const MissingRepairPlan& plan) {
    const auto positions = finding_positions(findings, schema, ErrorType::Missing);
    for (auto pos : positions) {
        if (plan.for_attribute(schema.attributes[pos].name) == MissingRepair::DeleteVector) {
            return deletion(v, findings, schema.attributes[pos].name + ": vector removed for missing value");
        }
    }

    RepairResult r{v, start_decision(v, findings)};
    for (auto pos : positions) {
        const auto& attr = schema.attributes[pos];
        const auto strategy = plan.for_attribute(attr.name);
        const auto name = to_string(strategy);
        const bool numeric = schema.is_numeric(pos);
        std::optional<AttributeValue> replacement;
        auto defer = [&](const std::string& why) { r.decision.notes.push_back(attr.name + ": deferred, " + why); };

        switch (strategy) {
            case MissingRepair::DeleteVector:
                break;
            case MissingRepair::LeaveNullWithRule:
                r.decision.notes.push_back(attr.name + ": left null under rule");
                break;
            case MissingRepair::Mean:
            case MissingRepair::Median:
                if (!numeric) {
                    if (profile[pos].mode) replacement = profile[pos].mode;
                    r.decision.notes.push_back(attr.name + ": non-numeric attribute, using mode");
                    break;
                }
                if (strategy == MissingRepair::Mean && profile[pos].stats.defined()) {
                    replacement = from_numeric(profile[pos].stats.mean, attr.type);
                } else if (strategy == MissingRepair::Median && profile[pos].median) {
                    replacement = from_numeric(*profile[pos].median, attr.type);
                }
                break;
            case MissingRepair::Mode:
                replacement = profile[pos].mode;
                break;
            case MissingRepair::LastValue:
                replacement = state.last_value(pos);
                break;
            case MissingRepair::PreviousOnlyInterpolation: {
                const auto& pts = state.recent_points(pos);
                if (!numeric || pts.size() < 2 || pts[0].at == pts[1].at) {
                    replacement = state.last_value(pos);
                    if (replacement) r.decision.notes.push_back(attr.name + ": fewer than two points, last value used");
                    break;
                }
                const double slope = (pts[1].value - pts[0].value) / static_cast<double>((pts[1].at - pts[0].at).millis);
                const double x = pts[1].value + slope * static_cast<double>((v.arrival - pts[1].at).millis);
                replacement = from_numeric(x, attr.type);
                break;
            }
        }
        if (replacement) {
            set_value(r, schema, pos, *replacement, name);
        } else if (strategy != MissingRepair::LeaveNullWithRule) {
            defer("no prefix data for " + std::string(name));
        }
    }
    return r;
}

// Duplicates, uniqueness violations, contradictions

RepairResult repair_order_conflict(const DataVector& v, std::span<const Finding> findings, const StreamState& state,
                                   const Schema& schema, OrderConflictRepair strategy) {
    if (strategy == OrderConflictRepair::RejectVector) {
        return deletion(v, findings, "vector rejected, an earlier vector holds its key or values");
    }
    for (const auto& f : findings) {
        if (f.type != ErrorType::Contradiction) {
            throw UsageError("align_to_first applies to contradictions only, got " + std::string(to_string(f.type)));
        }
    }
    RepairResult r{v, start_decision(v, findings)};
    const auto* first = state.keys().first_payload(state.key_of(v), state.probe(v.arrival));
    if (!first) {
        r.decision.notes.push_back("no first-seen payload for this key");
        return r;
    }
    const auto scope = schema.scope_positions();
    for (std::size_t s = 0; s < scope.size(); ++s) {
        if ((*first)[s].is_null()) continue;
        set_value(r, schema, scope[s], (*first)[s], to_string(strategy));
    }
    return r;
}

// Outliers

std::optional<double> nearest_non_outlier(double x, const RunningStats& stats, const OutlierParams& params,
                                          ValueType type) {
    if (!stats.defined()) return std::nullopt;
    const double sd = stats.stddev();
    const double sign = x >= stats.mean ? 1.0 : -1.0;
    double target = stats.mean + sign * params.threshold * sd;
    if (type == ValueType::Integer) {
        target = sign > 0 ? std::floor(target) : std::ceil(target);
        // A narrow band may hold no integer at all.
        for (int step = 0; step < 3; ++step, target -= sign) {
            if (!is_outlier(target, stats, params)) return target;
        }
        return std::nullopt;
    }
    // Rounding in mean + k*sd can land one ulp outside the acceptance region.
    while (is_outlier(target, stats, params)) target = std::nextafter(target, stats.mean);
    return target;
}

RepairResult repair_outlier(const DataVector& v, std::span<const Finding> findings,
                            std::span<const RunningStats> stats, const Schema& schema, OutlierRepair strategy,
                            const OutlierParams& params) {
    RepairResult r{v, start_decision(v, findings)};
    const auto name = to_string(strategy);
    for (auto pos : finding_positions(findings, schema, ErrorType::Outlier)) {
        const auto& attr = schema.attributes[pos];
        const auto x = r.vector.values[pos].numeric();
        if (!x || !stats[pos].defined() || stats[pos].count < params.warmup) {
            r.decision.notes.push_back(attr.name + ": statistics not warmed up, outlier left unrepaired");
            continue;
        }
        switch (strategy) {
            case OutlierRepair::NearestNonOutlier:
                if (auto y = nearest_non_outlier(*x, stats[pos], params, attr.type)) {
                    set_value(r, schema, pos, from_numeric(*y, attr.type), name);
                } else {
                    r.decision.notes.push_back(attr.name + ": no integer inside the acceptance band, left unrepaired");
                }
                break;
            case OutlierRepair::DistributionMean:
                set_value(r, schema, pos, from_numeric(stats[pos].mean, attr.type), name);
                break;
            case OutlierRepair::DeleteValue:
                set_value(r, schema, pos, AttributeValue::null(), name);
                break;
        }
    }
    return r;
}

// Functional dependencies

RepairResult repair_fd(const DataVector& v, std::span<const Finding> findings, const Schema& schema,
                       FdRepair strategy, const StreamState* state) {
    if (strategy == FdRepair::RejectVector) return deletion(v, findings, "vector rejected for FD violation");

    RepairResult r{v, start_decision(v, findings)};
    const auto flagged = finding_positions(findings, schema, ErrorType::Fd);
    for (std::size_t f = 0; f < schema.functional_dependencies.size(); ++f) {
        const auto& fd = schema.functional_dependencies[f];
        const auto dep = schema.require_position(fd.dependent);
        if (std::find(flagged.begin(), flagged.end(), dep) == flagged.end()) continue;
        ValueTuple det;
        for (const auto& n : fd.determinant) det.push_back(r.vector.values[schema.require_position(n)]);
        const AttributeValue* mapped = nullptr;
        if (auto it = fd.mapping.find(det); it != fd.mapping.end()) {
            mapped = &it->second;
        } else if (state) {
            mapped = state->learned_dependent(f, det);
        }
        if (!mapped) {
            r.decision.notes.push_back(fd.label() + ": determinant tuple has no mapping, not repaired");
            continue;
        }
        r.decision.notes.push_back(fd.label() + ": applied");
        set_value(r, schema, dep, *mapped, to_string(strategy));
    }
    return r;
}

// Missing vectors

std::vector<DataVector> synthesize_missing_vectors(const StreamState& state, const DataVector& v,
                                                   const Schema& schema, MissingVectorRepair strategy) {
    std::vector<DataVector> out;
    if (!schema.expected_cadence || !state.latest_arrival()) return out;
    const auto previous = *state.latest_arrival();
    const auto cadence = *schema.expected_cadence;
    const auto n = missing_slots(previous, v.arrival, cadence);
    const double span = static_cast<double>((v.arrival - previous).millis);
    for (std::int64_t k = 1; k <= n; ++k) {
        const Instant slot = previous + Duration{k * cadence.millis};
        const double frac = span > 0 ? static_cast<double>((slot - previous).millis) / span : 0.0;
        DataVector s;
        s.index = v.index;
        s.arrival = slot;
        s.synthetic = true;
        for (std::size_t i = 0; i < schema.arity(); ++i) {
            const auto& last = state.last_value(i);
            const auto type = schema.attributes[i].type;
            if (!last) {
                s.values.emplace_back();
                continue;
            }
            if (type == ValueType::Instant) {
                s.values.emplace_back(last->as_instant() + Duration{k * cadence.millis});
                continue;
            }
            const auto a = last->numeric();
            const auto b = v.values[i].numeric();
            if (strategy == MissingVectorRepair::SynthesizeInterpolated && a && b && schema.is_numeric(i)) {
                s.values.push_back(from_numeric(*a + (*b - *a) * frac, type));
            } else {
                s.values.push_back(*last);
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace streamclean
