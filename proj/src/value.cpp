#include "streamclean/value.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace streamclean {

std::string_view to_string(ValueType type) {
    switch (type) {
        case ValueType::Integer: return "integer";
        case ValueType::Float: return "float";
        case ValueType::Text: return "text";
        case ValueType::Boolean: return "boolean";
        case ValueType::Instant: return "instant";
    }
    return "unknown";
}

std::optional<ValueType> value_type_from_string(std::string_view name) {
    if (name == "integer") return ValueType::Integer;
    if (name == "float") return ValueType::Float;
    if (name == "text") return ValueType::Text;
    if (name == "boolean") return ValueType::Boolean;
    if (name == "instant") return ValueType::Instant;
    return std::nullopt;
}

bool AttributeValue::matches(ValueType type) const {
    switch (type) {
        case ValueType::Integer: return is_integer();
        case ValueType::Float: return is_float();
        case ValueType::Text: return is_text();
        case ValueType::Boolean: return is_boolean();
        case ValueType::Instant: return is_instant();
    }
    return false;
}

std::optional<double> AttributeValue::numeric() const {
    if (is_integer()) return static_cast<double>(as_integer());
    if (is_float()) return as_float();
    if (is_instant()) return static_cast<double>(as_instant().millis);
    return std::nullopt;
}

std::weak_ordering operator<=>(const AttributeValue& a, const AttributeValue& b) {
    if (a.storage_.index() != b.storage_.index()) {
        return a.storage_.index() <=> b.storage_.index();
    }
    return std::visit(
        [&](const auto& lhs) -> std::weak_ordering {
            using T = std::decay_t<decltype(lhs)>;
            const auto& rhs = std::get<T>(b.storage_);
            if constexpr (std::is_same_v<T, std::monostate>) {
                return std::weak_ordering::equivalent;
            } else if constexpr (std::is_same_v<T, double>) {
                if (lhs < rhs) return std::weak_ordering::less;
                if (rhs < lhs) return std::weak_ordering::greater;
                return std::weak_ordering::equivalent;
            } else {
                return lhs <=> rhs;
            }
        },
        a.storage_);
}

std::size_t AttributeValueHash::operator()(const AttributeValue& v) const noexcept {
    const std::size_t tag = v.storage().index() * 0x9e3779b97f4a7c15ULL;
    return std::visit(
        [tag](const auto& x) -> std::size_t {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return tag;
            } else if constexpr (std::is_same_v<T, Instant>) {
                return tag ^ std::hash<std::int64_t>{}(x.millis);
            } else {
                return tag ^ std::hash<T>{}(x);
            }
        },
        v.storage());
}

std::size_t ValueTupleHash::operator()(const ValueTuple& t) const noexcept {
    std::size_t seed = t.size();
    AttributeValueHash h;
    for (const auto& v : t) {
        seed ^= h(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    }
    return seed;
}

namespace {

using namespace std::chrono;

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

int to_int(std::string_view s) {
    int out = 0;
    std::from_chars(s.data(), s.data() + s.size(), out);
    return out;
}

}  // namespace

std::string format_instant(Instant t) {
    const auto tp = sys_time<milliseconds>{milliseconds{t.millis}};
    const auto day = floor<days>(tp);
    const year_month_day ymd{day};
    const hh_mm_ss hms{tp - day};
    char buf[40];
    int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:%02d:%02d", static_cast<int>(ymd.year()),
                          static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                          static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                          static_cast<int>(hms.seconds().count()));
    std::string out(buf, static_cast<std::size_t>(n));
    const auto ms = hms.subseconds().count();
    if (ms != 0) {
        std::snprintf(buf, sizeof buf, ".%03d", static_cast<int>(ms));
        out += buf;
    }
    return out;
}

// Accepts "YYYY-MM-DD", "YYYY-MM-DD HH:MM:SS", with 'T' as separator, an
// optional 1-3 digit fraction and an optional trailing 'Z'.
std::optional<Instant> parse_instant(std::string_view text) {
    if (!text.empty() && text.back() == 'Z') text.remove_suffix(1);
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    const auto y = text.substr(0, 4), mo = text.substr(5, 2), d = text.substr(8, 2);
    if (!all_digits(y) || !all_digits(mo) || !all_digits(d)) return std::nullopt;
    const year_month_day ymd{year{to_int(y)}, month{static_cast<unsigned>(to_int(mo))},
                             day{static_cast<unsigned>(to_int(d))}};
    if (!ymd.ok()) return std::nullopt;
    std::int64_t millis = duration_cast<milliseconds>(sys_days{ymd}.time_since_epoch()).count();
    if (text.size() == 10) return Instant{millis};

    if (text.size() < 19 || (text[10] != ' ' && text[10] != 'T') || text[13] != ':' || text[16] != ':') {
        return std::nullopt;
    }
    const auto hh = text.substr(11, 2), mm = text.substr(14, 2), ss = text.substr(17, 2);
    if (!all_digits(hh) || !all_digits(mm) || !all_digits(ss)) return std::nullopt;
    const int h = to_int(hh), m = to_int(mm), s = to_int(ss);
    if (h > 23 || m > 59 || s > 59) return std::nullopt;
    millis += ((h * 60LL + m) * 60LL + s) * 1000LL;

    auto rest = text.substr(19);
    if (rest.empty()) return Instant{millis};
    if (rest.front() != '.') return std::nullopt;
    rest.remove_prefix(1);
    if (rest.empty() || rest.size() > 3 || !all_digits(rest)) return std::nullopt;
    int frac = to_int(rest);
    for (auto i = rest.size(); i < 3; ++i) frac *= 10;
    return Instant{millis + frac};
}

std::string format_float(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_value(const AttributeValue& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "";
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<T, double>) {
                return format_float(x);
            } else if constexpr (std::is_same_v<T, std::string>) {
                return x;
            } else if constexpr (std::is_same_v<T, bool>) {
                return x ? "true" : "false";
            } else {
                return format_instant(x);
            }
        },
        v.storage());
}

std::optional<AttributeValue> convert_strict(std::string_view text, ValueType type) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    switch (type) {
        case ValueType::Text:
            return AttributeValue(std::string(text));
        case ValueType::Integer: {
            std::int64_t v = 0;
            auto res = std::from_chars(first, last, v);
            if (text.empty() || res.ec != std::errc{} || res.ptr != last) return std::nullopt;
            return AttributeValue(v);
        }
        case ValueType::Float: {
            // from_chars would also take "inf"/"nan"; only finite decimal literals are values.
            if (text.empty()) return std::nullopt;
            for (char c : text) {
                if (!((c >= '0' && c <= '9') || c == '.' || c == '-' || c == 'e' || c == 'E' || c == '+')) {
                    return std::nullopt;
                }
            }
            double v = 0;
            auto res = std::from_chars(first, last, v);
            if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v)) return std::nullopt;
            return AttributeValue(v);
        }
        case ValueType::Boolean:
            if (text == "true") return AttributeValue(true);
            if (text == "false") return AttributeValue(false);
            return std::nullopt;
        case ValueType::Instant:
            if (auto t = parse_instant(text)) return AttributeValue(*t);
            return std::nullopt;
    }
    return std::nullopt;
}

AttributeValue from_numeric(double v, ValueType type) {
    switch (type) {
        case ValueType::Integer: return AttributeValue(static_cast<std::int64_t>(std::llround(v)));
        case ValueType::Float: return AttributeValue(v);
        case ValueType::Instant: return AttributeValue(Instant{static_cast<std::int64_t>(std::llround(v))});
        default: return AttributeValue::null();
    }
}

}  // namespace streamclean
