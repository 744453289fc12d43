#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace streamclean {

/// UTC instant with millisecond precision, counted from the Unix epoch.
struct Instant {
    std::int64_t millis = 0;

    friend constexpr auto operator<=>(const Instant&, const Instant&) = default;
};

/// Signed span between two instants, in milliseconds.
struct Duration {
    std::int64_t millis = 0;

    friend constexpr auto operator<=>(const Duration&, const Duration&) = default;
};

constexpr Instant operator+(Instant t, Duration d) { return Instant{t.millis + d.millis}; }
constexpr Instant operator-(Instant t, Duration d) { return Instant{t.millis - d.millis}; }
constexpr Duration operator-(Instant a, Instant b) { return Duration{a.millis - b.millis}; }

enum class ValueType { Integer, Float, Text, Boolean, Instant };

std::string_view to_string(ValueType type);
std::optional<ValueType> value_type_from_string(std::string_view name);

/// One cell of a data vector. `std::monostate` is the null variant.
class AttributeValue {
public:
    using Storage = std::variant<std::monostate, std::int64_t, double, std::string, bool, Instant>;

    AttributeValue() = default;
    AttributeValue(std::int64_t v) : storage_(v) {}
    AttributeValue(int v) : storage_(static_cast<std::int64_t>(v)) {}
    AttributeValue(double v) : storage_(v) {}
    AttributeValue(std::string v) : storage_(std::move(v)) {}
    AttributeValue(const char* v) : storage_(std::string(v)) {}
    AttributeValue(bool v) : storage_(v) {}
    AttributeValue(Instant v) : storage_(v) {}

    static AttributeValue null() { return {}; }

    bool is_null() const { return std::holds_alternative<std::monostate>(storage_); }
    bool is_integer() const { return std::holds_alternative<std::int64_t>(storage_); }
    bool is_float() const { return std::holds_alternative<double>(storage_); }
    bool is_text() const { return std::holds_alternative<std::string>(storage_); }
    bool is_boolean() const { return std::holds_alternative<bool>(storage_); }
    bool is_instant() const { return std::holds_alternative<Instant>(storage_); }

    /// True when the active variant is the one `type` declares. Null matches nothing.
    bool matches(ValueType type) const;

    std::int64_t as_integer() const { return std::get<std::int64_t>(storage_); }
    double as_float() const { return std::get<double>(storage_); }
    const std::string& as_text() const { return std::get<std::string>(storage_); }
    bool as_boolean() const { return std::get<bool>(storage_); }
    Instant as_instant() const { return std::get<Instant>(storage_); }

    /// Numeric view: integers and floats as-is, instants as epoch milliseconds.
    std::optional<double> numeric() const;

    const Storage& storage() const { return storage_; }

    friend bool operator==(const AttributeValue&, const AttributeValue&) = default;
    /// Total order: variant index first, then value. Floats compare by value.
    friend std::weak_ordering operator<=>(const AttributeValue& a, const AttributeValue& b);

private:
    Storage storage_;
};

using ValueTuple = std::vector<AttributeValue>;

struct AttributeValueHash {
    std::size_t operator()(const AttributeValue& v) const noexcept;
};

struct ValueTupleHash {
    std::size_t operator()(const ValueTuple& t) const noexcept;
};

// Text conversions. Formatting is canonical: formatting a parsed canonical text
// reproduces it exactly.
std::string format_instant(Instant t);
std::optional<Instant> parse_instant(std::string_view text);
std::string format_float(double v);
std::string format_value(const AttributeValue& v);

/// Strict conversion of `text` to `type`; nullopt when the text is not a
/// canonical literal of that type.
std::optional<AttributeValue> convert_strict(std::string_view text, ValueType type);

/// Converts a numeric estimate into the declared type (integers round to nearest).
AttributeValue from_numeric(double v, ValueType type);

}  // namespace streamclean
