#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace streamclean {

enum class ErrorType {
    Uniqueness,
    WrongType,
    Interval,
    Fd,
    Missing,
    Duplicate,
    Outlier,
    Contradiction,
    MissingVector,
};

std::string_view to_string(ErrorType type);
std::optional<ErrorType> error_type_from_string(std::string_view name);

/// Duplicates and missing vectors concern the whole vector and carry no attribute.
constexpr bool is_whole_vector(ErrorType type) {
    return type == ErrorType::Duplicate || type == ErrorType::MissingVector;
}

/// Errors recognised by a key collision, attributed to the key columns when scoring.
constexpr bool is_key_collision(ErrorType type) {
    return type == ErrorType::Uniqueness || type == ErrorType::Contradiction;
}

struct Finding {
    std::uint64_t vector_index = 0;
    std::optional<std::string> attribute;
    ErrorType type = ErrorType::Missing;
    std::string detail;

    friend bool operator==(const Finding&, const Finding&) = default;
};

}  // namespace streamclean
