#include "streamclean/findings.hpp"

#include <array>
#include <utility>

namespace streamclean {

namespace {
constexpr std::array<std::pair<ErrorType, std::string_view>, 9> kNames{{
    {ErrorType::Uniqueness, "uniqueness"},
    {ErrorType::WrongType, "wrong_type"},
    {ErrorType::Interval, "interval"},
    {ErrorType::Fd, "fd"},
    {ErrorType::Missing, "missing"},
    {ErrorType::Duplicate, "duplicate"},
    {ErrorType::Outlier, "outlier"},
    {ErrorType::Contradiction, "contradiction"},
    {ErrorType::MissingVector, "missing_vector"},
}};
}  // namespace

std::string_view to_string(ErrorType type) {
    for (const auto& [t, name] : kNames) {
        if (t == type) return name;
    }
    return "unknown";
}

std::optional<ErrorType> error_type_from_string(std::string_view name) {
    for (const auto& [t, n] : kNames) {
        if (n == name) return t;
    }
    return std::nullopt;
}

}  // namespace streamclean
