#pragma once

#include "streamclean/schema.hpp"
#include "streamclean/value.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace streamclean {

/// One timestamped record of a stream.
struct DataVector {
    std::uint64_t index = 0;  ///< 1-based position in the stream
    Instant arrival;
    ValueTuple values;
    /// Positions whose raw text could not be converted to the declared type.
    std::vector<std::size_t> type_faults;
    /// Inserted by missing-vector synthesis rather than read from the source.
    bool synthetic = false;

    bool has_type_fault(std::size_t pos) const;

    friend bool operator==(const DataVector&, const DataVector&) = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t expected, std::size_t actual);

    std::size_t expected() const { return expected_; }
    std::size_t actual() const { return actual_; }

private:
    std::size_t expected_;
    std::size_t actual_;
};

/// Converts raw fields to their declared types. Missing markers and empty fields
/// become null; unconvertible fields stay text and are recorded in type_faults.
/// Throws ParseError only on arity mismatch.
DataVector parse_vector(const std::vector<std::string>& raw, const Schema& schema, std::uint64_t index,
                        Instant arrival);

/// Field texts of a vector, one per attribute, null as empty text.
std::vector<std::string> serialize_vector(const DataVector& v);

}  // namespace streamclean
