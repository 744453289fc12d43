#pragma once

#include "streamclean/value.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace streamclean {

class StateCorruptionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Single-pass mean/variance accumulator (Welford). Variance is the population variance.
struct RunningStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double mean_carry = 0.0;  // low-order part of the mean
    double m2 = 0.0;
    double min = 0.0;
    double max = 0.0;

    bool defined() const { return count > 0; }
    double variance() const { return count ? m2 / static_cast<double>(count) : 0.0; }
    double stddev() const;

    friend bool operator==(const RunningStats&, const RunningStats&) = default;
};

/// Throws StateCorruptionError for non-finite input.
RunningStats update_stats(RunningStats stats, double x);

/// Median of everything pushed so far, kept as a max-heap/min-heap pair.
class RunningMedian {
public:
    void push(double x);
    std::optional<double> median() const;
    std::size_t size() const { return lower_.size() + upper_.size(); }

    friend bool operator==(const RunningMedian&, const RunningMedian&) = default;

private:
    std::vector<double> lower_;  // max-heap
    std::vector<double> upper_;  // min-heap
};

/// Most frequent value; ties go to the smallest value.
class ModeTracker {
public:
    void push(const AttributeValue& v);
    std::optional<AttributeValue> mode() const;

    friend bool operator==(const ModeTracker&, const ModeTracker&) = default;

private:
    std::map<AttributeValue, std::uint64_t> counts_;
    std::optional<AttributeValue> best_;
    std::uint64_t best_count_ = 0;
};

}  // namespace streamclean
