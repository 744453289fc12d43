#include "streamclean/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace streamclean {

double RunningStats::stddev() const { return std::sqrt(variance()); }

RunningStats update_stats(RunningStats stats, double x) {
    if (!std::isfinite(x)) throw StateCorruptionError("non-finite value offered to running statistics");
    if (stats.count == 0) {
        stats.min = stats.max = x;
    } else {
        stats.min = std::min(stats.min, x);
        stats.max = std::max(stats.max, x);
    }
    ++stats.count;
    // Mean kept as an unevaluated sum mean + mean_carry (Neumaier), so data with a
    // large offset and tiny spread does not lose the variance to rounding.
    const double delta = (x - stats.mean) - stats.mean_carry;
    const double step = delta / static_cast<double>(stats.count);
    const double sum = stats.mean + step;
    const double carry =
        stats.mean_carry + (std::abs(stats.mean) >= std::abs(step) ? (stats.mean - sum) + step : (step - sum) + stats.mean);
    stats.mean = sum + carry;
    stats.mean_carry = carry - (stats.mean - sum);
    stats.m2 += delta * ((x - stats.mean) - stats.mean_carry);
    return stats;
}

void RunningMedian::push(double x) {
    if (lower_.empty() || x <= lower_.front()) {
        lower_.push_back(x);
        std::push_heap(lower_.begin(), lower_.end());
    } else {
        upper_.push_back(x);
        std::push_heap(upper_.begin(), upper_.end(), std::greater<>{});
    }
    if (lower_.size() > upper_.size() + 1) {
        std::pop_heap(lower_.begin(), lower_.end());
        upper_.push_back(lower_.back());
        lower_.pop_back();
        std::push_heap(upper_.begin(), upper_.end(), std::greater<>{});
    } else if (upper_.size() > lower_.size()) {
        std::pop_heap(upper_.begin(), upper_.end(), std::greater<>{});
        lower_.push_back(upper_.back());
        upper_.pop_back();
        std::push_heap(lower_.begin(), lower_.end());
    }
}

std::optional<double> RunningMedian::median() const {
    if (lower_.empty()) return std::nullopt;
    if (lower_.size() > upper_.size()) return lower_.front();
    return (lower_.front() + upper_.front()) / 2.0;
}

void ModeTracker::push(const AttributeValue& v) {
    const auto n = ++counts_[v];
    if (n > best_count_ || (n == best_count_ && best_ && v < *best_)) {
        best_ = v;
        best_count_ = n;
    }
}

std::optional<AttributeValue> ModeTracker::mode() const { return best_; }

}  // namespace streamclean
