#pragma once

#include "streamclean/schema.hpp"
#include "streamclean/stats.hpp"
#include "streamclean/vector.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace streamclean {

/// Retention bound for keyed stores. None keeps the full prefix.
struct Horizon {
    enum class Kind { None, Time, Count };
    Kind kind = Kind::None;
    std::int64_t amount = 0;  ///< milliseconds for Time, commits for Count

    static Horizon none() { return {}; }
    static Horizon time(Duration d) { return {Kind::Time, d.millis}; }
    static Horizon count(std::int64_t n) { return {Kind::Count, n}; }

    friend bool operator==(const Horizon&, const Horizon&) = default;
};

/// Where an entry was inserted: arrival time and commit ordinal.
struct StoreStamp {
    Instant at;
    std::uint64_t commit = 0;

    friend bool operator==(const StoreStamp&, const StoreStamp&) = default;
};

/// Seen keys plus the contradiction-scope payload of the first vector that bore each key.
class KeyStore {
public:
    explicit KeyStore(Horizon horizon = Horizon::none()) : horizon_(horizon) {}

    /// Lookups take the current position so that entries past the horizon read as absent
    /// even before the next commit evicts them.
    bool contains(const ValueTuple& key, StoreStamp now) const;
    const ValueTuple* first_payload(const ValueTuple& key, StoreStamp now) const;

    /// No-op when the key is already live.
    void insert(const ValueTuple& key, ValueTuple payload, StoreStamp stamp);
    void evict(StoreStamp latest);

    std::size_t size() const { return entries_.size(); }
    std::vector<ValueTuple> keys() const;
    const Horizon& horizon() const { return horizon_; }

    friend bool operator==(const KeyStore& a, const KeyStore& b) { return a.entries_ == b.entries_; }

private:
    struct Entry {
        ValueTuple payload;
        StoreStamp stamp;
        friend bool operator==(const Entry&, const Entry&) = default;
    };
    bool expired(const StoreStamp& stamp, StoreStamp now) const;

    Horizon horizon_;
    std::unordered_map<ValueTuple, Entry, ValueTupleHash> entries_;
    std::deque<std::pair<ValueTuple, StoreStamp>> order_;
};

/// Full value tuples of processed vectors. Exact tuples, never lossy digests.
class VectorStore {
public:
    explicit VectorStore(Horizon horizon = Horizon::none()) : horizon_(horizon) {}

    bool contains(const ValueTuple& values, StoreStamp now) const;
    void insert(const ValueTuple& values, StoreStamp stamp);
    void evict(StoreStamp latest);
    std::size_t size() const { return entries_.size(); }

    friend bool operator==(const VectorStore& a, const VectorStore& b) { return a.entries_ == b.entries_; }

private:
    bool expired(const StoreStamp& stamp, StoreStamp now) const;

    Horizon horizon_;
    std::unordered_map<ValueTuple, StoreStamp, ValueTupleHash> entries_;
    std::deque<std::pair<ValueTuple, StoreStamp>> order_;
};

struct WindowSpec {
    enum class Kind { Tumbling, Sliding };
    enum class Measure { Time, Count };
    Kind kind = Kind::Tumbling;
    Measure measure = Measure::Count;
    std::int64_t size = 0;   ///< milliseconds or vectors
    std::int64_t slide = 0;  ///< sliding only; tumbling windows slide by their size

    std::int64_t effective_slide() const { return kind == Kind::Tumbling ? size : slide; }
    /// Empty when valid.
    std::optional<std::string> fault() const;

    friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Per-attribute summary a repair or detection may draw on.
struct AttributeProfile {
    RunningStats stats;
    std::optional<double> median;
    std::optional<AttributeValue> mode;
};
using Profile = std::vector<AttributeProfile>;

/// Committed vectors retained for one window specification.
class WindowBuffer {
public:
    explicit WindowBuffer(WindowSpec spec) : spec_(spec) {}

    void push(std::uint64_t ordinal, Instant at, const ValueTuple& values);
    /// Members of the longest-running open window that contains `now`
    /// (or the latest committed ordinal, for count windows).
    std::vector<const ValueTuple*> members(Instant now, std::uint64_t committed) const;

    const WindowSpec& spec() const { return spec_; }

    friend bool operator==(const WindowBuffer&, const WindowBuffer&) = default;

private:
    struct Item {
        std::uint64_t ordinal;
        Instant at;
        ValueTuple values;
        friend bool operator==(const Item&, const Item&) = default;
    };
    WindowSpec spec_;
    std::deque<Item> items_;
};

struct StateOptions {
    Horizon horizon;
    std::vector<WindowSpec> windows;
};

/// Everything known after the committed prefix: statistics, keyed stores, windows.
class StreamState {
public:
    StreamState(const Schema& schema, StateOptions options = {});

    void commit(const DataVector& v);

    std::uint64_t committed() const { return committed_; }
    std::optional<Instant> latest_arrival() const { return latest_arrival_; }
    std::uint64_t last_index() const { return last_index_; }
    /// Stamp that lookups for an incoming vector arriving at `at` should use.
    StoreStamp probe(Instant at) const { return {at, committed_}; }

    const KeyStore& keys() const { return keys_; }
    const VectorStore& vectors() const { return vectors_; }
    const std::vector<RunningStats>& stats() const { return stats_; }

    struct Point {
        Instant at;
        double value;
        friend bool operator==(const Point&, const Point&) = default;
    };
    /// Last one or two committed non-null numeric observations, oldest first.
    const std::vector<Point>& recent_points(std::size_t pos) const { return recent_[pos]; }
    const std::optional<AttributeValue>& last_value(std::size_t pos) const { return last_value_[pos]; }

    Profile prefix_profile() const;
    /// Throws UsageError when `spec` was not configured.
    std::vector<RunningStats> window_snapshot(const WindowSpec& spec, Instant now) const;
    Profile window_profile(const WindowSpec& spec, Instant now) const;

    ValueTuple key_of(const DataVector& v) const;
    ValueTuple scope_of(const DataVector& v) const;

    /// Dependent value learned for an unmapped determinant tuple of a learn-first-seen FD.
    const AttributeValue* learned_dependent(std::size_t fd, const ValueTuple& determinant) const;

    friend bool operator==(const StreamState&, const StreamState&) = default;

private:
    const WindowBuffer& buffer_for(const WindowSpec& spec) const;

    std::vector<std::size_t> key_positions_;
    std::vector<std::size_t> scope_positions_;
    std::vector<bool> numeric_;
    std::uint64_t committed_ = 0;
    std::uint64_t last_index_ = 0;
    std::optional<Instant> latest_arrival_;
    std::vector<RunningStats> stats_;
    std::vector<RunningMedian> medians_;
    std::vector<ModeTracker> modes_;
    std::vector<std::vector<Point>> recent_;
    std::vector<std::optional<AttributeValue>> last_value_;
    KeyStore keys_;
    VectorStore vectors_;
    std::vector<WindowBuffer> windows_;

    struct LearnedFd {
        std::size_t fd;
        std::vector<std::size_t> determinant;
        std::size_t dependent;
        std::map<ValueTuple, AttributeValue> declared;
        std::map<ValueTuple, AttributeValue> learned;
        friend bool operator==(const LearnedFd& a, const LearnedFd& b) {
            return a.fd == b.fd && a.learned == b.learned;
        }
    };
    std::vector<LearnedFd> learned_fds_;
};

/// Value-semantics form of StreamState::commit.
StreamState commit_vector(StreamState state, const DataVector& v);

}  // namespace streamclean
