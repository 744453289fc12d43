#include "streamclean/state.hpp"

#include <algorithm>

namespace streamclean {

namespace {

// Floor division that rounds toward negative infinity.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

bool horizon_expired(const Horizon& h, const StoreStamp& stamp, StoreStamp now) {
    switch (h.kind) {
        case Horizon::Kind::None: return false;
        case Horizon::Kind::Time: return stamp.at.millis < now.at.millis - h.amount;
        case Horizon::Kind::Count: return stamp.commit + static_cast<std::uint64_t>(h.amount) <= now.commit;
    }
    return false;
}

}  // namespace

// KeyStore

bool KeyStore::expired(const StoreStamp& stamp, StoreStamp now) const { return horizon_expired(horizon_, stamp, now); }

bool KeyStore::contains(const ValueTuple& key, StoreStamp now) const { return first_payload(key, now) != nullptr; }

const ValueTuple* KeyStore::first_payload(const ValueTuple& key, StoreStamp now) const {
    auto it = entries_.find(key);
    if (it == entries_.end() || expired(it->second.stamp, now)) return nullptr;
    return &it->second.payload;
}

void KeyStore::insert(const ValueTuple& key, ValueTuple payload, StoreStamp stamp) {
    auto it = entries_.find(key);
    if (it != entries_.end()) {
        if (!expired(it->second.stamp, stamp)) return;
        it->second = Entry{std::move(payload), stamp};
    } else {
        entries_.emplace(key, Entry{std::move(payload), stamp});
    }
    if (horizon_.kind != Horizon::Kind::None) order_.emplace_back(key, stamp);
}

void KeyStore::evict(StoreStamp latest) {
    while (!order_.empty() && expired(order_.front().second, latest)) {
        auto it = entries_.find(order_.front().first);
        // A key re-inserted after expiring carries a newer stamp; only the matching record removes it.
        if (it != entries_.end() && it->second.stamp == order_.front().second) entries_.erase(it);
        order_.pop_front();
    }
}

std::vector<ValueTuple> KeyStore::keys() const {
    std::vector<ValueTuple> out;
    out.reserve(entries_.size());
    for (const auto& [k, e] : entries_) out.push_back(k);
    std::sort(out.begin(), out.end());
    return out;
}

// VectorStore

bool VectorStore::expired(const StoreStamp& stamp, StoreStamp now) const {
    return horizon_expired(horizon_, stamp, now);
}

bool VectorStore::contains(const ValueTuple& values, StoreStamp now) const {
    auto it = entries_.find(values);
    return it != entries_.end() && !expired(it->second, now);
}

void VectorStore::insert(const ValueTuple& values, StoreStamp stamp) {
    auto it = entries_.find(values);
    if (it != entries_.end()) {
        if (!expired(it->second, stamp)) return;
        it->second = stamp;
    } else {
        entries_.emplace(values, stamp);
    }
    if (horizon_.kind != Horizon::Kind::None) order_.emplace_back(values, stamp);
}

void VectorStore::evict(StoreStamp latest) {
    while (!order_.empty() && expired(order_.front().second, latest)) {
        auto it = entries_.find(order_.front().first);
        if (it != entries_.end() && it->second == order_.front().second) entries_.erase(it);
        order_.pop_front();
    }
}

// Windows

std::optional<std::string> WindowSpec::fault() const {
    if (size <= 0) return "window size must be positive";
    if (kind == Kind::Sliding) {
        if (slide <= 0) return "window slide must be positive";
        if (slide > size) return "window slide exceeds window size";
    }
    return std::nullopt;
}

void WindowBuffer::push(std::uint64_t ordinal, Instant at, const ValueTuple& values) {
    items_.push_back({ordinal, at, values});
    if (spec_.measure == WindowSpec::Measure::Count) {
        while (items_.size() > static_cast<std::size_t>(spec_.size)) items_.pop_front();
    } else {
        while (!items_.empty() && items_.front().at.millis <= at.millis - spec_.size) items_.pop_front();
    }
}

std::vector<const ValueTuple*> WindowBuffer::members(Instant now, std::uint64_t committed) const {
    std::vector<const ValueTuple*> out;
    const std::int64_t size = spec_.size;
    const std::int64_t slide = spec_.effective_slide();
    if (spec_.measure == WindowSpec::Measure::Count) {
        if (committed == 0) return out;
        // Windows start at ordinals 1 + k*slide and span `size` ordinals.
        const auto c = static_cast<std::int64_t>(committed);
        const std::int64_t k = floor_div(c - size - 1, slide) + 1;
        const std::int64_t start = 1 + std::max<std::int64_t>(k, 0) * slide;
        for (const auto& item : items_) {
            const auto ord = static_cast<std::int64_t>(item.ordinal);
            if (ord >= start && ord <= c) out.push_back(&item.values);
        }
        return out;
    }
    // Windows are [k*slide, k*slide + size); pick the earliest start still containing `now`.
    const std::int64_t start = (floor_div(now.millis - size, slide) + 1) * slide;
    for (const auto& item : items_) {
        if (item.at.millis >= start && item.at.millis <= now.millis) out.push_back(&item.values);
    }
    return out;
}

// StreamState

StreamState::StreamState(const Schema& schema, StateOptions options)
    : key_positions_(schema.key_positions()),
      scope_positions_(schema.scope_positions()),
      stats_(schema.arity()),
      medians_(schema.arity()),
      modes_(schema.arity()),
      recent_(schema.arity()),
      last_value_(schema.arity()),
      keys_(options.horizon),
      vectors_(options.horizon) {
    numeric_.reserve(schema.arity());
    for (std::size_t i = 0; i < schema.arity(); ++i) numeric_.push_back(schema.is_numeric(i));
    for (const auto& spec : options.windows) {
        if (auto f = spec.fault()) throw UsageError(*f);
        windows_.emplace_back(spec);
    }
    for (std::size_t f = 0; f < schema.functional_dependencies.size(); ++f) {
        const auto& fd = schema.functional_dependencies[f];
        if (fd.unknown != UnknownTuplePolicy::LearnFirstSeen) continue;
        LearnedFd entry{f, {}, schema.require_position(fd.dependent), fd.mapping, {}};
        for (const auto& name : fd.determinant) entry.determinant.push_back(schema.require_position(name));
        learned_fds_.push_back(std::move(entry));
    }
}

const AttributeValue* StreamState::learned_dependent(std::size_t fd, const ValueTuple& determinant) const {
    for (const auto& entry : learned_fds_) {
        if (entry.fd != fd) continue;
        auto it = entry.learned.find(determinant);
        return it == entry.learned.end() ? nullptr : &it->second;
    }
    return nullptr;
}

ValueTuple StreamState::key_of(const DataVector& v) const {
    ValueTuple key;
    key.reserve(key_positions_.size());
    for (auto p : key_positions_) key.push_back(v.values[p]);
    return key;
}

ValueTuple StreamState::scope_of(const DataVector& v) const {
    ValueTuple scope;
    scope.reserve(scope_positions_.size());
    for (auto p : scope_positions_) scope.push_back(v.values[p]);
    return scope;
}

void StreamState::commit(const DataVector& v) {
    ++committed_;
    last_index_ = v.index;
    latest_arrival_ = v.arrival;
    const StoreStamp stamp{v.arrival, committed_};

    if (!key_positions_.empty()) {
        auto key = key_of(v);
        const bool complete = std::none_of(key.begin(), key.end(), [](const auto& x) { return x.is_null(); });
        if (complete) keys_.insert(key, scope_of(v), stamp);
    }
    vectors_.insert(v.values, stamp);

    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const auto& value = v.values[i];
        if (value.is_null()) continue;
        last_value_[i] = value;
        modes_[i].push(value);
        if (!numeric_[i]) continue;
        const auto x = value.numeric();
        if (!x) continue;  // type-faulted text left in a numeric column
        stats_[i] = update_stats(stats_[i], *x);
        medians_[i].push(*x);
        auto& pts = recent_[i];
        pts.push_back({v.arrival, *x});
        if (pts.size() > 2) pts.erase(pts.begin());
    }
    for (auto& w : windows_) w.push(committed_, v.arrival, v.values);
    for (auto& entry : learned_fds_) {
        ValueTuple det;
        for (auto p : entry.determinant) det.push_back(v.values[p]);
        const auto& dep = v.values[entry.dependent];
        if (dep.is_null() || std::any_of(det.begin(), det.end(), [](const auto& x) { return x.is_null(); })) continue;
        if (entry.declared.count(det)) continue;
        entry.learned.emplace(std::move(det), dep);
    }

    keys_.evict(stamp);
    vectors_.evict(stamp);
}

Profile StreamState::prefix_profile() const {
    Profile out(stats_.size());
    for (std::size_t i = 0; i < stats_.size(); ++i) {
        out[i].stats = stats_[i];
        out[i].median = medians_[i].median();
        out[i].mode = modes_[i].mode();
    }
    return out;
}

const WindowBuffer& StreamState::buffer_for(const WindowSpec& spec) const {
    for (const auto& w : windows_) {
        if (w.spec() == spec) return w;
    }
    throw UsageError("window specification is not configured on this state");
}

std::vector<RunningStats> StreamState::window_snapshot(const WindowSpec& spec, Instant now) const {
    const auto members = buffer_for(spec).members(now, committed_);
    std::vector<RunningStats> out(stats_.size());
    for (const auto* values : members) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (!numeric_[i]) continue;
            if (auto x = (*values)[i].numeric()) out[i] = update_stats(out[i], *x);
        }
    }
    return out;
}

Profile StreamState::window_profile(const WindowSpec& spec, Instant now) const {
    const auto members = buffer_for(spec).members(now, committed_);
    Profile out(stats_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        RunningMedian median;
        ModeTracker mode;
        for (const auto* values : members) {
            const auto& value = (*values)[i];
            if (value.is_null()) continue;
            mode.push(value);
            if (!numeric_[i]) continue;
            if (auto x = value.numeric()) {
                out[i].stats = update_stats(out[i].stats, *x);
                median.push(*x);
            }
        }
        out[i].median = median.median();
        out[i].mode = mode.mode();
    }
    return out;
}

StreamState commit_vector(StreamState state, const DataVector& v) {
    state.commit(v);
    return state;
}

}  // namespace streamclean
