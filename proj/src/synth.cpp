#include "streamclean/harness.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace streamclean {

namespace {

constexpr std::int64_t kMinute = 60'000;
constexpr std::int64_t kDay = 24 * 60 * kMinute;

double round_to(double x, int digits) {
    const double scale = std::pow(10.0, digits);
    return std::round(x * scale) / scale;
}

SchemaAttribute attribute(std::string name, ValueType type, std::optional<IntervalConstraint> interval = std::nullopt) {
    SchemaAttribute a;
    a.name = std::move(name);
    a.type = type;
    a.interval = std::move(interval);
    return a;
}

IntervalConstraint range(double lo, double hi) { return ContinuousInterval{lo, hi, true, true}; }

IntervalConstraint integers(std::int64_t lo, std::int64_t hi) {
    DiscreteInterval d;
    for (auto i = lo; i <= hi; ++i) d.allowed.emplace_back(i);
    return d;
}

Instant instant_of(const char* text) { return *parse_instant(text); }

std::vector<DataVector> intel_like(std::size_t size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    const Instant start = instant_of("2004-03-01 00:00:00");
    const std::int64_t cadence = 30'000;
    const double two_pi = 2.0 * std::numbers::pi;

    // Slow random walks on top of the daily cycle keep neighbouring points correlated.
    double drift_t = 0.0, drift_h = 0.0;
    std::vector<DataVector> out(size);
    for (std::size_t k = 0; k < size; ++k) {
        const auto t = start.millis + static_cast<std::int64_t>(k) * cadence;
        const double day = static_cast<double>(t - start.millis) / kDay;
        const double phase = two_pi * (day - std::floor(day));
        drift_t = 0.995 * drift_t + 0.05 * noise(rng);
        drift_h = 0.995 * drift_h + 0.1 * noise(rng);

        const double temperature = 21.0 + 3.5 * std::sin(phase - std::numbers::pi / 2) + drift_t + 0.1 * noise(rng);
        const double humidity = 38.0 - 6.0 * std::sin(phase - std::numbers::pi / 2) + drift_h + 0.3 * noise(rng);
        const double daylight = std::sin(phase - std::numbers::pi / 2);
        const double light = std::max(0.0, 650.0 * daylight + 40.0 + 10.0 * noise(rng));
        const double voltage = 2.72 - 0.03 * day / 7.0 + 0.003 * noise(rng);

        auto& v = out[k];
        v.index = k + 1;
        v.arrival = Instant{t};
        v.values = {AttributeValue(v.arrival), AttributeValue(round_to(temperature, 4)),
                    AttributeValue(round_to(humidity, 4)), AttributeValue(round_to(light, 2)),
                    AttributeValue(round_to(voltage, 5))};
    }
    return out;
}

std::vector<DataVector> taxi_like(const Schema& schema, std::size_t size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::exponential_distribution<double> distance(1.0 / 3.0);
    std::uniform_int_distribution<std::int64_t> location(1, 265);
    const Instant day = instant_of("2022-03-01 00:00:00");

    auto ratecode = [&] {
        const double u = unit(rng);
        if (u < 0.90) return 1;
        if (u < 0.94) return 2;
        if (u < 0.95) return 3;
        if (u < 0.96) return 4;
        if (u < 0.99) return 5;
        return 6;
    };
    const auto& fds = schema.functional_dependencies;
    auto mapped = [&](std::size_t fd, AttributeValue key) { return fds[fd].mapping.at(ValueTuple{std::move(key)}); };

    std::vector<DataVector> raw;
    raw.reserve(size);
    std::int64_t ride = 100'000;
    while (raw.size() < size) {
        ++ride;
        const auto pickup = day.millis + static_cast<std::int64_t>(unit(rng) * static_cast<double>(kDay));
        const double dist = round_to(std::min(100.0, distance(rng)), 2);
        const auto dropoff =
            pickup + static_cast<std::int64_t>((dist * 3.0 + 2.0 + 8.0 * unit(rng)) * static_cast<double>(kMinute));
        const auto rate = static_cast<std::int64_t>(ratecode());
        const auto pu = unit(rng) < 0.05 ? (unit(rng) < 0.5 ? 132 : 138) : location(rng);
        const auto payment = static_cast<std::int64_t>(1 + std::min(3.0, std::floor(unit(rng) * unit(rng) * 4.0)));

        const double fare = round_to(2.5 + 2.5 * dist, 2);
        const double extra = std::array<double, 3>{0.0, 0.5, 1.0}[static_cast<std::size_t>(unit(rng) * 3.0)];
        const auto mta = mapped(0, AttributeValue(rate));
        const auto improvement = mapped(1, mta);
        const auto airport = mapped(2, AttributeValue(static_cast<std::int64_t>(pu)));
        const double tip = payment == 1 ? round_to(fare * (0.1 + 0.15 * unit(rng)), 2) : 0.0;
        const double tolls = unit(rng) < 0.05 ? 6.55 : 0.0;
        const double congestion = unit(rng) < 0.9 ? 2.5 : 0.0;
        const double total = round_to(fare + extra + mta.as_float() + tip + tolls + improvement.as_float() +
                                          congestion + airport.as_float(),
                                      2);

        DataVector v;
        v.index = raw.size() + 1;
        v.values = {AttributeValue(ride),
                    AttributeValue(std::string("regular")),
                    AttributeValue(Instant{pickup}),
                    AttributeValue(Instant{dropoff}),
                    AttributeValue(static_cast<std::int64_t>(1 + std::floor(unit(rng) * unit(rng) * 4.0))),
                    AttributeValue(dist),
                    AttributeValue(rate),
                    AttributeValue(static_cast<std::int64_t>(pu)),
                    AttributeValue(location(rng)),
                    AttributeValue(payment),
                    AttributeValue(fare),
                    AttributeValue(extra),
                    mta,
                    AttributeValue(tip),
                    AttributeValue(tolls),
                    improvement,
                    AttributeValue(total),
                    AttributeValue(congestion),
                    airport,
                    AttributeValue::null()};
        const bool canceled = unit(rng) < 0.02 && raw.size() + 2 <= size;
        raw.push_back(v);
        if (canceled) {
            // Reversal entry: charged amounts negated, FD-governed surcharges left as booked.
            auto storno = v;
            storno.index = raw.size() + 1;
            storno.values[1] = AttributeValue(std::string("cancel_out"));
            for (std::size_t pos : {10, 11, 13, 14, 17}) storno.values[pos] = AttributeValue(-storno.values[pos].as_float());
            storno.values[16] = AttributeValue(round_to(-total + 2.0 * (mta.as_float() + improvement.as_float() + airport.as_float()), 2));
            raw.push_back(std::move(storno));
        }
    }
    return prep_taxi(raw, schema, seed ^ 0x9e3779b97f4a7c15ULL).data;
}

}  // namespace

std::optional<SyntheticProfile> synthetic_profile_from_string(std::string_view name) {
    if (name == "intel_like") return SyntheticProfile::IntelLike;
    if (name == "taxi_like") return SyntheticProfile::TaxiLike;
    return std::nullopt;
}

Schema intel_like_schema() {
    Schema s;
    auto ts = attribute("timestamp", ValueType::Instant);
    ts.key_member = ts.unique = true;
    s.attributes = {std::move(ts), attribute("temperature", ValueType::Float, range(-10.0, 60.0)),
                    attribute("humidity", ValueType::Float, range(0.0, 100.0)),
                    attribute("light", ValueType::Float, range(0.0, 2000.0)),
                    attribute("voltage", ValueType::Float, range(2.0, 3.0))};
    s.expected_cadence = Duration{30'000};
    s.contradiction_scope = {"temperature", "humidity", "light", "voltage"};
    s.arrival_attribute = "timestamp";
    return s;
}

Schema taxi_like_schema() {
    Schema s;
    auto ride = attribute("RideID", ValueType::Integer);
    ride.key_member = true;
    DiscreteInterval flags;
    flags.allowed = {AttributeValue(std::string("regular")), AttributeValue(std::string("cancel_out"))};
    auto storno = attribute("storno_flag", ValueType::Text, IntervalConstraint(flags));
    storno.key_member = true;

    s.attributes = {std::move(ride),
                    std::move(storno),
                    attribute("tpep_pickup_datetime", ValueType::Instant),
                    attribute("tpep_dropoff_datetime", ValueType::Instant),
                    attribute("passenger_count", ValueType::Integer, range(0, 9)),
                    attribute("trip_distance", ValueType::Float, range(0.0, 500.0)),
                    attribute("RatecodeID", ValueType::Integer, integers(1, 6)),
                    attribute("PULocationID", ValueType::Integer, integers(1, 265)),
                    attribute("DOLocationID", ValueType::Integer, integers(1, 265)),
                    attribute("payment_type", ValueType::Integer, integers(1, 6)),
                    attribute("fare_amount", ValueType::Float, range(-1000.0, 1000.0)),
                    attribute("extra", ValueType::Float, range(-10.0, 10.0)),
                    attribute("mta_tax", ValueType::Float, range(0.0, 0.5)),
                    attribute("tip_amount", ValueType::Float, range(-500.0, 500.0)),
                    attribute("tolls_amount", ValueType::Float, range(-200.0, 200.0)),
                    attribute("improvement_surcharge", ValueType::Float, range(0.0, 0.3)),
                    attribute("total_amount", ValueType::Float, range(-2000.0, 2000.0)),
                    attribute("congestion_surcharge", ValueType::Float, range(-2.5, 2.5)),
                    attribute("airport_fee", ValueType::Float, range(0.0, 1.25)),
                    attribute("timestamp", ValueType::Instant)};

    FunctionalDependency rate_tax{{"RatecodeID"}, "mta_tax", {}, UnknownTuplePolicy::Ignore};
    for (std::int64_t r = 1; r <= 6; ++r) {
        rate_tax.mapping[{AttributeValue(r)}] = AttributeValue(r == 3 || r == 5 ? 0.0 : 0.5);
    }
    FunctionalDependency tax_surcharge{{"mta_tax"}, "improvement_surcharge", {}, UnknownTuplePolicy::Ignore};
    tax_surcharge.mapping[{AttributeValue(0.5)}] = AttributeValue(0.3);
    tax_surcharge.mapping[{AttributeValue(0.0)}] = AttributeValue(0.0);
    FunctionalDependency airport{{"PULocationID"}, "airport_fee", {}, UnknownTuplePolicy::Ignore};
    for (std::int64_t p = 1; p <= 265; ++p) {
        airport.mapping[{AttributeValue(p)}] = AttributeValue(p == 132 || p == 138 ? 1.25 : 0.0);
    }
    s.functional_dependencies = {std::move(rate_tax), std::move(tax_surcharge), std::move(airport)};
    s.contradiction_scope = {"trip_distance", "fare_amount", "total_amount"};
    s.arrival_attribute = "timestamp";
    return s;
}

Dataset synthesize_dataset(SyntheticProfile profile, std::size_t size, std::uint64_t seed) {
    if (size < 100) throw ConfigError({"synthetic datasets need at least 100 vectors"});
    Dataset d;
    if (profile == SyntheticProfile::IntelLike) {
        d.schema = intel_like_schema();
        d.data = intel_like(size, seed);
    } else {
        d.schema = taxi_like_schema();
        d.data = taxi_like(d.schema, size, seed);
    }
    return d;
}

}  // namespace streamclean
