#include "oracles.hpp"
#include "support.hpp"

#include "streamclean/evaluator.hpp"
#include "streamclean/harness.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

using namespace streamclean;
using namespace testsupport;

namespace {

Schema xy() { return schema_of({keyed("id", ValueType::Integer), attr("x", ValueType::Float), attr("y", ValueType::Float)}); }

std::vector<DataVector> xy_data(std::size_t n) {
    std::vector<DataVector> out;
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(vec(i, at_seconds(static_cast<std::int64_t>(i)),
                          {AttributeValue(static_cast<int>(i)), AttributeValue(static_cast<double>(i)),
                           AttributeValue(static_cast<double>(i % 3))}));
    }
    return out;
}

RunLog log_with(const std::vector<DataVector>& data, std::vector<Finding> findings) {
    RunLog run;
    for (const auto& v : data) {
        VectorLog e;
        e.index = v.index;
        e.summary.vector_index = v.index;
        for (const auto& f : findings) {
            if (f.vector_index == v.index) e.summary.findings.push_back(f);
        }
        run.entries.push_back(std::move(e));
    }
    run.committed = data;
    return run;
}

InjectionEntry cell(std::uint64_t index, const std::string& attribute, ErrorType type = ErrorType::Interval) {
    return {index, attribute, type, AttributeValue(0.0), AttributeValue(1.0)};
}

Finding found(std::uint64_t index, std::optional<std::string> attribute, ErrorType type = ErrorType::Interval) {
    return {index, std::move(attribute), type, ""};
}

}  // namespace

TEST(Score, PerfectIntervalDetection) {
    auto d = synthesize_dataset(SyntheticProfile::IntelLike, 20160, 1);
    InjectionSpec spec;
    spec.type = ErrorType::Interval;
    spec.seed = 2;
    auto inj = inject(d.data, d.schema, spec);
    PipelineConfig cfg;
    cfg.schema = d.schema;
    cfg.modules.push_back({ErrorType::Interval, std::nullopt, {}, std::nullopt});
    auto p = Pipeline::build(cfg);
    auto run = run_stream(p, inj.corrupted);
    auto r = score(inj.log, run, d.data, run.committed, d.schema);
    EXPECT_EQ(r.total.injected, 2016u);
    EXPECT_EQ(r.total.correct, 2016u);
    EXPECT_EQ(r.total.false_positives, 0u);
    EXPECT_EQ(r.total.false_negatives, 0u);
    EXPECT_EQ(*r.total.percent_correct(), 100.0);
    EXPECT_EQ(r.per_column[0].injected, 0u);
    EXPECT_FALSE(r.per_column[0].percent_correct());
}

TEST(Score, IdentityExperiment) {
    auto data = xy_data(50);
    auto r = score({}, log_with(data, {}), data, data, xy());
    EXPECT_EQ(r.total, (ColumnMetrics{0, 0, 0, 0, 0, 100.0, 100.0}));
    for (const auto& c : r.per_column) {
        EXPECT_EQ(c.injected + c.identified + c.false_positives, 0u);
        EXPECT_EQ(*c.mean_ratio, 100.0);
        EXPECT_EQ(*c.std_ratio, 100.0);
    }
}

TEST(Score, HandEnumeratedMicroCase) {
    auto data = xy_data(20);
    InjectionLog log{{cell(2, "x"), cell(5, "x"), cell(9, "x"), cell(11, "x")}};
    auto run = log_with(data, {found(2, "x"), found(5, "x"), found(9, "x"), found(3, "x"), found(4, "x")});
    auto r = score(log, run, data, data, xy());
    const auto& x = r.per_column[1];
    EXPECT_EQ(x.injected, 4u);
    EXPECT_EQ(x.identified, 5u);
    EXPECT_EQ(x.correct, 3u);
    EXPECT_EQ(x.false_negatives, 1u);
    EXPECT_EQ(x.false_positives, 2u);
    EXPECT_EQ(*x.percent_correct(), 75.0);
    EXPECT_EQ(*x.percent_false_positive(), 50.0);
}

TEST(Score, CellsMatchOnIndexAndAttribute) {
    auto data = xy_data(10);
    InjectionLog log{{cell(2, "x"), cell(7, "y")}};
    auto r = score(log, log_with(data, {found(2, "y"), found(2, "x", ErrorType::Outlier)}), data, data, xy());
    // Another value detector firing on the injected cell still counts as found.
    EXPECT_EQ(r.per_column[1].correct, 1u);
    EXPECT_EQ(r.per_column[1].false_positives, 0u);
    EXPECT_EQ(r.per_column[2].false_positives, 1u);
    EXPECT_EQ(r.per_column[2].false_negatives, 1u);
    // A whole-vector finding never matches a cell entry.
    auto w = score(log, log_with(data, {found(7, std::nullopt, ErrorType::Duplicate)}), data, data, xy());
    EXPECT_EQ(w.per_column[2].correct, 0u);
    EXPECT_EQ(w.per_column[2].false_positives, 1u);
}

TEST(Score, WholeVectorAndKeyUnits) {
    auto data = xy_data(10);
    InjectionLog log{{InjectionEntry{4, std::nullopt, ErrorType::Duplicate, {}, {}},
                      InjectionEntry{6, std::string("id"), ErrorType::Uniqueness, AttributeValue(6), AttributeValue(1)}}};
    auto run = log_with(data, {found(3, std::nullopt, ErrorType::Duplicate), found(6, "id", ErrorType::Uniqueness)});
    auto r = score(log, run, data, data, xy());
    // Duplicate counts in every column, the key collision only in the key column.
    EXPECT_EQ(r.per_column[0].injected, 2u);
    EXPECT_EQ(r.per_column[1].injected, 1u);
    EXPECT_EQ(r.per_column[0].correct, 1u);
    EXPECT_EQ(r.per_column[1].false_positives, 1u);
    EXPECT_EQ(r.total.injected, 4u);
}

TEST(Score, RatiosAfterDeletion) {
    auto truth = xy_data(10);
    auto run = log_with(truth, {});
    run.entries[9].summary.outcome = Outcome::Deleted;
    run.committed.pop_back();
    auto r = score({}, run, truth, run.committed, xy());
    EXPECT_EQ(r.deleted_vectors, 1u);
    EXPECT_NEAR(*r.per_column[1].mean_ratio, 5.0 / 5.5 * 100.0, 1e-12);
    EXPECT_THROW(score({}, run, truth, truth, xy()), EvaluationError);
}

TEST(Score, SyntheticVectorsExcludedByDefault) {
    auto truth = xy_data(4);
    auto cleaned = truth;
    auto extra = truth.back();
    extra.synthetic = true;
    extra.values[1] = AttributeValue(1000.0);
    cleaned.push_back(extra);
    auto run = log_with(truth, {});
    run.committed = cleaned;
    EXPECT_EQ(*score({}, run, truth, cleaned, xy()).per_column[1].mean_ratio, 100.0);
    EXPECT_GT(*score({}, run, truth, cleaned, xy(), {true}).per_column[1].mean_ratio, 100.0);
}

TEST(Score, NonNumericColumnsHaveNoRatio) {
    auto s = schema_of({keyed("id", ValueType::Integer), attr("t", ValueType::Text)});
    std::vector<DataVector> data{vec(1, Instant{0}, {AttributeValue(1), AttributeValue("a")})};
    auto r = score({}, log_with(data, {}), data, data, s);
    EXPECT_FALSE(r.per_column[1].mean_ratio);
    EXPECT_NE(render_report(r, ReportFormat::Table).find("n/a"), std::string::npos);
}

TEST(Score, MatchesBruteForce) {
    std::mt19937_64 rng(77);
    auto s = xy();
    auto data = xy_data(30);
    const std::vector<ErrorType> types{ErrorType::Interval, ErrorType::Missing, ErrorType::Duplicate,
                                       ErrorType::Uniqueness};
    const std::vector<std::string> attrs{"id", "x", "y"};
    for (int trial = 0; trial < 200; ++trial) {
        auto pick = [&](auto& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };
        auto index = [&] { return std::uniform_int_distribution<std::uint64_t>(1, 30)(rng); };
        InjectionLog log;
        std::vector<Finding> fs;
        for (int k = 0; k < 8; ++k) {
            auto t = pick(types);
            auto a = is_whole_vector(t) ? std::optional<std::string>() : std::optional<std::string>(pick(attrs));
            log.entries.push_back({index(), a, t, {}, {}});
            fs.push_back({index(), a, t, ""});
        }
        auto r = score(log, log_with(data, fs), data, data, s);
        auto expect = oracle::brute_force_score(log, fs, s);
        for (std::size_t c = 0; c < s.arity(); ++c) {
            EXPECT_EQ(r.per_column[c].injected, expect[c].injected);
            EXPECT_EQ(r.per_column[c].identified, expect[c].identified);
            EXPECT_EQ(r.per_column[c].correct, expect[c].correct);
            EXPECT_EQ(r.per_column[c].identified, r.per_column[c].correct + r.per_column[c].false_positives);
            EXPECT_EQ(r.per_column[c].injected, r.per_column[c].correct + r.per_column[c].false_negatives);
        }
    }
}

TEST(Render, IntelLayout) {
    auto d = synthesize_dataset(SyntheticProfile::IntelLike, 2000, 1);
    auto r = score({}, log_with(d.data, {}), d.data, d.data, d.schema);
    auto table = render_report(r, ReportFormat::Table);
    EXPECT_EQ(table.substr(0, table.find('\n')), "metric,timestamp,temperature,humidity,light,voltage,Total");
    EXPECT_NE(table.find("\nNumber of deleted vectors,,,,,,0\n"), std::string::npos);
    EXPECT_NE(table.find("\nMean value ratio,100.00 %,100.00 %,100.00 %,100.00 %,100.00 %,100.00 %\n"),
              std::string::npos);
    EXPECT_EQ(table, render_report(r, ReportFormat::Table));

    auto doc = nlohmann::json::parse(render_report(r, ReportFormat::Structured));
    ASSERT_EQ(doc["columns"].size(), 5u);
    EXPECT_EQ(doc["columns"][1]["name"], "temperature");
    EXPECT_TRUE(doc["columns"][1]["percent_correctly_identified"].is_null());
    EXPECT_EQ(doc["total"]["deleted_vectors"], 0);
}

TEST(Render, EmptyReportIsHeaderOnly) {
    EXPECT_EQ(render_report(MetricsReport{}, ReportFormat::Table), "metric,Total\n");
    auto doc = nlohmann::json::parse(render_report(MetricsReport{}, ReportFormat::Structured));
    EXPECT_TRUE(doc["columns"].empty());
}

TEST(Render, FormatNames) {
    EXPECT_EQ(report_format_from_string("table"), ReportFormat::Table);
    EXPECT_EQ(report_format_from_string("structured"), ReportFormat::Structured);
    EXPECT_THROW(report_format_from_string("xml"), std::invalid_argument);
}
