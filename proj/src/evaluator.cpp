#include "streamclean/evaluator.hpp"

#include "streamclean/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <set>
#include <tuple>

namespace streamclean {

namespace {

// Value errors are matched per cell, key collisions per vector on the key columns,
// whole-vector errors per vector on every column.
enum class UnitClass { Cell, Key, Vector };

struct Unit {
    UnitClass cls;
    std::uint64_t index;
    std::string attribute;

    friend auto operator<=>(const Unit&, const Unit&) = default;
};

Unit unit_of(std::uint64_t index, ErrorType type, const std::optional<std::string>& attribute) {
    if (is_key_collision(type)) return {UnitClass::Key, index, {}};
    if (is_whole_vector(type) || !attribute) return {UnitClass::Vector, index, {}};
    return {UnitClass::Cell, index, *attribute};
}

std::optional<double> percent(std::size_t num, std::size_t den) {
    if (den == 0) return std::nullopt;
    return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

RunningStats column_stats(const std::vector<DataVector>& data, std::size_t pos, bool include_synthetic) {
    RunningStats s;
    for (const auto& v : data) {
        if (v.synthetic && !include_synthetic) continue;
        if (auto x = v.values[pos].numeric()) s = update_stats(s, *x);
    }
    return s;
}

std::optional<double> ratio(double cleaned, double truth) {
    if (truth == 0.0) return std::nullopt;
    return cleaned / truth * 100.0;
}

std::optional<double> average(const std::vector<ColumnMetrics>& columns, std::optional<double> ColumnMetrics::*field) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& c : columns) {
        if (c.*field) {
            sum += *(c.*field);
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

std::string fmt_percent(std::optional<double> p) {
    if (!p) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f %%", *p);
    return buf;
}

nlohmann::ordered_json json_number(std::optional<double> x) {
    if (!x) return nullptr;
    return *x;
}

nlohmann::ordered_json to_json(const ColumnMetrics& c) {
    nlohmann::ordered_json j;
    j["injected_errors"] = c.injected;
    j["identified_errors"] = c.identified;
    j["correctly_identified"] = c.correct;
    j["percent_correctly_identified"] = json_number(c.percent_correct());
    j["false_negatives"] = c.false_negatives;
    j["false_positives"] = c.false_positives;
    j["percent_false_positives"] = json_number(c.percent_false_positive());
    j["mean_value_ratio"] = json_number(c.mean_ratio);
    j["std_deviation_ratio"] = json_number(c.std_ratio);
    return j;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::optional<double> ColumnMetrics::percent_correct() const { return percent(correct, injected); }
std::optional<double> ColumnMetrics::percent_false_positive() const { return percent(false_positives, injected); }

MetricsReport score(const InjectionLog& log, const RunLog& run, const std::vector<DataVector>& truth,
                    const std::vector<DataVector>& cleaned, const Schema& schema, const ScoreOptions& options) {
    const auto synthesized = static_cast<std::size_t>(
        std::count_if(cleaned.begin(), cleaned.end(), [](const DataVector& v) { return v.synthetic; }));
    const auto deletions = run.deletions();
    if (cleaned.size() + deletions != run.entries.size() + synthesized) {
        throw EvaluationError("cleaned stream has " + std::to_string(cleaned.size()) + " vectors, expected " +
                              std::to_string(run.entries.size()) + " processed - " + std::to_string(deletions) +
                              " deleted + " + std::to_string(synthesized) + " synthesized");
    }
    for (const auto* data : {&truth, &cleaned}) {
        for (const auto& v : *data) {
            if (v.values.size() != schema.arity()) throw EvaluationError("vector arity does not match the schema");
        }
    }

    std::set<Unit> injected, identified;
    for (const auto& e : log.entries) injected.insert(unit_of(e.vector_index, e.type, e.attribute));
    for (const auto& f : run.findings()) identified.insert(unit_of(f.vector_index, f.type, f.attribute));

    MetricsReport report;
    report.deleted_vectors = deletions;
    const auto keys = schema.key_positions();
    for (const auto& a : schema.attributes) report.columns.push_back(a.name);
    report.per_column.resize(schema.arity());

    auto columns_of = [&](const Unit& u) {
        std::vector<std::size_t> out;
        switch (u.cls) {
            case UnitClass::Cell:
                if (auto p = schema.position(u.attribute)) out.push_back(*p);
                break;
            case UnitClass::Key:
                out = keys;
                break;
            case UnitClass::Vector:
                for (std::size_t i = 0; i < schema.arity(); ++i) out.push_back(i);
                break;
        }
        return out;
    };

    std::set<Unit> all = injected;
    all.insert(identified.begin(), identified.end());
    for (const auto& u : all) {
        const bool was_injected = injected.count(u) > 0;
        const bool was_found = identified.count(u) > 0;
        for (auto c : columns_of(u)) {
            auto& m = report.per_column[c];
            m.injected += was_injected;
            m.identified += was_found;
            m.correct += was_injected && was_found;
            m.false_negatives += was_injected && !was_found;
            m.false_positives += !was_injected && was_found;
        }
    }

    for (std::size_t i = 0; i < schema.arity(); ++i) {
        if (!schema.is_ratio_column(i)) continue;
        const auto t = column_stats(truth, i, true);
        const auto c = column_stats(cleaned, i, options.include_synthetic);
        if (!t.defined() || !c.defined()) continue;
        report.per_column[i].mean_ratio = ratio(c.mean, t.mean);
        report.per_column[i].std_ratio = ratio(c.stddev(), t.stddev());
    }

    for (const auto& m : report.per_column) {
        report.total.injected += m.injected;
        report.total.identified += m.identified;
        report.total.correct += m.correct;
        report.total.false_negatives += m.false_negatives;
        report.total.false_positives += m.false_positives;
    }
    report.total.mean_ratio = average(report.per_column, &ColumnMetrics::mean_ratio);
    report.total.std_ratio = average(report.per_column, &ColumnMetrics::std_ratio);
    return report;
}

ReportFormat report_format_from_string(std::string_view name) {
    if (name == "table") return ReportFormat::Table;
    if (name == "structured") return ReportFormat::Structured;
    throw std::invalid_argument("unknown report format '" + std::string(name) + "'");
}

std::string render_report(const MetricsReport& report, ReportFormat format) {
    if (format == ReportFormat::Structured) {
        nlohmann::ordered_json doc;
        doc["columns"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < report.columns.size(); ++i) {
            nlohmann::ordered_json j;
            j["name"] = report.columns[i];
            j.update(to_json(report.per_column[i]));
            doc["columns"].push_back(std::move(j));
        }
        if (!report.empty()) {
            doc["total"] = to_json(report.total);
            doc["total"]["deleted_vectors"] = report.deleted_vectors;
        }
        return doc.dump(2) + "\n";
    }

    std::string out = "metric";
    for (const auto& c : report.columns) out += "," + csv_field(c);
    out += ",Total\n";
    if (report.empty()) return out;

    std::vector<const ColumnMetrics*> cols;
    for (const auto& m : report.per_column) cols.push_back(&m);
    cols.push_back(&report.total);

    auto row = [&](const std::string& label, auto cell) {
        out += csv_field(label);
        for (const auto* m : cols) out += "," + csv_field(cell(*m));
        out += "\n";
    };
    auto count = [](std::size_t ColumnMetrics::*f) {
        return [f](const ColumnMetrics& m) { return std::to_string(m.*f); };
    };
    row("Number of errors", count(&ColumnMetrics::injected));
    row("Identified errors", count(&ColumnMetrics::identified));
    row("Correctly identified errors", count(&ColumnMetrics::correct));
    row("% correctly identified errors", [](const ColumnMetrics& m) { return fmt_percent(m.percent_correct()); });
    row("Unidentified errors", count(&ColumnMetrics::false_negatives));
    row("False positives", count(&ColumnMetrics::false_positives));
    row("% false positives", [](const ColumnMetrics& m) { return fmt_percent(m.percent_false_positive()); });
    row("Number of deleted vectors", [&](const ColumnMetrics& m) {
        return &m == &report.total ? std::to_string(report.deleted_vectors) : std::string();
    });
    row("Mean value ratio", [](const ColumnMetrics& m) { return fmt_percent(m.mean_ratio); });
    row("Standard deviation ratio", [](const ColumnMetrics& m) { return fmt_percent(m.std_ratio); });
    return out;
}

}  // namespace streamclean
