#pragma once

#include "streamclean/injector.hpp"
#include "streamclean/pipeline.hpp"
#include "streamclean/schema.hpp"
#include "streamclean/vector.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace streamclean {

struct ColumnMetrics {
    std::size_t injected = 0;
    std::size_t identified = 0;
    std::size_t correct = 0;
    std::size_t false_negatives = 0;
    std::size_t false_positives = 0;
    /// cleaned / truth * 100; absent for columns without a meaningful mean.
    std::optional<double> mean_ratio;
    std::optional<double> std_ratio;

    /// Both relative to the injected count; absent when nothing was injected.
    std::optional<double> percent_correct() const;
    std::optional<double> percent_false_positive() const;

    friend bool operator==(const ColumnMetrics&, const ColumnMetrics&) = default;
};

struct MetricsReport {
    std::vector<std::string> columns;
    std::vector<ColumnMetrics> per_column;
    ColumnMetrics total;
    std::size_t deleted_vectors = 0;

    bool empty() const { return columns.empty(); }

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

struct ScoreOptions {
    /// Count synthesized vectors in the cleaned-side ratios.
    bool include_synthetic = false;
};

class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Joins the injection log with the run's findings and compares cleaned against truth.
/// Throws EvaluationError when `cleaned` is not the committed output of `run`.
MetricsReport score(const InjectionLog& log, const RunLog& run, const std::vector<DataVector>& truth,
                    const std::vector<DataVector>& cleaned, const Schema& schema, const ScoreOptions& options = {});

enum class ReportFormat { Table, Structured };

/// Throws std::invalid_argument for anything but "table" or "structured".
ReportFormat report_format_from_string(std::string_view name);

std::string render_report(const MetricsReport& report, ReportFormat format);

}  // namespace streamclean
