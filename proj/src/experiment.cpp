#include "streamclean/harness.hpp"

#include "streamclean/io.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <system_error>

namespace streamclean {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
    const auto now = std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
    return format_instant(Instant{now.time_since_epoch().count()}) + "Z";
}

RunConfig run_config(const ExperimentSpec& spec) {
    RunConfig c;
    c.pipeline = spec.pipeline;
    c.pipeline.schema = spec.truth.schema;
    c.pipeline.seed = spec.seed;
    c.injection = spec.injection;
    c.injection->seed = spec.seed;
    c.include_synthetic = spec.include_synthetic;
    return c;
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentResult evaluate_experiment(const ExperimentSpec& spec) {
    const auto config = run_config(spec);
    if (spec.single_error_type) {
        const auto& modules = config.pipeline.modules;
        if (modules.size() > 1 || (modules.size() == 1 && modules.front().type != spec.injection.type)) {
            throw ConfigError({"a reproduction run cleans only the injected error type '" +
                               std::string(to_string(spec.injection.type)) + "'"});
        }
    }

    ExperimentResult result;
    try {
        result.injection = inject(spec.truth.data, spec.truth.schema, *config.injection);
    } catch (const InjectionError& e) {
        throw ConfigError({std::string("injection: ") + e.what()});
    }
    auto pipeline = Pipeline::build(config.pipeline);
    result.run = run_stream(pipeline, result.injection.corrupted);
    result.report = score(result.injection.log, result.run, spec.truth.data, result.run.committed, spec.truth.schema,
                          {spec.include_synthetic});
    return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    const auto started = utc_now();
    auto result = evaluate_experiment(spec);
    const auto config = run_config(spec);
    const auto& schema = spec.truth.schema;

    const fs::path target = spec.out_dir.empty() ? fs::path(".") : spec.out_dir;
    const fs::path parent = target.has_parent_path() ? target.parent_path() : fs::path(".");
    const fs::path staging = parent / ("." + target.filename().string() + ".staging");
    if (target.filename().empty() || target.filename() == "." || target.filename() == "..") {
        throw IoError(target.string() + ": name a dedicated output directory");
    }
    // Only empty directories and earlier experiment outputs are replaced.
    if (fs::exists(target) && !(fs::is_directory(target) && (fs::is_empty(target) || fs::exists(target / "manifest.json")))) {
        throw IoError(target.string() + ": exists and is not an experiment directory, refusing to overwrite");
    }

    try {
        std::error_code ec;
        fs::create_directories(parent, ec);
        fs::remove_all(staging, ec);
        if (!fs::create_directories(staging, ec) || ec) {
            throw IoError(staging.string() + ": cannot create directory" + (ec ? ": " + ec.message() : ""));
        }

        const auto schema_json = schema_to_json(schema);
        const auto config_json = config_to_json(config);
        write_text(staging / "schema.json", schema_json);
        write_text(staging / "config.json", config_json);
        write_stream(staging / "truth.csv", spec.truth.data, schema);
        write_stream(staging / "corrupted.csv", result.injection.corrupted, schema);
        write_csv(staging / "injection_log.csv", injection_log_to_csv(result.injection.log));
        write_text(staging / "run_log.json", run_log_to_json(result.run));
        write_stream(staging / "cleaned.csv", result.run.committed, schema, true);
        write_text(staging / "report.csv", render_report(result.report, ReportFormat::Table));
        write_text(staging / "report.json", render_report(result.report, ReportFormat::Structured));

        nlohmann::ordered_json manifest;
        manifest["seed"] = spec.seed;
        manifest["config_hash"] = fnv1a_hex(schema_json + config_json);
        manifest["error_type"] = std::string(to_string(spec.injection.type));
        manifest["truth_vectors"] = spec.truth.data.size();
        manifest["corrupted_vectors"] = result.injection.corrupted.size();
        manifest["cleaned_vectors"] = result.run.committed.size();
        manifest["artifacts"] = {"schema.json",      "config.json",  "truth.csv",   "corrupted.csv", "injection_log.csv",
                                 "run_log.json",     "cleaned.csv",  "report.csv",  "report.json"};
        manifest["started_at"] = started;
        manifest["finished_at"] = utc_now();
        write_text(staging / "manifest.json", manifest.dump(2) + "\n");

        fs::remove_all(target, ec);
        if (ec) throw IoError(target.string() + ": cannot replace: " + ec.message());
        fs::rename(staging, target, ec);
        if (ec) throw IoError(target.string() + ": cannot move results into place: " + ec.message());
    } catch (...) {
        std::error_code ignored;
        fs::remove_all(staging, ignored);
        throw;
    }
    return result;
}

}  // namespace streamclean
