#include "streamclean/config.hpp"
#include "streamclean/evaluator.hpp"
#include "streamclean/harness.hpp"
#include "streamclean/injector.hpp"
#include "streamclean/io.hpp"
#include "streamclean/pipeline.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace streamclean;

namespace {

constexpr int kOk = 0;
constexpr int kConfigFault = 1;
constexpr int kIoFault = 2;

struct Globals {
    std::string schema;
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "table";
    std::vector<std::string> modules;
};

struct Args {
    std::string in;
    std::string truth;
    std::string recipe;
    std::string profile;
    std::size_t size = 20160;
    std::string start;
    std::size_t slots = 0;
    bool threaded = false;
};

[[noreturn]] void config_fault(const std::string& message) { throw ConfigError({message}); }

void require(const std::string& value, const char* flag, const char* verb) {
    if (value.empty()) config_fault(std::string(verb) + " needs " + flag);
}

Schema load_schema(const Globals& g) {
    require(g.schema, "--schema", "this verb");
    return schema_from_json(read_text(g.schema));
}

RunConfig load_config(const Globals& g, const Schema& schema) {
    RunConfig config;
    if (!g.config.empty()) {
        config = config_from_json(read_text(g.config), schema);
    } else {
        config.pipeline.schema = schema;
    }
    if (g.seed) config.pipeline.seed = *g.seed;
    if (config.injection && g.seed) config.injection->seed = *g.seed;
    if (!g.modules.empty()) select_modules(config.pipeline, g.modules);
    return config;
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        write_text(out, text);
    }
}

fs::path out_dir(const Globals& g, const char* verb) {
    require(g.out, "--out", verb);
    fs::path dir(g.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(dir.string() + ": cannot create directory: " + ec.message());
    return dir;
}

int cmd_prep(const Globals& g, const Args& a) {
    const auto schema = load_schema(g);
    require(a.in, "--in", "prep");
    require(g.out, "--out", "prep");
    const auto table = read_csv(a.in);
    // Raw inputs may lack bookkeeping columns; every row arrives at the epoch until prepared.
    std::vector<DataVector> raw;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        std::vector<std::string> fields;
        for (const auto& attr : schema.attributes) {
            auto it = std::find(table.header.begin(), table.header.end(), attr.name);
            if (it == table.header.end()) throw IoError(a.in + ": no column for attribute '" + attr.name + "'");
            fields.push_back(table.rows[r][static_cast<std::size_t>(it - table.header.begin())]);
        }
        raw.push_back(parse_vector(fields, schema, r + 1, Instant{}));
    }

    PrepResult result;
    if (a.recipe == "intel") {
        IntelPrepOptions options;
        if (!a.start.empty()) {
            auto t = parse_instant(a.start);
            if (!t) config_fault("--start: unreadable instant '" + a.start + "'");
            options.start = *t;
        }
        if (a.slots) options.slots = a.slots;
        result = prep_intel(raw, schema, options);
    } else if (a.recipe == "taxi") {
        result = prep_taxi(raw, schema, g.seed.value_or(0));
    } else {
        config_fault("prep needs --recipe intel or --recipe taxi");
    }
    write_stream(g.out, result.data, schema);
    for (const auto& line : result.log) std::cerr << "prep: " << line << "\n";
    return kOk;
}

int cmd_synth(const Globals& g, const Args& a) {
    auto profile = synthetic_profile_from_string(a.profile);
    if (!profile) config_fault("synth needs --profile intel_like or --profile taxi_like");
    const auto dir = out_dir(g, "synth");
    const auto dataset = synthesize_dataset(*profile, a.size, g.seed.value_or(0));
    write_text(dir / "schema.json", schema_to_json(dataset.schema));
    write_stream(dir / "truth.csv", dataset.data, dataset.schema);
    return kOk;
}

int cmd_inject(const Globals& g, const Args& a) {
    const auto schema = load_schema(g);
    const auto config = load_config(g, schema);
    if (!config.injection) config_fault("inject needs a config with an injection section");
    require(a.in, "--in", "inject");
    const auto truth = read_stream(a.in, schema);
    const auto dir = out_dir(g, "inject");
    InjectionResult result;
    try {
        result = inject(truth, schema, *config.injection);
    } catch (const InjectionError& e) {
        config_fault(e.what());
    }
    write_stream(dir / "corrupted.csv", result.corrupted, schema);
    write_csv(dir / "injection_log.csv", injection_log_to_csv(result.log));
    std::cerr << "inject: " << result.log.total() << " errors injected\n";
    return kOk;
}

int cmd_clean(const Globals& g, const Args& a) {
    const auto schema = load_schema(g);
    const auto config = load_config(g, schema);
    require(a.in, "--in", "clean");
    const auto dir = out_dir(g, "clean");
    auto pipeline = Pipeline::build(config.pipeline);

    RunLog run;
    if (a.threaded) {
        // The producer parses one record at a time, so ingest overlaps cleaning.
        const auto table = read_csv(a.in);
        const bool indexed = std::find(table.header.begin(), table.header.end(), "_index") != table.header.end();
        std::size_t next = 0;
        run = run_stream_threaded(pipeline, [&]() -> std::optional<DataVector> {
            if (next == table.rows.size()) return std::nullopt;
            auto v = stream_from_csv(CsvTable{table.header, {table.rows[next]}}, schema, a.in).front();
            if (!indexed) v.index = next + 1;
            ++next;
            return v;
        });
    } else {
        run = run_stream(pipeline, read_stream(a.in, schema));
    }
    write_stream(dir / "cleaned.csv", run.committed, schema, true);
    write_text(dir / "run_log.json", run_log_to_json(run));
    std::cerr << "clean: " << run.entries.size() << " processed, " << run.deletions() << " deleted, "
              << run.findings().size() << " findings\n";
    return kOk;
}

int cmd_score(const Globals& g, const Args& a) {
    const auto schema = load_schema(g);
    const auto format = report_format_from_string(g.format);
    require(a.in, "--in", "score");
    require(a.truth, "--truth", "score");
    const fs::path dir(a.in);
    const auto truth = read_stream(a.truth, schema);
    const auto log_path = (dir / "injection_log.csv").string();
    const auto log = injection_log_from_csv(read_csv(log_path), schema, log_path);
    const auto run_path = (dir / "run_log.json").string();
    const auto run = run_log_from_json(read_text(run_path), schema, run_path);
    const auto cleaned = read_stream(dir / "cleaned.csv", schema);
    bool include_synthetic = false;
    if (!g.config.empty()) include_synthetic = load_config(g, schema).include_synthetic;
    const auto report = score(log, run, truth, cleaned, schema, {include_synthetic});
    emit(render_report(report, format), g.out);
    return kOk;
}

int cmd_experiment(const Globals& g, const Args& a) {
    const auto format = report_format_from_string(g.format);
    ExperimentSpec spec;
    if (!a.profile.empty()) {
        auto profile = synthetic_profile_from_string(a.profile);
        if (!profile) config_fault("--profile must be intel_like or taxi_like");
        if (!g.schema.empty() || !a.in.empty()) config_fault("use either --profile or --schema with --in");
        spec.truth = synthesize_dataset(*profile, a.size, g.seed.value_or(0));
    } else {
        spec.truth.schema = load_schema(g);
        require(a.in, "--in", "experiment");
        spec.truth.data = read_stream(a.in, spec.truth.schema);
    }
    const auto config = load_config(g, spec.truth.schema);
    spec.pipeline = config.pipeline;
    if (config.injection) {
        spec.injection = *config.injection;
    } else if (!spec.pipeline.modules.empty()) {
        spec.injection.type = spec.pipeline.modules.front().type;
    } else {
        config_fault("experiment needs an injection section or --modules naming the error type");
    }
    spec.seed = g.seed.value_or(config.pipeline.seed);
    spec.include_synthetic = config.include_synthetic;
    require(g.out, "--out", "experiment");
    spec.out_dir = g.out;
    const auto result = run_experiment(spec);
    std::cout << render_report(result.report, format);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming data cleaning: prepare, inject, clean and score data streams"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    Args a;
    app.add_option("--schema", g.schema, "Schema document (JSON)");
    app.add_option("--config", g.config, "Pipeline/injection config document (JSON)");
    app.add_option("--seed", g.seed, "Seed for every random draw");
    app.add_option("--out", g.out, "Output file or directory");
    app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"table", "structured"}));
    app.add_option("--modules", g.modules, "Error types in pipeline order")->delimiter(',');

    auto* prep = app.add_subcommand("prep", "Turn a raw dataset into a ground-truth stream");
    prep->add_option("--recipe", a.recipe, "intel or taxi")->required();
    prep->add_option("--in", a.in, "Raw CSV")->required();
    prep->add_option("--start", a.start, "Grid start (intel)");
    prep->add_option("--slots", a.slots, "Grid size (intel)");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic ground truth and its schema");
    synth->add_option("--profile", a.profile, "intel_like or taxi_like")->required();
    synth->add_option("--size", a.size, "Number of vectors");

    auto* inject_cmd = app.add_subcommand("inject", "Inject errors into a ground-truth stream");
    inject_cmd->add_option("--in", a.in, "Ground-truth stream CSV")->required();

    auto* clean = app.add_subcommand("clean", "Run the cleaning pipeline over a stream");
    clean->add_option("--in", a.in, "Stream CSV")->required();
    clean->add_flag("--threaded", a.threaded, "Parse on a producer thread");

    auto* score_cmd = app.add_subcommand("score", "Score a cleaning run against its injection log");
    score_cmd->add_option("--in", a.in, "Directory holding injection_log.csv, run_log.json and cleaned.csv")->required();
    score_cmd->add_option("--truth", a.truth, "Ground-truth stream CSV")->required();

    auto* experiment = app.add_subcommand("experiment", "Inject, clean, score and persist in one run");
    experiment->add_option("--in", a.in, "Ground-truth stream CSV");
    experiment->add_option("--profile", a.profile, "Synthesize the ground truth instead");
    experiment->add_option("--size", a.size, "Synthetic size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigFault;
    }

    try {
        if (*prep) return cmd_prep(g, a);
        if (*synth) return cmd_synth(g, a);
        if (*inject_cmd) return cmd_inject(g, a);
        if (*clean) return cmd_clean(g, a);
        if (*score_cmd) return cmd_score(g, a);
        if (*experiment) return cmd_experiment(g, a);
    } catch (const ConfigError& e) {
        std::cerr << "config fault: " << e.what() << "\n";
        return kConfigFault;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config fault: " << e.what() << "\n";
        return kConfigFault;
    } catch (const UsageError& e) {
        std::cerr << "config fault: " << e.what() << "\n";
        return kConfigFault;
    } catch (const IoError& e) {
        std::cerr << "I/O fault: " << e.what() << "\n";
        return kIoFault;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "I/O fault: " << e.what() << "\n";
        return kIoFault;
    } catch (const ParseError& e) {
        std::cerr << "I/O fault: " << e.what() << "\n";
        return kIoFault;
    } catch (const OrderingError& e) {
        std::cerr << "I/O fault: input stream out of order: " << e.what() << "\n";
        return kIoFault;
    } catch (const EvaluationError& e) {
        std::cerr << "I/O fault: inconsistent experiment files: " << e.what() << "\n";
        return kIoFault;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigFault;
    }
    return kConfigFault;
}
