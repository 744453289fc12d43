// Acceptance run: one PASS/FAIL line per property, non-zero exit if any fails.

#include "oracles.hpp"
#include "support.hpp"

#include "streamclean/evaluator.hpp"
#include "streamclean/harness.hpp"
#include "streamclean/injector.hpp"
#include "streamclean/io.hpp"
#include "streamclean/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace streamclean;

namespace {

struct Verdict {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) detail = what;
        ok = ok && cond;
    }
};

ModuleConfig module(ErrorType type, std::optional<RepairStrategy> repair = std::nullopt) {
    ModuleConfig m;
    m.type = type;
    m.repair = std::move(repair);
    return m;
}

ExperimentSpec experiment(const Dataset& truth, ErrorType type, std::optional<RepairStrategy> repair,
                          std::uint64_t seed) {
    ExperimentSpec spec;
    spec.truth = truth;
    spec.injection.type = type;
    spec.pipeline.schema = truth.schema;
    spec.pipeline.modules.push_back(module(type, std::move(repair)));
    spec.seed = seed;
    return spec;
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

const Dataset& intel() {
    static const Dataset d = synthesize_dataset(SyntheticProfile::IntelLike, 20'160, 1);
    return d;
}

const Dataset& taxi(std::size_t n = 10'000) {
    static std::map<std::size_t, Dataset> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, synthesize_dataset(SyntheticProfile::TaxiLike, n, 1)).first;
    return it->second;
}

// 1, 2: state-free value errors found exactly where they were injected.
Verdict exact_detection(ErrorType type, RepairStrategy repair) {
    Verdict v;
    std::size_t injected = 0, correct = 0, fp = 0;
    for (std::uint64_t seed : {1, 2, 3}) {
        auto r = evaluate_experiment(experiment(intel(), type, repair, seed));
        injected += r.report.total.injected;
        correct += r.report.total.correct;
        fp += r.report.total.false_positives;
        v.require(r.report.total.injected == 2016, "expected 2016 injections, got " + std::to_string(r.report.total.injected));
        for (std::size_t c = 1; c < r.report.columns.size(); ++c) {
            v.require(r.report.per_column[c].injected == 504, r.report.columns[c] + " did not get 504 injections");
        }
        v.require(r.report.total.correct == r.report.total.injected, "missed injections");
        v.require(r.report.total.false_positives == 0, "false positives");
    }
    v.detail = (v.ok ? "" : v.detail + "; ") + std::to_string(correct) + "/" + std::to_string(injected) +
               " correct, " + std::to_string(fp) + " false positives over 3 seeds";
    return v;
}

// 3, 4: key collisions and duplicates with deletion repair, 20 seeds each.
struct KeyRun {
    std::string label;
    const Dataset* truth;
    ErrorType type;
};

Verdict key_collisions(Verdict& ratios) {
    Verdict v;
    const std::vector<KeyRun> runs{{"uniqueness", &intel(), ErrorType::Uniqueness},
                                   {"duplicate", &intel(), ErrorType::Duplicate},
                                   {"contradiction", &taxi(20'160), ErrorType::Contradiction}};
    std::string summary;
    double worst_ratio = 0.0;
    for (const auto& run : runs) {
        double rate_sum = 0.0;
        const int seeds = 20;
        for (int seed = 1; seed <= seeds; ++seed) {
            auto r = evaluate_experiment(
                experiment(*run.truth, run.type, RepairStrategy{OrderConflictRepair::RejectVector}, seed));
            const auto key = run.truth->schema.key_positions().front();
            const auto& m = r.report.per_column[key];
            v.require(m.injected == 1008, run.label + ": " + std::to_string(m.injected) + " injected");
            v.require(m.identified == 1008, run.label + ": " + std::to_string(m.identified) + " identified");
            v.require(r.report.deleted_vectors == 1008,
                      run.label + ": " + std::to_string(r.report.deleted_vectors) + " deleted");
            rate_sum += *m.percent_correct();
            if (run.type == ErrorType::Duplicate) {
                for (std::size_t c = 0; c < r.report.columns.size(); ++c) {
                    for (auto x : {r.report.per_column[c].mean_ratio, r.report.per_column[c].std_ratio}) {
                        if (!x) continue;
                        worst_ratio = std::max(worst_ratio, std::abs(*x - 100.0));
                        ratios.require(*x >= 99.0 && *x <= 101.0,
                                       r.report.columns[c] + " ratio " + fmt("%.4f", *x) + " %");
                    }
                }
            }
        }
        const double mean_rate = rate_sum / seeds;
        v.require(mean_rate >= 45.0 && mean_rate <= 55.0, run.label + " match rate " + fmt("%.2f", mean_rate));
        summary += (summary.empty() ? "" : ", ") + run.label + " " + fmt("%.2f %%", mean_rate);
    }
    v.detail = (v.ok ? "" : v.detail + "; ") + "1008 identified/deleted per run, mean match rate over 20 seeds: " + summary;
    ratios.detail = (ratios.ok ? "" : ratios.detail + "; ") + "largest deviation from 100 % over 20 duplicate runs: " +
                    fmt("%.4f", worst_ratio) + " pp";
    return v;
}

// 5: overlapping FDs.
Verdict fd_overlap() {
    Verdict v;
    const auto& d = taxi();
    v.require(d.schema.functional_dependencies.size() >= 2, "taxi schema needs two FDs");
    std::size_t injected = 0, correct = 0, fp = 0;
    for (std::uint64_t seed : {1, 2, 3}) {
        auto r = evaluate_experiment(experiment(d, ErrorType::Fd, RepairStrategy{FdRepair::SetDependentFromMapping}, seed));
        injected += r.report.total.injected;
        correct += r.report.total.correct;
        fp += r.report.total.false_positives;
        v.require(r.report.total.injected > 0, "nothing injected");
        v.require(r.report.total.correct == r.report.total.injected, "missed FD violations");
        v.require(r.report.total.false_positives > 0, "no cross-FD false positives");
    }
    v.detail = (v.ok ? "" : v.detail + "; ") + std::to_string(correct) + "/" + std::to_string(injected) +
               " identified, " + std::to_string(fp) + " false positives from overlapping FDs over 3 seeds";
    return v;
}

// 6: outlier properties.
Verdict outliers() {
    Verdict v;
    const auto& d = intel();
    OutlierParams params;

    // (a) Detection of large deviations on warmed-up columns, against a brute-force prefix.
    std::size_t eligible = 0, detected = 0, literal = 0, literal_detected = 0;
    for (std::uint64_t seed : {1, 2}) {
        InjectionSpec spec;
        spec.type = ErrorType::Outlier;
        spec.seed = seed;
        auto inj = inject(d.data, d.schema, spec);
        PipelineConfig cfg;
        cfg.schema = d.schema;
        cfg.modules.push_back(module(ErrorType::Outlier));
        auto p = Pipeline::build(cfg);
        auto run = run_stream(p, inj.corrupted);
        std::set<std::pair<std::uint64_t, std::string>> flagged;
        for (const auto& f : run.findings()) flagged.insert({f.vector_index, *f.attribute});
        for (const auto& e : inj.log.entries) {
            const auto pos = d.schema.require_position(*e.attribute);
            std::vector<double> prefix;
            for (std::size_t i = 0; i + 1 < e.vector_index; ++i) {
                if (auto x = inj.corrupted[i].values[pos].numeric()) prefix.push_back(*x);
            }
            if (prefix.size() < params.warmup) continue;
            const bool hit = flagged.count({e.vector_index, *e.attribute}) > 0;
            ++literal;
            literal_detected += hit;
            auto z = oracle::prefix_z(*e.injected.numeric(), prefix);
            if (!z || *z < 4.0) continue;
            ++eligible;
            detected += hit;
        }
    }
    v.require(eligible > 0 && detected == eligible,
              "(a) " + std::to_string(detected) + "/" + std::to_string(eligible) + " detected");

    // (b) Repairs land inside the acceptance region of the snapshot they were computed on.
    std::size_t repairs = 0, reflagged = 0;
    {
        InjectionSpec spec;
        spec.type = ErrorType::Outlier;
        spec.seed = 5;
        auto inj = inject(d.data, d.schema, spec);
        PipelineConfig cfg;
        cfg.schema = d.schema;
        cfg.modules.push_back(module(ErrorType::Outlier, RepairStrategy{OutlierRepair::NearestNonOutlier}));
        auto p = Pipeline::build(cfg);
        for (const auto& vec : inj.corrupted) {
            const auto snapshot = p.state().stats();
            auto log = p.process(vec);
            for (const auto& c : log.summary.changes) {
                ++repairs;
                const auto pos = d.schema.require_position(c.attribute);
                reflagged += is_outlier(*c.new_value.numeric(), snapshot[pos], params);
            }
        }
        std::mt19937_64 rng(6);
        std::normal_distribution<double> n01(0, 1);
        for (int trial = 0; trial < 20'000; ++trial) {
            RunningStats s;
            const double mu = n01(rng) * 1e3, sigma = std::exp(n01(rng) * 3);
            for (int i = 0; i < 35; ++i) s = update_stats(s, mu + sigma * n01(rng));
            const double x = mu + sigma * n01(rng) * 20;
            if (!is_outlier(x, s, params)) continue;
            for (auto type : {ValueType::Float, ValueType::Integer}) {
                auto y = nearest_non_outlier(x, s, params, type);
                if (!y) {
                    const double half = params.threshold * s.stddev();
                    reflagged += !(type == ValueType::Integer && std::ceil(s.mean - half) > std::floor(s.mean + half));
                    continue;
                }
                ++repairs;
                reflagged += is_outlier(*y, s, params);
            }
        }
    }
    v.require(repairs > 0 && reflagged == 0, "(b) " + std::to_string(reflagged) + " repaired values re-flagged");

    // (c) One value, two stream positions, two verdicts.
    std::optional<std::pair<double, std::pair<std::uint64_t, std::uint64_t>>> witness;
    {
        auto schema = testsupport::schema_of({testsupport::attr("x", ValueType::Float)});
        std::vector<DataVector> base;
        for (int i = 0; i < 80; ++i) {
            const double level = i < 40 ? 10.0 : 14.0;
            base.push_back(testsupport::vec(0, Instant{}, {AttributeValue(level + (i % 2 ? 0.5 : -0.5))}));
        }
        for (double x = 10.0; x <= 20.0 && !witness; x += 0.25) {
            for (std::size_t a = 30; a < base.size() && !witness; a += 10) {
                for (std::size_t b = a + 10; b <= base.size() && !witness; b += 10) {
                    auto stream = base;
                    stream.insert(stream.begin() + static_cast<std::ptrdiff_t>(b), base[0]);
                    stream[b].values[0] = AttributeValue(x);
                    stream.insert(stream.begin() + static_cast<std::ptrdiff_t>(a), base[0]);
                    stream[a].values[0] = AttributeValue(x);
                    for (std::size_t i = 0; i < stream.size(); ++i) {
                        stream[i].index = i + 1;
                        stream[i].arrival = Instant{static_cast<std::int64_t>(i) * 1000};
                    }
                    PipelineConfig cfg;
                    cfg.schema = schema;
                    cfg.modules.push_back(module(ErrorType::Outlier));
                    auto p = Pipeline::build(cfg);
                    auto run = run_stream(p, stream);
                    const bool at_a = !run.entries[a].summary.findings.empty();
                    const bool at_b = !run.entries[b + 1].summary.findings.empty();
                    if (at_a != at_b) witness = {x, {a + 1, b + 2}};
                }
            }
        }
    }
    v.require(witness.has_value(), "(c) no prefix pair found");

    v.detail = (v.ok ? "" : v.detail + "; ") + "(a) " + std::to_string(detected) + "/" + std::to_string(eligible) +
               " injections with prefix z >= 4 detected (" + std::to_string(literal_detected) + "/" +
               std::to_string(literal) + " of all warmed-up injections); (b) 0 of " + std::to_string(repairs) +
               " repairs re-flagged";
    if (witness) {
        v.detail += "; (c) x = " + fmt("%.2f", witness->first) + " judged differently at positions " +
                    std::to_string(witness->second.first) + " and " + std::to_string(witness->second.second);
    }
    return v;
}

// 7: streaming keep-first against the offline pass.
Verdict keep_first() {
    Verdict v;
    const auto schema = testsupport::keyed_schema();
    std::size_t flagged = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto data = testsupport::colliding_stream(1000, seed);
        PipelineConfig cfg;
        cfg.schema = schema;
        cfg.modules = {module(ErrorType::Uniqueness), module(ErrorType::Duplicate), module(ErrorType::Contradiction)};
        auto p = Pipeline::build(cfg);
        auto run = run_stream(p, data);
        oracle::KeepFirst got;
        for (const auto& f : run.findings()) {
            if (f.type == ErrorType::Uniqueness) got.uniqueness.insert(f.vector_index);
            if (f.type == ErrorType::Duplicate) got.duplicate.insert(f.vector_index);
            if (f.type == ErrorType::Contradiction) got.contradiction.insert({f.vector_index, *f.attribute});
        }
        auto expect = oracle::keep_first(data, schema);
        v.require(got.uniqueness == expect.uniqueness, "uniqueness differs at seed " + std::to_string(seed));
        v.require(got.duplicate == expect.duplicate, "duplicates differ at seed " + std::to_string(seed));
        v.require(got.contradiction == expect.contradiction, "contradictions differ at seed " + std::to_string(seed));
        flagged += expect.uniqueness.size() + expect.duplicate.size() + expect.contradiction.size();
    }
    v.detail = (v.ok ? "" : v.detail + "; ") + "100 seeds x 1000 vectors, " + std::to_string(flagged) +
               " oracle flags matched exactly";
    return v;
}

// 8: running statistics and window membership.
Verdict state_correctness() {
    Verdict v;
    std::mt19937_64 rng(8);
    double worst = 0.0;
    const std::vector<std::function<double()>> sources{
        [&] { return std::normal_distribution<double>(0, 1)(rng); },
        [&] { return std::normal_distribution<double>(1e6, 1e-2)(rng); },
        [&] { return std::exponential_distribution<double>(1e-3)(rng); },
        [&] { return std::uniform_real_distribution<double>(-1e9, 1e9)(rng); },
    };
    for (const auto& draw : sources) {
        RunningStats s;
        std::vector<double> xs;
        for (int i = 0; i < 10'000; ++i) {
            xs.push_back(draw());
            s = update_stats(s, xs.back());
            if (i % 250 == 249 || i < 10) {
                auto m = oracle::two_pass(xs);
                auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
                const double e = std::max(rel(s.mean, m.mean), m.stddev > 0 ? rel(s.stddev(), m.stddev) : 0.0);
                worst = std::max(worst, e);
                v.require(e <= 1e-9, "Welford drifted from two-pass by " + fmt("%.2e", e));
            }
        }
    }

    const std::vector<WindowSpec> specs{
        {WindowSpec::Kind::Tumbling, WindowSpec::Measure::Count, 37, 0},
        {WindowSpec::Kind::Sliding, WindowSpec::Measure::Count, 50, 7},
        {WindowSpec::Kind::Sliding, WindowSpec::Measure::Count, 20, 20},
        {WindowSpec::Kind::Tumbling, WindowSpec::Measure::Time, 60'000, 0},
        {WindowSpec::Kind::Sliding, WindowSpec::Measure::Time, 45'000, 10'000},
        {WindowSpec::Kind::Sliding, WindowSpec::Measure::Time, 10'000, 5'000},
    };
    auto schema = testsupport::schema_of({testsupport::attr("x", ValueType::Float)});
    std::size_t checks = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        std::mt19937_64 g(seed);
        std::uniform_int_distribution<std::int64_t> gap(0, 9000);
        std::normal_distribution<double> val(20, 5);
        StreamState st(schema, {Horizon::none(), specs});
        std::vector<std::int64_t> times;
        std::vector<double> values;
        std::int64_t t = 0;
        for (std::uint64_t i = 1; i <= 1000; ++i) {
            t += gap(g);
            const double x = val(g);
            st.commit(testsupport::vec(i, Instant{t}, {AttributeValue(x)}));
            times.push_back(t);
            values.push_back(x);
            for (std::int64_t probe : {t, t + gap(g) * 3}) {
                for (const auto& spec : specs) {
                    std::vector<double> members;
                    if (spec.measure == WindowSpec::Measure::Time) {
                        for (auto k : oracle::time_window_members(times, probe, spec.size, spec.effective_slide())) {
                            members.push_back(values[k]);
                        }
                    } else {
                        for (auto o : oracle::count_window_members(i, static_cast<std::uint64_t>(spec.size),
                                                                   static_cast<std::uint64_t>(spec.effective_slide()))) {
                            members.push_back(values[o - 1]);
                        }
                    }
                    const auto snap = st.window_snapshot(spec, Instant{probe})[0];
                    RunningStats expect;
                    for (double x : members) expect = update_stats(expect, x);
                    ++checks;
                    v.require(snap == expect, "window membership differs");
                    if (!members.empty()) {
                        auto m = oracle::two_pass(members);
                        v.require(oracle::close_rel(snap.mean, m.mean, 1e-9) &&
                                      oracle::close_rel(snap.stddev(), m.stddev, 1e-9),
                                  "window statistics drifted");
                    }
                }
            }
        }
    }
    v.detail = (v.ok ? "" : v.detail + "; ") + "worst Welford relative error " + fmt("%.2e", worst) + "; " +
               std::to_string(checks) + " window snapshots matched brute-force membership";
    return v;
}

// 9: reruns are byte-identical apart from wall-clock fields.
std::string read_all(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_clock(std::string manifest) {
    std::istringstream in(manifest);
    std::string line, out;
    while (std::getline(in, line)) {
        if (line.find("\"started_at\"") != std::string::npos || line.find("\"finished_at\"") != std::string::npos) continue;
        out += line + "\n";
    }
    return out;
}

Verdict determinism(const fs::path& root) {
    Verdict v;
    struct Case {
        const Dataset* truth;
        ErrorType type;
        std::optional<RepairStrategy> repair;
    };
    const std::vector<Case> cases{
        {&intel(), ErrorType::Interval, RepairStrategy{IntervalRepair::RandomInInterval}},
        {&intel(), ErrorType::Missing, RepairStrategy{MissingRepairPlan{MissingRepair::PreviousOnlyInterpolation, {}}}},
        {&intel(), ErrorType::Outlier, RepairStrategy{OutlierRepair::NearestNonOutlier}},
        {&intel(), ErrorType::Duplicate, RepairStrategy{OrderConflictRepair::RejectVector}},
        {&taxi(), ErrorType::WrongType, std::nullopt},
        {&taxi(), ErrorType::Fd, RepairStrategy{FdRepair::SetDependentFromMapping}},
        {&taxi(), ErrorType::Contradiction, RepairStrategy{OrderConflictRepair::AlignToFirst}},
    };
    const std::vector<std::string> files{"report.csv", "report.json", "run_log.json", "cleaned.csv",
                                         "corrupted.csv", "injection_log.csv", "config.json"};
    std::size_t compared = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        ExperimentSpec spec;
        if (cases[i].type == ErrorType::WrongType) {
            spec = experiment(*cases[i].truth, ErrorType::WrongType, std::nullopt, 11);
            spec.pipeline.modules.clear();
        } else {
            spec = experiment(*cases[i].truth, cases[i].type, cases[i].repair, 11);
        }
        const auto a = root / ("a" + std::to_string(i)), b = root / ("b" + std::to_string(i));
        spec.out_dir = a;
        run_experiment(spec);
        spec.out_dir = b;
        run_experiment(spec);
        for (const auto& f : files) {
            ++compared;
            v.require(read_all(a / f) == read_all(b / f), std::string(to_string(cases[i].type)) + ": " + f + " differs");
        }
        v.require(strip_clock(read_all(a / "manifest.json")) == strip_clock(read_all(b / "manifest.json")),
                  "manifest differs");
    }

    // Through the command line as well.
    const std::string cli = STREAMCLEAN_CLI;
    std::string reports[2];
    for (int k = 0; k < 2; ++k) {
        const auto dir = root / ("cli" + std::to_string(k));
        const auto out = root / ("cli" + std::to_string(k) + ".txt");
        const std::string cmd = cli + " experiment --profile taxi_like --size 2000 --modules uniqueness --seed 9" +
                                " --format structured --out " + dir.string() + " > " + out.string() + " 2>/dev/null";
        const int status = std::system(cmd.c_str());
        v.require(WIFEXITED(status) && WEXITSTATUS(status) == 0, "command line experiment failed");
        reports[k] = read_all(out) + read_all(dir / "report.csv") + read_all(dir / "run_log.json");
    }
    v.require(!reports[0].empty() && reports[0] == reports[1], "command line reports differ");
    v.detail = (v.ok ? "" : v.detail + "; ") + std::to_string(cases.size()) + " experiments run twice, " +
               std::to_string(compared) + " artifacts and the command-line report byte-identical";
    return v;
}

// 10: evaluator against the brute-force scorer on random micro-experiments.
Verdict evaluator_identities() {
    Verdict v;
    std::mt19937_64 rng(10);
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    const std::vector<ErrorType> intel_types{ErrorType::Interval, ErrorType::Missing, ErrorType::Outlier,
                                             ErrorType::WrongType, ErrorType::Uniqueness, ErrorType::Duplicate};
    const std::vector<ErrorType> taxi_types{ErrorType::Fd, ErrorType::Contradiction, ErrorType::Interval,
                                            ErrorType::Missing};
    std::map<int, Dataset> pool;
    for (int k = 0; k < 4; ++k) {
        pool[k] = synthesize_dataset(k % 2 ? SyntheticProfile::TaxiLike : SyntheticProfile::IntelLike, 120 + 20 * k,
                                     static_cast<std::uint64_t>(k));
    }
    std::size_t checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto& d = pool[static_cast<int>(pick(pool.size()))];
        const bool is_taxi = d.schema.arity() > 5;
        const auto& types = is_taxi ? taxi_types : intel_types;
        ExperimentSpec spec;
        spec.truth = d;
        spec.injection.type = types[pick(types.size())];
        spec.injection.count = 1 + pick(8);
        spec.injection.seed = rng();
        spec.pipeline.schema = d.schema;
        spec.pipeline.seed = rng();
        spec.seed = spec.injection.seed;
        spec.single_error_type = false;
        // A random extra module or two stirs in false positives and deletions.
        std::vector<ErrorType> modules{spec.injection.type};
        const std::vector<ErrorType> extras{ErrorType::Outlier, ErrorType::Duplicate, ErrorType::Uniqueness,
                                            ErrorType::Missing};
        for (int e = 0; e < 2; ++e) {
            auto x = extras[pick(extras.size())];
            if (std::find(modules.begin(), modules.end(), x) == modules.end()) modules.push_back(x);
        }
        std::shuffle(modules.begin(), modules.end(), rng);
        for (auto type : modules) {
            if (type == ErrorType::WrongType) continue;
            auto m = module(type);
            m.outlier.warmup = 10;
            m.outlier.threshold = 1.5 + static_cast<double>(pick(3));
            if (pick(2)) {
                if (type == ErrorType::Duplicate || type == ErrorType::Uniqueness || type == ErrorType::Contradiction) {
                    m.repair = RepairStrategy{OrderConflictRepair::RejectVector};
                }
                if (type == ErrorType::Missing) m.repair = RepairStrategy{MissingRepairPlan{MissingRepair::DeleteVector, {}}};
                if (type == ErrorType::Interval) m.repair = RepairStrategy{IntervalRepair::ClampNearest};
                if (type == ErrorType::Outlier) m.repair = RepairStrategy{OutlierRepair::DistributionMean};
                if (type == ErrorType::Fd) m.repair = RepairStrategy{FdRepair::RejectVector};
            }
            spec.pipeline.modules.push_back(m);
        }
        ExperimentResult r;
        try {
            r = evaluate_experiment(spec);
        } catch (const ConfigError& e) {
            v.require(false, std::string("micro-experiment rejected: ") + e.what());
            continue;
        }
        const auto findings = r.run.findings();
        const auto expect = oracle::brute_force_score(r.injection.log, findings, d.schema);
        const auto& rep = r.report;
        oracle::Counts total;
        for (std::size_t c = 0; c < d.schema.arity(); ++c) {
            const auto& m = rep.per_column[c];
            const auto& e = expect[c];
            v.require(m.injected == e.injected && m.identified == e.identified && m.correct == e.correct &&
                          m.false_negatives == e.false_negatives && m.false_positives == e.false_positives,
                      "trial " + std::to_string(trial) + ": column " + rep.columns[c] + " disagrees");
            v.require(m.identified == m.correct + m.false_positives, "identified != correct + FP");
            v.require(m.injected == m.correct + m.false_negatives, "injected != correct + FN");
            total.injected += e.injected;
            total.identified += e.identified;
            total.correct += e.correct;
            total.false_positives += e.false_positives;
            total.false_negatives += e.false_negatives;
        }
        v.require(rep.total.injected == total.injected && rep.total.identified == total.identified &&
                      rep.total.correct == total.correct && rep.total.false_positives == total.false_positives &&
                      rep.total.false_negatives == total.false_negatives,
                  "trial " + std::to_string(trial) + ": totals disagree");
        std::size_t deletions = 0;
        for (const auto& e : r.run.entries) deletions += e.summary.outcome == Outcome::Deleted;
        v.require(rep.deleted_vectors == deletions, "deleted vectors miscounted");
        ++checked;
    }
    v.detail = (v.ok ? "" : v.detail + "; ") + std::to_string(checked) +
               " micro-experiments agree with the brute-force scorer";
    return v;
}

}  // namespace

int main() {
    const auto root = fs::temp_directory_path() / ("streamclean_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);

    int failures = 0;
    auto report = [&](int n, const std::string& name, const std::function<Verdict()>& check) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v.ok = false;
            v.detail = std::string("threw: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += !v.ok;
        std::cout << (v.ok ? "PASS" : "FAIL") << " " << n << " " << name << ": " << v.detail << " ["
                  << fmt("%.1f", secs) << " s]" << std::endl;
    };

    report(1, "interval violations", [] {
        return exact_detection(ErrorType::Interval, RepairStrategy{IntervalRepair::ClampNearest});
    });
    report(2, "missing values", [] {
        return exact_detection(ErrorType::Missing, RepairStrategy{MissingRepairPlan{MissingRepair::Mean, {}}});
    });
    Verdict ratios;
    report(3, "uniqueness, duplicates, contradictions", [&] { return key_collisions(ratios); });
    report(4, "distribution preserved by duplicate removal", [&] { return ratios; });
    report(5, "overlapping functional dependencies", fd_overlap);
    report(6, "outlier properties", outliers);
    report(7, "keep-first oracle equivalence", keep_first);
    report(8, "state correctness", state_correctness);
    report(9, "determinism", [&] { return determinism(root); });
    report(10, "evaluator identities", evaluator_identities);

    fs::remove_all(root);
    return failures == 0 ? 0 : 1;
}
