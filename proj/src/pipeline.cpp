#include "streamclean/pipeline.hpp"

#include "streamclean/bounded_queue.hpp"

#include <algorithm>
#include <exception>
#include <set>
#include <thread>

namespace streamclean {

namespace {

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += "; ";
        out += p;
    }
    return out;
}

StateOptions state_options(const PipelineConfig& config) {
    StateOptions options;
    options.horizon = config.horizon;
    for (const auto& m : config.modules) {
        if (m.window && std::find(options.windows.begin(), options.windows.end(), *m.window) == options.windows.end()) {
            options.windows.push_back(*m.window);
        }
    }
    return options;
}

void merge_into(CleaningDecision& summary, const CleaningDecision& stage) {
    summary.changes.insert(summary.changes.end(), stage.changes.begin(), stage.changes.end());
    summary.findings.insert(summary.findings.end(), stage.findings.begin(), stage.findings.end());
    summary.notes.insert(summary.notes.end(), stage.notes.begin(), stage.notes.end());
    if (stage.outcome == Outcome::Deleted) {
        summary.outcome = Outcome::Deleted;
    } else if (stage.outcome == Outcome::Repaired && summary.outcome == Outcome::Pass) {
        summary.outcome = Outcome::Repaired;
    }
}

CleaningDecision detection_only_decision(const DataVector& v, std::vector<Finding> findings) {
    CleaningDecision d;
    d.vector_index = v.index;
    d.findings = std::move(findings);
    return d;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> faults)
    : std::runtime_error("invalid pipeline configuration: " + join(faults)), faults_(std::move(faults)) {}

std::size_t RunLog::deletions() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const VectorLog& e) {
        return e.summary.outcome == Outcome::Deleted;
    }));
}

std::vector<Finding> RunLog::findings() const {
    std::vector<Finding> out;
    for (const auto& e : entries) out.insert(out.end(), e.summary.findings.begin(), e.summary.findings.end());
    return out;
}

std::vector<std::string> validate_config(const PipelineConfig& config) {
    std::vector<std::string> faults;
    for (const auto& f : validate_schema(config.schema)) faults.push_back("schema: " + f.subject + ": " + f.message);

    std::set<ErrorType> seen;
    for (const auto& m : config.modules) {
        const std::string name(to_string(m.type));
        if (m.type == ErrorType::WrongType) {
            faults.push_back("wrong_type is the mandatory first stage and cannot be an optional module");
            continue;
        }
        if (!seen.insert(m.type).second) faults.push_back("module " + name + " configured more than once");
        if (m.repair && !strategy_fits(m.type, *m.repair)) faults.push_back("module " + name + ": repair strategy does not fit");
        if (m.window) {
            if (auto f = m.window->fault()) faults.push_back("module " + name + ": " + *f);
        }
        if (m.type == ErrorType::Outlier) {
            if (!(m.outlier.threshold > 0)) faults.push_back("module outlier: threshold must be positive");
            for (auto t : m.outlier.targets) {
                if (t >= config.schema.arity() || !config.schema.is_numeric(t)) {
                    faults.push_back("module outlier: target is not a numeric attribute");
                }
            }
        }
        if (m.type == ErrorType::Uniqueness && config.schema.key_positions().empty()) {
            faults.push_back("module uniqueness: schema declares no key or unique attribute");
        }
        if (m.type == ErrorType::Contradiction &&
            (config.schema.key_positions().empty() || config.schema.contradiction_scope.empty())) {
            faults.push_back("module contradiction: schema needs a key and a contradiction scope");
        }
        if (m.type == ErrorType::MissingVector && !config.schema.expected_cadence) {
            faults.push_back("module missing_vector: schema declares no expected cadence");
        }
    }
    if (config.horizon.kind != Horizon::Kind::None && config.horizon.amount <= 0) {
        faults.push_back("state horizon must be positive");
    }
    return faults;
}

PipelineConfig detection_only(PipelineConfig config) {
    config.type_repair.reset();
    for (auto& m : config.modules) m.repair.reset();
    return config;
}

Pipeline Pipeline::build(PipelineConfig config) {
    if (auto faults = validate_config(config); !faults.empty()) throw ConfigError(std::move(faults));
    return Pipeline(std::move(config));
}

Pipeline::Pipeline(PipelineConfig config)
    : config_(std::move(config)), state_(config_.schema, state_options(config_)), rng_(config_.seed) {}

CleaningDecision Pipeline::run_module(const ModuleConfig& module, DataVector& v, std::vector<DataVector>* committed) {
    const auto& schema = config_.schema;

    auto profile = [&]() -> Profile {
        return module.window ? state_.window_profile(*module.window, v.arrival) : state_.prefix_profile();
    };
    auto finish = [&](RepairResult r) {
        v = std::move(r.vector);
        return std::move(r.decision);
    };

    switch (module.type) {
        case ErrorType::WrongType:
            break;
        case ErrorType::Interval: {
            auto findings = detect_interval(v, schema);
            if (findings.empty() || !module.repair) return detection_only_decision(v, std::move(findings));
            return finish(repair_interval(v, findings, profile(), schema, std::get<IntervalRepair>(*module.repair), rng_));
        }
        case ErrorType::Missing: {
            auto findings = detect_missing(v, schema);
            if (findings.empty() || !module.repair) return detection_only_decision(v, std::move(findings));
            return finish(repair_missing(v, findings, state_, profile(), schema,
                                         std::get<MissingRepairPlan>(*module.repair)));
        }
        case ErrorType::Fd: {
            auto findings = detect_fd(v, schema, &state_);
            if (findings.empty() || !module.repair) return detection_only_decision(v, std::move(findings));
            return finish(repair_fd(v, findings, schema, std::get<FdRepair>(*module.repair), &state_));
        }
        case ErrorType::Uniqueness:
        case ErrorType::Duplicate:
        case ErrorType::Contradiction: {
            std::vector<Finding> findings;
            if (module.type == ErrorType::Uniqueness) findings = detect_uniqueness(v, state_, schema);
            if (module.type == ErrorType::Contradiction) findings = detect_contradiction(v, state_, schema);
            if (module.type == ErrorType::Duplicate) {
                if (auto f = detect_duplicate(v, state_)) findings.push_back(std::move(*f));
            }
            if (findings.empty() || !module.repair) return detection_only_decision(v, std::move(findings));
            return finish(repair_order_conflict(v, findings, state_, schema,
                                                std::get<OrderConflictRepair>(*module.repair)));
        }
        case ErrorType::Outlier: {
            const auto stats = module.window ? state_.window_snapshot(*module.window, v.arrival) : state_.stats();
            auto findings = detect_outlier(v, stats, schema, module.outlier);
            if (findings.empty() || !module.repair) return detection_only_decision(v, std::move(findings));
            return finish(repair_outlier(v, findings, stats, schema, std::get<OutlierRepair>(*module.repair),
                                         module.outlier));
        }
        case ErrorType::MissingVector: {
            auto findings = detect_missing_vectors(state_, v, schema);
            auto decision = detection_only_decision(v, std::move(findings));
            if (decision.findings.empty() || !module.repair) return decision;
            auto synthetic =
                synthesize_missing_vectors(state_, v, schema, std::get<MissingVectorRepair>(*module.repair));
            for (auto& s : synthetic) {
                state_.commit(s);
                if (committed) committed->push_back(std::move(s));
            }
            decision.notes.push_back(std::to_string(decision.findings.size()) + " synthetic vectors committed");
            return decision;
        }
    }
    return detection_only_decision(v, {});
}

VectorLog Pipeline::process(const DataVector& input, std::vector<DataVector>* committed) {
    if (input.index != processed_ + 1) {
        throw OrderingError("vector " + std::to_string(input.index) + " presented, expected " +
                            std::to_string(processed_ + 1));
    }
    if (last_arrival_ && input.arrival < *last_arrival_) {
        throw OrderingError("vector " + std::to_string(input.index) + " arrives before its predecessor");
    }
    if (input.values.size() != config_.schema.arity()) throw ParseError(config_.schema.arity(), input.values.size());
    ++processed_;
    last_arrival_ = input.arrival;

    VectorLog log;
    log.index = input.index;
    log.summary.vector_index = input.index;
    DataVector v = input;

    // Type check always runs first.
    auto type_findings = detect_wrong_type(v, config_.schema);
    CleaningDecision type_stage;
    if (!type_findings.empty() && config_.type_repair) {
        auto r = repair_wrong_type(v, type_findings, config_.schema, *config_.type_repair);
        v = std::move(r.vector);
        type_stage = std::move(r.decision);
    } else {
        type_stage = detection_only_decision(v, std::move(type_findings));
    }
    merge_into(log.summary, type_stage);
    log.stages.push_back(std::move(type_stage));

    for (const auto& module : config_.modules) {
        if (log.summary.outcome == Outcome::Deleted) break;
        auto decision = run_module(module, v, committed);
        merge_into(log.summary, decision);
        log.stages.push_back(std::move(decision));
    }

    if (log.summary.outcome != Outcome::Deleted) {
        state_.commit(v);
        if (committed) committed->push_back(std::move(v));
    }
    return log;
}

RunLog run_stream(Pipeline& pipeline, const std::vector<DataVector>& source) {
    RunLog log;
    log.entries.reserve(source.size());
    log.committed.reserve(source.size());
    for (const auto& v : source) log.entries.push_back(pipeline.process(v, &log.committed));
    return log;
}

RunLog run_stream_threaded(Pipeline& pipeline, std::function<std::optional<DataVector>()> next,
                           std::size_t queue_capacity) {
    BoundedQueue<DataVector> queue(queue_capacity);
    std::exception_ptr producer_error;
    std::thread producer([&] {
        try {
            while (auto v = next()) {
                if (!queue.push(std::move(*v))) break;
            }
        } catch (...) {
            producer_error = std::current_exception();
        }
        queue.close();
    });

    RunLog log;
    std::exception_ptr consumer_error;
    try {
        while (auto v = queue.pop()) log.entries.push_back(pipeline.process(*v, &log.committed));
    } catch (...) {
        consumer_error = std::current_exception();
        queue.close();
    }
    producer.join();
    if (consumer_error) std::rethrow_exception(consumer_error);
    if (producer_error) std::rethrow_exception(producer_error);
    return log;
}

}  // namespace streamclean
