#include "cove/cli.hpp"

#include "cove/dataset.hpp"
#include "cove/errors.hpp"
#include "cove/factuality.hpp"
#include "cove/http_backend.hpp"
#include "cove/metrics.hpp"
#include "cove/parsers.hpp"
#include "cove/passage.hpp"
#include "cove/pipeline.hpp"
#include "cove/replay.hpp"
#include "cove/report.hpp"
#include "cove/scripted_backend.hpp"
#include "cove/serde.hpp"
#include "cove/text_util.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>

namespace cove::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

// Options shared by run/eval/report; file values first, flags override.
struct CommonOpts {
    std::string config_file;
    std::string dataset;
    std::string task = "list_qa";
    std::string banks = "assets/banks";
    std::string mock_rules;
    std::string endpoint;
    std::string model = "default";
    std::uint64_t mock_delay_ms = 0;
};

struct RunOpts {
    CommonOpts common;
    std::string out_dir;
    std::string variant = "factored";
    std::string strategy = "open";
    int max_questions = 10;
    int parallelism = 1;
    int jobs = 1;
    std::uint64_t seed = 0;
    double temperature = 0.0;
    int max_tokens = 512;
    std::string failure_policy = "abort";
};

void apply_config_file(RunOpts& o) {
    if (o.common.config_file.empty()) return;
    std::ifstream in(o.common.config_file);
    if (!in) throw Error("cannot open config file: " + o.common.config_file);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("bad config file: " + std::string(e.what()));
    }
    if (j.contains("auth_token")) {
        throw Error("auth_token must come from COVE_AUTH_TOKEN, not a file");
    }
    // Only fill fields still at their defaults, so flags win.
    RunOpts defaults;
    auto take = [&](const char* key, auto& field, const auto& def) {
        if (j.contains(key) && field == def) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    take("variant", o.variant, defaults.variant);
    take("planner_strategy", o.strategy, defaults.strategy);
    take("max_questions", o.max_questions, defaults.max_questions);
    take("parallelism", o.parallelism, defaults.parallelism);
    take("jobs", o.jobs, defaults.jobs);
    take("seed", o.seed, defaults.seed);
    take("temperature", o.temperature, defaults.temperature);
    take("max_tokens", o.max_tokens, defaults.max_tokens);
    take("failure_policy", o.failure_policy, defaults.failure_policy);
    take("dataset", o.common.dataset, defaults.common.dataset);
    take("task", o.common.task, defaults.common.task);
    take("banks", o.common.banks, defaults.common.banks);
    take("mock", o.common.mock_rules, defaults.common.mock_rules);
    take("endpoint", o.common.endpoint, defaults.common.endpoint);
    take("model", o.common.model, defaults.common.model);
}

PipelineConfig build_config(const RunOpts& o) {
    PipelineConfig config;
    config.variant = variant_from_string(o.variant);
    config.planner_strategy = strategy_from_string(o.strategy);
    config.max_questions = o.max_questions;
    config.parallelism = o.parallelism;
    config.seed = o.seed;
    config.decoding.temperature = o.temperature;
    config.decoding.max_tokens = o.max_tokens;
    config.failure_policy = failure_policy_from_string(o.failure_policy);
    validate_config(config);
    return config;
}

struct BackendHandle {
    std::unique_ptr<Backend> backend;
    std::string descriptor;
};

BackendHandle make_backend(const CommonOpts& o, std::uint64_t seed,
                           std::uint64_t delay_ms) {
    if (!o.mock_rules.empty()) {
        auto scripted =
            std::make_unique<ScriptedBackend>(load_rules_file(o.mock_rules));
        if (delay_ms > 0) scripted->set_delay_ms(delay_ms);
        (void)seed;
        return {std::move(scripted), "mock:" + o.mock_rules};
    }
    if (!o.endpoint.empty()) {
        HttpBackendConfig hc;
        hc.endpoint = o.endpoint;
        hc.model = o.model;
        apply_env_overrides(hc);
        auto http = std::make_unique<HttpBackend>(hc);
        std::string descriptor = http->id();
        return {std::move(http), descriptor};
    }
    throw InvalidConfigError("need --mock RULES or --endpoint URL");
}

int classify_error(const std::exception& e) {
    if (dynamic_cast<const BackendError*>(&e) != nullptr) return kExitBackend;
    if (dynamic_cast<const PipelineStepError*>(&e) != nullptr) {
        return kExitBackend;
    }
    if (dynamic_cast<const ParseError*>(&e) != nullptr) return kExitDataset;
    if (dynamic_cast<const SchemaMismatchError*>(&e) != nullptr) {
        return kExitDataset;
    }
    return kExitConfig;
}

// ---- run ----

int cmd_run(RunOpts& o) {
    apply_config_file(o);
    if (o.common.dataset.empty()) {
        std::cerr << "error: --dataset is required\n";
        return kExitConfig;
    }
    PipelineConfig config = build_config(o);
    TaskKind task = task_kind_from_string(o.common.task);

    std::vector<TaskRecord> records;
    try {
        records = load_dataset(o.common.dataset, task);
    } catch (const std::exception& e) {
        std::cerr << "dataset error: " << e.what() << "\n";
        return kExitDataset;
    }
    if (records.empty()) {
        std::cerr << "dataset error: no records in " << o.common.dataset << "\n";
        return kExitDataset;
    }

    BankSet banks;
    BackendHandle handle;
    try {
        banks = BankSet::load_dir(o.common.banks);
        handle = make_backend(o.common, o.seed, o.common.mock_delay_ms);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (o.out_dir.empty()) {
        o.out_dir = "runs/" + utc_timestamp() + "-" +
                    config_hash(config).substr(0, 8);
    }
    fs::create_directories(o.out_dir);
    fs::path manifest_path = fs::path(o.out_dir) / "manifest.json";
    fs::path results_path = fs::path(o.out_dir) / "results.jsonl";

    // Resume: completed query ids are skipped; the manifest must agree.
    std::unordered_set<std::string> done;
    if (fs::exists(manifest_path)) {
        std::ifstream in(manifest_path);
        json j;
        in >> j;
        if (j.at("config_hash").get<std::string>() != config_hash(config)) {
            std::cerr << "config error: run directory " << o.out_dir
                      << " was created with a different config\n";
            return kExitConfig;
        }
        if (fs::exists(results_path)) {
            for (const auto& r : read_results_file(results_path.string())) {
                done.insert(r.query.id);
            }
        }
    } else {
        // Written before the first backend call; immutable afterward.
        json manifest{{"config", to_json(config)},
                      {"config_hash", config_hash(config)},
                      {"dataset",
                       {{"path", o.common.dataset},
                        {"hash", dataset_hash_of_file(o.common.dataset)}}},
                      {"backend", handle.descriptor},
                      {"out_dir", o.out_dir},
                      {"timestamp", utc_timestamp()}};
        std::ofstream out(manifest_path);
        out << manifest.dump(2) << "\n";
    }

    std::vector<const TaskRecord*> pending;
    for (const auto& r : records) {
        if (done.count(r.id) == 0) pending.push_back(&r);
    }
    if (pending.empty()) {
        std::cout << "all " << records.size() << " queries already complete\n";
        return kExitOk;
    }

    std::ofstream out(results_path, std::ios::app | std::ios::binary);
    if (!out) {
        std::cerr << "config error: cannot write " << results_path << "\n";
        return kExitConfig;
    }

    Backend& backend = *handle.backend;
    std::size_t completed = 0;
    int jobs = std::max(1, o.jobs);
    // Wave scheduling keeps the output file in dataset order, which keeps
    // reruns byte-identical under deterministic backends.
    for (std::size_t base = 0; base < pending.size();
         base += static_cast<std::size_t>(jobs)) {
        std::size_t wave_end =
            std::min(pending.size(), base + static_cast<std::size_t>(jobs));
        std::vector<std::future<PipelineResult>> futures;
        for (std::size_t i = base; i < wave_end; ++i) {
            const TaskRecord* rec = pending[i];
            futures.push_back(std::async(std::launch::async, [&, rec] {
                return run(rec->query(), config, backend, banks);
            }));
        }
        for (std::size_t i = base; i < wave_end; ++i) {
            try {
                PipelineResult result = futures[i - base].get();
                RunRecord line{pending[i]->query(), std::move(result)};
                append_result_line(out, line);
                out.flush();
                ++completed;
            } catch (const std::exception& e) {
                std::cerr << "backend error on query '" << pending[i]->id
                          << "': " << e.what() << "\n";
                return classify_error(e);
            }
        }
    }
    std::cout << "wrote " << completed << " results to " << results_path
              << "\n";
    return kExitOk;
}

// ---- eval ----

struct EvalOpts {
    std::string results;
    std::string dataset;
    std::string task = "list_qa";
    std::string out;
    std::string label;
    std::string judge = "exact";
    std::string banks;
    std::string mock_rules;
    std::string endpoint;
    std::string model = "default";
};

// Builds one report row from a results file and the gold dataset.
EvalReport evaluate_results(const std::vector<RunRecord>& results,
                            const std::vector<TaskRecord>& gold,
                            TaskKind task, const EvalOpts& o) {
    std::unordered_map<std::string, const TaskRecord*> by_id;
    for (const auto& g : gold) by_id.emplace(g.id, &g);

    EvalReport report;
    report.task_kind = task;
    report.num_queries = results.size();
    report.system_label =
        !o.label.empty()
            ? o.label
            : std::string(to_string(results.front().result.trace.config().variant));
    report.config_hash = config_hash(results.front().result.trace.config());

    switch (task) {
        case TaskKind::ListQA: {
            std::vector<ListJudgment> judgments;
            for (const auto& r : results) {
                const auto& g = std::get<ListGold>(by_id.at(r.query.id)->gold);
                judgments.push_back({r.query.id,
                                     parse_list_answer(r.result.final_response),
                                     g.entities});
            }
            report.list_precision = micro_precision(judgments);
            break;
        }
        case TaskKind::MultiSpanQA: {
            std::vector<SpanJudgment> judgments;
            for (const auto& r : results) {
                const auto& g = std::get<SpanGold>(by_id.at(r.query.id)->gold);
                judgments.push_back({r.query.id,
                                     parse_list_answer(r.result.final_response),
                                     g.spans});
            }
            report.span_scores = multispan_f1_corpus(judgments);
            break;
        }
        case TaskKind::LongformBio: {
            // Facts come from a backend-prompted extraction when a backend
            // and banks are configured; otherwise each sentence counts as
            // one fact (documented fallback).
            std::unique_ptr<Backend> extractor;
            const DemoBank* bank = nullptr;
            BankSet banks;
            if (!o.mock_rules.empty()) {
                extractor = std::make_unique<ScriptedBackend>(
                    load_rules_file(o.mock_rules));
            } else if (!o.endpoint.empty()) {
                HttpBackendConfig hc;
                hc.endpoint = o.endpoint;
                hc.model = o.model;
                apply_env_overrides(hc);
                extractor = std::make_unique<HttpBackend>(hc);
            }
            if (extractor != nullptr && !o.banks.empty()) {
                banks = BankSet::load_dir(o.banks);
                bank = &banks.get(TaskKind::LongformBio, PromptStep::FactExtract);
            }
            JudgeMode mode = o.judge == "backend" ? JudgeMode::BackendJudge
                                                  : JudgeMode::ExactNormalized;
            std::vector<FactJudgment> judgments;
            for (const auto& r : results) {
                const auto& g = std::get<BioGold>(by_id.at(r.query.id)->gold);
                std::vector<std::string> facts;
                if (bank != nullptr) {
                    facts = extract_facts(r.result.final_response, *extractor,
                                          *bank);
                } else {
                    for (auto& s :
                         split_sentences(r.result.final_response)) {
                        std::string t = trim(s);
                        if (!t.empty()) facts.push_back(std::move(t));
                    }
                }
                FactJudgment judgment;
                judgment.response_id = r.query.id;
                judgment.rarity = g.rarity;
                for (auto& f : facts) {
                    bool supported =
                        judge_fact(f, g.facts, mode,
                                   mode == JudgeMode::BackendJudge
                                       ? extractor.get()
                                       : nullptr);
                    judgment.facts.push_back({std::move(f), supported});
                }
                judgments.push_back(std::move(judgment));
            }
            report.fact_score = factscore(judgments);
            report.fact_score_by_bucket = factscore_by_bucket(judgments);
            break;
        }
    }
    return report;
}

int cmd_eval(const EvalOpts& o) {
    std::vector<RunRecord> results;
    std::vector<TaskRecord> gold;
    TaskKind task;
    try {
        task = task_kind_from_string(o.task);
        results = read_results_file(o.results);
        gold = load_dataset(o.dataset, task);
    } catch (const std::exception& e) {
        std::cerr << "dataset error: " << e.what() << "\n";
        return kExitDataset;
    }
    if (results.empty()) {
        std::cerr << "dataset error: results file is empty\n";
        return kExitDataset;
    }
    std::unordered_set<std::string> gold_ids;
    for (const auto& g : gold) gold_ids.insert(g.id);
    for (const auto& r : results) {
        if (gold_ids.count(r.query.id) == 0) {
            std::cerr << "dataset error: result id '" << r.query.id
                      << "' not in gold dataset\n";
            return kExitDataset;
        }
    }

    EvalReport report;
    try {
        report = evaluate_results(results, gold, task, o);
        report.dataset_hash = dataset_hash_of_file(o.dataset);
    } catch (const std::exception& e) {
        std::cerr << "eval error: " << e.what() << "\n";
        return classify_error(e);
    }

    std::cout << render_report_table({report});
    std::string out_path = o.out;
    if (out_path.empty()) {
        out_path =
            (fs::path(o.results).parent_path() / "report.json").string();
    }
    std::ofstream out(out_path, std::ios::binary);
    out << report_to_json(report).dump(2) << "\n";
    return kExitOk;
}

// ---- replay ----

int cmd_replay(const std::string& results_path, const std::string& banks_dir) {
    std::vector<RunRecord> results;
    BankSet banks;
    try {
        results = read_results_file(results_path);
        banks = BankSet::load_dir(banks_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataset;
    }
    if (results.empty()) {
        std::cerr << "error: results file is empty\n";
        return kExitDataset;
    }

    bool diverged = false;
    for (const auto& record : results) {
        ReplayReport report = replay_record(record, banks);
        if (!report.ok) {
            diverged = true;
            for (const auto& d : report.divergences) {
                std::cout << "DIVERGED " << record.query.id << ": " << d << "\n";
            }
        } else {
            std::cout << "ok " << record.query.id << " ("
                      << record.result.trace.call_count() << " calls)\n";
        }
    }
    return diverged ? kExitDivergence : kExitOk;
}

// ---- validate ----

int cmd_validate(const std::string& dataset, const std::string& task,
                 const std::string& banks_dir) {
    if (!dataset.empty()) {
        try {
            auto records = load_dataset(dataset, task_kind_from_string(task));
            std::cout << dataset << ": " << records.size() << " records OK\n";
        } catch (const std::exception& e) {
            std::cerr << "dataset error: " << e.what() << "\n";
            return kExitDataset;
        }
    }
    if (!banks_dir.empty()) {
        try {
            BankSet banks = BankSet::load_dir(banks_dir);
            std::cout << banks_dir << ": " << banks.size() << " banks OK\n";
        } catch (const std::exception& e) {
            std::cerr << "bank error: " << e.what() << "\n";
            return kExitConfig;
        }
    }
    return kExitOk;
}

// ---- report (compare runs) ----

int cmd_report(const std::vector<std::string>& run_dirs,
               const std::string& dataset, const std::string& task,
               const std::string& out_path) {
    std::vector<EvalReport> rows;
    try {
        TaskKind kind = task_kind_from_string(task);
        auto gold = load_dataset(dataset, kind);
        for (const auto& dir : run_dirs) {
            fs::path results_path = fs::path(dir) / "results.jsonl";
            auto results = read_results_file(results_path.string());
            if (results.empty()) {
                std::cerr << "dataset error: empty results in " << dir << "\n";
                return kExitDataset;
            }
            EvalOpts eo;
            eo.label = std::string(
                to_string(results.front().result.trace.config().variant));
            EvalReport row = evaluate_results(results, gold, kind, eo);
            row.dataset_hash = dataset_hash_of_file(dataset);
            rows.push_back(std::move(row));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify_error(e);
    }
    std::cout << render_report_table(rows);
    if (!out_path.empty()) {
        json arr = json::array();
        for (const auto& r : rows) arr.push_back(report_to_json(r));
        std::ofstream out(out_path, std::ios::binary);
        out << arr.dump(2) << "\n";
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"chain-of-verification pipeline runner"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "run the pipeline over a dataset");
    RunOpts ro;
    run_cmd->add_option("--config", ro.common.config_file,
                        "JSON config file; flags override its values");
    run_cmd->add_option("--dataset", ro.common.dataset, "dataset JSONL file");
    run_cmd->add_option("--task", ro.common.task,
                        "list_qa | multi_span_qa | longform_bio");
    run_cmd->add_option("--banks", ro.common.banks, "demonstration bank dir");
    run_cmd->add_option("--mock", ro.common.mock_rules,
                        "scripted mock rules file (JSONL)");
    run_cmd->add_option("--mock-delay-ms", ro.common.mock_delay_ms,
                        "fixed per-call mock delay");
    run_cmd->add_option("--endpoint", ro.common.endpoint,
                        "chat-completions endpoint URL");
    run_cmd->add_option("--model", ro.common.model, "model id");
    run_cmd->add_option("--out", ro.out_dir, "run directory");
    run_cmd->add_option("--variant", ro.variant,
                        "baseline | zero_shot | zero_shot_cot | joint | "
                        "two_step | factored | factor_revise");
    run_cmd->add_option("--strategy", ro.strategy, "open | yes_no | rule");
    run_cmd->add_option("--max-questions", ro.max_questions,
                        "verification plan bound");
    run_cmd->add_option("--parallelism", ro.parallelism,
                        "max in-flight calls per query");
    run_cmd->add_option("--jobs", ro.jobs, "queries run concurrently");
    run_cmd->add_option("--seed", ro.seed, "mock determinism seed");
    run_cmd->add_option("--temperature", ro.temperature, "decoding temperature");
    run_cmd->add_option("--max-tokens", ro.max_tokens, "decoding token bound");
    run_cmd->add_option("--failure-policy", ro.failure_policy,
                        "abort | skip_question");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score a results file");
    EvalOpts eo;
    eval_cmd->add_option("--results", eo.results, "results.jsonl")->required();
    eval_cmd->add_option("--dataset", eo.dataset, "gold dataset")->required();
    eval_cmd->add_option("--task", eo.task, "task kind");
    eval_cmd->add_option("--out", eo.out, "report JSON path");
    eval_cmd->add_option("--label", eo.label, "row label");
    eval_cmd->add_option("--judge", eo.judge, "exact | backend");
    eval_cmd->add_option("--banks", eo.banks, "banks dir (fact extraction)");
    eval_cmd->add_option("--mock", eo.mock_rules, "mock rules for extraction");
    eval_cmd->add_option("--endpoint", eo.endpoint, "endpoint for extraction");
    eval_cmd->add_option("--model", eo.model, "model id");

    // replay
    auto* replay_cmd =
        app.add_subcommand("replay", "re-execute a recorded run");
    std::string replay_results;
    std::string replay_banks = "assets/banks";
    replay_cmd->add_option("--results", replay_results, "results.jsonl")
        ->required();
    replay_cmd->add_option("--banks", replay_banks, "demonstration bank dir");

    // validate
    auto* validate_cmd =
        app.add_subcommand("validate", "check dataset/bank files");
    std::string v_dataset;
    std::string v_task = "list_qa";
    std::string v_banks;
    validate_cmd->add_option("--dataset", v_dataset, "dataset JSONL file");
    validate_cmd->add_option("--task", v_task, "task kind");
    validate_cmd->add_option("--banks", v_banks, "banks dir");

    // report
    auto* report_cmd =
        app.add_subcommand("report", "compare runs in one table");
    std::vector<std::string> report_runs;
    std::string report_dataset;
    std::string report_task = "list_qa";
    std::string report_out;
    report_cmd->add_option("--runs", report_runs, "run directories")
        ->required()
        ->expected(-1);
    report_cmd->add_option("--dataset", report_dataset, "gold dataset")
        ->required();
    report_cmd->add_option("--task", report_task, "task kind");
    report_cmd->add_option("--out", report_out, "combined report JSON");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(ro);
        if (eval_cmd->parsed()) return cmd_eval(eo);
        if (replay_cmd->parsed()) return cmd_replay(replay_results, replay_banks);
        if (validate_cmd->parsed()) {
            return cmd_validate(v_dataset, v_task, v_banks);
        }
        if (report_cmd->parsed()) {
            return cmd_report(report_runs, report_dataset, report_task,
                              report_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify_error(e);
    }
    return kExitConfig;
}

}  // namespace cove::cli
