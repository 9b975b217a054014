#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "lm4opt/harness.hpp"
#include "lm4opt/jsonl.hpp"

namespace {

using namespace lm4opt;

void print_warnings(const CorpusLoadResult& loaded) {
    for (const auto& w : loaded.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path);
    }
    out << content;
}

struct BackendFlags {
    std::string url = "mock";
    std::string model = "mock-model";
    std::string auth_env;
    std::string mock_script;
    long timeout_ms = 30000;
    int max_retries = 2;

    void attach(CLI::App* cmd) {
        cmd->add_option("--backend-url", url, "chat-completion endpoint, or 'mock'");
        cmd->add_option("--model", model, "model name sent to the backend");
        cmd->add_option("--auth-env", auth_env, "env var holding the bearer token");
        cmd->add_option("--mock-script", mock_script, "scripted responses for the mock backend");
        cmd->add_option("--timeout-ms", timeout_ms, "per-request timeout");
        cmd->add_option("--max-retries", max_retries, "transport/validation retries");
    }

    BackendConfig config() const {
        BackendConfig cfg;
        cfg.endpoint_url = url;
        cfg.model_name = model;
        cfg.auth_token_env_var = auth_env;
        cfg.timeout_ms = timeout_ms;
        cfg.max_retries = max_retries;
        return cfg;
    }

    Gateway gateway(TranscriptSink* sink = nullptr) const {
        auto cfg = config();
        return Gateway(make_backend(cfg, mock_script), cfg, sink);
    }
};

int cmd_corpus_validate(const std::string& path) {
    auto loaded = load_corpus(path);
    print_warnings(loaded);
    std::cout << "OK: " << loaded.instances.size() << " instances, " << loaded.warnings.size()
              << " warnings\n";
    return 0;
}

int cmd_corpus_summary(const std::string& path) {
    auto loaded = load_corpus(path);
    print_warnings(loaded);
    std::vector<Formulation> parsed;
    parsed.reserve(loaded.instances.size());
    for (const auto& inst : loaded.instances) {
        parsed.push_back(parse_formulation(inst.ground_truth_text));
    }
    auto s = summarize_corpus(loaded.instances, &parsed);
    nlohmann::ordered_json j;
    j["n_instances"] = s.n_instances;
    j["n_min"] = s.n_min;
    j["n_max"] = s.n_max;
    j["mean_variables"] = s.mean_variables;
    j["mean_constraints"] = s.mean_constraints;
    nlohmann::ordered_json per;
    for (const auto& [cat, count] : s.per_category_counts) {
        per[to_string(cat)] = count;
    }
    j["per_category_counts"] = std::move(per);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_generate(const std::string& corpus_path, const BackendFlags& backend,
                 const std::string& strategy, double temperature, int max_tokens,
                 const std::string& out) {
    auto loaded = load_corpus(corpus_path);
    print_warnings(loaded);
    std::vector<Strategy> strategies;
    if (strategy == "all") {
        strategies.assign(kAllStrategies.begin(), kAllStrategies.end());
    } else {
        strategies = {strategy_from_string(strategy)};
    }
    auto gw = backend.gateway();
    std::vector<nlohmann::ordered_json> records;
    for (const auto& inst : loaded.instances) {
        for (Strategy s : strategies) {
            auto prompt = render_generation_prompt(s, inst.description);
            ChatRequest req;
            req.messages = {{"user", prompt.text}};
            req.temperature = temperature;
            req.max_output_tokens = max_tokens;
            req.request_tag = inst.id + "/gen/" + to_string(s);
            auto resp = gw.complete(req);
            nlohmann::ordered_json rec;
            rec["problem_id"] = inst.id;
            rec["temperature"] = temperature;
            rec["strategy"] = to_string(s);
            rec["text"] = resp.text;
            records.push_back(std::move(rec));
        }
    }
    write_output(out, jsonl::dump_records(records));
    return 0;
}

int cmd_rank(const std::string& corpus_path, const std::string& candidates_path,
             const BackendFlags& backend, const std::string& fallback, std::uint64_t seed,
             bool randomize, const std::string& out) {
    auto loaded = load_corpus(corpus_path);
    print_warnings(loaded);
    std::map<std::string, std::map<std::string, std::string>> by_problem;
    jsonl::for_each_record(
        candidates_path,
        [&](std::size_t, const nlohmann::json& rec) {
            by_problem[rec["problem_id"].get<std::string>()][rec["strategy"].get<std::string>()] =
                rec["text"].get<std::string>();
        },
        [](std::string msg) { return Error(msg); });

    auto gw = backend.gateway();
    RankerConfig rcfg;
    rcfg.fallback = fallback_policy_from_string(fallback);
    rcfg.randomize_order = randomize;
    rcfg.seed = seed;

    std::vector<nlohmann::ordered_json> records;
    for (const auto& inst : loaded.instances) {
        auto it = by_problem.find(inst.id);
        if (it == by_problem.end()) {
            continue;
        }
        CandidateSet cands;
        cands.problem_id = inst.id;
        for (std::size_t i = 0; i < kAllStrategies.size(); ++i) {
            auto name = to_string(kAllStrategies[i]);
            auto cit = it->second.find(name);
            if (cit == it->second.end()) {
                throw Error("problem " + inst.id + " lacks a " + name + " candidate");
            }
            cands.candidates[i] = {kAllStrategies[i], cit->second};
        }
        auto outcome = run_tournament(inst.description, cands, gw, rcfg);
        nlohmann::ordered_json rec;
        rec["problem_id"] = inst.id;
        rec["winner_index"] = outcome.winner_index;
        rec["winner_strategy"] = to_string(outcome.winner_strategy);
        rec["fallback_used"] = outcome.fallback_used;
        rec["text"] = cands.candidates[static_cast<std::size_t>(outcome.winner_index - 1)]
                          .formulation_text;
        rec["comparisons"] = nlohmann::ordered_json::array();
        for (const auto& c : outcome.comparisons) {
            rec["comparisons"].push_back({{"left_index", c.left_index},
                                          {"right_index", c.right_index},
                                          {"best", c.result.best},
                                          {"second_best", c.result.second_best},
                                          {"reasoning_steps", c.result.reasoning_steps}});
        }
        records.push_back(std::move(rec));
    }
    write_output(out, jsonl::dump_records(records));
    return 0;
}

int cmd_evaluate(const std::string& corpus_path, const std::string& selections_path,
                 const BackendFlags& backend, const std::vector<int>& lame_k,
                 const std::string& demos_path, const std::string& embedding_provider,
                 const std::string& out) {
    auto loaded = load_corpus(corpus_path);
    print_warnings(loaded);
    std::map<std::string, std::string> selections;
    jsonl::for_each_record(
        selections_path,
        [&](std::size_t, const nlohmann::json& rec) {
            selections[rec["problem_id"].get<std::string>()] = rec["text"].get<std::string>();
        },
        [](std::string msg) { return Error(msg); });

    int max_k = 1;
    for (int k : lame_k) {
        max_k = std::max(max_k, k);
    }
    DemonstrationSet demos = demos_path.empty() ? default_demonstrations(max_k)
                                                : load_demonstrations(demos_path, max_k);
    auto gw = backend.gateway();
    std::unique_ptr<EmbeddingProvider> embedder;
    if (embedding_provider == "hash") {
        embedder = std::make_unique<HashEmbeddingProvider>();
    } else if (!embedding_provider.empty() && embedding_provider != "none") {
        embedder = std::make_unique<HttpEmbeddingProvider>(embedding_provider);
    }

    std::vector<nlohmann::ordered_json> records;
    for (const auto& inst : loaded.instances) {
        auto it = selections.find(inst.id);
        if (it == selections.end()) {
            continue;
        }
        nlohmann::ordered_json rec;
        rec["problem_id"] = inst.id;
        auto overlap = compute_overlap(it->second, inst.ground_truth_text);
        rec["bleu"] = overlap.bleu;
        rec["rouge1"] = overlap.rouge1_f;
        rec["rouge2"] = overlap.rouge2_f;
        rec["rougeL"] = overlap.rougeL_f;
        if (embedder) {
            auto bert = bertscore(embedder->embed(tokenize_latex(it->second)),
                                  embedder->embed(tokenize_latex(inst.ground_truth_text)));
            rec["bertscore"] = {{"precision", bert.precision},
                                {"recall", bert.recall},
                                {"f1", bert.f1}};
        }
        for (int k : lame_k) {
            auto score = lame_score(inst.description, inst.ground_truth_text, it->second, k,
                                    demos, gw, LameWeights{}, 0.0,
                                    inst.id + "/lame" + std::to_string(k));
            rec["lame-" + std::to_string(k)] = score.value;
        }
        records.push_back(std::move(rec));
    }
    write_output(out, jsonl::dump_records(records));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-candidate LLM pipeline for LP/ILP/MILP formulation of network "
                 "resource-allocation problems"};
    app.require_subcommand(1);

    // corpus validate | corpus summary
    auto* corpus_cmd = app.add_subcommand("corpus", "inspect corpus files");
    corpus_cmd->require_subcommand(1);
    std::string corpus_file;
    auto* validate_cmd = corpus_cmd->add_subcommand("validate", "check a corpus file");
    validate_cmd->add_option("path", corpus_file, "corpus file")->required();
    auto* summary_cmd = corpus_cmd->add_subcommand("summary", "statistical summary");
    summary_cmd->add_option("path", corpus_file, "corpus file")->required();

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "render prompts and generate candidates");
    std::string gen_corpus, gen_strategy = "all", gen_out = "-";
    double gen_temperature = 0.0;
    int gen_max_tokens = 2048;
    BackendFlags gen_backend;
    gen_cmd->add_option("--corpus", gen_corpus, "corpus file")->required();
    gen_cmd->add_option("--strategy", gen_strategy,
                        "direct|few_shot|chain_of_thought|all");
    gen_cmd->add_option("--temperature", gen_temperature, "sampling temperature");
    gen_cmd->add_option("--max-tokens", gen_max_tokens, "max output tokens");
    gen_cmd->add_option("--out", gen_out, "output file ('-' for stdout)");
    gen_backend.attach(gen_cmd);

    // rank
    auto* rank_cmd = app.add_subcommand("rank", "run the pairwise tournament over candidates");
    std::string rank_corpus, rank_candidates, rank_fallback = "few_shot", rank_out = "-";
    std::uint64_t rank_seed = 0;
    bool rank_randomize = false;
    BackendFlags rank_backend;
    rank_cmd->add_option("--corpus", rank_corpus, "corpus file")->required();
    rank_cmd->add_option("--candidates", rank_candidates, "candidate records from 'generate'")
        ->required();
    rank_cmd->add_option("--fallback", rank_fallback,
                         "fail|few_shot|chain_of_thought|max_constraints");
    rank_cmd->add_option("--seed", rank_seed, "seed for --randomize-order");
    rank_cmd->add_flag("--randomize-order", rank_randomize, "shuffle presentation order");
    rank_cmd->add_option("--out", rank_out, "output file ('-' for stdout)");
    rank_backend.attach(rank_cmd);

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "score selections against ground truth");
    std::string eval_corpus, eval_selections, eval_demos, eval_embeddings = "hash",
                eval_out = "-";
    std::vector<int> eval_lame_k{1, 3, 5};
    BackendFlags eval_backend;
    eval_cmd->add_option("--corpus", eval_corpus, "corpus file")->required();
    eval_cmd->add_option("--selections", eval_selections, "records with problem_id and text")
        ->required();
    eval_cmd->add_option("--lame-k", eval_lame_k, "demonstration counts (1, 3 and/or 5)");
    eval_cmd->add_option("--demos", eval_demos, "demonstration file (default: built-in)");
    eval_cmd->add_option("--embedding-provider", eval_embeddings,
                         "none|hash|<http endpoint>");
    eval_cmd->add_option("--out", eval_out, "output file ('-' for stdout)");
    eval_backend.attach(eval_cmd);

    // run
    auto* run_cmd = app.add_subcommand("run", "full pipeline over a corpus");
    std::string run_config_path, run_corpus, run_mode, run_mock, run_out, run_demos,
        run_embeddings;
    std::vector<double> run_temps;
    std::vector<int> run_lame_k;
    std::uint64_t run_seed = 0;
    bool run_seed_set = false;
    int run_parallelism = 0;
    BackendFlags run_backend;
    run_backend.url.clear();
    run_backend.model.clear();
    run_cmd->add_option("--config", run_config_path, "JSON run configuration");
    run_cmd->add_option("--corpus", run_corpus, "corpus file (overrides config)");
    run_cmd->add_option("--backend-url", run_backend.url, "backend for all roles");
    run_cmd->add_option("--model", run_backend.model, "model name");
    run_cmd->add_option("--temperature", run_temps, "generation temperatures");
    run_cmd->add_option("--lame-k", run_lame_k, "demonstration counts");
    run_cmd->add_option("--mode", run_mode, "full_pipeline|baseline_single_strategy");
    run_cmd->add_option("--mock-script", run_mock, "mock script (switches all roles to mock)");
    run_cmd->add_option("--seed", run_seed, "run seed")->each([&](const std::string&) {
        run_seed_set = true;
    });
    run_cmd->add_option("--out", run_out, "output directory");
    run_cmd->add_option("--parallelism", run_parallelism, "concurrent samples");
    run_cmd->add_option("--demos", run_demos, "demonstration file");
    run_cmd->add_option("--embedding-provider", run_embeddings, "none|hash|<http endpoint>");

    // report
    auto* report_cmd = app.add_subcommand("report", "re-emit tables from a stored report");
    std::string report_from, report_out = ".";
    report_cmd->add_option("--from", report_from, "existing report.json")->required();
    report_cmd->add_option("--out", report_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(corpus_cmd)) {
            if (corpus_cmd->got_subcommand(validate_cmd)) {
                return cmd_corpus_validate(corpus_file);
            }
            return cmd_corpus_summary(corpus_file);
        }
        if (app.got_subcommand(gen_cmd)) {
            return cmd_generate(gen_corpus, gen_backend, gen_strategy, gen_temperature,
                                gen_max_tokens, gen_out);
        }
        if (app.got_subcommand(rank_cmd)) {
            return cmd_rank(rank_corpus, rank_candidates, rank_backend, rank_fallback, rank_seed,
                            rank_randomize, rank_out);
        }
        if (app.got_subcommand(eval_cmd)) {
            return cmd_evaluate(eval_corpus, eval_selections, eval_backend, eval_lame_k,
                                eval_demos, eval_embeddings, eval_out);
        }
        if (app.got_subcommand(run_cmd)) {
            RunConfig cfg;
            if (!run_config_path.empty()) {
                cfg = load_run_config(run_config_path);
            }
            if (!run_corpus.empty()) {
                cfg.corpus_path = run_corpus;
            }
            if (!run_backend.url.empty()) {
                cfg.generator.endpoint_url = run_backend.url;
                cfg.ranker_backend.endpoint_url = run_backend.url;
                cfg.judge_backend.endpoint_url = run_backend.url;
            }
            if (!run_backend.model.empty()) {
                cfg.generator.model_name = run_backend.model;
                cfg.ranker_backend.model_name = run_backend.model;
                cfg.judge_backend.model_name = run_backend.model;
            }
            if (!run_temps.empty()) {
                cfg.generation_temperatures = run_temps;
            }
            if (!run_lame_k.empty()) {
                cfg.lame_k = run_lame_k;
            }
            if (!run_mode.empty()) {
                cfg.mode = run_mode_from_string(run_mode);
            }
            if (!run_mock.empty()) {
                cfg.mock_script_path = run_mock;
            }
            if (run_seed_set) {
                cfg.random_seed = run_seed;
            }
            if (!run_out.empty()) {
                cfg.output_dir = run_out;
            }
            if (run_parallelism > 0) {
                cfg.parallelism = run_parallelism;
            }
            if (!run_demos.empty()) {
                cfg.demos_path = run_demos;
            }
            if (!run_embeddings.empty()) {
                cfg.embedding_provider = run_embeddings;
            }
            if (cfg.generator.endpoint_url.empty()) {
                throw ConfigError("no backend configured: set --backend-url or --config");
            }
            auto report = run_pipeline(cfg);
            emit_report(report, cfg.output_dir);
            std::cout << "wrote " << (cfg.output_dir / "report.json").string() << " ("
                      << report.records.size() << " samples, " << report.n_failed
                      << " failed)\n";
            return 0;
        }
        if (app.got_subcommand(report_cmd)) {
            std::ifstream in(report_from);
            if (!in) {
                throw Error("cannot open " + report_from);
            }
            nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
            if (j.is_discarded()) {
                throw Error("not a JSON report: " + report_from);
            }
            auto report = report_from_json(j);
            emit_report(report, report_out);
            std::cout << "wrote " << (std::filesystem::path(report_out) / "table.csv").string()
                      << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
