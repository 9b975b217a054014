#include "lm4opt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <set>
#include <thread>

#include "lm4opt/hash.hpp"
#include "lm4opt/jsonl.hpp"

namespace lm4opt {

RunMode run_mode_from_string(const std::string& s) {
    if (s == "full_pipeline") {
        return RunMode::FullPipeline;
    }
    if (s == "baseline_single_strategy") {
        return RunMode::BaselineSingleStrategy;
    }
    throw ConfigError("unknown mode: " + s);
}

std::string to_string(RunMode m) {
    return m == RunMode::FullPipeline ? "full_pipeline" : "baseline_single_strategy";
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// ---------------------------------------------------------------- config --

namespace {

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) {
            throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
        }
    }
}

BackendConfig backend_from_json(const nlohmann::json& j, const BackendConfig& defaults,
                                const std::string& where) {
    reject_unknown_keys(j,
                        {"endpoint_url", "model", "auth_token_env_var", "timeout_ms",
                         "max_retries", "max_concurrent_requests", "backoff_initial_ms",
                         "backend_id", "temperature", "temperatures", "fallback",
                         "randomize_order", "lame_k", "demos"},
                        where);
    BackendConfig cfg = defaults;
    if (j.contains("endpoint_url")) {
        cfg.endpoint_url = j["endpoint_url"].get<std::string>();
    }
    if (j.contains("model")) {
        cfg.model_name = j["model"].get<std::string>();
    }
    if (j.contains("auth_token_env_var")) {
        cfg.auth_token_env_var = j["auth_token_env_var"].get<std::string>();
    }
    if (j.contains("timeout_ms")) {
        cfg.timeout_ms = j["timeout_ms"].get<long>();
    }
    if (j.contains("max_retries")) {
        cfg.max_retries = j["max_retries"].get<int>();
    }
    if (j.contains("max_concurrent_requests")) {
        cfg.max_concurrent_requests = j["max_concurrent_requests"].get<int>();
    }
    if (j.contains("backoff_initial_ms")) {
        cfg.backoff_initial_ms = j["backoff_initial_ms"].get<long>();
    }
    if (j.contains("backend_id")) {
        cfg.backend_id = j["backend_id"].get<std::string>();
    }
    if (cfg.max_retries < 0) {
        throw ConfigError(where + ": max_retries must be >= 0");
    }
    if (cfg.max_concurrent_requests < 1) {
        throw ConfigError(where + ": max_concurrent_requests must be >= 1");
    }
    return cfg;
}

void check_temperature(double t, const std::string& where) {
    if (t < 0.0 || t > 2.0) {
        throw ConfigError(where + ": temperature " + format_double(t) +
                          " is outside [0, 2]");
    }
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j) {
    reject_unknown_keys(j,
                        {"corpus", "output_dir", "mode", "baseline_strategy", "seed",
                         "parallelism", "max_output_tokens", "mock_script", "generator",
                         "ranker", "judge", "weights", "embeddings"},
                        "config");
    RunConfig cfg;
    if (j.contains("corpus")) {
        cfg.corpus_path = j["corpus"].get<std::string>();
    }
    if (j.contains("output_dir")) {
        cfg.output_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("mode")) {
        cfg.mode = run_mode_from_string(j["mode"].get<std::string>());
    }
    if (j.contains("baseline_strategy")) {
        cfg.baseline_strategy = strategy_from_string(j["baseline_strategy"].get<std::string>());
    }
    if (j.contains("seed")) {
        cfg.random_seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("parallelism")) {
        cfg.parallelism = j["parallelism"].get<int>();
    }
    if (j.contains("max_output_tokens")) {
        cfg.max_output_tokens = j["max_output_tokens"].get<int>();
    }
    if (j.contains("mock_script")) {
        cfg.mock_script_path = j["mock_script"].get<std::string>();
    }

    if (j.contains("generator")) {
        const auto& g = j["generator"];
        cfg.generator = backend_from_json(g, cfg.generator, "generator");
        if (g.contains("temperatures")) {
            cfg.generation_temperatures = g["temperatures"].get<std::vector<double>>();
        }
    }
    cfg.ranker_backend = cfg.generator;
    cfg.judge_backend = cfg.generator;

    if (j.contains("ranker")) {
        const auto& r = j["ranker"];
        cfg.ranker_backend = backend_from_json(r, cfg.generator, "ranker");
        if (r.contains("temperature")) {
            cfg.ranker_temperature = r["temperature"].get<double>();
        }
        if (r.contains("fallback")) {
            cfg.fallback = fallback_policy_from_string(r["fallback"].get<std::string>());
        }
        if (r.contains("randomize_order")) {
            cfg.randomize_candidate_order = r["randomize_order"].get<bool>();
        }
    }
    if (j.contains("judge")) {
        const auto& q = j["judge"];
        cfg.judge_backend = backend_from_json(q, cfg.generator, "judge");
        if (q.contains("temperature")) {
            cfg.judge_temperature = q["temperature"].get<double>();
        }
        if (q.contains("lame_k")) {
            cfg.lame_k = q["lame_k"].get<std::vector<int>>();
        }
        if (q.contains("demos")) {
            cfg.demos_path = q["demos"].get<std::string>();
        }
    }
    if (j.contains("weights")) {
        const auto& w = j["weights"];
        reject_unknown_keys(w, {"objective", "constraint", "variable", "overall"}, "weights");
        if (w.contains("objective")) {
            cfg.weights.w_o = w["objective"].get<double>();
        }
        if (w.contains("constraint")) {
            cfg.weights.w_c = w["constraint"].get<double>();
        }
        if (w.contains("variable")) {
            cfg.weights.w_v = w["variable"].get<double>();
        }
        if (w.contains("overall")) {
            cfg.weights.w_a = w["overall"].get<double>();
        }
    }
    if (j.contains("embeddings")) {
        const auto& e = j["embeddings"];
        reject_unknown_keys(e, {"provider", "dim"}, "embeddings");
        if (e.contains("provider")) {
            cfg.embedding_provider = e["provider"].get<std::string>();
        }
        if (e.contains("dim")) {
            cfg.embedding_dim = e["dim"].get<std::size_t>();
        }
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ConfigError("config file is not a JSON object: " + path.string());
    }
    return run_config_from_json(j);
}

nlohmann::ordered_json config_snapshot(const RunConfig& cfg) {
    auto backend_json = [](const BackendConfig& b) {
        nlohmann::ordered_json j;
        j["endpoint_url"] = b.endpoint_url;
        j["model"] = b.model_name;
        j["timeout_ms"] = b.timeout_ms;
        j["max_retries"] = b.max_retries;
        j["max_concurrent_requests"] = b.max_concurrent_requests;
        return j;
    };
    nlohmann::ordered_json j;
    j["corpus"] = cfg.corpus_path.string();
    j["mode"] = to_string(cfg.mode);
    j["baseline_strategy"] = to_string(cfg.baseline_strategy);
    j["seed"] = cfg.random_seed;
    j["parallelism"] = cfg.parallelism;
    j["max_output_tokens"] = cfg.max_output_tokens;
    j["generator"] = backend_json(cfg.generator);
    j["generator"]["temperatures"] = cfg.generation_temperatures;
    j["ranker"] = backend_json(cfg.ranker_backend);
    j["ranker"]["temperature"] = cfg.ranker_temperature;  // assumed 0; paper is silent
    j["ranker"]["fallback"] = to_string(cfg.fallback);
    j["ranker"]["randomize_order"] = cfg.randomize_candidate_order;
    j["judge"] = backend_json(cfg.judge_backend);
    j["judge"]["temperature"] = cfg.judge_temperature;  // assumed 0; paper is silent
    j["judge"]["lame_k"] = cfg.lame_k;
    j["judge"]["demos"] = cfg.demos_path.empty() ? "builtin" : cfg.demos_path.string();
    j["weights"] = {{"objective", cfg.weights.w_o},
                    {"constraint", cfg.weights.w_c},
                    {"variable", cfg.weights.w_v},
                    {"overall", cfg.weights.w_a}};
    j["embeddings"] = {{"provider", cfg.embedding_provider}, {"dim", cfg.embedding_dim}};
    j["mock_script"] = cfg.mock_script_path.string();
    return j;
}

// -------------------------------------------------------------- pipeline --

namespace {

struct Gateways {
    std::unique_ptr<Gateway> generator;
    std::unique_ptr<Gateway> ranker;
    std::unique_ptr<Gateway> judge;
};

Gateways build_gateways(const RunConfig& cfg, TranscriptSink& sink) {
    Gateways g;
    bool scripted = !cfg.mock_script_path.empty();
    if (scripted) {
        // One shared mock backend so the script's queue is consumed in call
        // order across all three roles.
        BackendConfig mock_cfg = cfg.generator;
        mock_cfg.endpoint_url = "mock";
        auto backend = make_backend(mock_cfg, cfg.mock_script_path);
        g.generator = std::make_unique<Gateway>(backend, mock_cfg, &sink);
        BackendConfig rcfg = cfg.ranker_backend;
        rcfg.endpoint_url = "mock";
        g.ranker = std::make_unique<Gateway>(backend, rcfg, &sink);
        BackendConfig jcfg = cfg.judge_backend;
        jcfg.endpoint_url = "mock";
        g.judge = std::make_unique<Gateway>(backend, jcfg, &sink);
        return g;
    }
    auto key = [](const BackendConfig& b) { return b.endpoint_url + "|" + b.model_name; };
    auto gen_backend = make_backend(cfg.generator);
    g.generator = std::make_unique<Gateway>(gen_backend, cfg.generator, &sink);
    auto rank_backend = key(cfg.ranker_backend) == key(cfg.generator)
                            ? gen_backend
                            : make_backend(cfg.ranker_backend);
    g.ranker = std::make_unique<Gateway>(rank_backend, cfg.ranker_backend, &sink);
    auto judge_backend = key(cfg.judge_backend) == key(cfg.generator)
                             ? gen_backend
                             : (key(cfg.judge_backend) == key(cfg.ranker_backend)
                                    ? rank_backend
                                    : make_backend(cfg.judge_backend));
    g.judge = std::make_unique<Gateway>(judge_backend, cfg.judge_backend, &sink);
    return g;
}

std::unique_ptr<EmbeddingProvider> build_embedder(const RunConfig& cfg) {
    if (cfg.embedding_provider == "none" || cfg.embedding_provider.empty()) {
        return nullptr;
    }
    if (cfg.embedding_provider == "hash") {
        return std::make_unique<HashEmbeddingProvider>(cfg.embedding_dim);
    }
    return std::make_unique<HttpEmbeddingProvider>(cfg.embedding_provider);
}

SampleRecord run_sample(const ProblemInstance& inst, double temperature, const RunConfig& cfg,
                        Gateways& gws, const DemonstrationSet& demos,
                        EmbeddingProvider* embedder) {
    SampleRecord rec;
    rec.problem_id = inst.id;
    rec.model = cfg.generator.model_name;
    rec.temperature = temperature;
    std::string sample_tag = inst.id + "@t" + format_double(temperature);

    std::vector<Strategy> strategies;
    if (cfg.mode == RunMode::FullPipeline) {
        strategies.assign(kAllStrategies.begin(), kAllStrategies.end());
    } else {
        strategies = {cfg.baseline_strategy};
    }

    for (Strategy s : strategies) {
        auto prompt = render_generation_prompt(s, inst.description);
        ChatRequest req;
        req.messages = {{"user", prompt.text}};
        req.temperature = temperature;
        req.max_output_tokens = cfg.max_output_tokens;
        req.request_tag = sample_tag + "/gen/" + to_string(s);
        ChatResponse resp = gws.generator->complete(req);
        CandidateRecord cand;
        cand.strategy = s;
        cand.text = resp.text;
        cand.stats = structural_stats(parse_formulation(resp.text));
        rec.candidates.push_back(std::move(cand));
    }

    if (cfg.mode == RunMode::FullPipeline) {
        CandidateSet cands;
        cands.problem_id = sample_tag;
        for (std::size_t i = 0; i < 3; ++i) {
            cands.candidates[i] = {rec.candidates[i].strategy, rec.candidates[i].text};
        }
        RankerConfig rcfg;
        rcfg.fallback = cfg.fallback;
        rcfg.temperature = cfg.ranker_temperature;
        rcfg.max_output_tokens = cfg.max_output_tokens;
        rcfg.randomize_order = cfg.randomize_candidate_order;
        rcfg.seed = cfg.random_seed ^ fnv1a64(sample_tag);
        TournamentOutcome outcome =
            run_tournament(inst.description, cands, *gws.ranker, rcfg);
        const auto& winner =
            rec.candidates[static_cast<std::size_t>(outcome.winner_index - 1)];
        if (winner.text != cands.candidates[static_cast<std::size_t>(outcome.winner_index - 1)]
                               .formulation_text) {
            throw Error("winner text mutated between generation and ranking");
        }
        rec.selected_strategy = winner.strategy;
        rec.selected_text = winner.text;
        rec.tournament = std::move(outcome);
    } else {
        rec.selected_strategy = rec.candidates.front().strategy;
        rec.selected_text = rec.candidates.front().text;
    }

    try {
        rec.overlap = compute_overlap(rec.selected_text, inst.ground_truth_text);
    } catch (const Error& e) {
        rec.metric_errors["overlap"] = e.what();
    }
    if (embedder) {
        try {
            rec.bert = bertscore(embedder->embed(tokenize_latex(rec.selected_text)),
                                 embedder->embed(tokenize_latex(inst.ground_truth_text)));
        } catch (const Error& e) {
            rec.metric_errors["bertscore"] = e.what();
        }
    }
    for (int k : cfg.lame_k) {
        try {
            rec.lame.push_back(lame_score(inst.description, inst.ground_truth_text,
                                          rec.selected_text, k, demos, *gws.judge, cfg.weights,
                                          cfg.judge_temperature,
                                          sample_tag + "/lame" + std::to_string(k)));
        } catch (const Error& e) {
            rec.metric_errors["lame-" + std::to_string(k)] = e.what();
        }
    }
    return rec;
}

}  // namespace

RunReport run_pipeline(const RunConfig& cfg) {
    if (cfg.parallelism < 1) {
        throw ConfigError("parallelism must be >= 1");
    }
    for (double t : cfg.generation_temperatures) {
        check_temperature(t, "generator");
    }
    check_temperature(cfg.ranker_temperature, "ranker");
    check_temperature(cfg.judge_temperature, "judge");
    validate_weights(cfg.weights);
    if (cfg.generation_temperatures.empty()) {
        throw ConfigError("generator needs at least one temperature");
    }

    auto loaded = load_corpus(cfg.corpus_path);
    if (loaded.instances.empty()) {
        throw Error("run failed: corpus " + cfg.corpus_path.string() + " contains no samples");
    }

    int max_k = 1;
    for (int k : cfg.lame_k) {
        max_k = std::max(max_k, k);
    }
    DemonstrationSet demos = cfg.demos_path.empty()
                                 ? default_demonstrations(max_k)
                                 : load_demonstrations(cfg.demos_path, max_k);

    TranscriptSink sink;
    Gateways gws = build_gateways(cfg, sink);
    auto embedder = build_embedder(cfg);

    struct Job {
        const ProblemInstance* inst;
        double temperature;
    };
    std::vector<Job> jobs;
    for (double t : cfg.generation_temperatures) {
        for (const auto& inst : loaded.instances) {
            jobs.push_back({&inst, t});
        }
    }

    std::vector<SampleRecord> records(jobs.size());
    auto work = [&](std::size_t i) {
        try {
            records[i] = run_sample(*jobs[i].inst, jobs[i].temperature, cfg, gws, demos,
                                    embedder.get());
        } catch (const std::exception& e) {
            SampleRecord rec;
            rec.problem_id = jobs[i].inst->id;
            rec.model = cfg.generator.model_name;
            rec.temperature = jobs[i].temperature;
            rec.errored = true;
            rec.error = e.what();
            records[i] = std::move(rec);
        }
    };

    if (cfg.parallelism == 1 || jobs.size() <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            work(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        int n_workers = std::min<int>(cfg.parallelism, static_cast<int>(jobs.size()));
        workers.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < jobs.size();
                     i = next.fetch_add(1)) {
                    work(i);
                }
            });
        }
        for (auto& w : workers) {
            w.join();
        }
    }

    // Per-sample timing comes from the backend-reported latencies in the
    // transcript, keeping mock runs reproducible.
    auto transcript = sink.entries();
    std::stable_sort(transcript.begin(), transcript.end(),
                     [](const TranscriptEntry& a, const TranscriptEntry& b) {
                         return a.request_tag < b.request_tag;
                     });
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        std::string prefix =
            jobs[i].inst->id + "@t" + format_double(jobs[i].temperature) + "/";
        long total = 0;
        for (const auto& e : transcript) {
            if (e.request_tag.rfind(prefix, 0) == 0) {
                total += e.latency_ms;
            }
        }
        records[i].timing_ms = total;
    }

    RunReport report;
    report.config = config_snapshot(cfg);
    report.records = std::move(records);
    report.rows = aggregate(report.records);
    report.structural = strategy_structural_summary(report.records);
    report.transcript = std::move(transcript);
    for (const auto& r : report.records) {
        if (r.errored) {
            ++report.n_failed;
        }
    }
    if (report.n_failed == report.records.size()) {
        throw Error("run failed: all " + std::to_string(report.n_failed) +
                    " samples errored; first error: " + report.records.front().error);
    }
    return report;
}

// ----------------------------------------------------------- aggregation --

std::vector<AggregateRow> aggregate(const std::vector<SampleRecord>& records) {
    std::map<std::pair<double, std::string>, std::vector<const SampleRecord*>> groups;
    for (const auto& r : records) {
        groups[{r.temperature, r.model}].push_back(&r);
    }
    std::vector<AggregateRow> rows;
    for (const auto& [key, group] : groups) {
        AggregateRow row;
        row.temperature = key.first;
        row.model = key.second;
        row.n_samples = group.size();

        double bert_sum = 0, r1 = 0, r2 = 0, rl = 0, bl = 0;
        std::size_t bert_n = 0, overlap_n = 0;
        std::map<int, std::pair<double, std::size_t>> lame_acc;
        for (const auto* r : group) {
            if (r->errored) {
                ++row.n_errored;
                continue;
            }
            if (r->overlap) {
                r1 += r->overlap->rouge1_f;
                r2 += r->overlap->rouge2_f;
                rl += r->overlap->rougeL_f;
                bl += r->overlap->bleu;
                ++overlap_n;
            }
            if (r->bert) {
                bert_sum += r->bert->f1;
                ++bert_n;
            }
            for (const auto& ls : r->lame) {
                lame_acc[ls.k].first += ls.value;
                ++lame_acc[ls.k].second;
            }
        }
        if (overlap_n > 0) {
            row.rouge1 = r1 / static_cast<double>(overlap_n);
            row.rouge2 = r2 / static_cast<double>(overlap_n);
            row.rougeL = rl / static_cast<double>(overlap_n);
            row.bleu = bl / static_cast<double>(overlap_n);
        }
        if (bert_n > 0) {
            row.bert_f1 = bert_sum / static_cast<double>(bert_n);
        }
        for (const auto& [k, acc] : lame_acc) {
            row.lame_mean[k] = acc.first / static_cast<double>(acc.second);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<StrategyStructuralRow> strategy_structural_summary(
    const std::vector<SampleRecord>& records) {
    struct Acc {
        double constraints = 0;
        double definitions = 0;
        std::size_t n = 0;
    };
    std::map<std::string, Acc> accs;
    Acc selected;
    for (const auto& r : records) {
        if (r.errored) {
            continue;
        }
        for (const auto& c : r.candidates) {
            auto& a = accs[to_string(c.strategy)];
            a.constraints += static_cast<double>(c.stats.n_constraints);
            a.definitions += static_cast<double>(c.stats.n_definitions);
            ++a.n;
        }
        if (r.tournament) {
            const auto& winner =
                r.candidates[static_cast<std::size_t>(r.tournament->winner_index - 1)];
            selected.constraints += static_cast<double>(winner.stats.n_constraints);
            selected.definitions += static_cast<double>(winner.stats.n_definitions);
            ++selected.n;
        }
    }
    std::vector<StrategyStructuralRow> rows;
    for (Strategy s : kAllStrategies) {
        auto it = accs.find(to_string(s));
        if (it == accs.end() || it->second.n == 0) {
            continue;
        }
        rows.push_back({to_string(s), it->second.constraints / static_cast<double>(it->second.n),
                        it->second.definitions / static_cast<double>(it->second.n),
                        it->second.n});
    }
    if (selected.n > 0) {
        rows.push_back({"selected", selected.constraints / static_cast<double>(selected.n),
                        selected.definitions / static_cast<double>(selected.n), selected.n});
    }
    return rows;
}

// ----------------------------------------------------------- persistence --

namespace {

nlohmann::ordered_json stats_to_json(const StructuralStats& s) {
    return {{"n_constraints", s.n_constraints},
            {"n_definitions", s.n_definitions},
            {"objective_sense", to_string(s.objective_sense)}};
}

StructuralStats stats_from_json(const nlohmann::json& j) {
    StructuralStats s;
    s.n_constraints = j["n_constraints"].get<std::size_t>();
    s.n_definitions = j["n_definitions"].get<std::size_t>();
    std::string sense = j["objective_sense"].get<std::string>();
    s.objective_sense = sense == "min"   ? ObjectiveSense::Min
                        : sense == "max" ? ObjectiveSense::Max
                                         : ObjectiveSense::Unknown;
    return s;
}

nlohmann::ordered_json flags_to_json(const RubricFieldFlags& f) {
    return {{"extracted", f.extracted},
            {"defaulted", f.defaulted},
            {"clamped", f.clamped},
            {"rounded", f.rounded}};
}

RubricFieldFlags flags_from_json(const nlohmann::json& j) {
    return {j["extracted"].get<bool>(), j["defaulted"].get<bool>(), j["clamped"].get<bool>(),
            j["rounded"].get<bool>()};
}

nlohmann::ordered_json rubric_to_json(const LameRubric& r) {
    nlohmann::ordered_json j;
    j["objective_score"] = r.objective_score;
    j["constraint_score"] = r.constraint_score;
    j["variable_score"] = r.variable_score;
    j["overall_score"] = r.overall_score;
    j["analysis_text"] = r.analysis_text;
    j["objective_flags"] = flags_to_json(r.objective_flags);
    j["constraint_flags"] = flags_to_json(r.constraint_flags);
    j["variable_flags"] = flags_to_json(r.variable_flags);
    j["overall_flags"] = flags_to_json(r.overall_flags);
    return j;
}

LameRubric rubric_from_json(const nlohmann::json& j) {
    LameRubric r;
    r.objective_score = j["objective_score"].get<int>();
    r.constraint_score = j["constraint_score"].get<int>();
    r.variable_score = j["variable_score"].get<int>();
    r.overall_score = j["overall_score"].get<int>();
    r.analysis_text = j["analysis_text"].get<std::string>();
    r.objective_flags = flags_from_json(j["objective_flags"]);
    r.constraint_flags = flags_from_json(j["constraint_flags"]);
    r.variable_flags = flags_from_json(j["variable_flags"]);
    r.overall_flags = flags_from_json(j["overall_flags"]);
    return r;
}

nlohmann::ordered_json sample_to_json(const SampleRecord& r) {
    nlohmann::ordered_json j;
    j["problem_id"] = r.problem_id;
    j["model"] = r.model;
    j["temperature"] = r.temperature;
    j["candidates"] = nlohmann::ordered_json::array();
    for (const auto& c : r.candidates) {
        j["candidates"].push_back({{"strategy", to_string(c.strategy)},
                                   {"text", c.text},
                                   {"stats", stats_to_json(c.stats)}});
    }
    if (r.tournament) {
        nlohmann::ordered_json t;
        t["winner_index"] = r.tournament->winner_index;
        t["winner_strategy"] = to_string(r.tournament->winner_strategy);
        t["fallback_used"] = r.tournament->fallback_used;
        t["presentation_order"] = r.tournament->presentation_order;
        t["comparisons"] = nlohmann::ordered_json::array();
        for (const auto& c : r.tournament->comparisons) {
            t["comparisons"].push_back({{"left_index", c.left_index},
                                        {"right_index", c.right_index},
                                        {"best", c.result.best},
                                        {"second_best", c.result.second_best},
                                        {"reasoning_steps", c.result.reasoning_steps}});
        }
        j["tournament"] = std::move(t);
    }
    j["selected_strategy"] = to_string(r.selected_strategy);
    j["selected_text"] = r.selected_text;
    nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
    if (r.overlap) {
        metrics["bleu"] = r.overlap->bleu;
        metrics["rouge1"] = r.overlap->rouge1_f;
        metrics["rouge2"] = r.overlap->rouge2_f;
        metrics["rougeL"] = r.overlap->rougeL_f;
    }
    if (r.bert) {
        metrics["bertscore"] = {{"precision", r.bert->precision},
                                {"recall", r.bert->recall},
                                {"f1", r.bert->f1}};
    }
    if (!r.lame.empty()) {
        metrics["lame"] = nlohmann::ordered_json::array();
        for (const auto& ls : r.lame) {
            metrics["lame"].push_back({{"k", ls.k},
                                       {"value", ls.value},
                                       {"judge_backend_id", ls.judge_backend_id},
                                       {"rubric", rubric_to_json(ls.rubric)}});
        }
    }
    j["metrics"] = std::move(metrics);
    if (!r.metric_errors.empty()) {
        j["metric_errors"] = r.metric_errors;
    }
    j["timing_ms"] = r.timing_ms;
    j["errored"] = r.errored;
    if (r.errored) {
        j["error"] = r.error;
    }
    return j;
}

SampleRecord sample_from_json(const nlohmann::json& j) {
    SampleRecord r;
    r.problem_id = j["problem_id"].get<std::string>();
    r.model = j["model"].get<std::string>();
    r.temperature = j["temperature"].get<double>();
    for (const auto& c : j["candidates"]) {
        CandidateRecord cand;
        cand.strategy = strategy_from_string(c["strategy"].get<std::string>());
        cand.text = c["text"].get<std::string>();
        cand.stats = stats_from_json(c["stats"]);
        r.candidates.push_back(std::move(cand));
    }
    if (j.contains("tournament")) {
        const auto& t = j["tournament"];
        TournamentOutcome o;
        o.winner_index = t["winner_index"].get<int>();
        o.winner_strategy = strategy_from_string(t["winner_strategy"].get<std::string>());
        o.fallback_used = t["fallback_used"].get<bool>();
        auto order = t["presentation_order"].get<std::vector<int>>();
        std::copy_n(order.begin(), 3, o.presentation_order.begin());
        for (const auto& c : t["comparisons"]) {
            Comparison cmp;
            cmp.left_index = c["left_index"].get<int>();
            cmp.right_index = c["right_index"].get<int>();
            cmp.result.best = c["best"].get<int>();
            cmp.result.second_best = c["second_best"].get<int>();
            cmp.result.reasoning_steps = c["reasoning_steps"].get<std::string>();
            o.comparisons.push_back(std::move(cmp));
        }
        r.tournament = std::move(o);
    }
    r.selected_strategy = strategy_from_string(j["selected_strategy"].get<std::string>());
    r.selected_text = j["selected_text"].get<std::string>();
    const auto& metrics = j["metrics"];
    if (metrics.contains("bleu")) {
        OverlapScores o;
        o.bleu = metrics["bleu"].get<double>();
        o.rouge1_f = metrics["rouge1"].get<double>();
        o.rouge2_f = metrics["rouge2"].get<double>();
        o.rougeL_f = metrics["rougeL"].get<double>();
        r.overlap = o;
    }
    if (metrics.contains("bertscore")) {
        BertScoreResult b;
        b.precision = metrics["bertscore"]["precision"].get<double>();
        b.recall = metrics["bertscore"]["recall"].get<double>();
        b.f1 = metrics["bertscore"]["f1"].get<double>();
        r.bert = b;
    }
    if (metrics.contains("lame")) {
        for (const auto& ls : metrics["lame"]) {
            LameScore s;
            s.k = ls["k"].get<int>();
            s.value = ls["value"].get<double>();
            s.judge_backend_id = ls["judge_backend_id"].get<std::string>();
            s.rubric = rubric_from_json(ls["rubric"]);
            r.lame.push_back(std::move(s));
        }
    }
    if (j.contains("metric_errors")) {
        r.metric_errors = j["metric_errors"].get<std::map<std::string, std::string>>();
    }
    r.timing_ms = j["timing_ms"].get<long>();
    r.errored = j["errored"].get<bool>();
    if (j.contains("error")) {
        r.error = j["error"].get<std::string>();
    }
    return r;
}

TranscriptEntry transcript_from_json(const nlohmann::json& j) {
    TranscriptEntry e;
    e.request_tag = j["request_tag"].get<std::string>();
    e.backend_id = j["backend_id"].get<std::string>();
    e.model = j["model"].get<std::string>();
    e.temperature = j["temperature"].get<double>();
    e.prompt_checksum = j["prompt_checksum"].get<std::string>();
    e.attempts = j["attempts"].get<int>();
    if (j.contains("response")) {
        e.response_text = j["response"].get<std::string>();
    }
    if (j.contains("error")) {
        e.error = j["error"].get<std::string>();
    }
    if (j.contains("rejected_texts")) {
        e.rejected_texts = j["rejected_texts"].get<std::vector<std::string>>();
    }
    e.latency_ms = j["latency_ms"].get<long>();
    return e;
}

}  // namespace

nlohmann::ordered_json report_to_json(const RunReport& report) {
    nlohmann::ordered_json j;
    j["config"] = report.config;
    j["samples"] = nlohmann::ordered_json::array();
    for (const auto& r : report.records) {
        j["samples"].push_back(sample_to_json(r));
    }
    j["aggregates"] = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        nlohmann::ordered_json rj;
        rj["temperature"] = row.temperature;
        rj["model"] = row.model;
        rj["n_samples"] = row.n_samples;
        rj["n_errored"] = row.n_errored;
        nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
        if (row.bert_f1) {
            metrics["bertscore"] = *row.bert_f1;
        }
        if (row.rouge1) {
            metrics["rouge1"] = *row.rouge1;
            metrics["rouge2"] = *row.rouge2;
            metrics["rougeL"] = *row.rougeL;
            metrics["bleu"] = *row.bleu;
        }
        for (const auto& [k, v] : row.lame_mean) {
            metrics["lame-" + std::to_string(k)] = v;
        }
        rj["metrics"] = std::move(metrics);
        j["aggregates"].push_back(std::move(rj));
    }
    j["strategy_structural"] = nlohmann::ordered_json::array();
    for (const auto& s : report.structural) {
        j["strategy_structural"].push_back({{"label", s.label},
                                            {"mean_constraints", s.mean_constraints},
                                            {"mean_definitions", s.mean_definitions},
                                            {"n_candidates", s.n_candidates}});
    }
    j["n_failed"] = report.n_failed;
    j["transcript_file"] = "transcript.jsonl";
    return j;
}

RunReport report_from_json(const nlohmann::json& j) {
    RunReport report;
    report.config = j["config"];
    for (const auto& s : j["samples"]) {
        report.records.push_back(sample_from_json(s));
    }
    report.rows = aggregate(report.records);
    report.structural = strategy_structural_summary(report.records);
    report.n_failed = j["n_failed"].get<std::size_t>();
    return report;
}

std::string render_table_csv(const RunReport& report) {
    std::string csv = "Temperature,Model,BERTScore,ROUGE-1,ROUGE-2,ROUGE-L,BLEU,LAME-3,LAME-5,LAME-1\n";
    auto cell = [](const std::optional<double>& v) {
        if (!v) {
            return std::string();
        }
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", *v);
        return std::string(buf);
    };
    for (const auto& row : report.rows) {
        auto lame = [&](int k) -> std::optional<double> {
            auto it = row.lame_mean.find(k);
            return it == row.lame_mean.end() ? std::nullopt : std::optional<double>(it->second);
        };
        csv += format_double(row.temperature) + "," + row.model + "," + cell(row.bert_f1) + "," +
               cell(row.rouge1) + "," + cell(row.rouge2) + "," + cell(row.rougeL) + "," +
               cell(row.bleu) + "," + cell(lame(3)) + "," + cell(lame(5)) + "," + cell(lame(1)) +
               "\n";
    }
    return csv;
}

void emit_report(const RunReport& report, const std::filesystem::path& output_dir) {
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    auto write_file = [&](const std::filesystem::path& name, const std::string& content) {
        auto full = output_dir / name;
        std::ofstream out(full, std::ios::binary);
        if (!out) {
            throw Error("cannot write " + full.string());
        }
        out << content;
        if (!out) {
            throw Error("write failed for " + full.string());
        }
    };
    write_file("report.json", report_to_json(report).dump(2) + "\n");
    write_file("table.csv", render_table_csv(report));
    std::vector<nlohmann::ordered_json> lines;
    lines.reserve(report.transcript.size());
    for (const auto& e : report.transcript) {
        lines.push_back(to_json(e));
    }
    write_file("transcript.jsonl", jsonl::dump_records(lines));
}

}  // namespace lm4opt
