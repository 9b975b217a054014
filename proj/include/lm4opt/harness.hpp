#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lm4opt/corpus.hpp"
#include "lm4opt/metrics.hpp"
#include "lm4opt/ranker.hpp"

namespace lm4opt {

enum class RunMode { FullPipeline, BaselineSingleStrategy };

RunMode run_mode_from_string(const std::string& s);
std::string to_string(RunMode m);

struct RunConfig {
    std::filesystem::path corpus_path;

    BackendConfig generator;
    std::vector<double> generation_temperatures{0.0, 0.5, 1.0};

    // Ranking and judging default to the generator backend at temperature 0.
    BackendConfig ranker_backend;
    double ranker_temperature = 0.0;
    FallbackPolicy fallback = FallbackPolicy::FewShot;
    bool randomize_candidate_order = false;

    BackendConfig judge_backend;
    double judge_temperature = 0.0;
    std::vector<int> lame_k{1, 3, 5};
    LameWeights weights;
    std::filesystem::path demos_path;  // empty: built-in demonstration set

    // "none", "hash", or an http:// embedding endpoint.
    std::string embedding_provider = "hash";
    std::size_t embedding_dim = 16;

    RunMode mode = RunMode::FullPipeline;
    Strategy baseline_strategy = Strategy::Direct;

    int parallelism = 1;
    std::uint64_t random_seed = 0;
    int max_output_tokens = 2048;
    std::filesystem::path output_dir = "out";
    std::filesystem::path mock_script_path;  // nonempty: all roles run scripted
};

// Reads the JSON config file; unknown keys are rejected so typos surface.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig run_config_from_json(const nlohmann::json& j);

// Everything that identifies the experiment; excludes output disposition so
// identical runs emitted to different directories stay byte-identical.
nlohmann::ordered_json config_snapshot(const RunConfig& cfg);

struct CandidateRecord {
    Strategy strategy = Strategy::Direct;
    std::string text;
    StructuralStats stats;
};

struct SampleRecord {
    std::string problem_id;
    std::string model;
    double temperature = 0.0;
    std::vector<CandidateRecord> candidates;
    std::optional<TournamentOutcome> tournament;
    Strategy selected_strategy = Strategy::Direct;
    std::string selected_text;
    std::optional<OverlapScores> overlap;
    std::optional<BertScoreResult> bert;
    std::vector<LameScore> lame;
    std::map<std::string, std::string> metric_errors;
    long timing_ms = 0;  // sum of backend-reported latencies for the sample
    bool errored = false;
    std::string error;
};

struct AggregateRow {
    std::string model;
    double temperature = 0.0;
    std::optional<double> bert_f1;
    std::optional<double> rouge1;
    std::optional<double> rouge2;
    std::optional<double> rougeL;
    std::optional<double> bleu;
    std::map<int, double> lame_mean;  // k -> mean over samples with that score
    std::size_t n_samples = 0;
    std::size_t n_errored = 0;
};

struct StrategyStructuralRow {
    std::string label;  // strategy name, or "selected" for the winners column
    double mean_constraints = 0.0;
    double mean_definitions = 0.0;
    std::size_t n_candidates = 0;
};

struct RunReport {
    nlohmann::ordered_json config;
    std::vector<SampleRecord> records;
    std::vector<AggregateRow> rows;
    std::vector<StrategyStructuralRow> structural;
    std::size_t n_failed = 0;
    std::vector<TranscriptEntry> transcript;
};

// Full pipeline per (problem, temperature): generate the candidates, run
// the bracket, score the winner against ground truth. Individual sample
// failures are isolated into errored records; the run only fails when the
// corpus is unusable or every sample failed.
RunReport run_pipeline(const RunConfig& cfg);

// Group records by (model, temperature); means skip errored samples and
// per-metric extraction failures. Rows come out temperature-major.
std::vector<AggregateRow> aggregate(const std::vector<SampleRecord>& records);

// Mean constraint/definition counts per strategy over every generated
// candidate, plus a winners-only "selected" row.
std::vector<StrategyStructuralRow> strategy_structural_summary(
    const std::vector<SampleRecord>& records);

// Persists report.json, table.csv (Temperature, Model, BERTScore, ROUGE-1,
// ROUGE-2, ROUGE-L, BLEU, LAME-3, LAME-5, LAME-1) and transcript.jsonl.
// Re-emitting an identical report writes identical bytes.
void emit_report(const RunReport& report, const std::filesystem::path& output_dir);

nlohmann::ordered_json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);
std::string render_table_csv(const RunReport& report);

// Shortest clean decimal rendering ("0.5", "1", "0.4249").
std::string format_double(double v);

}  // namespace lm4opt
