#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lm4opt/formulation.hpp"

namespace lm4opt {

enum class ProblemClass { LP, ILP, MILP };
enum class SizeCategory { Small, Moderate, Large };

std::string to_string(ProblemClass c);
std::string to_string(SizeCategory c);
ProblemClass problem_class_from_string(const std::string& s);

// One corpus entry: a natural-language problem description paired with its
// ground-truth formulation and size metadata.
struct ProblemInstance {
    std::string id;
    std::string description;
    std::string ground_truth_text;
    ProblemClass problem_class = ProblemClass::LP;
    int declared_variable_count = 0;
    int declared_constraint_count = 0;
    SizeCategory size_category = SizeCategory::Small;
    std::optional<ObjectiveSense> objective_sense_hint;
    std::vector<std::string> domain_tags;
};

struct CorpusSummary {
    std::size_t n_instances = 0;
    std::size_t n_min = 0;
    std::size_t n_max = 0;
    double mean_variables = 0.0;
    double mean_constraints = 0.0;
    std::map<SizeCategory, std::size_t> per_category_counts;
};

struct CorpusLoadResult {
    std::vector<ProblemInstance> instances;
    std::vector<std::string> warnings;  // advisory only, never fatal
};

// <=3 Small, 4-5 Moderate, >=6 Large.
SizeCategory derive_size_category(int constraint_count);

// Loads a line-delimited corpus file (one JSON record per line, UTF-8).
// Required keys: id, description, ground_truth_text, problem_class.
// Declared counts above the 20-variable / 10-constraint caps produce
// warnings, not rejections. Throws CorpusError on unreadable files,
// malformed records (with line number) and duplicate ids.
CorpusLoadResult load_corpus(const std::filesystem::path& path);

// Inverse of load_corpus: one record per line, all fields written.
std::string serialize_corpus(const std::vector<ProblemInstance>& instances);

// Counts and means over the given instances. When `parsed` is supplied it
// must be index-aligned with `instances`; objective sense is then taken from
// the parse when known, falling back to the instance hint. Instances with no
// determinable sense are left out of both tallies.
CorpusSummary summarize_corpus(const std::vector<ProblemInstance>& instances,
                               const std::vector<Formulation>* parsed = nullptr);

}  // namespace lm4opt
