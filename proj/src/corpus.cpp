#include "lm4opt/corpus.hpp"

#include <set>

#include "lm4opt/errors.hpp"
#include "lm4opt/jsonl.hpp"

namespace lm4opt {

namespace {

constexpr int kVariableCap = 20;
constexpr int kConstraintCap = 10;

std::optional<ObjectiveSense> sense_hint_from_string(const std::string& s) {
    if (s == "min") {
        return ObjectiveSense::Min;
    }
    if (s == "max") {
        return ObjectiveSense::Max;
    }
    return std::nullopt;
}

SizeCategory size_category_from_string(const std::string& s) {
    if (s == "Small") {
        return SizeCategory::Small;
    }
    if (s == "Moderate") {
        return SizeCategory::Moderate;
    }
    if (s == "Large") {
        return SizeCategory::Large;
    }
    throw CorpusError("unknown size_category: " + s);
}

}  // namespace

std::string to_string(ProblemClass c) {
    switch (c) {
        case ProblemClass::LP:
            return "LP";
        case ProblemClass::ILP:
            return "ILP";
        case ProblemClass::MILP:
            return "MILP";
    }
    return "LP";
}

std::string to_string(SizeCategory c) {
    switch (c) {
        case SizeCategory::Small:
            return "Small";
        case SizeCategory::Moderate:
            return "Moderate";
        case SizeCategory::Large:
            return "Large";
    }
    return "Small";
}

ProblemClass problem_class_from_string(const std::string& s) {
    if (s == "LP") {
        return ProblemClass::LP;
    }
    if (s == "ILP") {
        return ProblemClass::ILP;
    }
    if (s == "MILP") {
        return ProblemClass::MILP;
    }
    throw CorpusError("unknown problem_class: " + s);
}

SizeCategory derive_size_category(int constraint_count) {
    if (constraint_count <= 3) {
        return SizeCategory::Small;
    }
    if (constraint_count < 6) {
        return SizeCategory::Moderate;
    }
    return SizeCategory::Large;
}

CorpusLoadResult load_corpus(const std::filesystem::path& path) {
    CorpusLoadResult result;
    std::set<std::string> seen_ids;

    jsonl::for_each_record(
        path,
        [&](std::size_t line_no, const nlohmann::json& rec) {
            auto require_string = [&](const char* key) -> std::string {
                if (!rec.contains(key) || !rec[key].is_string() ||
                    rec[key].get<std::string>().empty()) {
                    throw CorpusError("line " + std::to_string(line_no) +
                                      ": missing or empty required field '" + key + "'");
                }
                return rec[key].get<std::string>();
            };

            ProblemInstance inst;
            inst.id = require_string("id");
            if (!seen_ids.insert(inst.id).second) {
                throw CorpusError("duplicate id \"" + inst.id + "\" at line " +
                                  std::to_string(line_no));
            }
            inst.description = require_string("description");
            inst.ground_truth_text = require_string("ground_truth_text");
            inst.problem_class = problem_class_from_string(require_string("problem_class"));

            auto read_count = [&](const char* key) -> int {
                if (!rec.contains(key)) {
                    return 0;
                }
                if (!rec[key].is_number_integer() || rec[key].get<long>() < 0) {
                    throw CorpusError("line " + std::to_string(line_no) + ": field '" + key +
                                      "' must be a nonnegative integer");
                }
                return rec[key].get<int>();
            };
            inst.declared_variable_count = read_count("declared_variable_count");
            inst.declared_constraint_count = read_count("declared_constraint_count");
            inst.size_category = derive_size_category(inst.declared_constraint_count);

            if (rec.contains("size_category")) {
                auto stated = size_category_from_string(rec["size_category"].get<std::string>());
                if (stated != inst.size_category) {
                    result.warnings.push_back(
                        "instance " + inst.id + ": stated size_category " + to_string(stated) +
                        " disagrees with derived " + to_string(inst.size_category) +
                        "; derived value kept");
                }
            }
            if (rec.contains("objective_sense_hint")) {
                inst.objective_sense_hint =
                    sense_hint_from_string(rec["objective_sense_hint"].get<std::string>());
            }
            if (rec.contains("domain_tags")) {
                for (const auto& t : rec["domain_tags"]) {
                    inst.domain_tags.push_back(t.get<std::string>());
                }
            }

            if (inst.declared_variable_count > kVariableCap) {
                result.warnings.push_back("instance " + inst.id + ": declared_variable_count " +
                                          std::to_string(inst.declared_variable_count) +
                                          " exceeds the cap of " + std::to_string(kVariableCap));
            }
            if (inst.declared_constraint_count > kConstraintCap) {
                result.warnings.push_back("instance " + inst.id + ": declared_constraint_count " +
                                          std::to_string(inst.declared_constraint_count) +
                                          " exceeds the cap of " + std::to_string(kConstraintCap));
            }
            result.instances.push_back(std::move(inst));
        },
        [](std::string msg) { return CorpusError(msg); });

    return result;
}

std::string serialize_corpus(const std::vector<ProblemInstance>& instances) {
    std::vector<nlohmann::ordered_json> records;
    records.reserve(instances.size());
    for (const auto& inst : instances) {
        nlohmann::ordered_json rec;
        rec["id"] = inst.id;
        rec["description"] = inst.description;
        rec["ground_truth_text"] = inst.ground_truth_text;
        rec["problem_class"] = to_string(inst.problem_class);
        rec["declared_variable_count"] = inst.declared_variable_count;
        rec["declared_constraint_count"] = inst.declared_constraint_count;
        rec["size_category"] = to_string(inst.size_category);
        if (inst.objective_sense_hint) {
            rec["objective_sense_hint"] = to_string(*inst.objective_sense_hint);
        }
        if (!inst.domain_tags.empty()) {
            rec["domain_tags"] = inst.domain_tags;
        }
        records.push_back(std::move(rec));
    }
    return jsonl::dump_records(records);
}

CorpusSummary summarize_corpus(const std::vector<ProblemInstance>& instances,
                               const std::vector<Formulation>* parsed) {
    if (parsed && parsed->size() != instances.size()) {
        throw CorpusError("parsed formulations not aligned with instances: " +
                          std::to_string(parsed->size()) + " vs " +
                          std::to_string(instances.size()));
    }
    CorpusSummary s;
    s.n_instances = instances.size();
    double var_sum = 0.0;
    double con_sum = 0.0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& inst = instances[i];
        var_sum += inst.declared_variable_count;
        con_sum += inst.declared_constraint_count;
        ++s.per_category_counts[inst.size_category];

        ObjectiveSense sense = ObjectiveSense::Unknown;
        if (parsed && (*parsed)[i].objective_sense != ObjectiveSense::Unknown) {
            sense = (*parsed)[i].objective_sense;
        } else if (inst.objective_sense_hint) {
            sense = *inst.objective_sense_hint;
        }
        if (sense == ObjectiveSense::Min) {
            ++s.n_min;
        } else if (sense == ObjectiveSense::Max) {
            ++s.n_max;
        }
    }
    if (!instances.empty()) {
        s.mean_variables = var_sum / static_cast<double>(instances.size());
        s.mean_constraints = con_sum / static_cast<double>(instances.size());
    }
    return s;
}

}  // namespace lm4opt
