#include <doctest.h>

#include "lm4opt/corpus.hpp"
#include "lm4opt/errors.hpp"
#include "test_util.hpp"

using namespace lm4opt;

TEST_CASE("size category boundaries") {
    CHECK(derive_size_category(0) == SizeCategory::Small);
    CHECK(derive_size_category(3) == SizeCategory::Small);
    CHECK(derive_size_category(4) == SizeCategory::Moderate);
    CHECK(derive_size_category(5) == SizeCategory::Moderate);
    CHECK(derive_size_category(6) == SizeCategory::Large);
    CHECK(derive_size_category(100) == SizeCategory::Large);
}

TEST_CASE("size category is monotone in constraint count") {
    int prev = 0;
    for (int c = 0; c <= 25; ++c) {
        int idx = static_cast<int>(derive_size_category(c));
        CHECK(idx >= prev);
        prev = idx;
    }
}

namespace {

std::string record(const std::string& id, int vars = 3, int cons = 2,
                   const std::string& extra = "") {
    return R"({"id": ")" + id +
           R"(", "description": "desc", "ground_truth_text": "\\min x", "problem_class": "LP", )"
           R"("declared_variable_count": )" +
           std::to_string(vars) + R"(, "declared_constraint_count": )" + std::to_string(cons) +
           extra + "}\n";
}

}  // namespace

TEST_CASE("empty corpus file loads to empty list") {
    testutil::TempFile f("");
    auto loaded = load_corpus(f.path());
    CHECK(loaded.instances.empty());
    CHECK(loaded.warnings.empty());
}

TEST_CASE("counts above the caps warn but still load") {
    testutil::TempFile f(record("a", 3, 12));
    auto loaded = load_corpus(f.path());
    REQUIRE(loaded.instances.size() == 1);
    CHECK(loaded.instances[0].declared_constraint_count == 12);
    CHECK(loaded.instances[0].size_category == SizeCategory::Large);
    REQUIRE(loaded.warnings.size() == 1);
    CHECK(loaded.warnings[0].find("exceeds the cap") != std::string::npos);
}

TEST_CASE("duplicate ids are rejected with the id named") {
    testutil::TempFile f(record("s1") + record("s1"));
    CHECK_THROWS_WITH_AS(load_corpus(f.path()), doctest::Contains("s1"), CorpusError);
}

TEST_CASE("malformed records report the line number") {
    testutil::TempFile f(record("a") + "this is not json\n");
    CHECK_THROWS_WITH_AS(load_corpus(f.path()), doctest::Contains("line 2"), CorpusError);
}

TEST_CASE("missing required fields are rejected") {
    testutil::TempFile f(R"({"id": "a", "description": "d"})" "\n");
    CHECK_THROWS_AS(load_corpus(f.path()), CorpusError);
}

TEST_CASE("unreadable file is an error") {
    CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.jsonl"), CorpusError);
}

TEST_CASE("stated size_category disagreeing with derived warns") {
    testutil::TempFile f(record("a", 3, 2, R"(, "size_category": "Large")"));
    auto loaded = load_corpus(f.path());
    REQUIRE(loaded.instances.size() == 1);
    CHECK(loaded.instances[0].size_category == SizeCategory::Small);
    REQUIRE(loaded.warnings.size() == 1);
}

TEST_CASE("fixture corpus loads cleanly and round-trips") {
    auto loaded = load_corpus(testutil::asset_path("fixtures/corpus_fixture.jsonl"));
    REQUIRE(loaded.instances.size() == 3);
    CHECK(loaded.warnings.empty());

    testutil::TempFile f(serialize_corpus(loaded.instances));
    auto reloaded = load_corpus(f.path());
    REQUIRE(reloaded.instances.size() == loaded.instances.size());
    for (std::size_t i = 0; i < loaded.instances.size(); ++i) {
        const auto& a = loaded.instances[i];
        const auto& b = reloaded.instances[i];
        CHECK(a.id == b.id);
        CHECK(a.description == b.description);
        CHECK(a.ground_truth_text == b.ground_truth_text);
        CHECK(a.problem_class == b.problem_class);
        CHECK(a.declared_variable_count == b.declared_variable_count);
        CHECK(a.declared_constraint_count == b.declared_constraint_count);
        CHECK(a.size_category == b.size_category);
        CHECK(a.objective_sense_hint == b.objective_sense_hint);
        CHECK(a.domain_tags == b.domain_tags);
    }
}

TEST_CASE("loading does not modify the input file") {
    std::string content = record("a") + record("b", 21, 12);
    testutil::TempFile f(content);
    (void)load_corpus(f.path());
    CHECK(testutil::slurp(f.path()) == content);
}

TEST_CASE("summary means and category counts") {
    ProblemInstance a;
    a.id = "a";
    a.declared_variable_count = 4;
    a.declared_constraint_count = 2;
    a.size_category = derive_size_category(2);
    ProblemInstance b = a;
    b.id = "b";
    b.declared_constraint_count = 6;
    b.size_category = derive_size_category(6);

    auto s = summarize_corpus({a, b});
    CHECK(s.n_instances == 2);
    CHECK(s.mean_constraints == doctest::Approx(4.0));
    CHECK(s.per_category_counts[SizeCategory::Small] == 1);
    CHECK(s.per_category_counts[SizeCategory::Large] == 1);
    CHECK(s.n_min == 0);
    CHECK(s.n_max == 0);
}

TEST_CASE("summary takes sense from parses, falling back to hints") {
    ProblemInstance a;
    a.id = "a";
    Formulation max_parse;
    max_parse.objective_sense = ObjectiveSense::Max;
    std::vector<Formulation> parsed{max_parse};

    auto s = summarize_corpus({a}, &parsed);
    CHECK(s.n_max == 1);
    CHECK(s.n_min == 0);

    // Unknown parse + min hint: the hint counts.
    a.objective_sense_hint = ObjectiveSense::Min;
    parsed[0].objective_sense = ObjectiveSense::Unknown;
    s = summarize_corpus({a}, &parsed);
    CHECK(s.n_min == 1);
    CHECK(s.n_max == 0);

    // No parse, no hint: excluded from both tallies.
    a.objective_sense_hint.reset();
    s = summarize_corpus({a}, &parsed);
    CHECK(s.n_min + s.n_max == 0);
    CHECK(s.n_min + s.n_max <= s.n_instances);
}

TEST_CASE("empty instance list summarizes to zeros") {
    auto s = summarize_corpus({});
    CHECK(s.n_instances == 0);
    CHECK(s.mean_variables == 0.0);
    CHECK(s.mean_constraints == 0.0);
    CHECK(s.per_category_counts.empty());
}

TEST_CASE("misaligned parsed list is an error") {
    ProblemInstance a;
    a.id = "a";
    std::vector<Formulation> parsed(2);
    CHECK_THROWS_AS(summarize_corpus({a}, &parsed), CorpusError);
}
