#include "dgot/prompt.hpp"

#include <doctest.h>

#include <string>

#include "dgot/corpus.hpp"
#include "dgot/errors.hpp"
#include "dgot/gateway.hpp"
#include "helpers.hpp"

using namespace dgot;

namespace {

ArticleView small_view() {
    ArticleView view;
    view.id = "a1";
    view.title = "compact study of things";
    view.introduction = "things are interesting. we look at them closely.";
    view.other_sections = {{"Methods", "we measured things."}};
    view.references = {{"earlier things", "they measured other things."}};
    return view;
}

ArticleView long_view(int sentences) {
    ArticleView view;
    view.id = "big";
    view.title = "a very long article";
    for (int i = 0; i < sentences; ++i)
        view.introduction += "sentence number " + std::to_string(i) +
                             " padding words here again. ";
    return view;
}

Thought thought_with(std::string id, std::string text) {
    Thought t;
    t.id = std::move(id);
    t.text = std::move(text);
    t.score = 0.5;
    return t;
}

} // namespace

TEST_CASE("template validation enforces slots") {
    PromptTemplate missing{TransformationKind::generate, "no placeholders"};
    CHECK_THROWS_AS(missing.validate(), ValidationError);

    PromptTemplate dup{TransformationKind::generate,
                       "{{title}} {{introduction}} {{title}}"};
    CHECK_THROWS_AS(dup.validate(), ValidationError);

    PromptTemplate unknown{TransformationKind::generate,
                           "{{title}} {{introduction}} {{bogus}}"};
    CHECK_THROWS_AS(unknown.validate(), ValidationError);

    PromptTemplate agg{TransformationKind::aggregate, "{{candidates}}"};
    CHECK_NOTHROW(agg.validate());

    TemplateSet builtin = TemplateSet::builtin();
    CHECK_NOTHROW(builtin.generate.validate());
    CHECK_NOTHROW(builtin.generate_cot.validate());
    CHECK_NOTHROW(builtin.aggregate.validate());
    CHECK_NOTHROW(builtin.improve.validate());
}

TEST_CASE("render_generate embeds every field verbatim under a huge budget") {
    ArticleView view = small_view();
    TemplateSet templates = TemplateSet::builtin();
    auto rendered = render_generate(view, templates.generate, PromptBudget{20000});
    CHECK(!rendered.truncated);
    CHECK(rendered.text.find(view.title) != std::string::npos);
    CHECK(rendered.text.find(view.introduction) != std::string::npos);
    CHECK(rendered.text.find("we measured things.") != std::string::npos);
    CHECK(rendered.text.find("earlier things") != std::string::npos);
    // Table order: title before introduction before other sections before refs.
    CHECK(rendered.text.find(view.title) < rendered.text.find(view.introduction));
    CHECK(rendered.text.find(view.introduction) < rendered.text.find("we measured things."));
    CHECK(rendered.text.find("we measured things.") < rendered.text.find("earlier things"));
}

TEST_CASE("render_generate mentions missing references explicitly") {
    ArticleView view = small_view();
    view.references.clear();
    auto rendered =
        render_generate(view, TemplateSet::builtin().generate, PromptBudget{20000});
    CHECK(rendered.text.find("no references provided") != std::string::npos);
}

TEST_CASE("render_generate truncates from the tail and keeps the title") {
    ArticleView view = long_view(200);
    auto rendered =
        render_generate(view, TemplateSet::builtin().generate, PromptBudget{256});
    CHECK(rendered.truncated);
    CHECK(approx_token_count(rendered.text) <= 256);
    CHECK(rendered.text.find(view.title) != std::string::npos);
    // Tail-only: the retained text is a prefix of the untruncated render.
    auto full = render_generate(view, TemplateSet::builtin().generate, PromptBudget{100000});
    CHECK(full.text.rfind(rendered.text, 0) == 0);
}

TEST_CASE("the reference budget sweep renders without error") {
    ArticleView view = long_view(400);
    for (long budget : {256L, 512L, 1024L, 2048L, 4096L, 8192L}) {
        auto rendered =
            render_generate(view, TemplateSet::builtin().generate, PromptBudget{budget});
        CHECK(approx_token_count(rendered.text) <= budget);
    }
}

TEST_CASE("render_generate rejects budgets below the skeleton") {
    ArticleView view = small_view();
    CHECK_THROWS_AS(
        render_generate(view, TemplateSet::builtin().generate, PromptBudget{10}),
        BudgetError);
}

TEST_CASE("rendering is pure") {
    ArticleView view = small_view();
    auto a = render_generate(view, TemplateSet::builtin().generate, PromptBudget{512});
    auto b = render_generate(view, TemplateSet::builtin().generate, PromptBudget{512});
    CHECK(a.text == b.text);
}

TEST_CASE("render_aggregate labels candidates and needs at least two") {
    std::vector<Thought> candidates = {thought_with("g1", "first candidate text."),
                                       thought_with("g2", "second candidate text.")};
    auto rendered = render_aggregate(candidates, TemplateSet::builtin().aggregate,
                                     PromptBudget{20000});
    CHECK(rendered.text.find("Candidate 1:") != std::string::npos);
    CHECK(rendered.text.find("Candidate 2:") != std::string::npos);
    CHECK(rendered.text.find("first candidate text.") != std::string::npos);
    CHECK(rendered.text.find("second candidate text.") != std::string::npos);

    std::vector<Thought> one = {thought_with("g1", "only one.")};
    CHECK_THROWS_AS(
        render_aggregate(one, TemplateSet::builtin().aggregate, PromptBudget{20000}),
        ArgumentError);
}

TEST_CASE("render_aggregate trims the last candidate before earlier ones") {
    std::string chunk;
    for (int i = 0; i < 60; ++i) chunk += "word" + std::to_string(i) + " ";
    std::vector<Thought> candidates = {thought_with("g1", "first " + chunk),
                                       thought_with("g2", "second " + chunk),
                                       thought_with("g3", "third " + chunk)};

    auto full = render_aggregate(candidates, TemplateSet::builtin().aggregate,
                                 PromptBudget{20000});
    long full_tokens = approx_token_count(full.text);
    long budget = full_tokens - 30; // force a 30-token cut

    auto trimmed = render_aggregate(candidates, TemplateSet::builtin().aggregate,
                                    PromptBudget{budget});
    CHECK(trimmed.truncated);
    CHECK(approx_token_count(trimmed.text) <= budget);
    // Candidate 1 kept whole, candidate 3 lost its tail.
    CHECK(trimmed.text.find("first " + chunk) != std::string::npos);
    CHECK(trimmed.text.find("third") != std::string::npos);
    CHECK(trimmed.text.find("word59 \n\nRespond") == std::string::npos);

    // Cutting more than the last candidate reaches into candidate 2.
    long c3_tokens = approx_token_count(candidates[2].text);
    auto deeper = render_aggregate(candidates, TemplateSet::builtin().aggregate,
                                   PromptBudget{full_tokens - c3_tokens - 10});
    CHECK(deeper.text.find("first " + chunk) != std::string::npos);
    CHECK(approx_token_count(deeper.text) <= full_tokens - c3_tokens - 10);
}

TEST_CASE("render_improve embeds the candidate and differs from generate") {
    ArticleView view = small_view();
    Thought best = thought_with("g1", "a promising candidate abstract.");
    auto improve =
        render_improve(best, view, TemplateSet::builtin().improve, PromptBudget{20000});
    CHECK(improve.text.find("a promising candidate abstract.") != std::string::npos);
    CHECK(improve.text.find(view.title) != std::string::npos);
    CHECK(improve.text.find(view.introduction) != std::string::npos);

    auto generate =
        render_generate(view, TemplateSet::builtin().generate, PromptBudget{20000});
    CHECK(improve.text != generate.text);

    auto capped =
        render_improve(best, view, TemplateSet::builtin().improve, PromptBudget{512});
    CHECK(approx_token_count(capped.text) <= 512);
}

TEST_CASE("cot template is the generate template with a reasoning preamble") {
    ArticleView view = small_view();
    TemplateSet templates = TemplateSet::builtin();
    auto io = render_generate(view, templates.generate, PromptBudget{20000});
    auto cot = render_generate(view, templates.generate_cot, PromptBudget{20000});
    REQUIRE(cot.text.size() > io.text.size());
    // Identical suffix; the only difference is the prepended preamble.
    CHECK(cot.text.substr(cot.text.size() - io.text.size()) == io.text);
}

TEST_CASE("mismatched template kinds are rejected") {
    ArticleView view = small_view();
    TemplateSet templates = TemplateSet::builtin();
    CHECK_THROWS_AS(render_generate(view, templates.improve, PromptBudget{1000}),
                    ArgumentError);
    Thought best = thought_with("g1", "text");
    CHECK_THROWS_AS(render_improve(best, view, templates.generate, PromptBudget{1000}),
                    ArgumentError);
}

TEST_CASE("truncate_to_tokens keeps the first n tokens byte-exact") {
    CHECK(truncate_to_tokens("a b c d", 2) == "a b ");
    CHECK(truncate_to_tokens("a b", 5) == "a b");
    CHECK(truncate_to_tokens("  a\nb c", 2) == "  a\nb ");
    CHECK(truncate_to_tokens("a b", 0) == "");
    CHECK(approx_token_count(truncate_to_tokens("one two three", 2)) == 2);
}

TEST_CASE("template overrides load from a directory with fallback") {
    testutil::TempDir dir;
    testutil::write_file(dir.file("generate.txt"),
                         "Custom prompt {{title}} {{introduction}}");
    TemplateSet set = TemplateSet::from_directory(dir.path());
    CHECK(set.generate.text == "Custom prompt {{title}} {{introduction}}");
    CHECK(set.aggregate.text == TemplateSet::builtin().aggregate.text);

    testutil::write_file(dir.file("aggregate.txt"), "no slots at all");
    CHECK_THROWS_AS(TemplateSet::from_directory(dir.path()), ValidationError);
}
