#include "dgot/report.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dgot/errors.hpp"
#include "dgot/rng.hpp"
#include "helpers.hpp"

using namespace dgot;

namespace {

Corpus tiny_corpus(int n) {
    Corpus corpus;
    corpus.split = Split::test;
    for (int i = 0; i < n; ++i) {
        Article a;
        a.id = "a" + std::to_string(i);
        a.title = "title";
        a.introduction = "alpha beta gamma delta epsilon";
        a.abstract = "alpha beta gamma zeta eta";
        corpus.articles.push_back(a);
    }
    return corpus;
}

ArticleOutcome outcome_for(const Article& article, const std::string& text, long prompt_tokens,
                           long response_tokens) {
    RunOutcome outcome;
    outcome.best.id = "n1-generate";
    outcome.best.text = text;
    outcome.best.score = 0.5;
    outcome.queries_by_kind[TransformationKind::generate] = 1;
    outcome.queries_by_kind[TransformationKind::aggregate] = 0;
    outcome.queries_by_kind[TransformationKind::improve] = 0;
    outcome.ledger.record({text, prompt_tokens, response_tokens});
    return ArticleOutcome{article.id, outcome};
}

} // namespace

TEST_CASE("evaluate_run scores best texts against abstract and introduction") {
    Corpus corpus = tiny_corpus(3);
    std::vector<ArticleOutcome> outcomes;
    for (const Article& a : corpus.articles)
        outcomes.push_back(outcome_for(a, a.abstract, 100, 10));

    MethodResult result = evaluate_run("io", outcomes, corpus);
    CHECK(result.mean_r1_abstract == doctest::Approx(1.0));
    CHECK(result.mean_r2_abstract == doctest::Approx(1.0));
    CHECK(result.mean_rl_abstract == doctest::Approx(1.0));
    CHECK(result.mean_prompt_tokens == doctest::Approx(100.0));
    CHECK(result.mean_response_tokens == doctest::Approx(10.0));
    CHECK(result.articles == 3);
}

TEST_CASE("evaluate_run of one article equals the direct scores") {
    Corpus corpus = tiny_corpus(1);
    std::vector<ArticleOutcome> outcomes = {
        outcome_for(corpus.articles[0], "alpha beta nothing", 50, 5)};
    MethodResult result = evaluate_run("io", outcomes, corpus);
    auto rows = per_article_rows("io", outcomes, corpus);
    REQUIRE(rows.size() == 1);
    CHECK(result.mean_r1_abstract == rows[0].r1_abstract);
    CHECK(result.mean_r1_intro == rows[0].r1_intro);
    CHECK(result.mean_cost == doctest::Approx(rows[0].cost));
}

TEST_CASE("evaluate_run means equal independent averaging") {
    Corpus corpus = tiny_corpus(10);
    SplitMix64 rng(8);
    std::vector<ArticleOutcome> outcomes;
    std::vector<std::string> texts = {"alpha beta", "alpha zeta eta", "gamma delta", "zeta"};
    for (const Article& a : corpus.articles)
        outcomes.push_back(outcome_for(a, texts[rng.next_below(texts.size())],
                                       static_cast<long>(rng.next_below(1000)),
                                       static_cast<long>(rng.next_below(100))));

    MethodResult result = evaluate_run("got", outcomes, corpus);
    auto rows = per_article_rows("got", outcomes, corpus);
    double r1 = 0.0, cost = 0.0, prompt = 0.0;
    for (const ArticleRow& row : rows) {
        r1 += row.r1_abstract;
        cost += row.cost;
        prompt += static_cast<double>(row.prompt_tokens);
    }
    CHECK(result.mean_r1_abstract == doctest::Approx(r1 / 10.0).epsilon(1e-12));
    CHECK(result.mean_cost == doctest::Approx(cost / 10.0).epsilon(1e-12));
    CHECK(result.mean_prompt_tokens == doctest::Approx(prompt / 10.0).epsilon(1e-12));
}

TEST_CASE("evaluate_run rejects unknown article ids") {
    Corpus corpus = tiny_corpus(1);
    std::vector<ArticleOutcome> outcomes = {
        outcome_for(corpus.articles[0], "alpha", 1, 1)};
    outcomes[0].article_id = "ghost";
    CHECK_THROWS_AS(evaluate_run("io", outcomes, corpus), ValidationError);
}

TEST_CASE("cost_effectiveness reproduces the reference ratios") {
    struct Case {
        double extra, gain, want;
    };
    const Case cases[] = {{0.1128, 0.042, 2.686}, {0.1386, 0.040, 3.465},
                          {0.0667, 0.044, 1.516}};
    for (const Case& c : cases) {
        MethodResult method;
        method.method = "tot";
        method.mean_cost = c.extra + 0.0166;
        method.mean_r1_abstract = 0.314 + c.gain;
        MethodResult baseline;
        baseline.method = "cot";
        baseline.mean_cost = 0.0166;
        baseline.mean_r1_abstract = 0.314;
        CostEffectiveness ce = cost_effectiveness(method, baseline);
        REQUIRE(ce.value.has_value());
        CHECK(std::abs(*ce.value - c.want) <= 0.001);
    }
}

TEST_CASE("cost_effectiveness is undefined for non-positive gains") {
    MethodResult method;
    method.mean_cost = 0.2;
    method.mean_r1_abstract = 0.3;
    MethodResult baseline;
    baseline.mean_cost = 0.1;
    baseline.mean_r1_abstract = 0.31;
    CostEffectiveness ce = cost_effectiveness(method, baseline);
    CHECK(!ce.value.has_value());
    CHECK(ce.describe().find("undefined") != std::string::npos);
    CHECK(ce.describe().find("negative") != std::string::npos);
}

TEST_CASE("cost_effectiveness scales linearly in cost and inversely in gain") {
    MethodResult baseline;
    baseline.mean_cost = 0.01;
    baseline.mean_r1_abstract = 0.3;
    SplitMix64 rng(4);
    for (int i = 0; i < 30; ++i) {
        double extra = 0.01 + rng.next_double();
        double gain = 0.01 + rng.next_double() * 0.2;
        MethodResult m;
        m.mean_cost = baseline.mean_cost + extra;
        m.mean_r1_abstract = baseline.mean_r1_abstract + gain;
        auto ce = cost_effectiveness(m, baseline);

        MethodResult doubled = m;
        doubled.mean_cost = baseline.mean_cost + 2 * extra;
        auto ce2 = cost_effectiveness(doubled, baseline);
        CHECK(*ce2.value == doctest::Approx(2 * *ce.value).epsilon(1e-9));

        MethodResult half_gain = m;
        half_gain.mean_r1_abstract = baseline.mean_r1_abstract + gain / 2;
        auto ce3 = cost_effectiveness(half_gain, baseline);
        CHECK(*ce3.value == doctest::Approx(2 * *ce.value).epsilon(1e-9));
    }
}

TEST_CASE("pick_baseline selects the best single-round method") {
    MethodResult io;
    io.method = "io";
    io.mean_r1_abstract = 0.303;
    MethodResult cot;
    cot.method = "cot";
    cot.mean_r1_abstract = 0.314;
    MethodResult got;
    got.method = "got";
    got.mean_r1_abstract = 0.354;

    std::vector<MethodResult> results = {io, cot, got};
    CHECK(pick_baseline(results).method == "cot");

    std::vector<MethodResult> only_io = {io, got};
    CHECK(pick_baseline(only_io).method == "io");

    MethodResult cot_tied = cot;
    cot_tied.mean_r1_abstract = io.mean_r1_abstract;
    std::vector<MethodResult> tied = {io, cot_tied};
    CHECK(pick_baseline(tied).method == "io"); // list order breaks ties

    std::vector<MethodResult> none = {got};
    CHECK_THROWS_AS(pick_baseline(none), ValidationError);
}

TEST_CASE("article rows round-trip through csv") {
    Corpus corpus = tiny_corpus(4);
    std::vector<ArticleOutcome> outcomes;
    for (const Article& a : corpus.articles)
        outcomes.push_back(outcome_for(a, "alpha beta gamma", 321, 45));
    auto rows = per_article_rows("dgot", outcomes, corpus);
    rows[2].truncated = true;

    testutil::TempDir dir;
    save_rows_csv(rows, dir.file("rows.csv"));
    auto loaded = load_rows_csv(dir.file("rows.csv"));
    REQUIRE(loaded.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(loaded[i].article_id == rows[i].article_id);
        CHECK(loaded[i].method == rows[i].method);
        CHECK(loaded[i].r1_abstract == rows[i].r1_abstract);
        CHECK(loaded[i].cost == rows[i].cost);
        CHECK(loaded[i].queries_generate == rows[i].queries_generate);
        CHECK(loaded[i].truncated == rows[i].truncated);
    }
}

TEST_CASE("histograms conserve sample counts") {
    std::vector<double> values = {0.0, 0.25, 0.5, 0.5, 0.999, 1.0};
    Histogram hist = Histogram::of(values);
    long total = 0;
    for (long c : hist.counts) total += c;
    CHECK(total == static_cast<long>(values.size()));
    CHECK(hist.counts[49] == 2); // 0.999 and the inclusive 1.0 edge
    CHECK(hist.counts[25] == 2);
}

TEST_CASE("export_distributions writes csv and svg per kind") {
    std::vector<ScoreSample> samples;
    std::vector<MaxSample> maxima;
    for (int i = 0; i < 40; ++i) {
        samples.push_back({TransformationKind::generate, "a", i + 1, 0.5});
        maxima.push_back(
            {TransformationKind::generate, "a" + std::to_string(i), 0.3 + 0.004 * i});
    }
    ThresholdModel model;
    KindStats stats;
    stats.mean = 0.5;
    std::vector<double> values;
    for (const MaxSample& m : maxima) values.push_back(m.max_score);
    stats.gumbel = fit_gumbel(values);
    double mean = 0.0;
    for (double v : values) mean += v;
    stats.max_mean = mean / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - stats.max_mean) * (v - stats.max_mean);
    stats.max_var = ss / static_cast<double>(values.size() - 1);
    stats.gumbel = fit_gumbel(values);
    model.kinds[TransformationKind::generate] = stats;

    testutil::TempDir dir;
    export_distributions(samples, maxima, model, dir.path());

    CHECK(std::filesystem::exists(dir.file("dist_generate.csv")));
    CHECK(std::filesystem::exists(dir.file("dist_generate.svg")));
    CHECK(std::filesystem::exists(dir.file("maxdist_generate.csv")));
    CHECK(std::filesystem::exists(dir.file("maxdist_generate.svg")));
    CHECK(!std::filesystem::exists(dir.file("dist_improve.csv")));

    // Constant scores: a single populated bin, mean line at 0.5.
    std::string csv = testutil::read_file(dir.file("dist_generate.csv"));
    long nonzero = 0;
    long total = 0;
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line); // header
    while (std::getline(lines, line)) {
        auto last_comma = line.rfind(',');
        long count = std::stol(line.substr(last_comma + 1));
        total += count;
        if (count > 0) ++nonzero;
    }
    CHECK(nonzero == 1);
    CHECK(total == 40);

    std::string svg = testutil::read_file(dir.file("maxdist_generate.svg"));
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos); // fitted density curve

    CHECK_THROWS_AS(export_distributions({}, {}, model, dir.path()), ValidationError);
}

TEST_CASE("gumbel density peak sits within one bin of the histogram mode") {
    // Seeded draws from Gumbel(0.5, 0.04); the density argmax is x = mu.
    SplitMix64 rng(777);
    std::vector<MaxSample> maxima;
    std::vector<double> values;
    for (int i = 0; i < 4000; ++i) {
        double u = rng.next_double();
        if (u <= 0.0) u = 1e-12;
        double x = 0.5 - 0.04 * std::log(-std::log(u));
        x = std::clamp(x, 0.0, 1.0);
        values.push_back(x);
        maxima.push_back({TransformationKind::improve, "a" + std::to_string(i), x});
    }
    Histogram hist = Histogram::of(values);
    int mode_bin = 0;
    for (int b = 0; b < Histogram::kBins; ++b)
        if (hist.counts[b] > hist.counts[mode_bin]) mode_bin = b;

    GumbelParams params = fit_gumbel(values);
    int peak_bin = static_cast<int>(std::floor(params.mu * Histogram::kBins));
    CHECK(std::abs(peak_bin - mode_bin) <= 1);
}
