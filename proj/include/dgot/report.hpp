#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dgot/corpus.hpp"
#include "dgot/engine.hpp"
#include "dgot/threshold.hpp"

namespace dgot {

/// One article's evaluated outcome; the unit persisted to rows CSV files.
struct ArticleRow {
    std::string article_id;
    std::string method;
    double r1_abstract = 0.0;
    double r2_abstract = 0.0;
    double rl_abstract = 0.0;
    double r1_intro = 0.0;
    double best_score = 0.0; // evaluator score of the winning thought
    long prompt_tokens = 0;
    long response_tokens = 0;
    double cost = 0.0;
    int queries_generate = 0;
    int queries_aggregate = 0;
    int queries_improve = 0;
    bool truncated = false;
};

/// Aggregate row for one method, Table-style: ROUGE means against the true
/// abstract, R-1 mean against the introduction, token and cost means.
struct MethodResult {
    std::string method;
    double mean_r1_abstract = 0.0;
    double mean_r2_abstract = 0.0;
    double mean_rl_abstract = 0.0;
    double mean_r1_intro = 0.0;
    double mean_best_score = 0.0;
    double mean_prompt_tokens = 0.0;
    double mean_response_tokens = 0.0;
    double mean_cost = 0.0;
    std::size_t articles = 0;
};

/// Extra cost over a baseline divided by the score gain over it; lower is
/// better. `value` is absent when the gain is not positive.
struct CostEffectiveness {
    double extra_cost = 0.0;
    double score_gain = 0.0;
    std::optional<double> value;

    /// "undefined (no score gain)" style diagnosis when value is absent.
    std::string describe() const;
};

enum class ScoreColumn { r1_abstract, r2_abstract, rl_abstract, r1_intro };

struct ArticleOutcome {
    std::string article_id;
    RunOutcome outcome;
};

/// Scores each outcome's best text against the article's true abstract
/// (R-1/R-2/R-L) and introduction (R-1). Throws ValidationError for an
/// outcome whose article id is not in the corpus.
std::vector<ArticleRow> per_article_rows(const std::string& method,
                                         std::span<const ArticleOutcome> outcomes,
                                         const Corpus& corpus);

MethodResult summarize(const std::string& method, std::span<const ArticleRow> rows);

MethodResult evaluate_run(const std::string& method,
                          std::span<const ArticleOutcome> outcomes,
                          const Corpus& corpus);

CostEffectiveness cost_effectiveness(const MethodResult& method,
                                     const MethodResult& baseline,
                                     ScoreColumn column = ScoreColumn::r1_abstract);

/// The best single-round method (io/cot) by mean R-1 vs. the true abstract;
/// ties keep list order. Throws ValidationError when none is present.
const MethodResult& pick_baseline(std::span<const MethodResult> results);

bool is_single_round(const std::string& method);

void save_rows_csv(std::span<const ArticleRow> rows, const std::filesystem::path& path);
std::vector<ArticleRow> load_rows_csv(const std::filesystem::path& path);

/// Fixed 50-bin histogram over [0, 1].
struct Histogram {
    static constexpr int kBins = 50;
    std::vector<long> counts = std::vector<long>(kBins, 0);
    std::size_t total = 0;

    static Histogram of(std::span<const double> values);
};

/// Writes, per transformation kind present in the samples:
///   dist_<kind>.csv / dist_<kind>.svg        score histogram + mean line
///   maxdist_<kind>.csv / maxdist_<kind>.svg  maxima histogram + fitted Gumbel
///                                            density curve (when fitted)
/// Throws ValidationError when the sample set is empty.
void export_distributions(std::span<const ScoreSample> samples,
                          std::span<const MaxSample> max_samples,
                          const ThresholdModel& model,
                          const std::filesystem::path& out_dir);

} // namespace dgot
