#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dgot/corpus.hpp"
#include "dgot/gateway.hpp"
#include "dgot/prompt.hpp"
#include "dgot/threshold.hpp"
#include "dgot/thought.hpp"

namespace dgot {

enum class Strategy { io, cot, tot, got, dgot };

std::string_view to_string(Strategy strategy);
Strategy strategy_from_string(std::string_view name);

/// k: queries per transformation stage; levels: tree depth (ToT only);
/// h: ranker keep-count after generation (defaults to k, keep all).
/// DGoT requires a threshold model.
struct StrategyConfig {
    Strategy strategy = Strategy::dgot;
    int k = 3;
    int levels = 3;
    std::optional<int> h;
    std::optional<ThresholdModel> thresholds;

    int keep_count() const { return h.value_or(k); }

    /// Throws ArgumentError on out-of-range fields or a missing threshold
    /// model for DGoT.
    void validate() const;
};

struct RunInputs {
    ArticleView view;
    Backend* backend = nullptr;
    const TemplateSet* templates = nullptr;
    PromptBudget budget;
    int max_response_tokens = 1024;
    double temperature = 0.7;
    double top_p = 0.7;
    double rate_in = kDefaultRateIn;
    double rate_out = kDefaultRateOut;
};

struct RunOutcome {
    Thought best;
    std::vector<Thought> all_thoughts;
    UsageLedger ledger;
    std::map<TransformationKind, int> queries_by_kind;
    bool any_prompt_truncated = false;

    int total_queries() const;
};

/// Scores a candidate against the article's introduction: R-1 F1 with the
/// candidate text as candidate and the full introduction as reference. The
/// ground-truth abstract plays no part here.
Thought evaluate(Thought thought, const ArticleView& view);

/// Top-h by score, ties broken by lower attempt then earlier kind, then
/// original order. h larger than the list returns the whole list.
std::vector<Thought> rank(std::vector<Thought> thoughts, int h);

// One strategy each. All run sequentially within the call; parallelism
// belongs at the article level so outcomes are identical for any worker
// count.
RunOutcome run_io(const RunInputs& inputs);
RunOutcome run_cot(const RunInputs& inputs);
RunOutcome run_tot(const RunInputs& inputs, const StrategyConfig& config);
RunOutcome run_got(const RunInputs& inputs, const StrategyConfig& config);
RunOutcome run_dgot(const RunInputs& inputs, const StrategyConfig& config);

RunOutcome run_strategy(const StrategyConfig& config, const RunInputs& inputs);

} // namespace dgot
