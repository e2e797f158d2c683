#include "dgot/engine.hpp"

#include <algorithm>

#include "dgot/errors.hpp"
#include "dgot/rouge.hpp"

namespace dgot {

std::string_view to_string(TransformationKind kind) {
    switch (kind) {
        case TransformationKind::generate: return "generate";
        case TransformationKind::aggregate: return "aggregate";
        case TransformationKind::improve: return "improve";
    }
    return "generate";
}

TransformationKind transformation_kind_from_string(std::string_view name) {
    if (name == "generate") return TransformationKind::generate;
    if (name == "aggregate") return TransformationKind::aggregate;
    if (name == "improve") return TransformationKind::improve;
    throw ArgumentError("unknown transformation kind: " + std::string(name));
}

std::string_view to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::io: return "io";
        case Strategy::cot: return "cot";
        case Strategy::tot: return "tot";
        case Strategy::got: return "got";
        case Strategy::dgot: return "dgot";
    }
    return "io";
}

Strategy strategy_from_string(std::string_view name) {
    if (name == "io") return Strategy::io;
    if (name == "cot") return Strategy::cot;
    if (name == "tot") return Strategy::tot;
    if (name == "got") return Strategy::got;
    if (name == "dgot") return Strategy::dgot;
    throw ArgumentError("unknown strategy: " + std::string(name));
}

void StrategyConfig::validate() const {
    if (k < 1) throw ArgumentError("strategy config: k must be >= 1");
    if (levels < 1) throw ArgumentError("strategy config: levels must be >= 1");
    if (h && (*h < 1 || *h > k))
        throw ArgumentError("strategy config: h must lie in [1, k]");
    if (strategy == Strategy::dgot && !thresholds)
        throw ArgumentError("strategy config: dgot requires a threshold model");
}

int RunOutcome::total_queries() const {
    int total = 0;
    for (auto& [kind, count] : queries_by_kind) total += count;
    return total;
}

Thought evaluate(Thought thought, const ArticleView& view) {
    thought.score =
        rouge_n(tokenize(thought.text), tokenize(view.introduction), 1).f1;
    return thought;
}

namespace {

// score desc, then lower attempt, then earlier kind. Callers that need full
// determinism additionally rely on insertion order (stable sort / in-order
// scan).
bool strictly_better(const Thought& a, const Thought& b) {
    if (*a.score != *b.score) return *a.score > *b.score;
    if (a.attempt != b.attempt) return a.attempt < b.attempt;
    return a.kind < b.kind;
}

// Sequentially runs one article's reasoning graph against a backend.
class GraphRun {
public:
    explicit GraphRun(const RunInputs& inputs)
        : inputs_(inputs), ledger_(inputs.rate_in, inputs.rate_out) {
        if (!inputs.backend) throw ArgumentError("run inputs: backend is required");
        if (!inputs.templates) throw ArgumentError("run inputs: templates are required");
        queries_[TransformationKind::generate] = 0;
        queries_[TransformationKind::aggregate] = 0;
        queries_[TransformationKind::improve] = 0;
    }

    const Thought& query(TransformationKind kind, int attempt, const RenderedPrompt& prompt,
                         std::vector<std::string> parents) {
        CompletionRequest request;
        request.prompt = prompt.text;
        request.temperature = inputs_.temperature;
        request.top_p = inputs_.top_p;
        request.max_response_tokens = inputs_.max_response_tokens;

        CompletionResult result = inputs_.backend->complete(request);
        ledger_.record(result);
        ++queries_[kind];
        truncated_ |= prompt.truncated;

        Thought thought;
        thought.id = "n" + std::to_string(++node_counter_) + "-" + std::string(to_string(kind));
        thought.text = std::move(result.text);
        thought.kind = kind;
        thought.attempt = attempt;
        thought.parents = std::move(parents);
        thoughts_.push_back(evaluate(std::move(thought), inputs_.view));
        return thoughts_.back();
    }

    // Global argmax with the documented tie-break; earliest node on full ties.
    const Thought& best() const {
        if (thoughts_.empty()) throw ValidationError("run produced no thoughts");
        std::size_t best_idx = 0;
        for (std::size_t i = 1; i < thoughts_.size(); ++i)
            if (strictly_better(thoughts_[i], thoughts_[best_idx])) best_idx = i;
        return thoughts_[best_idx];
    }

    // Best among thoughts of one kind.
    const Thought* best_of_kind(TransformationKind kind) const {
        const Thought* found = nullptr;
        for (const Thought& t : thoughts_)
            if (t.kind == kind && (!found || strictly_better(t, *found))) found = &t;
        return found;
    }

    std::vector<Thought> of_kind(TransformationKind kind) const {
        std::vector<Thought> out;
        for (const Thought& t : thoughts_)
            if (t.kind == kind) out.push_back(t);
        return out;
    }

    RunOutcome finish() && {
        RunOutcome outcome;
        outcome.best = best();
        outcome.all_thoughts = std::move(thoughts_);
        outcome.ledger = ledger_;
        outcome.queries_by_kind = queries_;
        outcome.any_prompt_truncated = truncated_;
        return outcome;
    }

    const RunInputs& inputs() const { return inputs_; }

private:
    const RunInputs& inputs_;
    UsageLedger ledger_;
    std::vector<Thought> thoughts_;
    std::map<TransformationKind, int> queries_;
    bool truncated_ = false;
    int node_counter_ = 0;
};

RunOutcome run_single(const RunInputs& inputs, const PromptTemplate& tmpl) {
    GraphRun run(inputs);
    RenderedPrompt prompt = render_generate(inputs.view, tmpl, inputs.budget);
    run.query(TransformationKind::generate, 1, prompt, {});
    return std::move(run).finish();
}

std::vector<std::string> ids_of(std::span<const Thought> thoughts) {
    std::vector<std::string> ids;
    ids.reserve(thoughts.size());
    for (const Thought& t : thoughts) ids.push_back(t.id);
    return ids;
}

} // namespace

std::vector<Thought> rank(std::vector<Thought> thoughts, int h) {
    if (h < 1) throw ArgumentError("rank: h must be >= 1");
    for (const Thought& t : thoughts)
        if (!t.score) throw ArgumentError("rank: all thoughts must be scored");
    std::stable_sort(thoughts.begin(), thoughts.end(), strictly_better);
    if (static_cast<std::size_t>(h) < thoughts.size()) thoughts.resize(h);
    return thoughts;
}

RunOutcome run_io(const RunInputs& inputs) {
    return run_single(inputs, inputs.templates->generate);
}

RunOutcome run_cot(const RunInputs& inputs) {
    return run_single(inputs, inputs.templates->generate_cot);
}

RunOutcome run_tot(const RunInputs& inputs, const StrategyConfig& config) {
    config.validate();
    GraphRun run(inputs);

    RenderedPrompt generate_prompt =
        render_generate(inputs.view, inputs.templates->generate, inputs.budget);
    for (int attempt = 1; attempt <= config.k; ++attempt)
        run.query(TransformationKind::generate, attempt, generate_prompt, {});

    for (int level = 2; level <= config.levels; ++level) {
        Thought input = run.best();
        RenderedPrompt improve_prompt =
            render_improve(input, inputs.view, inputs.templates->improve, inputs.budget);
        for (int attempt = 1; attempt <= config.k; ++attempt)
            run.query(TransformationKind::improve, attempt, improve_prompt, {input.id});
    }
    return std::move(run).finish();
}

RunOutcome run_got(const RunInputs& inputs, const StrategyConfig& config) {
    config.validate();
    GraphRun run(inputs);

    RenderedPrompt generate_prompt =
        render_generate(inputs.view, inputs.templates->generate, inputs.budget);
    for (int attempt = 1; attempt <= config.k; ++attempt)
        run.query(TransformationKind::generate, attempt, generate_prompt, {});

    std::vector<Thought> frontier =
        rank(run.of_kind(TransformationKind::generate), config.keep_count());

    Thought improve_input = frontier.front();
    if (frontier.size() >= 2) {
        RenderedPrompt aggregate_prompt =
            render_aggregate(frontier, inputs.templates->aggregate, inputs.budget);
        std::vector<std::string> parents = ids_of(frontier);
        for (int attempt = 1; attempt <= config.k; ++attempt)
            run.query(TransformationKind::aggregate, attempt, aggregate_prompt, parents);
        improve_input = *run.best_of_kind(TransformationKind::aggregate);
    }

    RenderedPrompt improve_prompt =
        render_improve(improve_input, inputs.view, inputs.templates->improve, inputs.budget);
    for (int attempt = 1; attempt <= config.k; ++attempt)
        run.query(TransformationKind::improve, attempt, improve_prompt, {improve_input.id});

    return std::move(run).finish();
}

RunOutcome run_dgot(const RunInputs& inputs, const StrategyConfig& config) {
    config.validate();
    const ThresholdModel& model = *config.thresholds;
    GraphRun run(inputs);

    // Dynamic generate: stop as soon as a thought clears the bar, cap k.
    double generate_bar = threshold_for(model, TransformationKind::generate);
    RenderedPrompt generate_prompt =
        render_generate(inputs.view, inputs.templates->generate, inputs.budget);
    for (int attempt = 1; attempt <= config.k; ++attempt) {
        const Thought& t = run.query(TransformationKind::generate, attempt, generate_prompt, {});
        if (*t.score >= generate_bar) break;
    }

    std::vector<Thought> frontier =
        rank(run.of_kind(TransformationKind::generate), config.keep_count());

    // Dynamic aggregate: skipped outright when only one thought was retained.
    if (frontier.size() >= 2) {
        double aggregate_bar = threshold_for(model, TransformationKind::aggregate);
        RenderedPrompt aggregate_prompt =
            render_aggregate(frontier, inputs.templates->aggregate, inputs.budget);
        std::vector<std::string> parents = ids_of(frontier);
        for (int attempt = 1; attempt <= config.k; ++attempt) {
            const Thought& t =
                run.query(TransformationKind::aggregate, attempt, aggregate_prompt, parents);
            if (*t.score >= aggregate_bar) break;
        }
    }

    // Dynamic improve on the best thought so far.
    double improve_bar = threshold_for(model, TransformationKind::improve);
    Thought improve_input = run.best();
    RenderedPrompt improve_prompt =
        render_improve(improve_input, inputs.view, inputs.templates->improve, inputs.budget);
    for (int attempt = 1; attempt <= config.k; ++attempt) {
        const Thought& t =
            run.query(TransformationKind::improve, attempt, improve_prompt, {improve_input.id});
        if (*t.score >= improve_bar) break;
    }

    return std::move(run).finish();
}

RunOutcome run_strategy(const StrategyConfig& config, const RunInputs& inputs) {
    switch (config.strategy) {
        case Strategy::io: return run_io(inputs);
        case Strategy::cot: return run_cot(inputs);
        case Strategy::tot: return run_tot(inputs, config);
        case Strategy::got: return run_got(inputs, config);
        case Strategy::dgot: return run_dgot(inputs, config);
    }
    throw ArgumentError("unknown strategy");
}

} // namespace dgot
