#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dgot/corpus.hpp"
#include "dgot/thought.hpp"

namespace dgot {

/// A prompt template: plain text with double-brace placeholders drawn from
/// {{title}}, {{introduction}}, {{other_sections}}, {{references}} and
/// {{candidates}}. Each placeholder may appear at most once. generate/improve
/// templates must contain title and introduction; aggregate must contain
/// candidates.
struct PromptTemplate {
    TransformationKind kind = TransformationKind::generate;
    std::string text;

    /// Throws ValidationError on unknown, duplicate or missing placeholders.
    void validate() const;
};

/// Hard whole-prompt token budget (approx_token_count tokens).
struct PromptBudget {
    long max_tokens = 20000;
};

/// The four templates a run needs. `generate_cot` is the generate variant
/// with a step-by-step reasoning preamble prepended.
struct TemplateSet {
    PromptTemplate generate;
    PromptTemplate generate_cot;
    PromptTemplate aggregate;
    PromptTemplate improve;

    static TemplateSet builtin();

    /// Loads <dir>/{generate,generate_cot,aggregate,improve}.txt; a missing
    /// file silently keeps the built-in default for that kind.
    static TemplateSet from_directory(const std::filesystem::path& dir);
};

struct RenderedPrompt {
    std::string text;
    bool truncated = false;
};

/// Fills title, introduction, other sections and references (in that order in
/// the shipped templates) and enforces the budget by dropping tokens from the
/// tail. Throws BudgetError when even the prompt skeleton (all content slots
/// empty, title kept) exceeds the budget.
RenderedPrompt render_generate(const ArticleView& view, const PromptTemplate& tmpl,
                               PromptBudget budget);

/// Embeds every candidate text under an ordinal "Candidate N:" label. When
/// over budget the candidates are trimmed tail-first in reverse order, so the
/// last candidate loses text before any earlier one does.
RenderedPrompt render_aggregate(std::span<const Thought> candidates,
                                const PromptTemplate& tmpl, PromptBudget budget);

/// Embeds the best candidate plus the article's title and introduction.
RenderedPrompt render_improve(const Thought& best, const ArticleView& view,
                              const PromptTemplate& tmpl, PromptBudget budget);

/// Keeps the first max_tokens whitespace-delimited tokens, preserving the
/// original bytes of what remains.
std::string truncate_to_tokens(std::string_view text, long max_tokens);

} // namespace dgot
