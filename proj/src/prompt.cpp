#include "dgot/prompt.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <sstream>

#include "dgot/errors.hpp"
#include "dgot/gateway.hpp"

namespace dgot {

namespace {

constexpr std::array<std::string_view, 5> kSlotNames = {
    "title", "introduction", "other_sections", "references", "candidates"};

std::map<std::string, int> placeholder_counts(std::string_view text) {
    std::map<std::string, int> counts;
    std::size_t pos = 0;
    while ((pos = text.find("{{", pos)) != std::string_view::npos) {
        std::size_t end = text.find("}}", pos + 2);
        if (end == std::string_view::npos) break;
        counts[std::string(text.substr(pos + 2, end - pos - 2))]++;
        pos = end + 2;
    }
    return counts;
}

std::string substitute(std::string_view text,
                       const std::map<std::string, std::string>& slots) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t open = text.find("{{", pos);
        if (open == std::string_view::npos) {
            out += text.substr(pos);
            break;
        }
        std::size_t close = text.find("}}", open + 2);
        if (close == std::string_view::npos) {
            out += text.substr(pos);
            break;
        }
        out += text.substr(pos, open - pos);
        auto it = slots.find(std::string(text.substr(open + 2, close - open - 2)));
        if (it != slots.end()) out += it->second;
        pos = close + 2;
    }
    return out;
}

std::string render_other_sections(const ArticleView& view) {
    std::string out;
    for (const Section& s : view.other_sections) {
        if (!out.empty()) out += "\n\n";
        out += s.heading;
        out += "\n";
        out += s.body;
    }
    return out;
}

std::string render_references(const ArticleView& view) {
    if (view.references.empty()) return "no references provided";
    std::string out;
    for (const Reference& r : view.references) {
        if (!out.empty()) out += "\n";
        out += "- " + r.title + ": " + r.abstract;
    }
    return out;
}

std::string candidate_block(std::span<const std::string> texts) {
    std::string out;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (i) out += "\n\n";
        out += "Candidate " + std::to_string(i + 1) + ":\n";
        out += texts[i];
    }
    return out;
}

// Renders with content slots emptied except the title; the prompt skeleton a
// budget must at least accommodate.
long skeleton_tokens(const PromptTemplate& tmpl, const std::string& title) {
    std::map<std::string, std::string> slots;
    for (auto name : kSlotNames) slots[std::string(name)] = "";
    slots["title"] = title;
    return approx_token_count(substitute(tmpl.text, slots));
}

RenderedPrompt finish(std::string text, PromptBudget budget) {
    RenderedPrompt rendered;
    long tokens = approx_token_count(text);
    if (tokens > budget.max_tokens) {
        rendered.text = truncate_to_tokens(text, budget.max_tokens);
        rendered.truncated = true;
    } else {
        rendered.text = std::move(text);
    }
    return rendered;
}

} // namespace

void PromptTemplate::validate() const {
    auto counts = placeholder_counts(text);
    for (const auto& [name, count] : counts) {
        if (std::find(kSlotNames.begin(), kSlotNames.end(), name) == kSlotNames.end())
            throw ValidationError("template: unknown placeholder '{{" + name + "}}'");
        if (count > 1)
            throw ValidationError("template: placeholder '{{" + name +
                                  "}}' appears more than once");
    }
    auto require = [&](const char* name) {
        if (!counts.count(name))
            throw ValidationError(std::string("template: missing required placeholder '{{") +
                                  name + "}}' for kind " + std::string(to_string(kind)));
    };
    if (kind == TransformationKind::aggregate) {
        require("candidates");
    } else {
        require("title");
        require("introduction");
    }
}

TemplateSet TemplateSet::from_directory(const std::filesystem::path& dir) {
    TemplateSet set = builtin();
    auto load_into = [&](const char* name, PromptTemplate& tmpl) {
        std::filesystem::path file = dir / (std::string(name) + ".txt");
        if (!std::filesystem::exists(file)) return;
        std::ifstream in(file, std::ios::binary);
        if (!in) throw ConfigError("cannot read template file: " + file.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        tmpl.text = buf.str();
    };
    load_into("generate", set.generate);
    load_into("generate_cot", set.generate_cot);
    load_into("aggregate", set.aggregate);
    load_into("improve", set.improve);
    set.generate.validate();
    set.generate_cot.validate();
    set.aggregate.validate();
    set.improve.validate();
    return set;
}

std::string truncate_to_tokens(std::string_view text, long max_tokens) {
    if (max_tokens <= 0) return "";
    long count = 0;
    bool in_token = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
        if (!ws && !in_token) {
            if (count == max_tokens) return std::string(text.substr(0, i));
            ++count;
        }
        in_token = !ws;
    }
    return std::string(text);
}

RenderedPrompt render_generate(const ArticleView& view, const PromptTemplate& tmpl,
                               PromptBudget budget) {
    if (tmpl.kind != TransformationKind::generate)
        throw ArgumentError("render_generate needs a generate template");
    tmpl.validate();
    if (skeleton_tokens(tmpl, view.title) > budget.max_tokens)
        throw BudgetError("prompt budget " + std::to_string(budget.max_tokens) +
                          " cannot fit the template and title");

    std::map<std::string, std::string> slots;
    slots["title"] = view.title;
    slots["introduction"] = view.introduction;
    slots["other_sections"] = render_other_sections(view);
    slots["references"] = render_references(view);
    slots["candidates"] = "";
    return finish(substitute(tmpl.text, slots), budget);
}

RenderedPrompt render_improve(const Thought& best, const ArticleView& view,
                              const PromptTemplate& tmpl, PromptBudget budget) {
    if (tmpl.kind != TransformationKind::improve)
        throw ArgumentError("render_improve needs an improve template");
    tmpl.validate();
    if (skeleton_tokens(tmpl, view.title) > budget.max_tokens)
        throw BudgetError("prompt budget " + std::to_string(budget.max_tokens) +
                          " cannot fit the template and title");

    std::map<std::string, std::string> slots;
    slots["title"] = view.title;
    slots["introduction"] = view.introduction;
    slots["other_sections"] = render_other_sections(view);
    slots["references"] = render_references(view);
    slots["candidates"] = best.text;
    return finish(substitute(tmpl.text, slots), budget);
}

RenderedPrompt render_aggregate(std::span<const Thought> candidates,
                                const PromptTemplate& tmpl, PromptBudget budget) {
    if (tmpl.kind != TransformationKind::aggregate)
        throw ArgumentError("render_aggregate needs an aggregate template");
    tmpl.validate();
    if (candidates.size() < 2)
        throw ArgumentError("render_aggregate needs at least 2 candidates");

    std::map<std::string, std::string> slots;
    for (auto name : kSlotNames) slots[std::string(name)] = "";

    std::vector<std::string> texts;
    texts.reserve(candidates.size());
    for (const Thought& t : candidates) texts.push_back(t.text);

    slots["candidates"] = candidate_block(texts);
    std::string full = substitute(tmpl.text, slots);
    long over = approx_token_count(full) - budget.max_tokens;
    if (over <= 0) return RenderedPrompt{std::move(full), false};

    // Trim candidate texts tail-first, last candidate first, until the budget
    // fits; earlier candidates lose text only once later ones are exhausted.
    for (std::size_t i = texts.size(); i-- > 0 && over > 0;) {
        long tokens = approx_token_count(texts[i]);
        long cut = std::min(tokens, over);
        if (cut > 0) {
            texts[i] = truncate_to_tokens(texts[i], tokens - cut);
            over -= cut;
        }
    }
    slots["candidates"] = candidate_block(texts);
    full = substitute(tmpl.text, slots);
    // The template text itself can still exceed a tiny budget.
    RenderedPrompt rendered = finish(std::move(full), budget);
    rendered.truncated = true;
    return rendered;
}

} // namespace dgot
