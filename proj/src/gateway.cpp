#include "dgot/gateway.hpp"

#include <algorithm>
#include <cmath>

#include "dgot/errors.hpp"
#include "dgot/rng.hpp"

namespace dgot {

void CompletionRequest::validate() const {
    if (prompt.empty()) throw ArgumentError("completion request: prompt must be non-empty");
    if (temperature < 0.0 || temperature > 1.0)
        throw ArgumentError("completion request: temperature must lie in [0, 1]");
    if (top_p <= 0.0 || top_p > 1.0)
        throw ArgumentError("completion request: top_p must lie in (0, 1]");
    if (max_response_tokens < 1)
        throw ArgumentError("completion request: max_response_tokens must be >= 1");
}

long approx_token_count(std::string_view text) {
    long count = 0;
    bool in_token = false;
    for (unsigned char c : text) {
        bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
        if (!ws && !in_token) ++count;
        in_token = !ws;
    }
    return count;
}

UsageLedger::UsageLedger(double rate_in, double rate_out)
    : rate_in_(rate_in), rate_out_(rate_out) {
    if (rate_in < 0 || rate_out < 0) throw ArgumentError("ledger rates must be >= 0");
}

UsageLedger::UsageLedger(const UsageLedger& other) {
    std::lock_guard lock(other.mutex_);
    rate_in_ = other.rate_in_;
    rate_out_ = other.rate_out_;
    total_prompt_ = other.total_prompt_;
    total_response_ = other.total_response_;
    events_ = other.events_;
}

UsageLedger& UsageLedger::operator=(const UsageLedger& other) {
    if (this == &other) return *this;
    UsageLedger copy(other);
    std::lock_guard lock(mutex_);
    rate_in_ = copy.rate_in_;
    rate_out_ = copy.rate_out_;
    total_prompt_ = copy.total_prompt_;
    total_response_ = copy.total_response_;
    events_ = std::move(copy.events_);
    return *this;
}

void UsageLedger::record(const CompletionResult& result) {
    std::lock_guard lock(mutex_);
    total_prompt_ += result.prompt_tokens;
    total_response_ += result.response_tokens;
    events_.emplace_back(result.prompt_tokens, result.response_tokens);
}

void UsageLedger::merge(const UsageLedger& other) {
    auto other_events = other.events();
    if (other.rate_in() != rate_in_ || other.rate_out() != rate_out_)
        throw ArgumentError("cannot merge ledgers with different rates");
    std::lock_guard lock(mutex_);
    for (auto [p, r] : other_events) {
        total_prompt_ += p;
        total_response_ += r;
        events_.emplace_back(p, r);
    }
}

long UsageLedger::total_prompt_tokens() const {
    std::lock_guard lock(mutex_);
    return total_prompt_;
}

long UsageLedger::total_response_tokens() const {
    std::lock_guard lock(mutex_);
    return total_response_;
}

long UsageLedger::queries() const {
    std::lock_guard lock(mutex_);
    return static_cast<long>(events_.size());
}

double UsageLedger::cost() const {
    std::lock_guard lock(mutex_);
    return static_cast<double>(total_prompt_) * rate_in_ +
           static_cast<double>(total_response_) * rate_out_;
}

std::vector<std::pair<long, long>> UsageLedger::events() const {
    std::lock_guard lock(mutex_);
    return events_;
}

ScriptedBackend::ScriptedBackend(std::vector<std::string> script)
    : script_(std::move(script)) {}

CompletionResult ScriptedBackend::complete(const CompletionRequest& request) {
    request.validate();
    std::lock_guard lock(mutex_);
    if (next_ >= script_.size())
        throw ConfigError("scripted backend exhausted after " +
                          std::to_string(script_.size()) + " calls");
    CompletionResult result;
    result.text = script_[next_++];
    result.prompt_tokens = approx_token_count(request.prompt);
    result.response_tokens = approx_token_count(result.text);
    return result;
}

namespace {

bool is_marker_line(std::string_view line) {
    auto starts = [&](std::string_view prefix) { return line.substr(0, prefix.size()) == prefix; };
    return line == "Introduction:" || line == "Other sections:" || line == "References:" ||
           line == "Candidate abstract:" || starts("Candidate ") || starts("Title:") ||
           starts("Respond") || starts("Write one");
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' ||
                          s.front() == '\n'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' ||
                          s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

struct Material {
    std::string text;
    bool from_candidates = false;
};

// Pulls the source material out of a rendered prompt: candidate blocks when
// present (improve/aggregate prompts rewrite candidates), else the
// introduction block, else the whole text.
Material extract_material(std::string_view context) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= context.size()) {
        std::size_t end = context.find('\n', start);
        if (end == std::string_view::npos) end = context.size();
        lines.push_back(context.substr(start, end - start));
        start = end + 1;
    }

    auto collect_after = [&](auto&& matches) {
        std::string text;
        bool in_block = false;
        for (std::string_view line : lines) {
            std::string_view stripped = trim(line);
            if (matches(stripped)) {
                in_block = true;
                continue;
            }
            if (in_block && is_marker_line(stripped)) {
                in_block = false;
                continue;
            }
            if (in_block && !stripped.empty()) {
                if (!text.empty()) text += " ";
                text += std::string(stripped);
            }
        }
        return text;
    };

    std::string candidates = collect_after([](std::string_view l) {
        return l == "Candidate abstract:" ||
               (l.substr(0, 10) == "Candidate " && !l.empty() && l.back() == ':');
    });
    if (!candidates.empty()) return {std::move(candidates), true};

    std::string intro = collect_after([](std::string_view l) { return l == "Introduction:"; });
    if (!intro.empty()) return {std::move(intro), false};

    return {std::string(context), false};
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> sentences;
    std::string current;
    for (std::size_t i = 0; i < text.size(); ++i) {
        current.push_back(text[i]);
        if (text[i] == '.' && (i + 1 == text.size() || text[i + 1] == ' ')) {
            std::string_view t = trim(current);
            if (!t.empty()) sentences.emplace_back(t);
            current.clear();
        }
    }
    std::string_view tail = trim(current);
    if (!tail.empty()) sentences.emplace_back(tail);
    return sentences;
}

} // namespace

std::string synthetic_abstractor(std::string_view context, std::uint64_t quality_seed,
                                 const CoverageDistribution& coverage) {
    Material material = extract_material(context);
    std::vector<std::string> sentences = split_sentences(material.text);
    if (material.from_candidates) {
        // Candidates overlap; merging them means the union of their sentences.
        std::vector<std::string> unique;
        for (std::string& s : sentences)
            if (std::find(unique.begin(), unique.end(), s) == unique.end())
                unique.push_back(std::move(s));
        sentences = std::move(unique);
    }
    if (sentences.empty()) return "";

    SplitMix64 rng(mix_seed(quality_seed, fnv1a64(context)));
    double c = coverage.lo == coverage.hi ? coverage.lo
                                          : rng.next_in(coverage.lo, coverage.hi);
    long n = static_cast<long>(sentences.size());
    long m = std::clamp(std::lround(c * static_cast<double>(n)), 1L, n);

    std::vector<std::size_t> indices(sentences.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    rng.shuffle(indices);
    indices.resize(static_cast<std::size_t>(m));
    std::sort(indices.begin(), indices.end());

    std::string out;
    for (std::size_t idx : indices) {
        if (!out.empty()) out += " ";
        out += sentences[idx];
    }
    return out;
}

SyntheticBackend::SyntheticBackend(std::uint64_t seed, CoverageDistribution coverage)
    : seed_(seed), coverage_(coverage) {}

CompletionResult SyntheticBackend::complete(const CompletionRequest& request) {
    request.validate();
    std::uint64_t call = counter_.fetch_add(1);
    CompletionResult result;
    result.text = synthetic_abstractor(request.prompt, mix_seed(seed_, call), coverage_);
    result.prompt_tokens = approx_token_count(request.prompt);
    result.response_tokens = approx_token_count(result.text);
    return result;
}

} // namespace dgot
