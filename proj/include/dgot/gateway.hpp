#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dgot {

struct CompletionRequest {
    std::string prompt;
    double temperature = 0.7;
    double top_p = 0.7;
    int max_response_tokens = 1024;

    /// Throws ArgumentError when a field is out of bounds.
    void validate() const;
};

struct CompletionResult {
    std::string text;
    long prompt_tokens = 0;
    long response_tokens = 0;
};

/// Whitespace-delimited token count; the portable stand-in for model
/// tokenizers, used for budgets, truncation and mock usage accounting.
long approx_token_count(std::string_view text);

/// Default per-token rates: $1.5 / 1M input tokens, $2 / 1M output tokens.
inline constexpr double kDefaultRateIn = 1.5e-6;
inline constexpr double kDefaultRateOut = 2.0e-6;

/// Token/query/cost accounting. Totals are exact sums over the recorded
/// completions; the per-completion event log is kept so totals can be
/// re-derived. Appends are linearizable.
class UsageLedger {
public:
    explicit UsageLedger(double rate_in = kDefaultRateIn,
                         double rate_out = kDefaultRateOut);

    UsageLedger(const UsageLedger& other);
    UsageLedger& operator=(const UsageLedger& other);

    void record(const CompletionResult& result);

    /// Folds another ledger's events into this one. Rates must match.
    void merge(const UsageLedger& other);

    long total_prompt_tokens() const;
    long total_response_tokens() const;
    long queries() const;
    double rate_in() const { return rate_in_; }
    double rate_out() const { return rate_out_; }

    /// total_prompt_tokens * rate_in + total_response_tokens * rate_out.
    double cost() const;

    /// (prompt_tokens, response_tokens) per recorded completion, in order.
    std::vector<std::pair<long, long>> events() const;

private:
    mutable std::mutex mutex_;
    double rate_in_;
    double rate_out_;
    long total_prompt_ = 0;
    long total_response_ = 0;
    std::vector<std::pair<long, long>> events_;
};

/// A language-model endpoint. Implementations must be safe for concurrent
/// complete() calls.
class Backend {
public:
    virtual ~Backend() = default;

    virtual CompletionResult complete(const CompletionRequest& request) = 0;
};

/// Replays a fixed list of responses in order; token counts are whitespace
/// counts. Exhausting the script throws ConfigError.
class ScriptedBackend : public Backend {
public:
    explicit ScriptedBackend(std::vector<std::string> script);

    CompletionResult complete(const CompletionRequest& request) override;

    std::size_t calls() const { return next_; }

private:
    std::mutex mutex_;
    std::vector<std::string> script_;
    std::size_t next_ = 0;
};

/// Coverage ratio distribution for the synthetic abstractor; lo == hi pins
/// the ratio.
struct CoverageDistribution {
    double lo = 0.2;
    double hi = 0.8;
};

/// Desk-scale language-model stand-in: extracts the source material embedded
/// in the prompt (the candidate blocks when present, else the introduction
/// block, else the whole prompt), splits it into sentences, and returns an
/// order-preserving random subset covering a seed-controlled fraction of them.
/// Pure: identical (context, quality_seed, coverage) yields identical text.
std::string synthetic_abstractor(std::string_view context, std::uint64_t quality_seed,
                                 const CoverageDistribution& coverage = {});

/// Backend wrapper around synthetic_abstractor. Consecutive calls advance an
/// internal counter so repeated identical prompts still produce a
/// non-degenerate score distribution, reproducibly for a fixed seed.
class SyntheticBackend : public Backend {
public:
    explicit SyntheticBackend(std::uint64_t seed, CoverageDistribution coverage = {});

    CompletionResult complete(const CompletionRequest& request) override;

private:
    std::uint64_t seed_;
    CoverageDistribution coverage_;
    std::atomic<std::uint64_t> counter_{0};
};

struct HttpBackendOptions {
    std::string base_url;   // e.g. "http://127.0.0.1:8000/v1"
    std::string api_key;    // sent as a Bearer token when non-empty
    std::string model = "local";
    int max_attempts = 3;
    std::chrono::milliseconds backoff_base{250};
    std::chrono::seconds timeout{120};
};

/// OpenAI-compatible chat-completions client: one user message carrying the
/// rendered prompt. Uses server-reported usage counts when present, falling
/// back to approx_token_count. Transport failures and 5xx responses retry
/// with exponential backoff; exhausted retries throw BackendError.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendOptions options);

    CompletionResult complete(const CompletionRequest& request) override;

private:
    HttpBackendOptions options_;
    std::string origin_;
    std::string path_prefix_;
};

/// Per-article backend construction, so article-level parallelism cannot
/// change any article's response stream.
using BackendFactory = std::function<std::shared_ptr<Backend>(const std::string& article_id)>;

} // namespace dgot
