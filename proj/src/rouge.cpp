#include "dgot/rouge.hpp"

#include <algorithm>
#include <unordered_map>

#include "dgot/corpus.hpp"
#include "dgot/errors.hpp"

namespace dgot {

RougeScore RougeScore::from_precision_recall(double precision, double recall) {
    RougeScore s;
    s.precision = precision;
    s.recall = recall;
    s.f1 = (precision + recall > 0) ? 2 * precision * recall / (precision + recall) : 0.0;
    return s;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        bool word_char = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
                         (c >= 'A' && c <= 'Z') || c >= 0x80;
        if (word_char) {
            current.push_back(static_cast<char>((c >= 'A' && c <= 'Z') ? c - 'A' + 'a' : c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

namespace {

// n-grams keyed by their tokens joined with an unlikely separator byte.
std::unordered_map<std::string, long> ngram_counts(std::span<const std::string> tokens,
                                                   int n, long& total) {
    std::unordered_map<std::string, long> counts;
    total = 0;
    if (static_cast<long>(tokens.size()) < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (int j = 1; j < n; ++j) {
            key.push_back('\x1f');
            key += tokens[i + j];
        }
        ++counts[key];
        ++total;
    }
    return counts;
}

} // namespace

RougeScore rouge_n(std::span<const std::string> candidate,
                   std::span<const std::string> reference, int n) {
    if (n != 1 && n != 2) throw ArgumentError("rouge_n supports n in {1, 2}");

    long cand_total = 0;
    long ref_total = 0;
    auto cand_counts = ngram_counts(candidate, n, cand_total);
    auto ref_counts = ngram_counts(reference, n, ref_total);

    long overlap = 0;
    for (const auto& [gram, count] : cand_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) overlap += std::min(count, it->second);
    }

    double precision = cand_total > 0 ? static_cast<double>(overlap) / cand_total : 0.0;
    double recall = ref_total > 0 ? static_cast<double>(overlap) / ref_total : 0.0;
    return RougeScore::from_precision_recall(precision, recall);
}

RougeScore rouge_l(std::span<const std::string> candidate,
                   std::span<const std::string> reference) {
    const std::size_t m = candidate.size();
    const std::size_t n = reference.size();
    if (m == 0 || n == 0) return {};

    // Two-row LCS table.
    std::vector<long> prev(n + 1, 0), cur(n + 1, 0);
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            cur[j] = (candidate[i - 1] == reference[j - 1])
                         ? prev[j - 1] + 1
                         : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    long lcs = prev[n];
    return RougeScore::from_precision_recall(static_cast<double>(lcs) / m,
                                             static_cast<double>(lcs) / n);
}

RougeScore rouge_n_text(std::string_view candidate, std::string_view reference, int n) {
    return rouge_n(tokenize(candidate), tokenize(reference), n);
}

RougeScore rouge_l_text(std::string_view candidate, std::string_view reference) {
    return rouge_l(tokenize(candidate), tokenize(reference));
}

AggregateRouge abstract_intro_baseline(const Corpus& corpus) {
    if (corpus.articles.empty()) throw ValidationError("corpus is empty");

    AggregateRouge agg;
    auto add = [](RougeScore& into, const RougeScore& s) {
        into.precision += s.precision;
        into.recall += s.recall;
        into.f1 += s.f1;
    };
    for (const Article& article : corpus.articles) {
        auto cand = tokenize(article.abstract);
        auto ref = tokenize(article.introduction);
        add(agg.r1, rouge_n(cand, ref, 1));
        add(agg.r2, rouge_n(cand, ref, 2));
        add(agg.rl, rouge_l(cand, ref));
    }
    auto scale = [&](RougeScore& s) {
        s.precision /= corpus.articles.size();
        s.recall /= corpus.articles.size();
        s.f1 /= corpus.articles.size();
    };
    scale(agg.r1);
    scale(agg.r2);
    scale(agg.rl);
    return agg;
}

} // namespace dgot
