#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dgot {

struct Corpus;

/// Precision/recall/F1 triple; every component lies in [0, 1] and
/// f1 == 2pr/(p+r) whenever p+r > 0, else 0.
struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    static RougeScore from_precision_recall(double precision, double recall);
};

/// Lowercases and splits on non-alphanumeric runs. No stemming, no stopword
/// removal. Token characters are ASCII letters/digits plus every non-ASCII
/// byte, which keeps multi-byte UTF-8 letters intact while splitting on all
/// ASCII punctuation. Idempotent: tokenizing a joined token list re-yields it.
std::vector<std::string> tokenize(std::string_view text);

/// Clipped n-gram multiset overlap (n must be 1 or 2).
/// precision = overlap / #candidate n-grams, recall = overlap / #reference
/// n-grams; an empty side contributes 0 instead of dividing by zero.
RougeScore rouge_n(std::span<const std::string> candidate,
                   std::span<const std::string> reference, int n);

/// Longest-common-subsequence variant: precision = LCS/|candidate|,
/// recall = LCS/|reference|. Plain sentence-level LCS, no multi-sentence union.
RougeScore rouge_l(std::span<const std::string> candidate,
                   std::span<const std::string> reference);

// Convenience wrappers that tokenize raw text first.
RougeScore rouge_n_text(std::string_view candidate, std::string_view reference, int n);
RougeScore rouge_l_text(std::string_view candidate, std::string_view reference);

/// Mean R-1 / R-2 / R-L over a corpus, scoring each article's true abstract
/// (candidate) against its introduction (reference). The ceiling-reference
/// row reported next to method results.
struct AggregateRouge {
    RougeScore r1;
    RougeScore r2;
    RougeScore rl;
};

AggregateRouge abstract_intro_baseline(const Corpus& corpus);

} // namespace dgot
