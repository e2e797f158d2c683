#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace dgot {

struct Section {
    std::string heading;
    std::string body;

    bool operator==(const Section&) const = default;
};

struct Reference {
    std::string title;
    std::string abstract;

    bool operator==(const Reference&) const = default;
};

/// One source article. `abstract` is the ground truth and is read only by the
/// evaluation/report phase; the reasoning path works on ArticleView, which has
/// no abstract at all.
struct Article {
    std::string id;
    std::string title;
    std::string abstract;
    std::string introduction;
    std::vector<Section> other_sections;
    std::vector<Reference> references;

    bool operator==(const Article&) const = default;
};

enum class Split { train, test };

std::string_view to_string(Split split);

struct Corpus {
    std::vector<Article> articles;
    Split split = Split::train;

    bool operator==(const Corpus&) const = default;
};

/// Projection of an Article that structurally cannot leak the ground-truth
/// abstract into prompts: there is no abstract field to read.
struct ArticleView {
    std::string id;
    std::string title;
    std::string introduction;
    std::vector<Section> other_sections;
    std::vector<Reference> references;
};

ArticleView reasoning_view(const Article& article);

/// Loads a line-delimited corpus file (one JSON record per line, keys exactly
/// id/title/abstract/introduction/other_sections/references). Order preserved.
/// Throws ParseError naming the line and field for malformed records,
/// ValidationError for invariant violations (duplicate ids, empty corpus).
Corpus load_corpus(const std::filesystem::path& path, Split split);

void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

struct SynthesisOptions {
    /// Target fraction of abstract unigrams that also occur in the
    /// introduction, as measured by R-1 precision(abstract, introduction).
    double overlap = 0.6;
    Split split = Split::train;
};

/// Deterministic desk-scale corpus generator: same (n, seed, vocab_size)
/// always yields a byte-identical corpus. vocab_size must be >= 10.
Corpus synthesize_corpus(int n, std::uint64_t seed, int vocab_size,
                         const SynthesisOptions& options = {});

} // namespace dgot
