#include "dgot/corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dgot/errors.hpp"
#include "dgot/rng.hpp"

namespace dgot {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Split split) {
    return split == Split::train ? "train" : "test";
}

ArticleView reasoning_view(const Article& article) {
    return ArticleView{article.id, article.title, article.introduction,
                       article.other_sections, article.references};
}

namespace {

constexpr const char* kArticleKeys[] = {"id",           "title",
                                        "abstract",     "introduction",
                                        "other_sections", "references"};

std::string require_string(const json& record, const char* key, long line,
                           bool non_empty) {
    if (!record.contains(key))
        throw ParseError("corpus line " + std::to_string(line) + ": missing field '" +
                         key + "'");
    const json& value = record.at(key);
    if (!value.is_string())
        throw ParseError("corpus line " + std::to_string(line) + ": field '" + key +
                         "' must be a string");
    std::string text = value.get<std::string>();
    if (non_empty && text.empty())
        throw ValidationError("corpus line " + std::to_string(line) + ": field '" + key +
                              "' must be non-empty");
    return text;
}

Article parse_article(const json& record, long line) {
    if (!record.is_object())
        throw ParseError("corpus line " + std::to_string(line) + ": record is not an object");
    for (const auto& [key, value] : record.items()) {
        (void)value;
        if (std::find_if(std::begin(kArticleKeys), std::end(kArticleKeys),
                         [&](const char* k) { return key == k; }) ==
            std::end(kArticleKeys))
            throw ParseError("corpus line " + std::to_string(line) + ": unknown field '" +
                             key + "'");
    }

    Article article;
    article.id = require_string(record, "id", line, /*non_empty=*/true);
    article.title = require_string(record, "title", line, /*non_empty=*/true);
    article.abstract = require_string(record, "abstract", line, /*non_empty=*/true);
    article.introduction = require_string(record, "introduction", line, /*non_empty=*/true);

    if (!record.contains("other_sections") || !record.at("other_sections").is_array())
        throw ParseError("corpus line " + std::to_string(line) +
                         ": missing field 'other_sections' (array)");
    for (const json& s : record.at("other_sections")) {
        if (!s.is_object() || !s.contains("heading") || !s.contains("body") ||
            !s.at("heading").is_string() || !s.at("body").is_string())
            throw ParseError("corpus line " + std::to_string(line) +
                             ": field 'other_sections' entries need string heading/body");
        article.other_sections.push_back(
            {s.at("heading").get<std::string>(), s.at("body").get<std::string>()});
    }

    if (!record.contains("references") || !record.at("references").is_array())
        throw ParseError("corpus line " + std::to_string(line) +
                         ": missing field 'references' (array)");
    for (const json& r : record.at("references")) {
        if (!r.is_object() || !r.contains("title") || !r.contains("abstract") ||
            !r.at("title").is_string() || !r.at("abstract").is_string())
            throw ParseError("corpus line " + std::to_string(line) +
                             ": field 'references' entries need string title/abstract");
        Reference ref{r.at("title").get<std::string>(), r.at("abstract").get<std::string>()};
        if (ref.title.empty())
            throw ValidationError("corpus line " + std::to_string(line) +
                                  ": reference title must be non-empty");
        article.references.push_back(std::move(ref));
    }
    return article;
}

} // namespace

Corpus load_corpus(const std::filesystem::path& path, Split split) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open corpus file: " + path.string());

    Corpus corpus;
    corpus.split = split;
    std::set<std::string> seen_ids;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError("corpus line " + std::to_string(line_no) +
                             ": invalid JSON: " + e.what());
        }
        Article article = parse_article(record, line_no);
        if (!seen_ids.insert(article.id).second)
            throw ValidationError("corpus line " + std::to_string(line_no) +
                                  ": duplicate article id '" + article.id + "'");
        corpus.articles.push_back(std::move(article));
    }
    if (corpus.articles.empty())
        throw ValidationError("corpus file has no records: " + path.string());
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write corpus file: " + path.string());
    for (const Article& a : corpus.articles) {
        ordered_json record;
        record["id"] = a.id;
        record["title"] = a.title;
        record["abstract"] = a.abstract;
        record["introduction"] = a.introduction;
        record["other_sections"] = ordered_json::array();
        for (const Section& s : a.other_sections)
            record["other_sections"].push_back({{"heading", s.heading}, {"body", s.body}});
        record["references"] = ordered_json::array();
        for (const Reference& r : a.references)
            record["references"].push_back({{"title", r.title}, {"abstract", r.abstract}});
        out << record.dump() << '\n';
    }
}

namespace {

const char* kSyllables[] = {"ra",  "ne",  "to",  "mi", "sol", "ver",
                            "ka",  "lun", "dor", "fi", "gam", "bet"};

std::string vocab_word(int i) {
    std::string w = kSyllables[i % 12];
    w += kSyllables[(i / 12) % 12];
    w += kSyllables[(i / 144) % 12];
    return w;
}

// Disjoint from vocab_word output: no syllable starts with 'x'.
std::string distractor_word(int i) { return "xu" + vocab_word(i); }

std::string capitalize(std::string word) {
    if (!word.empty() && word[0] >= 'a' && word[0] <= 'z') word[0] -= 'a' - 'A';
    return word;
}

std::string make_sentence(SplitMix64& rng, int vocab_size, int min_words, int spread) {
    int count = min_words + static_cast<int>(rng.next_below(spread));
    std::string sentence;
    for (int w = 0; w < count; ++w) {
        std::string word = vocab_word(static_cast<int>(rng.next_below(vocab_size)));
        if (w == 0)
            sentence += capitalize(word);
        else
            sentence += " " + word;
    }
    sentence += ".";
    return sentence;
}

} // namespace

Corpus synthesize_corpus(int n, std::uint64_t seed, int vocab_size,
                         const SynthesisOptions& options) {
    if (n < 1) throw ArgumentError("synthesize_corpus: n must be >= 1");
    if (vocab_size < 10) throw ArgumentError("synthesize_corpus: vocab_size must be >= 10");
    if (options.overlap < 0.0 || options.overlap > 1.0)
        throw ArgumentError("synthesize_corpus: overlap must lie in [0, 1]");

    Corpus corpus;
    corpus.split = options.split;
    for (int i = 0; i < n; ++i) {
        SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
        Article article;
        char id_buf[32];
        std::snprintf(id_buf, sizeof(id_buf), "synth-%04d", i);
        article.id = id_buf;

        int title_words = 4 + static_cast<int>(rng.next_below(3));
        for (int w = 0; w < title_words; ++w) {
            if (w) article.title += " ";
            article.title += vocab_word(static_cast<int>(rng.next_below(vocab_size)));
        }

        int sentences = 10 + static_cast<int>(rng.next_below(5));
        for (int s = 0; s < sentences; ++s) {
            if (s) article.introduction += " ";
            article.introduction += make_sentence(rng, vocab_size, 8, 5);
        }

        // Distinct introduction unigrams in first-appearance order.
        std::vector<std::string> distinct;
        {
            std::set<std::string> seen;
            std::string token;
            auto flush = [&] {
                if (!token.empty() && seen.insert(token).second) distinct.push_back(token);
                token.clear();
            };
            for (char c : article.introduction) {
                if (c == ' ' || c == '.')
                    flush();
                else
                    token.push_back(static_cast<char>(
                        (c >= 'A' && c <= 'Z') ? c - 'A' + 'a' : c));
            }
            flush();
        }

        // Abstract: `overlap` of its unigrams drawn from the introduction, the
        // rest from a token space disjoint from the vocabulary.
        int m = 30 + static_cast<int>(rng.next_below(16));
        int a = static_cast<int>(std::lround(options.overlap * m));
        if (a > static_cast<int>(distinct.size())) {
            a = static_cast<int>(distinct.size());
            m = options.overlap > 0 ? static_cast<int>(std::lround(a / options.overlap)) : m;
        }
        std::vector<std::string> pool = distinct;
        rng.shuffle(pool);
        std::vector<std::string> abstract_tokens(pool.begin(), pool.begin() + a);
        for (int t = 0; t < m - a; ++t) abstract_tokens.push_back(distractor_word(t));
        rng.shuffle(abstract_tokens);
        int stride = 10 + static_cast<int>(rng.next_below(5));
        for (std::size_t t = 0; t < abstract_tokens.size(); ++t) {
            bool sentence_start = t % stride == 0;
            if (t) article.abstract += sentence_start ? ". " : " ";
            article.abstract +=
                sentence_start ? capitalize(abstract_tokens[t]) : abstract_tokens[t];
        }
        article.abstract += ".";

        int section_count = 1 + static_cast<int>(rng.next_below(2));
        const char* headings[] = {"Methods", "Results", "Discussion"};
        for (int s = 0; s < section_count; ++s) {
            Section section;
            section.heading = headings[s % 3];
            int body_sentences = 1 + static_cast<int>(rng.next_below(2));
            for (int b = 0; b < body_sentences; ++b) {
                if (b) section.body += " ";
                section.body += make_sentence(rng, vocab_size, 6, 4);
            }
            article.other_sections.push_back(std::move(section));
        }

        int ref_count = static_cast<int>(rng.next_below(4));
        for (int r = 0; r < ref_count; ++r) {
            Reference ref;
            int words = 3 + static_cast<int>(rng.next_below(3));
            for (int w = 0; w < words; ++w) {
                if (w) ref.title += " ";
                ref.title += vocab_word(static_cast<int>(rng.next_below(vocab_size)));
            }
            ref.abstract = make_sentence(rng, vocab_size, 8, 4);
            article.references.push_back(std::move(ref));
        }

        corpus.articles.push_back(std::move(article));
    }
    return corpus;
}

} // namespace dgot
