#include "dgot/threshold.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dgot/engine.hpp"
#include "dgot/errors.hpp"
#include "dgot/format.hpp"

namespace dgot {

using nlohmann::json;
using nlohmann::ordered_json;

GumbelParams fit_gumbel(std::span<const double> max_samples) {
    if (max_samples.size() < 2)
        throw ValidationError("gumbel fit needs at least 2 samples");
    auto [lo, hi] = std::minmax_element(max_samples.begin(), max_samples.end());
    if (*lo == *hi)
        throw ValidationError("gumbel fit: degenerate distribution (constant samples)");

    double mean = 0.0;
    for (double x : max_samples) mean += x;
    mean /= static_cast<double>(max_samples.size());

    double ss = 0.0;
    for (double x : max_samples) ss += (x - mean) * (x - mean);
    double variance = ss / static_cast<double>(max_samples.size() - 1);
    if (variance <= 0.0)
        throw ValidationError("gumbel fit: degenerate distribution (zero variance)");

    GumbelParams params;
    params.beta = std::sqrt(6.0 * variance / (std::numbers::pi * std::numbers::pi));
    params.mu = mean - kEulerMascheroni * params.beta;
    return params;
}

double gumbel_cdf(double x, double mu, double beta) {
    if (beta <= 0.0) throw ArgumentError("gumbel_cdf: beta must be > 0");
    return std::exp(-std::exp(-(x - mu) / beta));
}

double gumbel_pdf(double x, double mu, double beta) {
    if (beta <= 0.0) throw ArgumentError("gumbel_pdf: beta must be > 0");
    double z = (x - mu) / beta;
    return std::exp(-(z + std::exp(-z))) / beta;
}

double gumbel_threshold(double mu, double beta, double p) {
    if (beta <= 0.0) throw ArgumentError("gumbel_threshold: beta must be > 0");
    if (p <= 0.0 || p >= 1.0)
        throw ArgumentError("gumbel_threshold: confidence must lie in (0, 1)");
    return mu - beta * std::log(-std::log(p));
}

namespace {

const KindStats& stats_for(const ThresholdModel& model, TransformationKind kind) {
    auto it = model.kinds.find(kind);
    if (it == model.kinds.end())
        throw ValidationError("threshold model has no statistics for kind '" +
                              std::string(to_string(kind)) + "'");
    return it->second;
}

} // namespace

double simple_threshold(const ThresholdModel& model, TransformationKind kind) {
    return stats_for(model, kind).mean;
}

double threshold_for(const ThresholdModel& model, TransformationKind kind) {
    const KindStats& stats = stats_for(model, kind);
    if (model.mode == ThresholdMode::simple) return stats.mean;
    if (!stats.gumbel)
        throw ValidationError("threshold model has no gumbel fit for kind '" +
                              std::string(to_string(kind)) + "'");
    return gumbel_threshold(stats.gumbel->mu, stats.gumbel->beta, model.confidence);
}

TrainingResult train(const Corpus& corpus, const BackendFactory& make_backend,
                     const TemplateSet& templates, const TrainOptions& options) {
    if (corpus.split != Split::train)
        throw ValidationError("train expects a corpus tagged as the train split");
    if (options.k < 1) throw ArgumentError("train: k must be >= 1");

    TrainingResult result;
    result.ledger = UsageLedger(options.rate_in, options.rate_out);
    StrategyConfig got_config;
    got_config.strategy = Strategy::got;
    got_config.k = options.k;

    std::size_t successes = 0;
    for (const Article& article : corpus.articles) {
        std::shared_ptr<Backend> backend = make_backend(article.id);
        RunInputs inputs;
        inputs.view = reasoning_view(article);
        inputs.backend = backend.get();
        inputs.templates = &templates;
        inputs.budget = options.budget;
        inputs.max_response_tokens = options.max_response_tokens;
        inputs.rate_in = options.rate_in;
        inputs.rate_out = options.rate_out;

        RunOutcome outcome;
        try {
            outcome = run_got(inputs, got_config);
        } catch (const BackendError& e) {
            result.warnings.push_back("article '" + article.id +
                                      "' skipped: " + e.what());
            continue;
        }
        ++successes;
        result.ledger.merge(outcome.ledger);

        std::map<TransformationKind, double> maxima;
        for (const Thought& t : outcome.all_thoughts) {
            result.samples.push_back(
                ScoreSample{t.kind, article.id, t.attempt, *t.score});
            auto [it, inserted] = maxima.try_emplace(t.kind, *t.score);
            if (!inserted) it->second = std::max(it->second, *t.score);
        }
        for (auto& [kind, max_score] : maxima)
            result.max_samples.push_back(MaxSample{kind, article.id, max_score});
    }

    if (successes == 0)
        throw ValidationError("training failed: no article completed successfully");

    auto sample_order = [](const ScoreSample& a, const ScoreSample& b) {
        return std::tie(a.article_id, a.kind, a.attempt) <
               std::tie(b.article_id, b.kind, b.attempt);
    };
    std::sort(result.samples.begin(), result.samples.end(), sample_order);
    std::sort(result.max_samples.begin(), result.max_samples.end(),
              [](const MaxSample& a, const MaxSample& b) {
                  return std::tie(a.article_id, a.kind) < std::tie(b.article_id, b.kind);
              });

    for (TransformationKind kind : {TransformationKind::generate,
                                    TransformationKind::aggregate,
                                    TransformationKind::improve}) {
        std::vector<double> scores;
        std::vector<double> maxima;
        for (const ScoreSample& s : result.samples)
            if (s.kind == kind) scores.push_back(s.score);
        for (const MaxSample& s : result.max_samples)
            if (s.kind == kind) maxima.push_back(s.max_score);
        if (scores.empty()) continue; // k == 1 runs skip aggregation entirely

        KindStats stats;
        for (double s : scores) stats.mean += s;
        stats.mean /= static_cast<double>(scores.size());

        double max_mean = 0.0;
        for (double m : maxima) max_mean += m;
        max_mean /= static_cast<double>(maxima.size());
        stats.max_mean = max_mean;
        if (maxima.size() >= 2) {
            double ss = 0.0;
            for (double m : maxima) ss += (m - max_mean) * (m - max_mean);
            stats.max_var = ss / static_cast<double>(maxima.size() - 1);
        }
        try {
            stats.gumbel = fit_gumbel(maxima);
        } catch (const ValidationError& e) {
            result.warnings.push_back("kind '" + std::string(to_string(kind)) +
                                      "': gumbel fit unavailable: " + e.what());
        }
        result.model.kinds[kind] = stats;
    }
    return result;
}

namespace {

void check_identities(const KindStats& stats, std::string_view kind_name) {
    if (!stats.gumbel) return;
    double beta_sq = stats.gumbel->beta * stats.gumbel->beta;
    double expected_beta_sq = 6.0 * stats.max_var / (std::numbers::pi * std::numbers::pi);
    if (std::abs(beta_sq - expected_beta_sq) >
        1e-12 * std::max(std::abs(beta_sq), std::abs(expected_beta_sq)))
        throw ValidationError("threshold model: beta^2 != 6*var/pi^2 for kind '" +
                              std::string(kind_name) + "'");
    double expected_mu = stats.max_mean - kEulerMascheroni * stats.gumbel->beta;
    double scale = std::max({std::abs(expected_mu), std::abs(stats.gumbel->mu), 1e-300});
    if (std::abs(stats.gumbel->mu - expected_mu) > 1e-12 * scale)
        throw ValidationError("threshold model: mu != max_mean - gamma*beta for kind '" +
                              std::string(kind_name) + "'");
}

} // namespace

void save_threshold_model(const ThresholdModel& model, const std::filesystem::path& path) {
    ordered_json doc;
    doc["mode"] = model.mode == ThresholdMode::simple ? "simple" : "gumbel";
    doc["confidence"] = model.confidence;
    doc["kinds"] = ordered_json::object();
    for (const auto& [kind, stats] : model.kinds) {
        check_identities(stats, to_string(kind));
        ordered_json entry;
        entry["mean"] = stats.mean;
        entry["max_mean"] = stats.max_mean;
        entry["max_var"] = stats.max_var;
        if (stats.gumbel) {
            entry["mu"] = stats.gumbel->mu;
            entry["beta"] = stats.gumbel->beta;
        } else {
            entry["mu"] = nullptr;
            entry["beta"] = nullptr;
        }
        doc["kinds"][std::string(to_string(kind))] = entry;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write threshold file: " + path.string());
    out << doc.dump(2) << '\n';
}

ThresholdModel load_threshold_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open threshold file: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("threshold file " + path.string() + ": " + e.what());
    }

    ThresholdModel model;
    std::string mode = doc.value("mode", "simple");
    if (mode == "simple")
        model.mode = ThresholdMode::simple;
    else if (mode == "gumbel")
        model.mode = ThresholdMode::gumbel;
    else
        throw ParseError("threshold file: unknown mode '" + mode + "'");
    model.confidence = doc.value("confidence", 0.5);

    if (!doc.contains("kinds") || !doc["kinds"].is_object())
        throw ParseError("threshold file: missing 'kinds' object");
    for (const auto& [name, entry] : doc["kinds"].items()) {
        TransformationKind kind = transformation_kind_from_string(name);
        KindStats stats;
        stats.mean = entry.at("mean").get<double>();
        stats.max_mean = entry.at("max_mean").get<double>();
        stats.max_var = entry.at("max_var").get<double>();
        if (entry.contains("mu") && !entry.at("mu").is_null()) {
            GumbelParams params;
            params.mu = entry.at("mu").get<double>();
            params.beta = entry.at("beta").get<double>();
            if (params.beta <= 0.0)
                throw ValidationError("threshold file: beta must be > 0");
            stats.gumbel = params;
        }
        check_identities(stats, name);
        model.kinds[kind] = stats;
    }
    return model;
}

void save_score_samples(std::span<const ScoreSample> samples,
                        const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write sample file: " + path.string());
    out << "kind,article_id,attempt,score\n";
    for (const ScoreSample& s : samples)
        out << to_string(s.kind) << ',' << s.article_id << ',' << s.attempt << ','
            << format_double(s.score) << '\n';
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

} // namespace

std::vector<ScoreSample> load_score_samples(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sample file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "kind,article_id,attempt,score")
        throw ParseError("sample file " + path.string() + ": bad header");
    std::vector<ScoreSample> samples;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 4)
            throw ParseError("sample file line " + std::to_string(line_no) +
                             ": expected 4 fields");
        try {
            samples.push_back(ScoreSample{transformation_kind_from_string(fields[0]),
                                          fields[1], static_cast<int>(parse_long(fields[2])),
                                          parse_double(fields[3])});
        } catch (const std::invalid_argument& e) {
            throw ParseError("sample file line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return samples;
}

void save_max_samples(std::span<const MaxSample> samples,
                      const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write sample file: " + path.string());
    out << "kind,article_id,max_score\n";
    for (const MaxSample& s : samples)
        out << to_string(s.kind) << ',' << s.article_id << ',' << format_double(s.max_score)
            << '\n';
}

std::vector<MaxSample> load_max_samples(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sample file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "kind,article_id,max_score")
        throw ParseError("sample file " + path.string() + ": bad header");
    std::vector<MaxSample> samples;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw ParseError("sample file line " + std::to_string(line_no) +
                             ": expected 3 fields");
        try {
            samples.push_back(MaxSample{transformation_kind_from_string(fields[0]), fields[1],
                                        parse_double(fields[2])});
        } catch (const std::invalid_argument& e) {
            throw ParseError("sample file line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return samples;
}

} // namespace dgot
