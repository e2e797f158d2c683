#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dgot/corpus.hpp"
#include "dgot/gateway.hpp"
#include "dgot/prompt.hpp"
#include "dgot/thought.hpp"

namespace dgot {

/// Euler-Mascheroni constant, stored to 10 decimal places.
inline constexpr double kEulerMascheroni = 0.5772156649;

/// One scored node observed while training.
struct ScoreSample {
    TransformationKind kind = TransformationKind::generate;
    std::string article_id;
    int attempt = 1;
    double score = 0.0;
};

/// Per-article maximum of a transformation's scores; the data the Gumbel
/// fit models.
struct MaxSample {
    TransformationKind kind = TransformationKind::generate;
    std::string article_id;
    double max_score = 0.0;
};

struct GumbelParams {
    double mu = 0.0;
    double beta = 1.0;
};

/// Fitted statistics for one transformation kind. The Gumbel parameters are
/// absent when the maxima were constant (degenerate distribution).
struct KindStats {
    double mean = 0.0;     // mean of all scores of this kind
    double max_mean = 0.0; // mean of per-article maxima
    double max_var = 0.0;  // unbiased variance of per-article maxima
    std::optional<GumbelParams> gumbel;
};

enum class ThresholdMode { simple, gumbel };

/// Trained per-kind statistics plus the threshold mapping mode used at
/// reasoning time. Persisted models always satisfy beta^2 == 6*max_var/pi^2
/// and mu == max_mean - gamma*beta (1e-12 relative).
struct ThresholdModel {
    std::map<TransformationKind, KindStats> kinds;
    ThresholdMode mode = ThresholdMode::simple;
    double confidence = 0.5; // Gumbel confidence p, used when mode == gumbel
};

/// Method-of-moments Gumbel fit: beta = sqrt(6*var/pi^2) with the unbiased
/// variance estimator, mu = mean - gamma*beta. Needs >= 2 samples with
/// positive variance; constant samples throw ValidationError.
GumbelParams fit_gumbel(std::span<const double> max_samples);

/// F(x; mu, beta) = exp(-exp(-(x-mu)/beta)). beta must be > 0.
double gumbel_cdf(double x, double mu, double beta);

/// p(x; mu, beta) = (1/beta) exp(-(z + exp(-z))), z = (x-mu)/beta.
double gumbel_pdf(double x, double mu, double beta);

/// Score at which the fitted maximum has been reached with confidence p:
/// mu - beta*ln(-ln p). p must lie in (0, 1).
double gumbel_threshold(double mu, double beta, double p);

/// Mean of all recorded scores of a kind. Throws when the kind is unfitted.
double simple_threshold(const ThresholdModel& model, TransformationKind kind);

/// Resolves the stopping bar for a kind under the model's mode.
double threshold_for(const ThresholdModel& model, TransformationKind kind);

struct TrainOptions {
    int k = 3;
    PromptBudget budget;
    int max_response_tokens = 1024;
    double rate_in = kDefaultRateIn;
    double rate_out = kDefaultRateOut;
};

struct TrainingResult {
    ThresholdModel model;
    std::vector<ScoreSample> samples;        // ordered by (article_id, kind, attempt)
    std::vector<MaxSample> max_samples;      // ordered by (article_id, kind)
    std::vector<std::string> warnings;       // skipped articles, unfittable kinds
    UsageLedger ledger;
};

/// The training process: drives a fixed graph-of-thought run (k edges per
/// transformation) over every article of a train corpus, records each node's
/// score and the per-article per-kind maxima, and fits Simple and Gumbel
/// statistics per kind. Articles whose backend fails are skipped with a
/// warning; zero successful articles is an error.
TrainingResult train(const Corpus& corpus, const BackendFactory& make_backend,
                     const TemplateSet& templates, const TrainOptions& options);

void save_threshold_model(const ThresholdModel& model, const std::filesystem::path& path);

/// Loads and re-validates the persisted identities. Throws ValidationError
/// when beta/mu do not match the stored moments.
ThresholdModel load_threshold_model(const std::filesystem::path& path);

void save_score_samples(std::span<const ScoreSample> samples, const std::filesystem::path& path);
std::vector<ScoreSample> load_score_samples(const std::filesystem::path& path);

void save_max_samples(std::span<const MaxSample> samples, const std::filesystem::path& path);
std::vector<MaxSample> load_max_samples(const std::filesystem::path& path);

} // namespace dgot
