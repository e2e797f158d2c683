#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dgot/corpus.hpp"
#include "dgot/engine.hpp"
#include "dgot/errors.hpp"
#include "dgot/gateway.hpp"
#include "dgot/rng.hpp"
#include "dgot/rouge.hpp"
#include "dgot/threshold.hpp"

namespace py = pybind11;
using namespace dgot;

namespace {

Split split_from(const std::string& name) {
    if (name == "train") return Split::train;
    if (name == "test") return Split::test;
    throw ArgumentError("split must be 'train' or 'test'");
}

py::dict score_dict(const RougeScore& s) {
    py::dict d;
    d["precision"] = s.precision;
    d["recall"] = s.recall;
    d["f1"] = s.f1;
    return d;
}

py::dict model_dict(const ThresholdModel& model) {
    py::dict kinds;
    for (const auto& [kind, stats] : model.kinds) {
        py::dict entry;
        entry["mean"] = stats.mean;
        entry["max_mean"] = stats.max_mean;
        entry["max_var"] = stats.max_var;
        if (stats.gumbel) {
            entry["mu"] = stats.gumbel->mu;
            entry["beta"] = stats.gumbel->beta;
        } else {
            entry["mu"] = py::none();
            entry["beta"] = py::none();
        }
        kinds[py::str(std::string(to_string(kind)))] = entry;
    }
    return kinds;
}

ThresholdModel model_from(const py::dict& thresholds, const std::string& mode,
                          double confidence) {
    ThresholdModel model;
    model.mode = mode == "gumbel" ? ThresholdMode::gumbel : ThresholdMode::simple;
    model.confidence = confidence;
    for (auto item : thresholds) {
        TransformationKind kind =
            transformation_kind_from_string(py::cast<std::string>(item.first));
        py::dict entry = py::cast<py::dict>(item.second);
        KindStats stats;
        stats.mean = py::cast<double>(entry["mean"]);
        if (entry.contains("max_mean")) stats.max_mean = py::cast<double>(entry["max_mean"]);
        if (entry.contains("max_var")) stats.max_var = py::cast<double>(entry["max_var"]);
        if (entry.contains("mu") && !entry["mu"].is_none()) {
            GumbelParams params;
            params.mu = py::cast<double>(entry["mu"]);
            params.beta = py::cast<double>(entry["beta"]);
            stats.gumbel = params;
        }
        model.kinds[kind] = stats;
    }
    return model;
}

py::dict run_article(const Article& article, const std::string& strategy, int k, int levels,
                     std::uint64_t seed, long budget, double coverage_lo, double coverage_hi,
                     py::object thresholds, const std::string& threshold_mode,
                     double confidence) {
    StrategyConfig config;
    config.strategy = strategy_from_string(strategy);
    config.k = k;
    config.levels = levels;
    if (!thresholds.is_none())
        config.thresholds =
            model_from(py::cast<py::dict>(thresholds), threshold_mode, confidence);

    SyntheticBackend backend(mix_seed(seed, fnv1a64(article.id)),
                             CoverageDistribution{coverage_lo, coverage_hi});
    TemplateSet templates = TemplateSet::builtin();
    RunInputs inputs;
    inputs.view = reasoning_view(article);
    inputs.backend = &backend;
    inputs.templates = &templates;
    inputs.budget = PromptBudget{budget};

    RunOutcome outcome = run_strategy(config, inputs);
    py::dict result;
    result["best_text"] = outcome.best.text;
    result["best_score"] = outcome.best.score.value_or(0.0);
    py::dict queries;
    for (const auto& [kind, count] : outcome.queries_by_kind)
        queries[py::str(std::string(to_string(kind)))] = count;
    result["queries"] = queries;
    result["prompt_tokens"] = outcome.ledger.total_prompt_tokens();
    result["response_tokens"] = outcome.ledger.total_response_tokens();
    result["cost"] = outcome.ledger.cost();
    result["truncated"] = outcome.any_prompt_truncated;
    return result;
}

py::dict train_thresholds(const Corpus& corpus, int k, std::uint64_t seed) {
    BackendFactory factory = [seed](const std::string& id) {
        return std::make_shared<SyntheticBackend>(mix_seed(seed, fnv1a64(id)));
    };
    TemplateSet templates = TemplateSet::builtin();
    TrainOptions options;
    options.k = k;
    TrainingResult result = train(corpus, factory, templates, options);
    return model_dict(result.model);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Threshold-gated graph-of-thought abstract generation core";

    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_RuntimeError);

    py::class_<Section>(m, "Section")
        .def(py::init<>())
        .def_readwrite("heading", &Section::heading)
        .def_readwrite("body", &Section::body);

    py::class_<Reference>(m, "Reference")
        .def(py::init<>())
        .def_readwrite("title", &Reference::title)
        .def_readwrite("abstract", &Reference::abstract);

    py::class_<Article>(m, "Article")
        .def(py::init<>())
        .def_readwrite("id", &Article::id)
        .def_readwrite("title", &Article::title)
        .def_readwrite("abstract", &Article::abstract)
        .def_readwrite("introduction", &Article::introduction)
        .def_readwrite("other_sections", &Article::other_sections)
        .def_readwrite("references", &Article::references);

    py::class_<Corpus>(m, "Corpus")
        .def(py::init<>())
        .def_readwrite("articles", &Corpus::articles)
        .def_property(
            "split",
            [](const Corpus& c) { return std::string(to_string(c.split)); },
            [](Corpus& c, const std::string& s) { c.split = split_from(s); })
        .def("__len__", [](const Corpus& c) { return c.articles.size(); });

    m.def("tokenize", [](const std::string& text) { return tokenize(text); },
          py::arg("text"), "Lowercase word tokens split on non-alphanumeric runs.");
    m.def("approx_token_count",
          [](const std::string& text) { return approx_token_count(text); },
          py::arg("text"));

    m.def("rouge_1",
          [](const std::string& c, const std::string& r) {
              return score_dict(rouge_n_text(c, r, 1));
          },
          py::arg("candidate"), py::arg("reference"));
    m.def("rouge_2",
          [](const std::string& c, const std::string& r) {
              return score_dict(rouge_n_text(c, r, 2));
          },
          py::arg("candidate"), py::arg("reference"));
    m.def("rouge_l",
          [](const std::string& c, const std::string& r) {
              return score_dict(rouge_l_text(c, r));
          },
          py::arg("candidate"), py::arg("reference"));

    m.def("fit_gumbel",
          [](const std::vector<double>& samples) {
              GumbelParams p = fit_gumbel(samples);
              return py::make_tuple(p.mu, p.beta);
          },
          py::arg("max_samples"), "Method-of-moments (mu, beta) fit.");
    m.def("gumbel_cdf", &gumbel_cdf, py::arg("x"), py::arg("mu"), py::arg("beta"));
    m.def("gumbel_pdf", &gumbel_pdf, py::arg("x"), py::arg("mu"), py::arg("beta"));
    m.def("gumbel_threshold", &gumbel_threshold, py::arg("mu"), py::arg("beta"),
          py::arg("p"), "Score reached with confidence p: mu - beta*ln(-ln p).");

    m.def("synthesize_corpus",
          [](int n, std::uint64_t seed, int vocab_size, double overlap,
             const std::string& split) {
              SynthesisOptions options;
              options.overlap = overlap;
              options.split = split_from(split);
              return synthesize_corpus(n, seed, vocab_size, options);
          },
          py::arg("n"), py::arg("seed"), py::arg("vocab_size"), py::arg("overlap") = 0.6,
          py::arg("split") = "train");
    m.def("load_corpus",
          [](const std::filesystem::path& path, const std::string& split) {
              return load_corpus(path, split_from(split));
          },
          py::arg("path"), py::arg("split"));
    m.def("save_corpus", &save_corpus, py::arg("corpus"), py::arg("path"));

    m.def("train_thresholds", &train_thresholds, py::arg("corpus"), py::arg("k") = 3,
          py::arg("seed") = 0,
          "Fixed graph-of-thought training pass over a train corpus with the "
          "synthetic backend; returns per-kind statistics.");

    m.def("run_article", &run_article, py::arg("article"), py::arg("strategy") = "dgot",
          py::arg("k") = 3, py::arg("levels") = 3, py::arg("seed") = 0,
          py::arg("budget") = 20000, py::arg("coverage_lo") = 0.2,
          py::arg("coverage_hi") = 0.8, py::arg("thresholds") = py::none(),
          py::arg("threshold_mode") = "simple", py::arg("confidence") = 0.5,
          "Run one strategy over a single article with the synthetic backend.");
}
