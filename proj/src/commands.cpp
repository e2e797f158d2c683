#include "dgot/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "dgot/errors.hpp"
#include "dgot/format.hpp"
#include "dgot/rng.hpp"
#include "dgot/rouge.hpp"
#include "dgot/threshold.hpp"

namespace dgot {

using nlohmann::json;
using nlohmann::ordered_json;

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }

    RunConfig config;
    auto get_string = [&](const char* key, std::string& into) {
        if (doc.contains(key)) into = doc.at(key).get<std::string>();
    };
    auto get_double = [&](const char* key, double& into) {
        if (doc.contains(key)) into = doc.at(key).get<double>();
    };
    auto get_int = [&](const char* key, int& into) {
        if (doc.contains(key)) into = doc.at(key).get<int>();
    };

    static const char* known[] = {
        "train_corpus", "test_corpus", "strategy", "k", "levels", "h", "budget",
        "max_response_tokens", "backend", "script_file", "coverage_lo", "coverage_hi",
        "rate_in", "rate_out", "threshold_mode", "gumbel_p", "thresholds_file",
        "templates_dir", "out_dir", "seed", "workers", "wire_base_url", "wire_api_key",
        "model"};
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) == std::end(known))
            throw ConfigError("config file: unknown key '" + key + "'");
    }

    get_string("train_corpus", config.train_corpus);
    get_string("test_corpus", config.test_corpus);
    get_string("strategy", config.strategy);
    get_int("k", config.k);
    get_int("levels", config.levels);
    if (doc.contains("h")) config.h = doc.at("h").get<int>();
    if (doc.contains("budget")) config.budget = doc.at("budget").get<long>();
    get_int("max_response_tokens", config.max_response_tokens);
    get_string("backend", config.backend);
    get_string("script_file", config.script_file);
    get_double("coverage_lo", config.coverage_lo);
    get_double("coverage_hi", config.coverage_hi);
    get_double("rate_in", config.rate_in);
    get_double("rate_out", config.rate_out);
    get_string("threshold_mode", config.threshold_mode);
    get_double("gumbel_p", config.gumbel_p);
    get_string("thresholds_file", config.thresholds_file);
    get_string("templates_dir", config.templates_dir);
    get_string("out_dir", config.out_dir);
    if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
    get_int("workers", config.workers);
    get_string("wire_base_url", config.wire_base_url);
    get_string("wire_api_key", config.wire_api_key);
    get_string("model", config.model);
    return config;
}

void RunConfig::apply_environment() {
    if (wire_base_url.empty())
        if (const char* base = std::getenv("DGOT_API_BASE")) wire_base_url = base;
    if (wire_api_key.empty())
        if (const char* key = std::getenv("DGOT_API_KEY")) wire_api_key = key;
}

namespace {

void validate_common(const RunConfig& config) {
    if (config.budget < 1) throw ConfigError("budget must be >= 1");
    if (config.workers < 1) throw ConfigError("workers must be >= 1");
    if (config.threshold_mode != "simple" && config.threshold_mode != "gumbel")
        throw ConfigError("threshold_mode must be 'simple' or 'gumbel'");
    if (config.threshold_mode == "gumbel" &&
        (config.gumbel_p <= 0.0 || config.gumbel_p >= 1.0))
        throw ConfigError("gumbel_p must lie in (0, 1)");
    if (config.coverage_lo < 0.0 || config.coverage_hi > 1.0 ||
        config.coverage_lo > config.coverage_hi)
        throw ConfigError("coverage bounds must satisfy 0 <= lo <= hi <= 1");
    if (config.backend != "synthetic" && config.backend != "scripted" &&
        config.backend != "wire")
        throw ConfigError("backend must be synthetic, scripted or wire");
}

std::vector<std::string> load_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open script file: " + path);
    std::vector<std::string> script;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '"') {
            try {
                script.push_back(json::parse(line).get<std::string>());
            } catch (const json::exception& e) {
                throw ConfigError("script file: bad JSON string line: " +
                                  std::string(e.what()));
            }
        } else {
            script.push_back(line);
        }
    }
    if (script.empty()) throw ConfigError("script file is empty: " + path);
    return script;
}

BackendFactory make_backend_factory(const RunConfig& config) {
    if (config.backend == "synthetic") {
        CoverageDistribution coverage{config.coverage_lo, config.coverage_hi};
        std::uint64_t seed = config.seed;
        return [seed, coverage](const std::string& article_id) {
            return std::make_shared<SyntheticBackend>(mix_seed(seed, fnv1a64(article_id)),
                                                      coverage);
        };
    }
    if (config.backend == "scripted") {
        if (config.script_file.empty())
            throw ConfigError("scripted backend needs script_file / --script");
        auto script = load_script(config.script_file);
        // Fresh backend per article: every article replays the same script.
        return [script](const std::string&) {
            return std::make_shared<ScriptedBackend>(script);
        };
    }
    HttpBackendOptions options;
    options.base_url = config.wire_base_url;
    options.api_key = config.wire_api_key;
    options.model = config.model;
    auto shared = std::make_shared<HttpBackend>(options);
    return [shared](const std::string&) { return shared; };
}

TemplateSet load_templates(const RunConfig& config) {
    if (config.templates_dir.empty()) return TemplateSet::builtin();
    return TemplateSet::from_directory(config.templates_dir);
}

StrategyConfig make_strategy_config(const RunConfig& config) {
    StrategyConfig strategy;
    strategy.strategy = strategy_from_string(config.strategy);
    strategy.k = config.k;
    strategy.levels = config.levels;
    strategy.h = config.h;
    if (strategy.strategy == Strategy::dgot) {
        if (config.thresholds_file.empty())
            throw ConfigError("dgot requires a trained threshold file (--thresholds)");
        ThresholdModel model = load_threshold_model(config.thresholds_file);
        model.mode = config.threshold_mode == "simple" ? ThresholdMode::simple
                                                       : ThresholdMode::gumbel;
        model.confidence = config.gumbel_p;
        strategy.thresholds = std::move(model);
    }
    strategy.validate();
    return strategy;
}

std::vector<ArticleOutcome> run_over_corpus(const Corpus& corpus, const RunConfig& config,
                                            const StrategyConfig& strategy,
                                            const TemplateSet& templates,
                                            const BackendFactory& make_backend) {
    std::vector<ArticleOutcome> outcomes(corpus.articles.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= corpus.articles.size()) return;
            {
                std::lock_guard lock(failure_mutex);
                if (failure) return;
            }
            const Article& article = corpus.articles[i];
            try {
                std::shared_ptr<Backend> backend = make_backend(article.id);
                RunInputs inputs;
                inputs.view = reasoning_view(article);
                inputs.backend = backend.get();
                inputs.templates = &templates;
                inputs.budget = PromptBudget{config.budget};
                inputs.max_response_tokens = config.max_response_tokens;
                inputs.rate_in = config.rate_in;
                inputs.rate_out = config.rate_out;
                outcomes[i] = ArticleOutcome{article.id, run_strategy(strategy, inputs)};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    int workers = std::min<int>(config.workers, static_cast<int>(corpus.articles.size()));
    workers = std::max(workers, 1);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::sort(outcomes.begin(), outcomes.end(),
              [](const ArticleOutcome& a, const ArticleOutcome& b) {
                  return a.article_id < b.article_id;
              });
    return outcomes;
}

// --out may name the thresholds file itself (train --out thresholds.json) or
// a directory all training artifacts land in.
std::pair<std::filesystem::path, std::filesystem::path> train_paths(
    const std::string& out) {
    std::filesystem::path out_path(out);
    if (out_path.extension() == ".json") {
        std::filesystem::path dir = out_path.parent_path();
        if (dir.empty()) dir = ".";
        return {out_path, dir};
    }
    return {out_path / "thresholds.json", out_path};
}

void write_summary_json(const MethodResult& result, const RunConfig& config,
                        const std::filesystem::path& path) {
    ordered_json doc;
    doc["method"] = result.method;
    doc["articles"] = result.articles;
    doc["mean_r1_abstract"] = result.mean_r1_abstract;
    doc["mean_r2_abstract"] = result.mean_r2_abstract;
    doc["mean_rl_abstract"] = result.mean_rl_abstract;
    doc["mean_r1_intro"] = result.mean_r1_intro;
    doc["mean_best_score"] = result.mean_best_score;
    doc["mean_prompt_tokens"] = result.mean_prompt_tokens;
    doc["mean_response_tokens"] = result.mean_response_tokens;
    doc["mean_cost"] = result.mean_cost;
    doc["k"] = config.k;
    doc["levels"] = config.levels;
    doc["budget"] = config.budget;
    doc["backend"] = config.backend;
    doc["seed"] = config.seed;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write summary file: " + path.string());
    out << doc.dump(2) << '\n';
}

} // namespace

void cmd_train(const RunConfig& config) {
    validate_common(config);
    if (config.train_corpus.empty())
        throw ConfigError("train needs a train corpus (--corpus / train_corpus)");
    if (config.k < 1) throw ConfigError("k must be >= 1");

    Corpus corpus = load_corpus(config.train_corpus, Split::train);
    TemplateSet templates = load_templates(config);
    BackendFactory factory = make_backend_factory(config);

    TrainOptions options;
    options.k = config.k;
    options.budget = PromptBudget{config.budget};
    options.max_response_tokens = config.max_response_tokens;
    options.rate_in = config.rate_in;
    options.rate_out = config.rate_out;

    TrainingResult result = train(corpus, factory, templates, options);
    result.model.mode = config.threshold_mode == "simple" ? ThresholdMode::simple
                                                          : ThresholdMode::gumbel;
    result.model.confidence = config.gumbel_p;

    auto [thresholds_path, out_dir] = train_paths(config.out_dir);
    std::filesystem::create_directories(out_dir);
    save_threshold_model(result.model, thresholds_path);
    save_score_samples(result.samples, out_dir / "samples.csv");
    save_max_samples(result.max_samples, out_dir / "max_samples.csv");
    export_distributions(result.samples, result.max_samples, result.model, out_dir);

    for (const std::string& warning : result.warnings)
        std::cerr << "warning: " << warning << '\n';
    std::cout << "trained on " << corpus.articles.size() << " articles; "
              << result.samples.size() << " samples; thresholds written to "
              << thresholds_path.string() << '\n';
}

RunArtifacts cmd_run(const RunConfig& config) {
    validate_common(config);
    if (config.test_corpus.empty())
        throw ConfigError("run needs a test corpus (--corpus / test_corpus)");

    Corpus corpus = load_corpus(config.test_corpus, Split::test);
    TemplateSet templates = load_templates(config);
    StrategyConfig strategy = make_strategy_config(config);
    BackendFactory factory = make_backend_factory(config);

    auto outcomes = run_over_corpus(corpus, config, strategy, templates, factory);

    RunArtifacts artifacts;
    artifacts.rows = per_article_rows(config.strategy, outcomes, corpus);
    artifacts.summary = summarize(config.strategy, artifacts.rows);

    std::filesystem::path out_dir(config.out_dir);
    std::filesystem::create_directories(out_dir);
    save_rows_csv(artifacts.rows, out_dir / ("rows_" + config.strategy + ".csv"));
    write_summary_json(artifacts.summary, config,
                       out_dir / ("summary_" + config.strategy + ".json"));

    std::cout << config.strategy << ": articles=" << artifacts.summary.articles
              << " r1_abstract=" << format_double(artifacts.summary.mean_r1_abstract)
              << " r1_intro=" << format_double(artifacts.summary.mean_r1_intro)
              << " mean_cost=" << format_double(artifacts.summary.mean_cost) << '\n';
    return artifacts;
}

void cmd_sweep(const RunConfig& config, const std::string& axis,
               const std::vector<long>& values) {
    validate_common(config);
    if (axis != "budget" && axis != "k")
        throw ArgumentError("sweep axis must be 'budget' or 'k'");
    if (values.empty()) throw ArgumentError("sweep needs at least one axis value");

    std::filesystem::path out_dir(config.out_dir);
    std::filesystem::create_directories(out_dir);

    std::ofstream table(out_dir / ("sweep_" + axis + ".csv"), std::ios::binary);
    if (!table) throw ConfigError("cannot write sweep table");
    table << axis
          << ",cut_ratio,mean_r1_abstract,mean_r2_abstract,mean_rl_abstract,mean_r1_intro,"
             "mean_prompt_tokens,mean_response_tokens,mean_cost\n";

    for (long value : values) {
        RunConfig point = config;
        if (axis == "budget")
            point.budget = value;
        else
            point.k = static_cast<int>(value);
        point.out_dir = (out_dir / (axis + "_" + std::to_string(value))).string();

        RunArtifacts artifacts = cmd_run(point);
        double truncated = 0.0;
        for (const ArticleRow& row : artifacts.rows)
            if (row.truncated) truncated += 1.0;
        double cut_ratio =
            artifacts.rows.empty() ? 0.0 : truncated / static_cast<double>(artifacts.rows.size());

        table << value << ',' << format_double(cut_ratio) << ','
              << format_double(artifacts.summary.mean_r1_abstract) << ','
              << format_double(artifacts.summary.mean_r2_abstract) << ','
              << format_double(artifacts.summary.mean_rl_abstract) << ','
              << format_double(artifacts.summary.mean_r1_intro) << ','
              << format_double(artifacts.summary.mean_prompt_tokens) << ','
              << format_double(artifacts.summary.mean_response_tokens) << ','
              << format_double(artifacts.summary.mean_cost) << '\n';
    }
}

void cmd_report(const std::string& runs_dir, const std::string& out_path) {
    std::filesystem::path dir(runs_dir);
    if (!std::filesystem::is_directory(dir))
        throw ConfigError("runs directory does not exist: " + runs_dir);

    std::vector<std::filesystem::path> row_files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.rfind("rows_", 0) == 0 && entry.path().extension() == ".csv")
            row_files.push_back(entry.path());
    }
    std::sort(row_files.begin(), row_files.end());
    if (row_files.empty())
        throw ValidationError("no rows_*.csv files under " + runs_dir);

    std::map<std::string, std::vector<ArticleRow>> by_method;
    for (const auto& file : row_files)
        for (ArticleRow& row : load_rows_csv(file))
            by_method[row.method].push_back(std::move(row));

    // Stable report order: single-round methods first, then multi-round.
    std::vector<std::string> order = {"io", "cot", "tot", "got", "dgot"};
    for (const auto& [method, rows] : by_method)
        if (std::find(order.begin(), order.end(), method) == order.end())
            order.push_back(method);

    std::vector<MethodResult> results;
    for (const std::string& method : order) {
        auto it = by_method.find(method);
        if (it != by_method.end()) results.push_back(summarize(method, it->second));
    }

    const MethodResult* baseline = nullptr;
    for (const MethodResult& r : results)
        if (is_single_round(r.method) &&
            (!baseline || r.mean_r1_abstract > baseline->mean_r1_abstract))
            baseline = &r;

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write report file: " + out_path);
    out << "method,articles,r1_abstract,r2_abstract,rl_abstract,r1_intro,prompt_tokens,"
           "response_tokens,cost,extra_cost,score_gain,cost_effectiveness\n";
    for (const MethodResult& r : results) {
        out << r.method << ',' << r.articles << ',' << format_double(r.mean_r1_abstract)
            << ',' << format_double(r.mean_r2_abstract) << ','
            << format_double(r.mean_rl_abstract) << ',' << format_double(r.mean_r1_intro)
            << ',' << format_double(r.mean_prompt_tokens) << ','
            << format_double(r.mean_response_tokens) << ',' << format_double(r.mean_cost);
        if (baseline && !is_single_round(r.method)) {
            CostEffectiveness ce = cost_effectiveness(r, *baseline);
            out << ',' << format_double(ce.extra_cost) << ',' << format_double(ce.score_gain)
                << ',' << (ce.value ? format_double(*ce.value) : "undefined");
        } else {
            out << ",,,";
        }
        out << '\n';
    }

    std::cout << "report written to " << out_path << " (" << results.size()
              << " methods";
    if (baseline) std::cout << ", baseline " << baseline->method;
    std::cout << ")\n";
}

void cmd_rouge(const std::string& candidate_path, const std::string& reference_path) {
    auto read_file = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot open file: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    std::string candidate = read_file(candidate_path);
    std::string reference = read_file(reference_path);

    auto cand = tokenize(candidate);
    auto ref = tokenize(reference);
    auto pack = [](const RougeScore& s) {
        return ordered_json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
    };
    ordered_json doc;
    doc["r1"] = pack(rouge_n(cand, ref, 1));
    doc["r2"] = pack(rouge_n(cand, ref, 2));
    doc["rl"] = pack(rouge_l(cand, ref));
    std::cout << doc.dump() << '\n';
}

namespace {

void add_common_options(CLI::App* cmd, RunConfig& config) {
    cmd->add_option("--out", config.out_dir, "Output directory");
    cmd->add_option("--seed", config.seed, "Deterministic seed for mock backends");
    cmd->add_option("--workers", config.workers, "Article-level parallelism");
    cmd->add_option("--templates", config.templates_dir, "Directory of template overrides");
    cmd->add_option("--backend", config.backend, "synthetic | scripted | wire");
    cmd->add_option("--script", config.script_file, "Scripted backend response file");
    cmd->add_option("--budget", config.budget, "Prompt token budget");
    cmd->add_option("--max-response-tokens", config.max_response_tokens,
                    "Response token cap sent to the backend");
    cmd->add_option("--rate-in", config.rate_in, "Cost per prompt token");
    cmd->add_option("--rate-out", config.rate_out, "Cost per response token");
    cmd->add_option("--coverage-lo", config.coverage_lo, "Synthetic coverage lower bound");
    cmd->add_option("--coverage-hi", config.coverage_hi, "Synthetic coverage upper bound");
    cmd->add_option("--model", config.model, "Model name sent to wire backends");
}

} // namespace

int run_cli(int argc, char** argv) {
    RunConfig config;
    // --config is applied before the remaining flags so they override it.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string_view(argv[i]) == "--config") {
            try {
                config = RunConfig::from_json_file(argv[i + 1]);
            } catch (const ConfigError& e) {
                std::cerr << "error: " << e.what() << '\n';
                return kExitConfig;
            }
            break;
        }
    }

    CLI::App app{"Threshold-gated graph-of-thought abstract generation"};
    // -h is taken by the ranker keep-count option (--h), so help is --help only.
    app.set_help_flag("--help", "Print help and exit");
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON configuration file")
        ->expected(1);

    CLI::App* train_cmd = app.add_subcommand("train", "Fit stopping thresholds on a train corpus");
    train_cmd->add_option("--corpus", config.train_corpus, "Train corpus (JSON lines)");
    train_cmd->add_option("--k", config.k, "Edges per transformation");
    train_cmd->add_option("--threshold-mode", config.threshold_mode, "simple | gumbel");
    train_cmd->add_option("--gumbel-p", config.gumbel_p, "Gumbel confidence in (0,1)");
    add_common_options(train_cmd, config);

    CLI::App* run_cmd = app.add_subcommand("run", "Run a strategy over a test corpus");
    run_cmd->set_help_flag("--help", "Print help and exit");
    run_cmd->add_option("--corpus", config.test_corpus, "Test corpus (JSON lines)");
    run_cmd->add_option("--strategy", config.strategy, "io | cot | tot | got | dgot");
    run_cmd->add_option("--k", config.k, "Edges per transformation");
    run_cmd->add_option("--levels", config.levels, "Tree depth (tot)");
    int h_value = 0;
    CLI::Option* h_opt = run_cmd->add_option("--h", h_value, "Ranker keep-count");
    run_cmd->add_option("--thresholds", config.thresholds_file, "Trained threshold file");
    run_cmd->add_option("--threshold-mode", config.threshold_mode, "simple | gumbel");
    run_cmd->add_option("--gumbel-p", config.gumbel_p, "Gumbel confidence in (0,1)");
    add_common_options(run_cmd, config);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run one strategy across budget or k values");
    sweep_cmd->set_help_flag("--help", "Print help and exit");
    std::string axis;
    std::string values_text;
    sweep_cmd->add_option("--corpus", config.test_corpus, "Test corpus (JSON lines)");
    sweep_cmd->add_option("--strategy", config.strategy, "io | cot | tot | got | dgot");
    sweep_cmd->add_option("--axis", axis, "budget | k")->required();
    sweep_cmd->add_option("--values", values_text, "Comma-separated axis values")->required();
    sweep_cmd->add_option("--k", config.k, "Edges per transformation");
    sweep_cmd->add_option("--levels", config.levels, "Tree depth (tot)");
    CLI::Option* sweep_h_opt = sweep_cmd->add_option("--h", h_value, "Ranker keep-count");
    sweep_cmd->add_option("--thresholds", config.thresholds_file, "Trained threshold file");
    sweep_cmd->add_option("--threshold-mode", config.threshold_mode, "simple | gumbel");
    sweep_cmd->add_option("--gumbel-p", config.gumbel_p, "Gumbel confidence in (0,1)");
    add_common_options(sweep_cmd, config);

    CLI::App* report_cmd = app.add_subcommand("report", "Aggregate per-run rows into a report");
    std::string runs_dir;
    std::string report_out = "report.csv";
    report_cmd->add_option("--runs", runs_dir, "Directory of rows_*.csv files")->required();
    report_cmd->add_option("--out", report_out, "Report CSV path");

    CLI::App* rouge_cmd = app.add_subcommand("rouge", "Score a candidate file against a reference");
    std::string candidate_path;
    std::string reference_path;
    rouge_cmd->add_option("--candidate", candidate_path, "Candidate text file")->required();
    rouge_cmd->add_option("--reference", reference_path, "Reference text file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        config.apply_environment();
        if (h_opt->count() > 0 || sweep_h_opt->count() > 0) config.h = h_value;
        if (train_cmd->parsed()) {
            cmd_train(config);
        } else if (run_cmd->parsed()) {
            cmd_run(config);
        } else if (sweep_cmd->parsed()) {
            std::vector<long> values;
            std::stringstream stream(values_text);
            std::string item;
            while (std::getline(stream, item, ','))
                if (!item.empty()) values.push_back(parse_long(item));
            cmd_sweep(config, axis, values);
        } else if (report_cmd->parsed()) {
            cmd_report(runs_dir, report_out);
        } else if (rouge_cmd->parsed()) {
            cmd_rouge(candidate_path, reference_path);
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const BackendError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBackend;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace dgot
