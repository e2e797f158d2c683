#include "dgot/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "dgot/errors.hpp"
#include "dgot/format.hpp"
#include "dgot/rouge.hpp"

namespace dgot {

std::string CostEffectiveness::describe() const {
    if (value) return format_double(*value);
    if (score_gain < 0) return "undefined (negative score gain)";
    return "undefined (no score gain)";
}

bool is_single_round(const std::string& method) {
    return method == "io" || method == "cot";
}

std::vector<ArticleRow> per_article_rows(const std::string& method,
                                         std::span<const ArticleOutcome> outcomes,
                                         const Corpus& corpus) {
    std::unordered_map<std::string, const Article*> by_id;
    for (const Article& a : corpus.articles) by_id[a.id] = &a;

    std::vector<ArticleRow> rows;
    rows.reserve(outcomes.size());
    for (const ArticleOutcome& entry : outcomes) {
        auto it = by_id.find(entry.article_id);
        if (it == by_id.end())
            throw ValidationError("outcome for unknown article id '" + entry.article_id + "'");
        const Article& article = *it->second;
        const RunOutcome& outcome = entry.outcome;

        auto cand = tokenize(outcome.best.text);
        auto abstract_ref = tokenize(article.abstract);
        auto intro_ref = tokenize(article.introduction);

        ArticleRow row;
        row.article_id = entry.article_id;
        row.method = method;
        row.r1_abstract = rouge_n(cand, abstract_ref, 1).f1;
        row.r2_abstract = rouge_n(cand, abstract_ref, 2).f1;
        row.rl_abstract = rouge_l(cand, abstract_ref).f1;
        row.r1_intro = rouge_n(cand, intro_ref, 1).f1;
        row.best_score = outcome.best.score.value_or(0.0);
        row.prompt_tokens = outcome.ledger.total_prompt_tokens();
        row.response_tokens = outcome.ledger.total_response_tokens();
        row.cost = outcome.ledger.cost();
        auto count_of = [&](TransformationKind kind) {
            auto q = outcome.queries_by_kind.find(kind);
            return q == outcome.queries_by_kind.end() ? 0 : q->second;
        };
        row.queries_generate = count_of(TransformationKind::generate);
        row.queries_aggregate = count_of(TransformationKind::aggregate);
        row.queries_improve = count_of(TransformationKind::improve);
        row.truncated = outcome.any_prompt_truncated;
        rows.push_back(std::move(row));
    }
    return rows;
}

MethodResult summarize(const std::string& method, std::span<const ArticleRow> rows) {
    if (rows.empty()) throw ValidationError("cannot summarize an empty row set");
    MethodResult result;
    result.method = method;
    result.articles = rows.size();
    for (const ArticleRow& row : rows) {
        result.mean_r1_abstract += row.r1_abstract;
        result.mean_r2_abstract += row.r2_abstract;
        result.mean_rl_abstract += row.rl_abstract;
        result.mean_r1_intro += row.r1_intro;
        result.mean_best_score += row.best_score;
        result.mean_prompt_tokens += static_cast<double>(row.prompt_tokens);
        result.mean_response_tokens += static_cast<double>(row.response_tokens);
        result.mean_cost += row.cost;
    }
    double n = static_cast<double>(rows.size());
    result.mean_r1_abstract /= n;
    result.mean_r2_abstract /= n;
    result.mean_rl_abstract /= n;
    result.mean_r1_intro /= n;
    result.mean_best_score /= n;
    result.mean_prompt_tokens /= n;
    result.mean_response_tokens /= n;
    result.mean_cost /= n;
    return result;
}

MethodResult evaluate_run(const std::string& method,
                          std::span<const ArticleOutcome> outcomes, const Corpus& corpus) {
    auto rows = per_article_rows(method, outcomes, corpus);
    return summarize(method, rows);
}

namespace {

double column_of(const MethodResult& result, ScoreColumn column) {
    switch (column) {
        case ScoreColumn::r1_abstract: return result.mean_r1_abstract;
        case ScoreColumn::r2_abstract: return result.mean_r2_abstract;
        case ScoreColumn::rl_abstract: return result.mean_rl_abstract;
        case ScoreColumn::r1_intro: return result.mean_r1_intro;
    }
    return result.mean_r1_abstract;
}

} // namespace

CostEffectiveness cost_effectiveness(const MethodResult& method,
                                     const MethodResult& baseline, ScoreColumn column) {
    CostEffectiveness ce;
    ce.extra_cost = method.mean_cost - baseline.mean_cost;
    ce.score_gain = column_of(method, column) - column_of(baseline, column);
    if (ce.score_gain > 0) ce.value = ce.extra_cost / ce.score_gain;
    return ce;
}

const MethodResult& pick_baseline(std::span<const MethodResult> results) {
    const MethodResult* best = nullptr;
    for (const MethodResult& r : results) {
        if (!is_single_round(r.method)) continue;
        if (!best || r.mean_r1_abstract > best->mean_r1_abstract) best = &r;
    }
    if (!best) throw ValidationError("no single-round method (io/cot) among the results");
    return *best;
}

void save_rows_csv(std::span<const ArticleRow> rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write rows file: " + path.string());
    out << "article_id,method,r1_abstract,r2_abstract,rl_abstract,r1_intro,best_score,"
           "prompt_tokens,response_tokens,cost,queries_generate,queries_aggregate,"
           "queries_improve,truncated\n";
    for (const ArticleRow& r : rows) {
        out << r.article_id << ',' << r.method << ',' << format_double(r.r1_abstract) << ','
            << format_double(r.r2_abstract) << ',' << format_double(r.rl_abstract) << ','
            << format_double(r.r1_intro) << ',' << format_double(r.best_score) << ','
            << r.prompt_tokens << ',' << r.response_tokens << ',' << format_double(r.cost)
            << ',' << r.queries_generate << ',' << r.queries_aggregate << ','
            << r.queries_improve << ',' << (r.truncated ? 1 : 0) << '\n';
    }
}

std::vector<ArticleRow> load_rows_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open rows file: " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("rows file " + path.string() + ": empty");
    std::vector<ArticleRow> rows;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string field;
        std::istringstream stream(line);
        while (std::getline(stream, field, ',')) f.push_back(field);
        if (f.size() != 14)
            throw ParseError("rows file line " + std::to_string(line_no) +
                             ": expected 14 fields");
        try {
            ArticleRow row;
            row.article_id = f[0];
            row.method = f[1];
            row.r1_abstract = parse_double(f[2]);
            row.r2_abstract = parse_double(f[3]);
            row.rl_abstract = parse_double(f[4]);
            row.r1_intro = parse_double(f[5]);
            row.best_score = parse_double(f[6]);
            row.prompt_tokens = parse_long(f[7]);
            row.response_tokens = parse_long(f[8]);
            row.cost = parse_double(f[9]);
            row.queries_generate = static_cast<int>(parse_long(f[10]));
            row.queries_aggregate = static_cast<int>(parse_long(f[11]));
            row.queries_improve = static_cast<int>(parse_long(f[12]));
            row.truncated = parse_long(f[13]) != 0;
            rows.push_back(std::move(row));
        } catch (const std::invalid_argument& e) {
            throw ParseError("rows file line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return rows;
}

Histogram Histogram::of(std::span<const double> values) {
    Histogram hist;
    for (double v : values) {
        int bin = static_cast<int>(std::floor(v * kBins));
        bin = std::clamp(bin, 0, kBins - 1); // 1.0 lands in the last bin
        ++hist.counts[static_cast<std::size_t>(bin)];
        ++hist.total;
    }
    return hist;
}

namespace {

void write_histogram_csv(const Histogram& hist, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write histogram file: " + path.string());
    out << "bin,lo,hi,count\n";
    for (int b = 0; b < Histogram::kBins; ++b) {
        double lo = static_cast<double>(b) / Histogram::kBins;
        double hi = static_cast<double>(b + 1) / Histogram::kBins;
        out << b << ',' << format_double(lo) << ',' << format_double(hi) << ','
            << hist.counts[static_cast<std::size_t>(b)] << '\n';
    }
}

std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// Minimal self-contained histogram plot. `density` (when given) is drawn as a
// curve in count units: density(x) * total / kBins.
void write_histogram_svg(const Histogram& hist, const std::string& title, double mean_line,
                         const std::function<double(double)>& density,
                         const std::filesystem::path& path) {
    constexpr double width = 640, height = 400;
    constexpr double left = 50, right = 20, top = 40, bottom = 40;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    long max_count = 1;
    for (long c : hist.counts) max_count = std::max(max_count, c);
    double y_max = static_cast<double>(max_count);
    if (density) {
        for (int i = 0; i <= 200; ++i) {
            double x = static_cast<double>(i) / 200.0;
            y_max = std::max(y_max, density(x) * static_cast<double>(hist.total) /
                                        Histogram::kBins);
        }
    }
    y_max *= 1.05;

    auto x_px = [&](double x) { return left + x * plot_w; };
    auto y_px = [&](double y) { return top + plot_h - (y / y_max) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    for (int b = 0; b < Histogram::kBins; ++b) {
        long count = hist.counts[static_cast<std::size_t>(b)];
        if (count == 0) continue;
        double x0 = x_px(static_cast<double>(b) / Histogram::kBins);
        double x1 = x_px(static_cast<double>(b + 1) / Histogram::kBins);
        double y0 = y_px(static_cast<double>(count));
        svg << "<rect x=\"" << svg_num(x0) << "\" y=\"" << svg_num(y0) << "\" width=\""
            << svg_num(x1 - x0) << "\" height=\"" << svg_num(top + plot_h - y0)
            << "\" fill=\"#4878a8\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
    }

    if (density) {
        svg << "<polyline fill=\"none\" stroke=\"#c44e52\" stroke-width=\"2\" "
               "stroke-dasharray=\"6 3\" points=\"";
        for (int i = 0; i <= 200; ++i) {
            double x = static_cast<double>(i) / 200.0;
            double y = density(x) * static_cast<double>(hist.total) / Histogram::kBins;
            svg << svg_num(x_px(x)) << ',' << svg_num(y_px(std::min(y, y_max))) << ' ';
        }
        svg << "\"/>\n";
    }

    svg << "<line x1=\"" << svg_num(x_px(mean_line)) << "\" y1=\"" << svg_num(top)
        << "\" x2=\"" << svg_num(x_px(mean_line)) << "\" y2=\"" << svg_num(top + plot_h)
        << "\" stroke=\"#333333\" stroke-dasharray=\"4 3\"/>\n";

    // Axes and x ticks at 0, 0.25, ..., 1.
    svg << "<line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(top + plot_h)
        << "\" x2=\"" << svg_num(left + plot_w) << "\" y2=\"" << svg_num(top + plot_h)
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(top) << "\" x2=\""
        << svg_num(left) << "\" y2=\"" << svg_num(top + plot_h) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double x = static_cast<double>(i) / 4.0;
        svg << "<text x=\"" << svg_num(x_px(x)) << "\" y=\"" << svg_num(top + plot_h + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << svg_num(x) << "</text>\n";
    }
    svg << "<text x=\"" << svg_num(left - 8) << "\" y=\"" << svg_num(top + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << max_count
        << "</text>\n";
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write svg file: " + path.string());
    out << svg.str();
}

} // namespace

void export_distributions(std::span<const ScoreSample> samples,
                          std::span<const MaxSample> max_samples,
                          const ThresholdModel& model,
                          const std::filesystem::path& out_dir) {
    if (samples.empty()) throw ValidationError("export_distributions: no samples");
    std::filesystem::create_directories(out_dir);

    for (TransformationKind kind : {TransformationKind::generate,
                                    TransformationKind::aggregate,
                                    TransformationKind::improve}) {
        std::vector<double> scores;
        for (const ScoreSample& s : samples)
            if (s.kind == kind) scores.push_back(s.score);
        std::string name(to_string(kind));
        if (!scores.empty()) {
            Histogram hist = Histogram::of(scores);
            double mean = 0.0;
            for (double s : scores) mean += s;
            mean /= static_cast<double>(scores.size());
            write_histogram_csv(hist, out_dir / ("dist_" + name + ".csv"));
            write_histogram_svg(hist, name + " scores", mean, nullptr,
                                out_dir / ("dist_" + name + ".svg"));
        }

        std::vector<double> maxima;
        for (const MaxSample& s : max_samples)
            if (s.kind == kind) maxima.push_back(s.max_score);
        if (!maxima.empty()) {
            Histogram hist = Histogram::of(maxima);
            double mean = 0.0;
            for (double m : maxima) mean += m;
            mean /= static_cast<double>(maxima.size());
            std::function<double(double)> density;
            auto it = model.kinds.find(kind);
            if (it != model.kinds.end() && it->second.gumbel) {
                GumbelParams params = *it->second.gumbel;
                density = [params](double x) {
                    return gumbel_pdf(x, params.mu, params.beta);
                };
            }
            write_histogram_csv(hist, out_dir / ("maxdist_" + name + ".csv"));
            write_histogram_svg(hist, name + " per-article maxima", mean, density,
                                out_dir / ("maxdist_" + name + ".svg"));
        }
    }
}

} // namespace dgot
