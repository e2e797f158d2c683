#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "dgot/corpus.hpp"
#include "dgot/errors.hpp"
#include "dgot/report.hpp"
#include "dgot/threshold.hpp"
#include "helpers.hpp"

using namespace dgot;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult cli(const std::string& args, const testutil::TempDir& dir) {
    auto out_path = dir.file("cli_stdout.txt");
    auto err_path = dir.file("cli_stderr.txt");
    std::string command = std::string(DGOT_CLI_PATH) + " " + args + " >" +
                          out_path.string() + " 2>" + err_path.string();
    int status = std::system(command.c_str());
    CliResult result;
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = testutil::read_file(out_path);
    result.err = testutil::read_file(err_path);
    return result;
}

std::filesystem::path write_corpus(const testutil::TempDir& dir, const std::string& name,
                                   int n, std::uint64_t seed) {
    Corpus corpus = synthesize_corpus(n, seed, 60);
    auto path = dir.file(name);
    save_corpus(corpus, path);
    return path;
}

} // namespace

TEST_CASE("cli maps error classes to distinct exit codes") {
    testutil::TempDir dir;

    // Config error: no corpus given.
    CHECK(cli("train --out " + dir.file("t").string(), dir).code == 2);
    // Config error: dgot without thresholds.
    auto corpus = write_corpus(dir, "test.jsonl", 2, 5);
    CHECK(cli("run --strategy dgot --corpus " + corpus.string() + " --out " +
                  dir.file("o").string(),
              dir)
              .code == 2);

    // Validation error: duplicate article ids.
    std::string record =
        R"({"id":"a","title":"T","abstract":"A","introduction":"I","other_sections":[],"references":[]})";
    testutil::write_file(dir.file("dup.jsonl"), record + "\n" + record + "\n");
    CHECK(cli("run --strategy io --corpus " + dir.file("dup.jsonl").string() + " --out " +
                  dir.file("o2").string(),
              dir)
              .code == 3);

    // Backend error: wire endpoint that does not exist.
    auto wire = cli("run --strategy io --corpus " + corpus.string() +
                        " --backend wire --out " + dir.file("o3").string(),
                    dir);
    CHECK(wire.code == 2); // no base URL configured -> config error

    setenv("DGOT_API_BASE", "http://127.0.0.1:9", 1);
    auto unreachable = cli("run --strategy io --corpus " + corpus.string() +
                               " --backend wire --out " + dir.file("o4").string(),
                           dir);
    unsetenv("DGOT_API_BASE");
    CHECK(unreachable.code == 4);
}

TEST_CASE("cli rouge emits one line of scores") {
    testutil::TempDir dir;
    testutil::write_file(dir.file("cand.txt"), "the cat sat");
    testutil::write_file(dir.file("ref.txt"), "the cat");
    auto result = cli("rouge --candidate " + dir.file("cand.txt").string() +
                          " --reference " + dir.file("ref.txt").string(),
                      dir);
    CHECK(result.code == 0);
    CHECK(result.out.find('\n') == result.out.size() - 1);
    auto doc = nlohmann::json::parse(result.out);
    CHECK(doc["r1"]["f1"].get<double>() == doctest::Approx(0.8));
    CHECK(doc["r1"]["precision"].get<double>() == doctest::Approx(2.0 / 3.0));
    CHECK(doc["r1"]["recall"].get<double>() == doctest::Approx(1.0));
    CHECK(doc["rl"]["f1"].get<double>() == doctest::Approx(0.8));
}

TEST_CASE("train then dgot run produces a full artifact set") {
    testutil::TempDir dir;
    auto train_corpus = write_corpus(dir, "train.jsonl", 8, 11);
    auto test_corpus = write_corpus(dir, "test.jsonl", 6, 12);
    auto train_out = dir.file("trained");

    auto trained = cli("train --corpus " + train_corpus.string() + " --k 3 --seed 7 --out " +
                           train_out.string(),
                       dir);
    REQUIRE(trained.code == 0);
    auto thresholds = train_out / "thresholds.json";
    CHECK(std::filesystem::exists(thresholds));
    CHECK(std::filesystem::exists(train_out / "samples.csv"));
    CHECK(std::filesystem::exists(train_out / "max_samples.csv"));
    CHECK(std::filesystem::exists(train_out / "dist_generate.svg"));
    CHECK(std::filesystem::exists(train_out / "maxdist_generate.csv"));

    // The persisted model passes its identity checks on load.
    ThresholdModel model = load_threshold_model(thresholds);
    CHECK(model.kinds.size() == 3);

    auto run = cli("run --strategy dgot --corpus " + test_corpus.string() +
                       " --thresholds " + thresholds.string() + " --seed 7 --out " +
                       dir.file("rundir").string(),
                   dir);
    REQUIRE(run.code == 0);
    CHECK(std::filesystem::exists(dir.file("rundir") / "rows_dgot.csv"));
    CHECK(std::filesystem::exists(dir.file("rundir") / "summary_dgot.json"));
}

TEST_CASE("same config and seed reproduce byte-identical artifacts") {
    testutil::TempDir dir;
    auto train_corpus = write_corpus(dir, "train.jsonl", 10, 21);
    auto test_corpus = write_corpus(dir, "test.jsonl", 8, 22);

    for (const char* name : {"one", "two"}) {
        auto out = dir.file(std::string("train_") + name);
        REQUIRE(cli("train --corpus " + train_corpus.string() + " --seed 5 --out " +
                        out.string(),
                    dir)
                    .code == 0);
    }
    for (const char* artifact :
         {"thresholds.json", "samples.csv", "max_samples.csv", "dist_generate.csv",
          "maxdist_improve.svg"}) {
        CHECK(testutil::read_file(dir.file("train_one") / artifact) ==
              testutil::read_file(dir.file("train_two") / artifact));
    }

    auto thresholds = dir.file("train_one") / "thresholds.json";
    for (const char* variant : {"w1", "w4"}) {
        std::string workers = variant[1] == '1' ? "1" : "4";
        REQUIRE(cli("run --strategy dgot --corpus " + test_corpus.string() +
                        " --thresholds " + thresholds.string() + " --seed 5 --workers " +
                        workers + " --out " + dir.file(variant).string(),
                    dir)
                    .code == 0);
    }
    CHECK(testutil::read_file(dir.file("w1") / "rows_dgot.csv") ==
          testutil::read_file(dir.file("w4") / "rows_dgot.csv"));
    CHECK(testutil::read_file(dir.file("w1") / "summary_dgot.json") ==
          testutil::read_file(dir.file("w4") / "summary_dgot.json"));
}

TEST_CASE("train accepts a thresholds file path as --out") {
    testutil::TempDir dir;
    auto train_corpus = write_corpus(dir, "train.jsonl", 6, 71);
    auto out_file = dir.file("artifacts") / "thr.json";
    std::filesystem::create_directories(dir.file("artifacts"));
    REQUIRE(cli("train --corpus " + train_corpus.string() + " --seed 2 --out " +
                    out_file.string(),
                dir)
                .code == 0);
    CHECK(std::filesystem::exists(out_file));
    CHECK(std::filesystem::exists(dir.file("artifacts") / "samples.csv"));

    // The simple threshold is re-derivable from the persisted sample file.
    ThresholdModel model = load_threshold_model(out_file);
    auto samples = load_score_samples(dir.file("artifacts") / "samples.csv");
    for (TransformationKind kind : {TransformationKind::generate,
                                    TransformationKind::aggregate,
                                    TransformationKind::improve}) {
        double sum = 0.0;
        long n = 0;
        for (const ScoreSample& s : samples)
            if (s.kind == kind) {
                sum += s.score;
                ++n;
            }
        REQUIRE(n > 0);
        CHECK(model.kinds.at(kind).mean == doctest::Approx(sum / n).epsilon(1e-12));
    }
}

TEST_CASE("scripted backend through the cli reproduces the reference query counts") {
    testutil::TempDir dir;
    auto test_corpus = write_corpus(dir, "test.jsonl", 2, 81);

    std::string script;
    for (int i = 0; i < 9; ++i) script += "candidate abstract number " + std::to_string(i) + "\n";
    testutil::write_file(dir.file("script.txt"), script);

    REQUIRE(cli("run --strategy got --k 3 --backend scripted --script " +
                    dir.file("script.txt").string() + " --corpus " + test_corpus.string() +
                    " --out " + dir.file("got").string(),
                dir)
                .code == 0);
    auto rows = load_rows_csv(dir.file("got") / "rows_got.csv");
    REQUIRE(rows.size() == 2);
    int total = 0;
    for (const auto& row : rows)
        total += row.queries_generate + row.queries_aggregate + row.queries_improve;
    CHECK(total == 18);

    // Zero thresholds: the graph degenerates to two queries per article.
    ThresholdModel zero;
    zero.mode = ThresholdMode::simple;
    zero.kinds[TransformationKind::generate] = KindStats{};
    zero.kinds[TransformationKind::aggregate] = KindStats{};
    zero.kinds[TransformationKind::improve] = KindStats{};
    save_threshold_model(zero, dir.file("zero.json"));

    REQUIRE(cli("run --strategy dgot --k 3 --backend scripted --script " +
                    dir.file("script.txt").string() + " --corpus " + test_corpus.string() +
                    " --thresholds " + dir.file("zero.json").string() + " --out " +
                    dir.file("dgot").string(),
                dir)
                .code == 0);
    auto dgot_rows = load_rows_csv(dir.file("dgot") / "rows_dgot.csv");
    REQUIRE(dgot_rows.size() == 2);
    int dgot_total = 0;
    for (const auto& row : dgot_rows) {
        CHECK(row.queries_generate == 1);
        CHECK(row.queries_aggregate == 0);
        CHECK(row.queries_improve == 1);
        dgot_total += row.queries_generate + row.queries_aggregate + row.queries_improve;
    }
    CHECK(dgot_total == 4);
}

TEST_CASE("a config file supplies defaults that flags override") {
    testutil::TempDir dir;
    auto test_corpus = write_corpus(dir, "test.jsonl", 3, 91);

    testutil::write_file(dir.file("config.json"),
                         std::string("{\"test_corpus\": \"") + test_corpus.string() +
                             "\", \"strategy\": \"io\", \"seed\": 5, \"out_dir\": \"" +
                             (dir.path() / "from_config").string() + "\"}");
    REQUIRE(cli("--config " + dir.file("config.json").string() + " run", dir).code == 0);
    CHECK(std::filesystem::exists(dir.file("from_config") / "rows_io.csv"));

    // The --out flag wins over the config file's out_dir.
    REQUIRE(cli("--config " + dir.file("config.json").string() + " run --out " +
                    dir.file("override").string(),
                dir)
                .code == 0);
    CHECK(std::filesystem::exists(dir.file("override") / "rows_io.csv"));
    CHECK(testutil::read_file(dir.file("override") / "rows_io.csv") ==
          testutil::read_file(dir.file("from_config") / "rows_io.csv"));

    testutil::write_file(dir.file("bad.json"), "{\"unknown_key\": 1}");
    CHECK(cli("--config " + dir.file("bad.json").string() + " run", dir).code == 2);
}

TEST_CASE("budget sweep reports a falling cut ratio") {
    testutil::TempDir dir;
    auto test_corpus = write_corpus(dir, "test.jsonl", 5, 31);
    auto result = cli("sweep --axis budget --values 96,8192 --strategy io --corpus " +
                          test_corpus.string() + " --seed 3 --out " + dir.file("sw").string(),
                      dir);
    REQUIRE(result.code == 0);
    std::string table = testutil::read_file(dir.file("sw") / "sweep_budget.csv");
    std::istringstream lines(table);
    std::string header, row96, row8192;
    std::getline(lines, header);
    std::getline(lines, row96);
    std::getline(lines, row8192);
    double cut96 = std::stod(row96.substr(row96.find(',') + 1));
    double cut8192 = std::stod(row8192.substr(row8192.find(',') + 1));
    CHECK(cut96 > cut8192);
    CHECK(cut8192 == 0.0);

    CHECK(cli("sweep --axis budget --values '' --strategy io --corpus " +
                  test_corpus.string() + " --out " + dir.file("sw2").string(),
              dir)
              .code != 0);
}

TEST_CASE("k sweep multiplies got queries linearly") {
    testutil::TempDir dir;
    auto test_corpus = write_corpus(dir, "test.jsonl", 2, 41);
    auto result = cli("sweep --axis k --values 3,6 --strategy got --corpus " +
                          test_corpus.string() + " --seed 3 --out " + dir.file("sw").string(),
                      dir);
    REQUIRE(result.code == 0);

    auto rows3 = load_rows_csv(dir.file("sw") / "k_3" / "rows_got.csv");
    auto rows6 = load_rows_csv(dir.file("sw") / "k_6" / "rows_got.csv");
    for (const auto& row : rows3)
        CHECK(row.queries_generate + row.queries_aggregate + row.queries_improve == 9);
    for (const auto& row : rows6)
        CHECK(row.queries_generate + row.queries_aggregate + row.queries_improve == 18);
}

TEST_CASE("report aggregates runs and ranks against the single-round baseline") {
    testutil::TempDir dir;
    auto test_corpus = write_corpus(dir, "test.jsonl", 6, 51);
    auto runs = dir.file("runs");

    for (const char* strategy : {"io", "cot", "got"}) {
        REQUIRE(cli("run --strategy " + std::string(strategy) + " --corpus " +
                        test_corpus.string() + " --seed 9 --out " + runs.string(),
                    dir)
                    .code == 0);
    }
    auto report = cli("report --runs " + runs.string() + " --out " +
                          dir.file("report.csv").string(),
                      dir);
    REQUIRE(report.code == 0);
    std::string table = testutil::read_file(dir.file("report.csv"));
    CHECK(table.find("io,") != std::string::npos);
    CHECK(table.find("cot,") != std::string::npos);
    CHECK(table.find("got,") != std::string::npos);

    // io/cot rows carry no cost-effectiveness; the got row carries the column.
    std::istringstream lines(table);
    std::string line;
    std::getline(lines, line); // header
    while (std::getline(lines, line)) {
        if (line.rfind("got,", 0) == 0)
            CHECK(line.substr(line.size() - 3) != ",,,");
        if (line.rfind("io,", 0) == 0)
            CHECK(line.substr(line.size() - 3) == ",,,");
    }
}
