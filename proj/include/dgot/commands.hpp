#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dgot/engine.hpp"
#include "dgot/gateway.hpp"
#include "dgot/report.hpp"

namespace dgot {

/// One declarative configuration for every workflow; loadable from a JSON
/// file and overridable from the command line. With a mock backend and a
/// fixed seed any command is fully reproducible, byte for byte.
struct RunConfig {
    std::string train_corpus;
    std::string test_corpus;

    std::string strategy = "dgot";
    int k = 3;
    int levels = 3;
    std::optional<int> h;

    long budget = 20000;
    int max_response_tokens = 1024;

    std::string backend = "synthetic"; // synthetic | scripted | wire
    std::string script_file;           // scripted: one response per line (JSON string or raw)
    double coverage_lo = 0.2;          // synthetic abstractor coverage ratio bounds
    double coverage_hi = 0.8;

    double rate_in = kDefaultRateIn;
    double rate_out = kDefaultRateOut;

    std::string threshold_mode = "simple"; // simple | gumbel
    double gumbel_p = 0.5;
    std::string thresholds_file;

    std::string templates_dir;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int workers = 1;

    std::string wire_base_url; // also via DGOT_API_BASE
    std::string wire_api_key;  // also via DGOT_API_KEY
    std::string model = "local";

    static RunConfig from_json_file(const std::string& path);
    void apply_environment();
};

/// Runs the training process over the train corpus and writes thresholds.json,
/// samples.csv, max_samples.csv and the distribution exports into out_dir.
void cmd_train(const RunConfig& config);

struct RunArtifacts {
    MethodResult summary;
    std::vector<ArticleRow> rows;
};

/// Runs the configured strategy over the test corpus; writes
/// rows_<strategy>.csv and summary_<strategy>.json into out_dir.
RunArtifacts cmd_run(const RunConfig& config);

/// Runs cmd_run once per axis value into out_dir/<axis>_<value>/ and writes a
/// comparison table sweep_<axis>.csv (with a cut-ratio column for budget
/// sweeps).
void cmd_sweep(const RunConfig& config, const std::string& axis,
               const std::vector<long>& values);

/// Aggregates every rows_*.csv under runs_dir into a summary report with
/// cost-effectiveness against the best single-round baseline present.
void cmd_report(const std::string& runs_dir, const std::string& out_path);

/// R-1/R-2/R-L between two text files, one line of JSON on stdout.
void cmd_rouge(const std::string& candidate_path, const std::string& reference_path);

// Exit codes used by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitBackend = 4;

/// Full command-line entry point (argument parsing, error-to-exit-code
/// mapping). Used by the dgot binary.
int run_cli(int argc, char** argv);

} // namespace dgot
