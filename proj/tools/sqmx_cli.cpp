// Command-line front end: loads or synthesizes an input, runs the configured
// estimator sweep, and writes JSONL + CSV reports.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sqmx/errors.hpp"
#include "sqmx/experiment.hpp"
#include "sqmx/rng.hpp"

namespace {

int run(int argc, char** argv) {
    CLI::App app{"sampled estimators for quadratic minima and singular values"};

    std::string cmd;
    std::string input;
    std::string format = "csv";
    std::vector<std::size_t> k_values;
    std::size_t t = 1;
    double gamma = 0.3;
    double radius = 1.0;
    std::vector<std::uint64_t> seeds;
    double sigma = 1.0;
    std::string out;
    bool kpca = false;
    std::uint64_t rng_seed = 1;
    std::size_t synth_n = 4096;
    std::size_t synth_d = 10;

    app.add_option("--cmd", cmd,
                   "one of: quadmin, quadmin-ball, sv-top, sv-t, decompose, kpca-experiment")
        ->required();
    app.add_option("--input", input, "input file (omit to synthesize kpca data)");
    app.add_option("--format", format, "input format: csv, bin, or points")
        ->check(CLI::IsMember({"csv", "bin", "points"}));
    app.add_option("--k", k_values, "sampling parameter k (repeatable)");
    app.add_option("--t", t, "singular value index / profile depth");
    app.add_option("--gamma", gamma, "decomposition gamma in (0,1)");
    app.add_option("--radius", radius, "ball radius for quadmin-ball");
    app.add_option("--seeds", seeds, "trial seeds (repeatable)");
    app.add_option("--sigma", sigma, "RBF kernel bandwidth");
    app.add_option("--out", out, "report path (JSONL; CSV written alongside)");
    app.add_flag("--kpca", kpca, "force S_R = S_C on square inputs");
    app.add_option("--rng-seed", rng_seed, "master seed for synthesis and references");
    app.add_option("--synth-n", synth_n, "synthetic point count for kpca-experiment");
    app.add_option("--synth-d", synth_d, "synthetic point dimension for kpca-experiment");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    sqmx::ExperimentConfig config;
    try {
        config.command = sqmx::parse_command(cmd);
        config.input_path = input;
        config.input_is_points = format == "points";
        config.input_format =
            format == "bin" ? sqmx::MatrixFormat::Binary : sqmx::MatrixFormat::Csv;
        config.k_values = k_values.empty() ? std::vector<std::size_t>{1} : k_values;
        if (config.command == sqmx::Command::Decompose && k_values.empty()) {
            config.k_values = {1};
        }
        config.t = t;
        config.gamma = gamma;
        config.radius = radius;
        config.seeds = seeds.empty() ? std::vector<std::uint64_t>{1} : seeds;
        config.sigma_kernel = sigma;
        config.output_path = out;
        config.rng_id = std::string(sqmx::kRngId);
        config.kpca_aligned = kpca;
        config.master_seed = rng_seed;
        config.synth_n = synth_n;
        config.synth_d = synth_d;
        config.validate();
    } catch (const sqmx::Error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }

    try {
        const std::vector<sqmx::ResultRecord> records = sqmx::run_experiment(config);
        std::size_t aborted = 0;
        for (const auto& rec : records)
            if (rec.aborted) ++aborted;
        std::printf("%zu records (%zu aborted), rng %s\n", records.size(), aborted,
                    config.rng_id.c_str());
        if (!records.empty() && aborted == records.size()) {
            std::fprintf(stderr, "all trials aborted\n");
            return 3;
        }
        if (!out.empty()) std::printf("report written to %s and %s.csv\n", out.c_str(), out.c_str());
        return 0;
    } catch (const sqmx::ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 2;
    } catch (const sqmx::NonFiniteEntryError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 2;
    } catch (const sqmx::RaggedRowsError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 2;
    } catch (const sqmx::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 2;
    } catch (const sqmx::Error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 4;
    }
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fatal: %s\n", e.what());
        return 4;
    }
}
