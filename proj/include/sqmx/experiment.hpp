#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqmx/dense_matrix.hpp"
#include "sqmx/io.hpp"

namespace sqmx {

enum class Command { QuadMin, QuadMinBall, SvTop, SvT, Decompose, KpcaExperiment };

std::string command_name(Command c);
Command parse_command(const std::string& name);

struct ExperimentConfig {
    Command command = Command::SvTop;
    // Empty input_path with kpca-experiment synthesizes Gaussian points.
    std::string input_path;
    MatrixFormat input_format = MatrixFormat::Csv;
    bool input_is_points = false;
    std::vector<std::size_t> k_values;
    std::size_t t = 1;
    double gamma = 0.3;
    double radius = 1.0;
    std::vector<std::uint64_t> seeds;
    double sigma_kernel = 1.0;
    std::string output_path;
    std::string rng_id;              // filled with the pinned generator id
    bool kpca_aligned = false;       // force S_R = S_C on square inputs
    std::size_t synth_n = 4096;
    std::size_t synth_d = 10;
    std::uint64_t master_seed = 1;   // data synthesis and reference spectra
    std::size_t power_iterations = 20;

    void validate() const;
};

struct ResultRecord {
    std::string command;
    std::string input;
    std::string rng;  // pinned generator identifier
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t k = 0;
    std::size_t t = 0;
    std::uint64_t seed = 0;
    std::optional<double> estimate;     // absent on aborted/unbounded trials
    std::optional<double> reference;
    std::optional<double> abs_error;
    std::optional<double> rel_error;
    double wall_time_seconds = 0.0;
    bool aborted = false;
};

// Runs the configured estimator for every (k, seed) pair. The full-matrix
// reference is computed once per input; wall time covers only sampling,
// restriction and the sub-solve. Aborted trials are recorded with
// aborted = true and excluded from error statistics.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config);

// Writes the line-delimited JSON report to `path` and the per-k aggregate
// CSV (k, mean_rel_error, sd_rel_error, mean_time) to `path` + ".csv".
void emit_report(const std::vector<ResultRecord>& records, const std::string& path);

std::vector<ResultRecord> parse_report(const std::string& path);

}  // namespace sqmx
