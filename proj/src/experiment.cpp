#include "sqmx/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "sqmx/decomp.hpp"
#include "sqmx/errors.hpp"
#include "sqmx/kernel.hpp"
#include "sqmx/linalg.hpp"
#include "sqmx/quadmin.hpp"
#include "sqmx/rng.hpp"
#include "sqmx/sampling.hpp"
#include "sqmx/svest.hpp"

namespace sqmx {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Input packing for the quadratic commands: an n x (n+2) matrix whose last
// two columns carry d and b.
struct QuadInput {
    DenseMatrix a{1, 1};
    Vector d;
    Vector b;
};

QuadInput unpack_quadratic(const DenseMatrix& packed) {
    if (packed.cols() != packed.rows() + 2) {
        throw DimensionError("quadratic input must be n x (n+2) packing [A | d | b], got " +
                             std::to_string(packed.rows()) + "x" + std::to_string(packed.cols()));
    }
    const std::size_t n = packed.rows();
    QuadInput q{DenseMatrix(n, n), Vector(n), Vector(n)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) q.a(i, j) = packed(i, j);
        q.d[i] = packed(i, n);
        q.b[i] = packed(i, n + 1);
    }
    return q;
}

nlohmann::json optional_to_json(const std::optional<double>& v) {
    if (!v.has_value() || !std::isfinite(*v)) return nullptr;
    return *v;
}

std::optional<double> json_to_optional(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

}  // namespace

std::string command_name(Command c) {
    switch (c) {
        case Command::QuadMin: return "quadmin";
        case Command::QuadMinBall: return "quadmin-ball";
        case Command::SvTop: return "sv-top";
        case Command::SvT: return "sv-t";
        case Command::Decompose: return "decompose";
        case Command::KpcaExperiment: return "kpca-experiment";
    }
    throw InvalidArgumentError("unknown command enum value");
}

Command parse_command(const std::string& name) {
    if (name == "quadmin") return Command::QuadMin;
    if (name == "quadmin-ball") return Command::QuadMinBall;
    if (name == "sv-top") return Command::SvTop;
    if (name == "sv-t") return Command::SvT;
    if (name == "decompose") return Command::Decompose;
    if (name == "kpca-experiment") return Command::KpcaExperiment;
    throw InvalidArgumentError("unknown command: " + name);
}

void ExperimentConfig::validate() const {
    if (k_values.empty()) throw InvalidArgumentError("config: k_values must be nonempty");
    for (std::size_t k : k_values)
        if (k < 1) throw InvalidArgumentError("config: every k must be >= 1");
    if (seeds.empty()) throw InvalidArgumentError("config: seeds must be nonempty");
    if (command == Command::SvT || command == Command::KpcaExperiment) {
        if (t < 1) throw InvalidArgumentError("config: t must be >= 1");
    }
    if (command == Command::KpcaExperiment && !(sigma_kernel > 0.0)) {
        throw InvalidArgumentError("config: kernel sigma must be positive");
    }
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config) {
    config.validate();
    std::vector<ResultRecord> records;

    // Assemble the input matrix.
    std::string input_desc;
    DenseMatrix a(1, 1);
    QuadInput quad;
    const bool is_quad = config.command == Command::QuadMin || config.command == Command::QuadMinBall;
    if (config.command == Command::KpcaExperiment) {
        std::vector<Vector> points;
        if (config.input_path.empty()) {
            points = synthesize_gaussian(config.synth_n, config.synth_d, config.master_seed);
            input_desc = "synthetic-gaussian(n=" + std::to_string(config.synth_n) +
                         ",d=" + std::to_string(config.synth_d) +
                         ",seed=" + std::to_string(config.master_seed) + ")";
        } else {
            points = load_points(config.input_path);
            input_desc = config.input_path;
        }
        a = rbf_gram(points, config.sigma_kernel);
    } else if (config.input_is_points) {
        // Points input: build the RBF Gram matrix, as for kernel PCA.
        if (config.input_path.empty()) throw InvalidArgumentError("config: input_path required");
        if (is_quad) throw InvalidArgumentError("config: points input needs a matrix command");
        a = rbf_gram(load_points(config.input_path), config.sigma_kernel);
        input_desc = config.input_path;
    } else {
        if (config.input_path.empty()) throw InvalidArgumentError("config: input_path required");
        DenseMatrix loaded = load_matrix(config.input_path, config.input_format);
        input_desc = config.input_path;
        if (is_quad) {
            quad = unpack_quadratic(loaded);
            a = std::move(quad.a);
        } else {
            a = std::move(loaded);
        }
    }
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();

    // Reference once per input.
    Vector sv_reference;          // top singular values, sv/kpca commands
    std::optional<double> quad_reference;
    std::optional<QuadraticProblem> problem;
    if (is_quad) {
        problem.emplace(a, quad.d, quad.b);
        if (config.command == Command::QuadMin) {
            const QuadSolution exact = solve_unconstrained(*problem);
            if (exact.status == QuadStatus::Finite) {
                quad_reference = exact.value / (static_cast<double>(n) * static_cast<double>(n));
            }
        } else {
            const TrsSolution exact = solve_ball(*problem, config.radius);
            quad_reference = exact.value / (static_cast<double>(n) * static_cast<double>(n));
        }
    } else if (config.command == Command::SvTop) {
        sv_reference = top_singular_values(a, 1, config.power_iterations, config.master_seed);
    } else if (config.command == Command::SvT || config.command == Command::KpcaExperiment) {
        sv_reference = top_singular_values(a, config.t, config.power_iterations, config.master_seed);
    }

    const SampleMode mode = config.kpca_aligned ? SampleMode::Symmetric : SampleMode::Independent;

    if (config.command == Command::Decompose) {
        const auto start = Clock::now();
        SpectralDecomposition d = decompose(a, config.gamma);
        const double elapsed = elapsed_seconds(start);
        const BoundCheck psd = verify_psd_norm(a, d, config.gamma);
        ResultRecord rec;
        rec.command = command_name(config.command);
        rec.input = input_desc;
        rec.rng = std::string(kRngId);
        rec.n = n;
        rec.m = m;
        rec.k = 0;
        rec.t = d.kept_rank;
        rec.seed = 0;
        rec.estimate = psd.observed;
        rec.reference = psd.bound;
        rec.abs_error = std::abs(psd.observed - psd.bound);
        rec.rel_error = psd.bound > 0.0 ? psd.observed / psd.bound : 0.0;
        rec.wall_time_seconds = elapsed;
        records.push_back(std::move(rec));
        if (!config.output_path.empty()) {
            write_decomposition_report(a, d, config.output_path + ".decomposition.txt");
            emit_report(records, config.output_path);
        }
        return records;
    }

    auto finish_record = [&](ResultRecord& rec, double estimate, double reference_1) {
        rec.estimate = estimate;
        if (rec.reference.has_value()) {
            rec.abs_error = std::abs(estimate - *rec.reference);
            // Singular value errors are normalized by the largest reference
            // value; quadratic gaps by max(1, |reference|).
            if (!is_quad) {
                rec.rel_error = reference_1 > 0.0 ? *rec.abs_error / reference_1 : *rec.abs_error;
            } else {
                rec.rel_error = *rec.abs_error / std::max(1.0, std::abs(*rec.reference));
            }
        }
    };

    try {
        for (std::size_t k : config.k_values) {
            for (std::uint64_t seed : config.seeds) {
                ResultRecord base;
                base.command = command_name(config.command);
                base.input = input_desc;
                base.rng = std::string(kRngId);
                base.n = n;
                base.m = m;
                base.k = k;
                base.t = config.t;
                base.seed = seed;
                try {
                    const auto start = Clock::now();
                    switch (config.command) {
                        case Command::QuadMin: {
                            const SampledQuadResult r = approximate_min(*problem, k, seed);
                            base.wall_time_seconds = elapsed_seconds(start);
                            base.reference = quad_reference;
                            if (r.solution.status == QuadStatus::Finite) {
                                finish_record(base, r.normalized_value, 0.0);
                            }
                            records.push_back(base);
                            break;
                        }
                        case Command::QuadMinBall: {
                            const SampledTrsResult r =
                                approximate_min_ball(*problem, config.radius, k, seed);
                            base.wall_time_seconds = elapsed_seconds(start);
                            base.reference = quad_reference;
                            finish_record(base, r.normalized_value, 0.0);
                            records.push_back(base);
                            break;
                        }
                        case Command::SvTop: {
                            const SvEstimate est = estimate_sigma1(a, k, seed, mode);
                            base.wall_time_seconds = elapsed_seconds(start);
                            base.t = 1;
                            base.reference = sv_reference[0];
                            finish_record(base, est.estimate, sv_reference[0]);
                            records.push_back(base);
                            break;
                        }
                        case Command::SvT: {
                            const SvEstimate est = estimate_sigma_t(a, config.t, k, seed, mode);
                            base.wall_time_seconds = elapsed_seconds(start);
                            base.reference = sv_reference[config.t - 1];
                            finish_record(base, est.estimate, sv_reference[0]);
                            records.push_back(base);
                            break;
                        }
                        case Command::KpcaExperiment: {
                            // One sample per trial; the whole top-t profile of
                            // the restriction is scaled back, which matches the
                            // rank-residual gap estimator computed with the
                            // power-iteration spectrum.
                            IndexSample rows = sample_indices(n, k, seed);
                            IndexSample cols = config.kpca_aligned
                                                   ? rows
                                                   : sample_indices(m, k, seed + 1);
                            if (!oversize_guard(rows, k) || !oversize_guard(cols, k)) {
                                throw AbortedError("kpca trial sample exceeded 2k");
                            }
                            const DenseMatrix sub = restrict_matrix(a, rows, cols);
                            const Vector sigma = top_singular_values(
                                sub, config.t, config.power_iterations, seed + 2);
                            const double scale = std::sqrt(
                                (static_cast<double>(n) * static_cast<double>(m)) /
                                (static_cast<double>(rows.size()) * static_cast<double>(cols.size())));
                            const double elapsed = elapsed_seconds(start);
                            for (std::size_t ti = 0; ti < config.t; ++ti) {
                                ResultRecord rec = base;
                                rec.t = ti + 1;
                                rec.wall_time_seconds = elapsed;
                                rec.reference = sv_reference[ti];
                                finish_record(rec, scale * sigma[ti], sv_reference[0]);
                                records.push_back(std::move(rec));
                            }
                            break;
                        }
                        case Command::Decompose:
                            break;  // handled above
                    }
                } catch (const AbortedError&) {
                    base.aborted = true;
                    base.wall_time_seconds = 0.0;
                    records.push_back(base);
                }
            }
        }
    } catch (...) {
        // Flush what we have before propagating.
        if (!config.output_path.empty()) emit_report(records, config.output_path);
        throw;
    }

    if (!config.output_path.empty()) emit_report(records, config.output_path);
    return records;
}

void emit_report(const std::vector<ResultRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open report file: " + path);
    for (const ResultRecord& rec : records) {
        nlohmann::json j{
            {"command", rec.command},
            {"input", rec.input},
            {"rng", rec.rng},
            {"n", rec.n},
            {"m", rec.m},
            {"k", rec.k},
            {"t", rec.t},
            {"seed", rec.seed},
            {"estimate", optional_to_json(rec.estimate)},
            {"reference", optional_to_json(rec.reference)},
            {"abs_error", optional_to_json(rec.abs_error)},
            {"rel_error", optional_to_json(rec.rel_error)},
            {"wall_time_seconds", rec.wall_time_seconds},
            {"aborted", rec.aborted},
        };
        out << j.dump() << '\n';
    }
    if (!out) throw IoError("failed writing report file: " + path);

    // Companion CSV with per-k aggregates over completed trials.
    std::map<std::size_t, std::vector<const ResultRecord*>> by_k;
    for (const ResultRecord& rec : records) {
        if (!rec.aborted && rec.estimate.has_value()) by_k[rec.k].push_back(&rec);
    }
    std::ofstream csv(path + ".csv");
    if (!csv) throw IoError("cannot open csv report: " + path + ".csv");
    csv << "k,mean_rel_error,sd_rel_error,mean_time\n";
    csv.precision(12);
    for (const auto& [k, group] : by_k) {
        double err_sum = 0.0;
        double time_sum = 0.0;
        std::size_t err_count = 0;
        for (const ResultRecord* rec : group) {
            time_sum += rec->wall_time_seconds;
            if (rec->rel_error.has_value()) {
                err_sum += *rec->rel_error;
                ++err_count;
            }
        }
        const double mean_err = err_count ? err_sum / static_cast<double>(err_count) : 0.0;
        double var = 0.0;
        for (const ResultRecord* rec : group) {
            if (rec->rel_error.has_value()) {
                const double d = *rec->rel_error - mean_err;
                var += d * d;
            }
        }
        const double sd = err_count > 1 ? std::sqrt(var / static_cast<double>(err_count - 1)) : 0.0;
        csv << k << ',' << mean_err << ',' << sd << ','
            << time_sum / static_cast<double>(group.size()) << '\n';
    }
    if (!csv) throw IoError("failed writing csv report: " + path + ".csv");
}

std::vector<ResultRecord> parse_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open report file: " + path);
    std::vector<ResultRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) throw ParseError("bad report line: " + line);
        ResultRecord rec;
        rec.command = j.at("command").get<std::string>();
        rec.input = j.at("input").get<std::string>();
        rec.rng = j.value("rng", std::string());
        rec.n = j.at("n").get<std::size_t>();
        rec.m = j.at("m").get<std::size_t>();
        rec.k = j.at("k").get<std::size_t>();
        rec.t = j.at("t").get<std::size_t>();
        rec.seed = j.at("seed").get<std::uint64_t>();
        rec.estimate = json_to_optional(j.at("estimate"));
        rec.reference = json_to_optional(j.at("reference"));
        rec.abs_error = json_to_optional(j.at("abs_error"));
        rec.rel_error = json_to_optional(j.at("rel_error"));
        rec.wall_time_seconds = j.at("wall_time_seconds").get<double>();
        rec.aborted = j.at("aborted").get<bool>();
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace sqmx
