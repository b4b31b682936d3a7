#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "sqmx/errors.hpp"
#include "sqmx/experiment.hpp"
#include "sqmx/io.hpp"
#include "sqmx/kernel.hpp"
#include "sqmx/linalg.hpp"
#include "sqmx/quadmin.hpp"
#include "sqmx/rng.hpp"
#include "sqmx/sampling.hpp"
#include "test_helpers.hpp"

using namespace sqmx;
using namespace sqmx::testing;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(std::string name) : path(std::move(name)) {}
    ~TempFile() {
        std::remove(path.c_str());
        std::remove((path + ".csv").c_str());
        std::remove((path + ".decomposition.txt").c_str());
    }
};

// n x (n+2) packing [A | d | b] for the quadratic commands.
void save_quadratic_input(const DenseMatrix& a, const Vector& d, const Vector& b,
                          const std::string& path) {
    const std::size_t n = a.rows();
    DenseMatrix packed(n, n + 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) packed(i, j) = a(i, j);
        packed(i, n) = d[i];
        packed(i, n + 1) = b[i];
    }
    save_matrix(packed, path, MatrixFormat::Csv);
}

bool bits_equal(double x, double y) {
    return std::memcmp(&x, &y, sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("command names round trip") {
    for (Command c : {Command::QuadMin, Command::QuadMinBall, Command::SvTop, Command::SvT,
                      Command::Decompose, Command::KpcaExperiment}) {
        CHECK(parse_command(command_name(c)) == c);
    }
    CHECK_THROWS_AS(parse_command("nope"), InvalidArgumentError);
}

TEST_CASE("config validation") {
    ExperimentConfig config;
    config.command = Command::SvTop;
    config.seeds = {1};
    config.k_values = {};
    CHECK_THROWS_AS(config.validate(), InvalidArgumentError);
    config.k_values = {4};
    config.seeds = {};
    CHECK_THROWS_AS(config.validate(), InvalidArgumentError);
    config.seeds = {1};
    config.validate();
}

TEST_CASE("sv-top with a full sample has zero error") {
    const DenseMatrix a = gapped_spectrum_matrix(24, 24, 4, 5.0, 1.8, 91);
    TempFile input("exp_svtop.csv");
    save_matrix(a, input.path, MatrixFormat::Csv);

    ExperimentConfig config;
    config.command = Command::SvTop;
    config.input_path = input.path;
    config.k_values = {24};
    config.seeds = {3, 4};
    const auto records = run_experiment(config);
    REQUIRE(records.size() == 2);
    for (const auto& rec : records) {
        REQUIRE(rec.estimate.has_value());
        REQUIRE(rec.rel_error.has_value());
        CHECK(*rec.rel_error <= 1e-6);
        CHECK_FALSE(rec.aborted);
        CHECK(rec.n == 24);
        CHECK(rec.k == 24);
    }
}

TEST_CASE("quadmin command end to end") {
    const std::size_t n = 12;
    SplitMix64 rng(8);
    DenseMatrix a = random_symmetric(n, 80);
    Vector d(n);
    Vector b(n);
    for (double& x : d) x = 1.0 + rng.next_double();
    for (double& x : b) x = 2.0 * rng.next_double() - 1.0;
    TempFile input("exp_quad.csv");
    save_quadratic_input(a, d, b, input.path);

    ExperimentConfig config;
    config.command = Command::QuadMin;
    config.input_path = input.path;
    config.k_values = {n};
    config.seeds = {5};
    const auto records = run_experiment(config);
    REQUIRE(records.size() == 1);
    REQUIRE(records[0].estimate.has_value());
    REQUIRE(records[0].reference.has_value());
    CHECK(*records[0].abs_error <= 1e-10);

    // Ball variant on the same input.
    config.command = Command::QuadMinBall;
    config.radius = 2.0;
    const auto ball = run_experiment(config);
    REQUIRE(ball.size() == 1);
    CHECK(*ball[0].abs_error <= 1e-9);
}

TEST_CASE("kpca experiment produces one record per t and is deterministic") {
    ExperimentConfig config;
    config.command = Command::KpcaExperiment;
    config.synth_n = 96;
    config.synth_d = 4;
    config.t = 3;
    config.k_values = {24, 48};
    config.seeds = {1, 2};
    config.master_seed = 9;

    const auto first = run_experiment(config);
    const auto second = run_experiment(config);
    REQUIRE(first.size() == second.size());
    std::size_t completed = 0;
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].aborted == second[i].aborted);
        if (!first[i].aborted) {
            ++completed;
            REQUIRE(first[i].estimate.has_value());
            CHECK(bits_equal(*first[i].estimate, *second[i].estimate));
            CHECK(bits_equal(*first[i].reference, *second[i].reference));
        }
    }
    CHECK(completed >= 6);

    // References are shared across trials of the same t.
    for (std::size_t i = 0; i < first.size(); ++i)
        for (std::size_t j = i + 1; j < first.size(); ++j)
            if (!first[i].aborted && !first[j].aborted && first[i].t == first[j].t)
                CHECK(bits_equal(*first[i].reference, *first[j].reference));
}

TEST_CASE("points input builds a Gram matrix for the sv commands") {
    TempFile pts("exp_points.csv");
    {
        std::ofstream out(pts.path);
        const auto points = synthesize_gaussian(32, 3, 2);
        for (const auto& p : points) out << p[0] << ',' << p[1] << ',' << p[2] << '\n';
    }
    ExperimentConfig config;
    config.command = Command::SvTop;
    config.input_path = pts.path;
    config.input_is_points = true;
    config.sigma_kernel = 1.0;
    config.k_values = {32};
    config.seeds = {1};
    const auto records = run_experiment(config);
    REQUIRE(records.size() == 1);
    CHECK(records[0].n == 32);
    CHECK(*records[0].rel_error <= 1e-6);  // full sample on the 32x32 Gram

    config.command = Command::QuadMin;
    CHECK_THROWS_AS(run_experiment(config), InvalidArgumentError);
}

TEST_CASE("kpca aligned mode runs and differs from independent sampling") {
    ExperimentConfig config;
    config.command = Command::KpcaExperiment;
    config.synth_n = 80;
    config.synth_d = 3;
    config.t = 2;
    config.k_values = {40};
    config.seeds = {4};
    config.master_seed = 11;

    const auto indep = run_experiment(config);
    config.kpca_aligned = true;
    const auto aligned = run_experiment(config);
    REQUIRE(indep.size() == aligned.size());
    REQUIRE(!indep.empty());
    // Same reference, different samples, hence different estimates.
    CHECK(*indep[0].reference == *aligned[0].reference);
    CHECK(*indep[0].estimate != *aligned[0].estimate);
}

TEST_CASE("decompose command writes its report") {
    const DenseMatrix a = DenseMatrix::constant(16, 16, 1.5);
    TempFile input("exp_dec.csv");
    save_matrix(a, input.path, MatrixFormat::Csv);
    TempFile out("exp_dec_report.jsonl");

    ExperimentConfig config;
    config.command = Command::Decompose;
    config.input_path = input.path;
    config.gamma = 0.4;
    config.k_values = {1};
    config.seeds = {1};
    config.output_path = out.path;
    const auto records = run_experiment(config);
    REQUIRE(records.size() == 1);
    CHECK(records[0].t == 1);  // kept rank of the constant matrix

    std::ifstream report(out.path + ".decomposition.txt");
    REQUIRE(report.good());
    std::string text((std::istreambuf_iterator<char>(report)), std::istreambuf_iterator<char>());
    CHECK(text.find("kept_rank: 1") != std::string::npos);

    const auto back = parse_report(out.path);
    REQUIRE(back.size() == 1);
    CHECK(back[0].command == "decompose");
}

TEST_CASE("report emit and parse round trip") {
    TempFile out("exp_report.jsonl");

    SUBCASE("empty records give a header-only csv") {
        emit_report({}, out.path);
        CHECK(parse_report(out.path).empty());
        std::ifstream csv(out.path + ".csv");
        std::string header;
        std::getline(csv, header);
        CHECK(header == "k,mean_rel_error,sd_rel_error,mean_time");
        std::string rest;
        CHECK_FALSE(std::getline(csv, rest));
    }

    SUBCASE("single record round trips field for field") {
        ResultRecord rec;
        rec.command = "sv-top";
        rec.input = "matrix.csv";
        rec.rng = std::string(kRngId);
        rec.n = 10;
        rec.m = 12;
        rec.k = 4;
        rec.t = 1;
        rec.seed = 77;
        rec.estimate = 3.25091827365;
        rec.reference = 3.25;
        rec.abs_error = 0.00091827365;
        rec.rel_error = 0.000282545;
        rec.wall_time_seconds = 0.0125;
        rec.aborted = false;
        emit_report({rec}, out.path);
        const auto back = parse_report(out.path);
        REQUIRE(back.size() == 1);
        CHECK(back[0].command == rec.command);
        CHECK(back[0].input == rec.input);
        CHECK(back[0].rng == rec.rng);
        CHECK(back[0].n == rec.n);
        CHECK(back[0].m == rec.m);
        CHECK(back[0].k == rec.k);
        CHECK(back[0].t == rec.t);
        CHECK(back[0].seed == rec.seed);
        CHECK(bits_equal(*back[0].estimate, *rec.estimate));
        CHECK(bits_equal(*back[0].reference, *rec.reference));
        CHECK(bits_equal(*back[0].abs_error, *rec.abs_error));
        CHECK(bits_equal(*back[0].rel_error, *rec.rel_error));
        CHECK(back[0].wall_time_seconds == rec.wall_time_seconds);
        CHECK(back[0].aborted == rec.aborted);
    }

    SUBCASE("aborted records keep null fields") {
        ResultRecord rec;
        rec.command = "sv-t";
        rec.input = "x";
        rec.aborted = true;
        emit_report({rec}, out.path);
        const auto back = parse_report(out.path);
        REQUIRE(back.size() == 1);
        CHECK(back[0].aborted);
        CHECK_FALSE(back[0].estimate.has_value());
    }
}

// Estimator wall time grows with k but stays roughly flat in n at fixed k
// (the sub-solve sees only an ~k x k matrix). Three n values give too few
// points for a meaningful rank statistic, so the flatness check is the same
// <2x spread used by the acceptance suite.
TEST_CASE("estimator runtime shape") {
    const auto points = synthesize_gaussian(4096, 10, 7);
    auto estimator_time = [&](std::size_t n, std::size_t k) {
        const std::vector<Vector> subset(points.begin(),
                                         points.begin() + static_cast<std::ptrdiff_t>(n));
        const DenseMatrix gram = rbf_gram(subset, 1.0);
        std::vector<double> times;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const auto start = std::chrono::steady_clock::now();
            const IndexSample rows = sample_indices(n, k, seed);
            const IndexSample cols = sample_indices(n, k, seed + 1);
            const DenseMatrix sub = restrict_matrix(gram, rows, cols);
            (void)top_singular_values(sub, 4, 20, seed + 2);
            times.push_back(
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        }
        std::sort(times.begin(), times.end());
        return times[1];
    };

    const double t_small_k = estimator_time(2048, 128);
    const double t_big_k = estimator_time(2048, 512);
    CHECK(t_big_k > t_small_k);

    std::vector<double> per_n;
    for (std::size_t n : {std::size_t(1024), std::size_t(2048), std::size_t(4096)})
        per_n.push_back(estimator_time(n, 512));
    const double spread = *std::max_element(per_n.begin(), per_n.end()) /
                          *std::min_element(per_n.begin(), per_n.end());
    CHECK(spread < 2.0);
}

TEST_CASE("abort accounting below five percent at moderate k") {
    const DenseMatrix a = gapped_spectrum_matrix(256, 256, 3, 8.0, 2.0, 17);
    TempFile input("exp_abort.csv");
    save_matrix(a, input.path, MatrixFormat::Csv);

    ExperimentConfig config;
    config.command = Command::SvTop;
    config.input_path = input.path;
    config.k_values = {64};
    config.seeds.resize(60);
    for (std::size_t i = 0; i < config.seeds.size(); ++i) config.seeds[i] = 100 + i;
    const auto records = run_experiment(config);
    std::size_t aborted = 0;
    for (const auto& rec : records)
        if (rec.aborted) ++aborted;
    CHECK(static_cast<double>(aborted) <= 0.05 * static_cast<double>(records.size()));
}
