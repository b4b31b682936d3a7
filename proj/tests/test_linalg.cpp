#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sqmx/errors.hpp"
#include "sqmx/linalg.hpp"
#include "test_helpers.hpp"

using namespace sqmx;
using namespace sqmx::testing;

TEST_CASE("frobenius norm") {
    CHECK(frobenius_norm(DenseMatrix::identity(2)) == doctest::Approx(std::sqrt(2.0)));
    CHECK(frobenius_norm(DenseMatrix::zero(3, 4)) == 0.0);
    CHECK(frobenius_norm(DenseMatrix(2, 2, {3, 0, 0, 4})) == doctest::Approx(5.0));
}

TEST_CASE("max norm") {
    CHECK(max_norm(DenseMatrix(2, 2, {-3, 1, 2, 0})) == 3.0);
    CHECK(max_norm(DenseMatrix::zero(2, 5)) == 0.0);
    CHECK(max_norm(DenseMatrix::constant(4, 6, 2.5)) == 2.5);
}

TEST_CASE("symmetric_eigen small known spectra") {
    const EigenResult d = symmetric_eigen(DenseMatrix(2, 2, {2, 0, 0, -1}));
    CHECK(d.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(d.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(std::abs(d.eigenvectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(d.eigenvectors(0, 1)) == doctest::Approx(1.0));

    const EigenResult f = symmetric_eigen(DenseMatrix(2, 2, {0, 1, 1, 0}));
    CHECK(f.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(f.eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("symmetric_eigen residual on random matrices") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const DenseMatrix h = random_symmetric(8, seed);
        const EigenResult e = symmetric_eigen(h);
        const double tol = 1e-8 * std::max(1.0, max_norm(h));
        for (std::size_t j = 0; j < 8; ++j) {
            Vector q(8);
            for (std::size_t i = 0; i < 8; ++i) q[i] = e.eigenvectors(i, j);
            const Vector hq = h.multiply(q);
            for (std::size_t i = 0; i < 8; ++i)
                CHECK(std::abs(hq[i] - e.eigenvalues[j] * q[i]) <= tol);
        }
        for (std::size_t j = 1; j < 8; ++j) CHECK(e.eigenvalues[j - 1] <= e.eigenvalues[j]);
        for (std::size_t c1 = 0; c1 < 8; ++c1)
            for (std::size_t c2 = c1; c2 < 8; ++c2) {
                double acc = 0.0;
                for (std::size_t i = 0; i < 8; ++i)
                    acc += e.eigenvectors(i, c1) * e.eigenvectors(i, c2);
                CHECK(std::abs(acc - (c1 == c2 ? 1.0 : 0.0)) <= 1e-10);
            }
    }
}

TEST_CASE("symmetric_eigen rejects nonsymmetric input") {
    CHECK_THROWS_AS(symmetric_eigen(DenseMatrix(2, 2, {0, 1, 0, 0})), NotSymmetricError);
    CHECK_THROWS_AS(symmetric_eigen(DenseMatrix(2, 3, {0, 1, 0, 0, 1, 0})), DimensionError);
}

namespace {

void check_svd_contract(const DenseMatrix& a) {
    const SvdResult s = svd(a);
    const std::size_t r = std::min(a.rows(), a.cols());
    REQUIRE(s.singular_values.size() == r);
    for (std::size_t i = 1; i < r; ++i) CHECK(s.singular_values[i - 1] >= s.singular_values[i]);
    for (double sv : s.singular_values) CHECK(sv >= 0.0);

    for (std::size_t c1 = 0; c1 < r; ++c1)
        for (std::size_t c2 = c1; c2 < r; ++c2) {
            double utu = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i)
                utu += s.left_vectors(i, c1) * s.left_vectors(i, c2);
            double vtv = 0.0;
            for (std::size_t i = 0; i < a.cols(); ++i)
                vtv += s.right_vectors(i, c1) * s.right_vectors(i, c2);
            const double target = c1 == c2 ? 1.0 : 0.0;
            CHECK(std::abs(utu - target) <= 1e-8);
            CHECK(std::abs(vtv - target) <= 1e-8);
        }

    DenseMatrix rec(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t l = 0; l < r; ++l)
                acc += s.singular_values[l] * s.left_vectors(i, l) * s.right_vectors(j, l);
            rec(i, j) = acc;
        }
    CHECK(max_abs_diff(rec, a) <= 1e-6 * std::max(max_norm(a), 1e-30));
}

}  // namespace

TEST_CASE("svd on diagonal and rank-one matrices") {
    const SvdResult d = svd(DenseMatrix::diagonal({3, 2, 1}));
    CHECK(d.singular_values[0] == doctest::Approx(3.0));
    CHECK(d.singular_values[1] == doctest::Approx(2.0));
    CHECK(d.singular_values[2] == doctest::Approx(1.0));

    const DenseMatrix ones = DenseMatrix::constant(4, 7, 1.0);
    const SvdResult o = svd(ones);
    CHECK(o.singular_values[0] == doctest::Approx(std::sqrt(28.0)));
    for (std::size_t i = 1; i < 4; ++i)
        CHECK(o.singular_values[i] == doctest::Approx(0.0).epsilon(1e-12));
    check_svd_contract(ones);
}

TEST_CASE("svd matches the Gram-matrix route") {
    const DenseMatrix a = random_matrix(6, 9, 42);
    check_svd_contract(a);
    const SvdResult s = svd(a);

    // sigma^2 should equal the eigenvalues of A A^T (the smaller Gram side).
    DenseMatrix gram(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 9; ++k) acc += a(i, k) * a(j, k);
            gram(i, j) = acc;
        }
    const EigenResult e = symmetric_eigen(gram);
    for (std::size_t i = 0; i < 6; ++i) {
        const double expected = std::sqrt(std::max(e.eigenvalues[5 - i], 0.0));
        CHECK(s.singular_values[i] == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("svd contract on assorted shapes") {
    check_svd_contract(random_matrix(9, 4, 7));
    check_svd_contract(random_matrix(1, 5, 8));
    check_svd_contract(random_matrix(5, 1, 9));
    check_svd_contract(DenseMatrix::zero(3, 4));
    check_svd_contract(gapped_spectrum_matrix(8, 8, 3, 5.0, 2.0, 11));
}

TEST_CASE("power iteration estimates sigma1") {
    CHECK(power_iteration_sigma1(DenseMatrix::diagonal({3, 1}), 20, 1) ==
          doctest::Approx(3.0).epsilon(1e-6));
    CHECK(power_iteration_sigma1(DenseMatrix::zero(4, 4), 20, 1) == 0.0);

    const DenseMatrix a = gapped_spectrum_matrix(50, 50, 6, 4.0, 1.25, 3);
    const Vector sv = svd(a).singular_values;
    REQUIRE(sv[0] / sv[1] >= 1.2);
    const double est = power_iteration_sigma1(a, 20, 5);
    CHECK(std::abs(est - sv[0]) / sv[0] <= 0.01);
}

TEST_CASE("top_singular_values with deflation") {
    const Vector two = top_singular_values(DenseMatrix::diagonal({5, 4, 3}), 2, 60, 1);
    CHECK(two[0] == doctest::Approx(5.0).epsilon(1e-5));
    CHECK(two[1] == doctest::Approx(4.0).epsilon(1e-5));

    const Vector all = top_singular_values(DenseMatrix::diagonal({3, 2, 1}), 3, 80, 1);
    CHECK(all[0] == doctest::Approx(3.0));
    CHECK(all[1] == doctest::Approx(2.0));
    CHECK(all[2] == doctest::Approx(1.0));

    const DenseMatrix a = gapped_spectrum_matrix(40, 40, 8, 6.0, 1.2, 13);
    const Vector sv = svd(a).singular_values;
    for (std::size_t i = 1; i < 4; ++i) REQUIRE(sv[i - 1] / sv[i] >= 1.1);
    const Vector est = top_singular_values(a, 4, 20, 2);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(est[i] - sv[i]) / sv[i] <= 0.01);
}

TEST_CASE("spectrum invariants") {
    for (std::uint64_t seed = 20; seed < 24; ++seed) {
        const DenseMatrix a = random_matrix(7, 10, seed);
        const Vector sv = svd(a).singular_values;
        const double fro = frobenius_norm(a);

        // sigma_l <= ||A||_F / sqrt(l) for every l.
        for (std::size_t l = 0; l < sv.size(); ++l)
            CHECK(sv[l] <= fro / std::sqrt(static_cast<double>(l + 1)) + 1e-12);

        double sum_sq = 0.0;
        for (double s : sv) sum_sq += s * s;
        CHECK(sum_sq == doctest::Approx(fro * fro).epsilon(1e-8));

        // Permutation invariance: reverse rows and columns.
        DenseMatrix p(a.rows(), a.cols());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j)
                p(i, j) = a(a.rows() - 1 - i, a.cols() - 1 - j);
        const Vector psv = svd(p).singular_values;
        for (std::size_t l = 0; l < sv.size(); ++l)
            CHECK(psv[l] == doctest::Approx(sv[l]).epsilon(1e-10));

        // Scaling equivariance.
        DenseMatrix scaled = a;
        for (double& x : scaled.data()) x *= 2.5;
        const Vector ssv = svd(scaled).singular_values;
        for (std::size_t l = 0; l < sv.size(); ++l)
            CHECK(ssv[l] == doctest::Approx(2.5 * sv[l]).epsilon(1e-10));
    }
}
