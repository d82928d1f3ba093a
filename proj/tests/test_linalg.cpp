#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "spectral/errors.hpp"
#include "spectral/linalg.hpp"
#include "spectral/sampling.hpp"

using namespace spectral;
using linalg::CMat;
using linalg::Mat;
using linalg::cplx;

namespace {

Mat random_sym(Rng& rng, int n) {
    Mat A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = rng.uniform(-1.0, 1.0);
            A(i, j) = v;
            A(j, i) = v;
        }
    return A;
}

}  // namespace

TEST_CASE("eigensolver reproduces a diagonal matrix") {
    Mat A(3, 3);
    A(0, 0) = 3.0;
    A(1, 1) = -1.0;
    A(2, 2) = 2.0;
    const auto se = linalg::sym_eigen(A);
    REQUIRE(se.values.size() == 3);
    CHECK(se.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(se.values[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(se.values[2] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("eigensolver satisfies A v = lambda v and orthonormality on random matrices") {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(1, 24);
        const Mat A = random_sym(rng, n);
        const auto se = linalg::sym_eigen(A);
        REQUIRE(int(se.values.size()) == n);
        for (int j = 0; j < n; ++j) {
            double r2 = 0.0;
            for (int i = 0; i < n; ++i) {
                double r = -se.values[j] * se.vectors(i, j);
                for (int k = 0; k < n; ++k) r += A(i, k) * se.vectors(k, j);
                r2 += r * r;
            }
            CHECK(std::sqrt(r2) < 1e-12);
        }
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += se.vectors(i, a) * se.vectors(i, b);
                CHECK(std::fabs(dot - (a == b ? 1.0 : 0.0)) < 1e-12);
            }
        // eigenvalue sum = trace
        double tr = 0.0, sum = 0.0;
        for (int i = 0; i < n; ++i) {
            tr += A(i, i);
            sum += se.values[i];
        }
        CHECK(tr == doctest::Approx(sum).epsilon(1e-11));
    }
}

TEST_CASE("eigensolver handles degenerate clusters") {
    // 2x2 blocks of a rotation-conjugated diag(1,1,2): eigenvalue 1 twice
    Mat A(3, 3);
    A(0, 0) = 1.5;
    A(0, 1) = 0.5;
    A(1, 0) = 0.5;
    A(1, 1) = 1.5;
    A(2, 2) = 1.0;
    // eigenvalues {1, 1, 2}
    const auto se = linalg::sym_eigen(A);
    CHECK(se.values[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(se.values[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(se.values[2] == doctest::Approx(2.0).epsilon(1e-13));
    double dot = 0.0;
    for (int i = 0; i < 3; ++i) dot += se.vectors(i, 0) * se.vectors(i, 1);
    CHECK(std::fabs(dot) < 1e-13);
}

TEST_CASE("windowed eigensolver restricts values and vectors") {
    Rng rng(77);
    const Mat A = random_sym(rng, 30);
    const auto all = linalg::sym_eigen(A);
    const double lo = all.values[5] - 1e-9, hi = all.values[20] + 1e-9;
    const auto win = linalg::sym_eigen_window(A, lo, hi);
    REQUIRE(win.values.size() == 16);
    for (std::size_t j = 0; j < win.values.size(); ++j)
        CHECK(win.values[j] == doctest::Approx(all.values[5 + j]).epsilon(1e-13));
}

TEST_CASE("serial and parallel kernels agree bitwise") {
    Rng rng(5150);
    const int n = 150;  // above the dispatch cutoff
    Mat A = random_sym(rng, n);
    std::vector<double> x(n), y1(n), y2(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1.0, 1.0);

    linalg::kernels::serial::matvec(A, n, x.data(), y1.data());
    linalg::kernels::par::matvec(A, n, x.data(), y2.data());
    for (int i = 0; i < n; ++i) CHECK(y1[i] == y2[i]);

    Mat A1 = A, A2 = A;
    std::vector<double> u(n), v(n);
    for (int i = 0; i < n; ++i) {
        u[i] = rng.uniform(-1.0, 1.0);
        v[i] = rng.uniform(-1.0, 1.0);
    }
    linalg::kernels::serial::rank2_update(A1, n, u.data(), v.data());
    linalg::kernels::par::rank2_update(A2, n, u.data(), v.data());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(A1(i, j) == A2(i, j));

    // SPD matrix for Cholesky: A A^T + n I
    Mat S(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = (i == j) ? double(n) : 0.0;
            for (int k = 0; k < n; ++k) s += A(i, k) * A(j, k);
            S(i, j) = s;
        }
    Mat S1 = S, S2 = S;
    linalg::kernels::serial::chol_factor(S1);
    linalg::kernels::par::chol_factor(S2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(S1(i, j) == S2(i, j));

    Mat B1(n, 3), B2(n, 3);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 3; ++j) B1(i, j) = B2(i, j) = rng.uniform(-1.0, 1.0);
    linalg::kernels::serial::solve_lower_inplace(S1, B1);
    linalg::kernels::par::solve_lower_inplace(S2, B2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 3; ++j) CHECK(B1(i, j) == B2(i, j));

    CMat C1(n, n), C2(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx v2(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            C1(i, j) = v2;
            C2(i, j) = v2;
        }
    std::vector<int> p1, p2;
    linalg::kernels::serial::lu_factor(C1, p1);
    linalg::kernels::par::lu_factor(C2, p2);
    REQUIRE(p1 == p2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(C1(i, j) == C2(i, j));
}

TEST_CASE("Cholesky factors SPD matrices") {
    Rng rng(99);
    const int n = 12;
    Mat B = random_sym(rng, n);
    Mat S(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = (i == j) ? double(n) : 0.0;
            for (int k = 0; k < n; ++k) s += B(i, k) * B(j, k);
            S(i, j) = s;
        }
    const Mat L = linalg::chol_lower(S);
    const Mat R = linalg::matmul(L, linalg::transpose(L));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(R(i, j) == doctest::Approx(S(i, j)).epsilon(1e-12));
}

TEST_CASE("complex LU solves against a known product") {
    Rng rng(321);
    const int n = 9;
    CMat A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            A(i, j) = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    std::vector<cplx> x(n), b(n, cplx(0.0));
    for (int i = 0; i < n; ++i) x[i] = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b[i] += A(i, j) * x[j];
    const auto lu = linalg::lu_factor(A);
    const auto got = linalg::lu_solve(lu, b);
    for (int i = 0; i < n; ++i) CHECK(std::abs(got[i] - x[i]) < 1e-12);

    const CMat inv = linalg::inverse(A);
    const CMat I = linalg::matmul(A, inv);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            CHECK(std::abs(I(i, j) - (i == j ? cplx(1.0) : cplx(0.0))) < 1e-12);
}

TEST_CASE("operator norm matches hand values") {
    Mat A(2, 2);
    A(0, 0) = 3.0;
    A(1, 1) = -4.0;
    CHECK(linalg::opnorm(A) == doctest::Approx(4.0).epsilon(1e-13));

    CMat C(1, 2);
    C(0, 0) = cplx(3.0, 4.0);  // norm 5
    C(0, 1) = 0.0;
    CHECK(linalg::opnorm(C) == doctest::Approx(5.0).epsilon(1e-13));
}
