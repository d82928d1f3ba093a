// Benchmark comparing the serial reference kernels against the OpenMP
// variants, plus the end-to-end symmetric eigensolver.
#include <chrono>
#include <cstdio>
#include <vector>

#include "spectral/linalg.hpp"
#include "spectral/sampling.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace spectral;
using linalg::CMat;
using linalg::Mat;

namespace {

double now() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_best(F&& fn, int reps) {
    double best = 1e30;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now();
        fn();
        best = std::min(best, now() - t0);
    }
    return best;
}

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

void row(const char* name, int n, double ts, double tp) {
    std::printf("%-22s n=%5d  serial %9.4f ms  openmp %9.4f ms  speedup %5.2fx\n", name, n,
                ts * 1e3, tp * 1e3, ts / tp);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run the serial path\n");
#endif
    Rng rng(1234);
    for (int n : {256, 512, 1024}) {
        Mat A = random_sym(rng, n);
        std::vector<double> x(n), y(n), u(n), v(n);
        for (int i = 0; i < n; ++i) {
            x[i] = rng.uniform(-1, 1);
            u[i] = rng.uniform(-1, 1);
            v[i] = rng.uniform(-1, 1);
        }
        const int reps = n <= 512 ? 20 : 8;

        row("matvec", n,
            time_best([&] { linalg::kernels::serial::matvec(A, n, x.data(), y.data()); }, reps),
            time_best([&] { linalg::kernels::par::matvec(A, n, x.data(), y.data()); }, reps));

        Mat B1 = A, B2 = A;
        row("rank2_update", n,
            time_best([&] { linalg::kernels::serial::rank2_update(B1, n, u.data(), v.data()); },
                      reps),
            time_best([&] { linalg::kernels::par::rank2_update(B2, n, u.data(), v.data()); },
                      reps));

        // SPD for Cholesky / triangular solves
        Mat S(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) S(i, j) = A(i, j) + (i == j ? 2.0 * n : 0.0);
        Mat S1 = S, S2 = S;
        row("chol_factor", n,
            time_best([&] { Mat C = S1; linalg::kernels::serial::chol_factor(C); }, reps / 2 + 1),
            time_best([&] { Mat C = S2; linalg::kernels::par::chol_factor(C); }, reps / 2 + 1));

        Mat L = S;
        linalg::kernels::serial::chol_factor(L);
        Mat R1(n, 8), R2(n, 8);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 8; ++j) R1(i, j) = R2(i, j) = rng.uniform(-1, 1);
        row("solve_lower (8 rhs)", n,
            time_best([&] { Mat C = R1; linalg::kernels::serial::solve_lower_inplace(L, C); },
                      reps),
            time_best([&] { Mat C = R2; linalg::kernels::par::solve_lower_inplace(L, C); }, reps));

        CMat Z(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                Z(i, j) = linalg::cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        std::vector<int> piv;
        row("lu_factor (complex)", n,
            time_best([&] { CMat C = Z; linalg::kernels::serial::lu_factor(C, piv); },
                      reps / 4 + 1),
            time_best([&] { CMat C = Z; linalg::kernels::par::lu_factor(C, piv); }, reps / 4 + 1));

        linalg::kernels::set_parallel(false);
        const double te_s = time_best([&] { linalg::sym_eigenvalues(A); }, 2);
        linalg::kernels::set_parallel(true);
        const double te_p = time_best([&] { linalg::sym_eigenvalues(A); }, 2);
        row("sym_eigenvalues", n, te_s, te_p);
        std::printf("\n");
    }
    return 0;
}
