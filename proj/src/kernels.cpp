#include <atomic>
#include <cmath>

#include "spectral/errors.hpp"
#include "spectral/linalg.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spectral::linalg::kernels {

namespace {
std::atomic<bool> g_parallel{true};
constexpr int kCutoff = 96;
}  // namespace

void set_parallel(bool on) { g_parallel.store(on); }
bool parallel_enabled() {
#ifdef _OPENMP
    return g_parallel.load();
#else
    return false;
#endif
}
int parallel_cutoff() { return kCutoff; }

// ---------------------------------------------------------------------------
// Serial reference kernels.
// ---------------------------------------------------------------------------
namespace serial {

void matvec(const Mat& A, int n, const double* x, double* y) {
    for (int i = 0; i < n; ++i) {
        const double* a = A.row(i);
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += a[j] * x[j];
        y[i] = s;
    }
}

void rank2_update(Mat& A, int n, const double* u, const double* v) {
    for (int i = 0; i < n; ++i) {
        double* a = A.row(i);
        const double ui = u[i], vi = v[i];
        for (int j = 0; j < n; ++j) a[j] -= ui * v[j] + vi * u[j];
    }
}

void solve_lower_inplace(const Mat& L, Mat& B) {
    const int n = L.rows(), m = B.cols();
    for (int c = 0; c < m; ++c) {
        for (int i = 0; i < n; ++i) {
            double s = B(i, c);
            const double* l = L.row(i);
            for (int j = 0; j < i; ++j) s -= l[j] * B(j, c);
            B(i, c) = s / l[i];
        }
    }
}

void solve_lowerT_inplace(const Mat& L, Mat& B) {
    const int n = L.rows(), m = B.cols();
    for (int c = 0; c < m; ++c) {
        for (int i = n - 1; i >= 0; --i) {
            double s = B(i, c);
            for (int j = i + 1; j < n; ++j) s -= L(j, i) * B(j, c);
            B(i, c) = s / L(i, i);
        }
    }
}

void lu_factor(CMat& A, std::vector<int>& piv) {
    const int n = A.rows();
    piv.assign(n, 0);
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(A(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(A(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0) throw NearSingular("LU pivot vanished at step " + std::to_string(k));
        piv[k] = p;
        if (p != k)
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
        const cplx d = A(k, k);
        for (int i = k + 1; i < n; ++i) {
            const cplx f = A(i, k) / d;
            A(i, k) = f;
            cplx* ai = A.row(i);
            const cplx* ak = A.row(k);
            for (int j = k + 1; j < n; ++j) ai[j] -= f * ak[j];
        }
    }
}

void chol_factor(Mat& A) {
    const int n = A.rows();
    for (int k = 0; k < n; ++k) {
        double d = A(k, k);
        if (d <= 0.0) throw NearSingular("Cholesky pivot non-positive at step " + std::to_string(k));
        d = std::sqrt(d);
        A(k, k) = d;
        for (int i = k + 1; i < n; ++i) A(i, k) /= d;
        for (int i = k + 1; i < n; ++i) {
            const double f = A(i, k);
            double* ai = A.row(i);
            const double* col = &A(k + 1, k);
            // update lower triangle row i, columns k+1..i
            for (int j = k + 1; j <= i; ++j) ai[j] -= f * A(j, k);
            (void)col;
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) A(i, j) = 0.0;
}

}  // namespace serial

// ---------------------------------------------------------------------------
// OpenMP kernels. Each output element keeps the reference summation order.
// ---------------------------------------------------------------------------
namespace par {

void matvec(const Mat& A, int n, const double* x, double* y) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const double* a = A.row(i);
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += a[j] * x[j];
        y[i] = s;
    }
}

void rank2_update(Mat& A, int n, const double* u, const double* v) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double* a = A.row(i);
        const double ui = u[i], vi = v[i];
        for (int j = 0; j < n; ++j) a[j] -= ui * v[j] + vi * u[j];
    }
}

void solve_lower_inplace(const Mat& L, Mat& B) {
    const int n = L.rows(), m = B.cols();
#pragma omp parallel for schedule(static)
    for (int c = 0; c < m; ++c) {
        for (int i = 0; i < n; ++i) {
            double s = B(i, c);
            const double* l = L.row(i);
            for (int j = 0; j < i; ++j) s -= l[j] * B(j, c);
            B(i, c) = s / l[i];
        }
    }
}

void solve_lowerT_inplace(const Mat& L, Mat& B) {
    const int n = L.rows(), m = B.cols();
#pragma omp parallel for schedule(static)
    for (int c = 0; c < m; ++c) {
        for (int i = n - 1; i >= 0; --i) {
            double s = B(i, c);
            for (int j = i + 1; j < n; ++j) s -= L(j, i) * B(j, c);
            B(i, c) = s / L(i, i);
        }
    }
}

void lu_factor(CMat& A, std::vector<int>& piv) {
    const int n = A.rows();
    piv.assign(n, 0);
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(A(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(A(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0) throw NearSingular("LU pivot vanished at step " + std::to_string(k));
        piv[k] = p;
        if (p != k)
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
        const cplx d = A(k, k);
        if (n - k > 64) {
#pragma omp parallel for schedule(static)
            for (int i = k + 1; i < n; ++i) {
                const cplx f = A(i, k) / d;
                A(i, k) = f;
                cplx* ai = A.row(i);
                const cplx* ak = A.row(k);
                for (int j = k + 1; j < n; ++j) ai[j] -= f * ak[j];
            }
        } else {
            for (int i = k + 1; i < n; ++i) {
                const cplx f = A(i, k) / d;
                A(i, k) = f;
                cplx* ai = A.row(i);
                const cplx* ak = A.row(k);
                for (int j = k + 1; j < n; ++j) ai[j] -= f * ak[j];
            }
        }
    }
}

void chol_factor(Mat& A) {
    const int n = A.rows();
    for (int k = 0; k < n; ++k) {
        double d = A(k, k);
        if (d <= 0.0) throw NearSingular("Cholesky pivot non-positive at step " + std::to_string(k));
        d = std::sqrt(d);
        A(k, k) = d;
        for (int i = k + 1; i < n; ++i) A(i, k) /= d;
        if (n - k > 256) {
            // triangular row lengths: interleave chunks to balance the threads
#pragma omp parallel for schedule(static, 32)
            for (int i = k + 1; i < n; ++i) {
                const double f = A(i, k);
                double* ai = A.row(i);
                for (int j = k + 1; j <= i; ++j) ai[j] -= f * A(j, k);
            }
        } else {
            for (int i = k + 1; i < n; ++i) {
                const double f = A(i, k);
                double* ai = A.row(i);
                for (int j = k + 1; j <= i; ++j) ai[j] -= f * A(j, k);
            }
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) A(i, j) = 0.0;
}

}  // namespace par

// ---------------------------------------------------------------------------
// Dispatchers.
// ---------------------------------------------------------------------------

void matvec(const Mat& A, int n, const double* x, double* y) {
    if (parallel_enabled() && n >= kCutoff)
        par::matvec(A, n, x, y);
    else
        serial::matvec(A, n, x, y);
}

void rank2_update(Mat& A, int n, const double* u, const double* v) {
    if (parallel_enabled() && n >= kCutoff)
        par::rank2_update(A, n, u, v);
    else
        serial::rank2_update(A, n, u, v);
}

void solve_lower_inplace(const Mat& L, Mat& B) {
    if (parallel_enabled() && L.rows() >= kCutoff && B.cols() > 1)
        par::solve_lower_inplace(L, B);
    else
        serial::solve_lower_inplace(L, B);
}

void solve_lowerT_inplace(const Mat& L, Mat& B) {
    if (parallel_enabled() && L.rows() >= kCutoff && B.cols() > 1)
        par::solve_lowerT_inplace(L, B);
    else
        serial::solve_lowerT_inplace(L, B);
}

void lu_factor(CMat& A, std::vector<int>& piv) {
    if (parallel_enabled() && A.rows() >= kCutoff)
        par::lu_factor(A, piv);
    else
        serial::lu_factor(A, piv);
}

void chol_factor(Mat& A) {
    if (parallel_enabled() && A.rows() >= kCutoff)
        par::chol_factor(A);
    else
        serial::chol_factor(A);
}

}  // namespace spectral::linalg::kernels
