#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace spectral::linalg {

using cplx = std::complex<double>;

/// Dense row-major real matrix.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, 0.0) {}
    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }
    double* row(int i) { return a_.data() + std::size_t(i) * cols_; }
    const double* row(int i) const { return a_.data() + std::size_t(i) * cols_; }
    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

/// Dense row-major complex matrix.
class CMat {
public:
    CMat() = default;
    CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols) {}
    static CMat identity(int n) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    cplx& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
    cplx operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }
    cplx* row(int i) { return a_.data() + std::size_t(i) * cols_; }
    const cplx* row(int i) const { return a_.data() + std::size_t(i) * cols_; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

// ---------------------------------------------------------------------------
// Kernels. Every kernel exists twice: a plain serial reference under
// kernels::serial and an OpenMP variant under kernels::par. The parallel
// variants split work so that each output element is produced by exactly one
// thread with the same summation order as the reference, so results are
// bitwise identical (tests assert this). The unqualified wrappers dispatch on
// a global switch plus a size cutoff; tools/bench_kernels compares the two.
// ---------------------------------------------------------------------------
namespace kernels {

void set_parallel(bool on);
bool parallel_enabled();
int parallel_cutoff();

namespace serial {
// y = A[0..n)x[0..n) using the leading n x n block of A
void matvec(const Mat& A, int n, const double* x, double* y);
// leading n x n block: A -= u v^T + v u^T
void rank2_update(Mat& A, int n, const double* u, const double* v);
// B <- L^{-1} B with L lower triangular (column-wise forward substitution)
void solve_lower_inplace(const Mat& L, Mat& B);
// B <- L^{-T} B
void solve_lowerT_inplace(const Mat& L, Mat& B);
// in-place LU with partial pivoting; piv[k] = row swapped into step k
void lu_factor(CMat& A, std::vector<int>& piv);
// in-place Cholesky, lower triangle; upper left untouched garbage is zeroed
void chol_factor(Mat& A);
}  // namespace serial

namespace par {
void matvec(const Mat& A, int n, const double* x, double* y);
void rank2_update(Mat& A, int n, const double* u, const double* v);
void solve_lower_inplace(const Mat& L, Mat& B);
void solve_lowerT_inplace(const Mat& L, Mat& B);
void lu_factor(CMat& A, std::vector<int>& piv);
void chol_factor(Mat& A);
}  // namespace par

void matvec(const Mat& A, int n, const double* x, double* y);
void rank2_update(Mat& A, int n, const double* u, const double* v);
void solve_lower_inplace(const Mat& L, Mat& B);
void solve_lowerT_inplace(const Mat& L, Mat& B);
void lu_factor(CMat& A, std::vector<int>& piv);
void chol_factor(Mat& A);

}  // namespace kernels

// ---------------------------------------------------------------------------
// Symmetric eigensolver: Householder tridiagonalization, implicit-shift QL
// for the eigenvalues, inverse iteration for selected eigenvectors.
// ---------------------------------------------------------------------------

struct SymEig {
    std::vector<double> values;  // ascending
    Mat vectors;                 // columns match values, orthonormal
};

/// All eigenvalues, ascending. Throws ConvergenceFailure (iteration cap).
std::vector<double> sym_eigenvalues(Mat A);

/// Full decomposition (all eigenvectors).
SymEig sym_eigen(Mat A);

/// All eigenvalues; eigenvectors only for eigenvalues in [lo, hi].
/// values/vectors of the result are restricted to the window.
SymEig sym_eigen_window(Mat A, double lo, double hi);

// ---------------------------------------------------------------------------
// Factorizations.
// ---------------------------------------------------------------------------

/// Cholesky factor L (lower) of a symmetric positive definite matrix.
Mat chol_lower(Mat A);

struct LuFactor {
    CMat lu;
    std::vector<int> piv;
};
LuFactor lu_factor(CMat A);
void lu_solve(const LuFactor& f, cplx* b);
std::vector<cplx> lu_solve(const LuFactor& f, std::vector<cplx> b);
/// Dense inverse via LU (small matrices).
CMat inverse(const CMat& A);

// ---------------------------------------------------------------------------
// Small helpers.
// ---------------------------------------------------------------------------

Mat matmul(const Mat& A, const Mat& B);
CMat matmul(const CMat& A, const CMat& B);
Mat transpose(const Mat& A);
CMat conj_transpose(const CMat& A);
CMat to_complex(const Mat& A);

/// Largest singular value (spectral norm).
double opnorm(const Mat& A);
double opnorm(const CMat& A);

/// max_ij |A_ij|
double max_abs(const Mat& A);
double max_abs(const CMat& A);

}  // namespace spectral::linalg
