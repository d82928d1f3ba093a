#include "spectral/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "spectral/errors.hpp"

namespace spectral::linalg {

namespace {

double pythag(double a, double b) {
    const double aa = std::fabs(a), ab = std::fabs(b);
    if (aa > ab) {
        const double r = ab / aa;
        return aa * std::sqrt(1.0 + r * r);
    }
    return ab == 0.0 ? 0.0 : ab * std::sqrt(1.0 + (aa / ab) * (aa / ab));
}

/// Householder reduction of a full symmetric matrix to tridiagonal form.
/// Reflectors are kept so that selected eigenvectors can be transformed back
/// without accumulating the full orthogonal factor.
struct Tridiag {
    std::vector<double> d;      // diagonal
    std::vector<double> e;      // e[i] couples i-1 and i, e[0] = 0
    Mat reflectors;             // row i holds v_i (length i), valid when kappa[i] != 0
    std::vector<double> kappa;  // v^T v / 2 per step
    double scale = 0.0;         // crude norm bound of the input
};

Tridiag householder_tridiag(Mat W) {
    const int n = W.rows();
    Tridiag t;
    t.d.assign(n, 0.0);
    t.e.assign(n, 0.0);
    t.reflectors = Mat(n, n);
    t.kappa.assign(n, 0.0);

    std::vector<double> v(n), p(n);
    for (int i = n - 1; i >= 2; --i) {
        const int m = i;  // active prefix length
        double sc = 0.0;
        for (int j = 0; j < m; ++j) sc += std::fabs(W(i, j));
        if (sc == 0.0) {
            t.e[i] = 0.0;
            continue;
        }
        double h = 0.0;
        for (int j = 0; j < m; ++j) {
            v[j] = W(i, j) / sc;
            h += v[j] * v[j];
        }
        const double f = v[m - 1];
        const double sigma = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        t.e[i] = sc * sigma;
        v[m - 1] = f - sigma;
        const double kap = h - sigma * f;  // = |v|^2 / 2

        kernels::matvec(W, m, v.data(), p.data());
        double vp = 0.0;
        for (int j = 0; j < m; ++j) {
            p[j] /= kap;
            vp += v[j] * p[j];
        }
        const double K = vp / (2.0 * kap);
        for (int j = 0; j < m; ++j) p[j] -= K * v[j];  // p is now q
        kernels::rank2_update(W, m, p.data(), v.data());

        double* r = t.reflectors.row(i);
        for (int j = 0; j < m; ++j) r[j] = v[j];
        t.kappa[i] = kap;
    }
    if (n >= 2) t.e[1] = W(1, 0);
    for (int i = 0; i < n; ++i) t.d[i] = W(i, i);

    for (int i = 0; i < n; ++i)
        t.scale = std::max(t.scale, std::fabs(t.d[i]) + 2.0 * std::fabs(t.e[i]));
    t.scale = std::max(t.scale, 1e-300);
    return t;
}

/// QL with implicit shifts; eigenvalues only. d/e conventions as in Tridiag.
std::vector<double> ql_eigenvalues(std::vector<double> d, std::vector<double> e) {
    const int n = int(d.size());
    if (n == 0) return {};
    // renumber so that e[i] couples i and i+1
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw ConvergenceFailure(0.0, std::fabs(e[l]));
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = pythag(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, pp = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = pythag(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= pp;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - pp;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    pp = s * r;
                    d[i + 1] = g + pp;
                    g = c * r - b;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= pp;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

uint64_t splitmix64(uint64_t& s) {
    uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// One inverse-iteration solve: (T - lambda I) x = b, tridiagonal with
/// partial pivoting (one extra superdiagonal of fill).
void tridiag_shifted_solve(const std::vector<double>& d, const std::vector<double>& e,
                           double lambda, double tiny, std::vector<double>& x) {
    const int n = int(d.size());
    std::vector<double> dia(n), up1(std::max(n - 1, 0)), up2(std::max(n - 2, 0)), low(n);
    for (int i = 0; i < n; ++i) dia[i] = d[i] - lambda;
    for (int i = 1; i < n; ++i) low[i] = e[i];
    for (int i = 0; i + 1 < n; ++i) up1[i] = e[i + 1];
    for (int i = 0; i + 2 < n; ++i) up2[i] = 0.0;

    for (int k = 0; k + 1 < n; ++k) {
        if (std::fabs(low[k + 1]) > std::fabs(dia[k])) {
            std::swap(dia[k], low[k + 1]);
            std::swap(up1[k], dia[k + 1]);
            if (k + 2 < n) std::swap(up2[k], up1[k + 1]);
            std::swap(x[k], x[k + 1]);
        }
        if (std::fabs(dia[k]) < tiny) dia[k] = std::copysign(tiny, dia[k] == 0.0 ? 1.0 : dia[k]);
        const double mfac = low[k + 1] / dia[k];
        dia[k + 1] -= mfac * up1[k];
        if (k + 2 < n) up1[k + 1] -= mfac * up2[k];
        x[k + 1] -= mfac * x[k];
    }
    if (std::fabs(dia[n - 1]) < tiny)
        dia[n - 1] = std::copysign(tiny, dia[n - 1] == 0.0 ? 1.0 : dia[n - 1]);
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        if (i + 1 < n) s -= up1[i] * x[i + 1];
        if (i + 2 < n) s -= up2[i] * x[i + 2];
        x[i] = s / dia[i];
    }
}

double norm2(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

/// Eigenvectors of the tridiagonal matrix for the given (ascending) values,
/// by inverse iteration with cluster orthogonalization.
Mat tridiag_eigenvectors(const Tridiag& t, const std::vector<double>& lambdas) {
    const int n = int(t.d.size());
    const int k = int(lambdas.size());
    Mat V(n, k);
    const double scale = t.scale;
    // pivot floor relative to the matrix scale keeps the solve from overflowing
    // when the shift is an eigenvalue to machine precision
    const double tiny = std::numeric_limits<double>::epsilon() * scale;
    const double cluster_gap = 1e-7 * scale;
    const double sep = 20.0 * std::numeric_limits<double>::epsilon() * scale;

    std::vector<std::vector<double>> done;
    done.reserve(k);
    int cluster_begin = 0;
    uint64_t seed = 0x5ee3a1u;
    for (int j = 0; j < k; ++j) {
        if (j > 0 && lambdas[j] - lambdas[j - 1] > cluster_gap) cluster_begin = j;
        const double shift = lambdas[j] + double(j - cluster_begin) * sep;

        std::vector<double> x(n);
        uint64_t s = seed + 0x9e37u * uint64_t(j + 1);
        for (int i = 0; i < n; ++i)
            x[i] = double(splitmix64(s) >> 11) * 0x1.0p-52 - 0.5;
        for (int it = 0; it < 3; ++it) {
            tridiag_shifted_solve(t.d, t.e, shift, tiny, x);
            // rescale by the largest entry first so the norm cannot overflow
            double amax = 0.0;
            for (int i = 0; i < n; ++i) amax = std::max(amax, std::fabs(x[i]));
            if (amax > 0.0)
                for (int i = 0; i < n; ++i) x[i] /= amax;
            // keep the iterate clear of earlier cluster members
            for (int c = cluster_begin; c < j; ++c) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += done[c][i] * x[i];
                for (int i = 0; i < n; ++i) x[i] -= dot * done[c][i];
            }
            const double nv = norm2(x);
            if (nv == 0.0) {
                // degenerate start; reseed deterministically
                uint64_t s2 = seed + 0xabcdu * uint64_t(j + it + 2);
                for (int i = 0; i < n; ++i)
                    x[i] = double(splitmix64(s2) >> 11) * 0x1.0p-52 - 0.5;
                continue;
            }
            for (int i = 0; i < n; ++i) x[i] /= nv;
        }
        done.push_back(std::move(x));
    }

    // full window re-orthonormalization (ascending); guards tight but
    // non-identical eigenvalue pairs
    for (int j = 0; j < k; ++j) {
        for (int c = 0; c < j; ++c) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += done[c][i] * done[j][i];
            for (int i = 0; i < n; ++i) done[j][i] -= dot * done[c][i];
        }
        const double nv = norm2(done[j]);
        if (nv < 1e-8)
            throw ConvergenceFailure(1e-8, nv);
        for (int i = 0; i < n; ++i) V(i, j) = done[j][i] / nv;
    }

    // residual check on the tridiagonal matrix
    double worst = 0.0;
    for (int j = 0; j < k; ++j) {
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double r = (t.d[i] - lambdas[j]) * V(i, j);
            if (i > 0) r += t.e[i] * V(i - 1, j);
            if (i + 1 < n) r += t.e[i + 1] * V(i + 1, j);
            r2 += r * r;
        }
        worst = std::max(worst, std::sqrt(r2));
    }
    if (worst > 1e-11 * scale) throw ConvergenceFailure(1e-11 * scale, worst / scale);
    return V;
}

void back_transform(const Tridiag& t, Mat& V) {
    const int n = V.rows(), k = V.cols();
    std::vector<double> col(n);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < n; ++i) col[i] = V(i, j);
        for (int i = 2; i < n; ++i) {
            if (t.kappa[i] == 0.0) continue;
            const double* v = t.reflectors.row(i);
            double dot = 0.0;
            for (int r = 0; r < i; ++r) dot += v[r] * col[r];
            dot /= t.kappa[i];
            for (int r = 0; r < i; ++r) col[r] -= dot * v[r];
        }
        for (int i = 0; i < n; ++i) V(i, j) = col[i];
    }
}

SymEig eigen_in_window(Mat A, double lo, double hi) {
    const int n = A.rows();
    SymEig out;
    if (n == 0) return out;
    if (n == 1) {
        const double v = A(0, 0);
        if (v >= lo && v <= hi) {
            out.values = {v};
            out.vectors = Mat(1, 1);
            out.vectors(0, 0) = 1.0;
        } else {
            out.vectors = Mat(1, 0);
        }
        return out;
    }
    Tridiag t = householder_tridiag(std::move(A));
    std::vector<double> all = ql_eigenvalues(t.d, t.e);
    for (double v : all)
        if (v >= lo && v <= hi) out.values.push_back(v);
    Mat V = tridiag_eigenvectors(t, out.values);
    back_transform(t, V);
    out.vectors = std::move(V);
    return out;
}

}  // namespace

std::vector<double> sym_eigenvalues(Mat A) {
    const int n = A.rows();
    if (n == 0) return {};
    if (n == 1) return {A(0, 0)};
    Tridiag t = householder_tridiag(std::move(A));
    return ql_eigenvalues(t.d, t.e);
}

SymEig sym_eigen(Mat A) {
    const double inf = std::numeric_limits<double>::infinity();
    return eigen_in_window(std::move(A), -inf, inf);
}

SymEig sym_eigen_window(Mat A, double lo, double hi) {
    return eigen_in_window(std::move(A), lo, hi);
}

Mat chol_lower(Mat A) {
    kernels::chol_factor(A);
    return A;
}

LuFactor lu_factor(CMat A) {
    LuFactor f;
    kernels::lu_factor(A, f.piv);
    f.lu = std::move(A);
    return f;
}

void lu_solve(const LuFactor& f, cplx* b) {
    const int n = f.lu.rows();
    // all row interchanges first: the stored factors satisfy L U = P A
    for (int k = 0; k < n; ++k)
        if (f.piv[k] != k) std::swap(b[k], b[f.piv[k]]);
    for (int k = 0; k < n; ++k)
        for (int i = k + 1; i < n; ++i) b[i] -= f.lu(i, k) * b[k];
    for (int i = n - 1; i >= 0; --i) {
        cplx s = b[i];
        for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * b[j];
        b[i] = s / f.lu(i, i);
    }
}

std::vector<cplx> lu_solve(const LuFactor& f, std::vector<cplx> b) {
    lu_solve(f, b.data());
    return b;
}

CMat inverse(const CMat& A) {
    const int n = A.rows();
    LuFactor f = lu_factor(A);
    CMat inv(n, n);
    std::vector<cplx> col(n);
    for (int j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), cplx(0.0));
        col[j] = 1.0;
        lu_solve(f, col.data());
        for (int i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

Mat matmul(const Mat& A, const Mat& B) {
    Mat C(A.rows(), B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int k = 0; k < A.cols(); ++k) {
            const double f = A(i, k);
            if (f == 0.0) continue;
            for (int j = 0; j < B.cols(); ++j) C(i, j) += f * B(k, j);
        }
    return C;
}

CMat matmul(const CMat& A, const CMat& B) {
    CMat C(A.rows(), B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int k = 0; k < A.cols(); ++k) {
            const cplx f = A(i, k);
            if (f == cplx(0.0)) continue;
            for (int j = 0; j < B.cols(); ++j) C(i, j) += f * B(k, j);
        }
    return C;
}

Mat transpose(const Mat& A) {
    Mat T(A.cols(), A.rows());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) T(j, i) = A(i, j);
    return T;
}

CMat conj_transpose(const CMat& A) {
    CMat T(A.cols(), A.rows());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) T(j, i) = std::conj(A(i, j));
    return T;
}

CMat to_complex(const Mat& A) {
    CMat C(A.rows(), A.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) C(i, j) = A(i, j);
    return C;
}

double opnorm(const Mat& A) {
    if (A.rows() == 0 || A.cols() == 0) return 0.0;
    Mat G = matmul(transpose(A), A);
    std::vector<double> ev = sym_eigenvalues(std::move(G));
    return std::sqrt(std::max(0.0, ev.back()));
}

double opnorm(const CMat& A) {
    if (A.rows() == 0 || A.cols() == 0) return 0.0;
    CMat G = matmul(conj_transpose(A), A);  // Hermitian PSD
    const int n = G.rows();
    Mat E(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            E(i, j) = G(i, j).real();
            E(i, j + n) = -G(i, j).imag();
            E(i + n, j) = G(i, j).imag();
            E(i + n, j + n) = G(i, j).real();
        }
    std::vector<double> ev = sym_eigenvalues(std::move(E));
    return std::sqrt(std::max(0.0, ev.back()));
}

double max_abs(const Mat& A) {
    double m = 0.0;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) m = std::max(m, std::fabs(A(i, j)));
    return m;
}

double max_abs(const CMat& A) {
    double m = 0.0;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) m = std::max(m, std::abs(A(i, j)));
    return m;
}

}  // namespace spectral::linalg
