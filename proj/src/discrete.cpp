#include "spectral/discrete.hpp"

#include <algorithm>
#include <cmath>

#include "spectral/errors.hpp"

namespace spectral {

using linalg::Mat;
using linalg::CMat;

IntervalUnion IntervalUnion::interval(double a, double b) {
    IntervalUnion u;
    u.add(a, b);
    return u;
}

void IntervalUnion::add(double a, double b) {
    if (b < a) std::swap(a, b);
    parts.emplace_back(a, b);
    std::sort(parts.begin(), parts.end());
    std::vector<std::pair<double, double>> merged;
    for (auto [lo, hi] : parts) {
        if (!merged.empty() && lo <= merged.back().second)
            merged.back().second = std::max(merged.back().second, hi);
        else
            merged.emplace_back(lo, hi);
    }
    parts = std::move(merged);
}

bool IntervalUnion::contains(double x) const {
    for (auto [lo, hi] : parts)
        if (x >= lo && x <= hi) return true;
    return false;
}

IntervalUnion IntervalUnion::intersect(const IntervalUnion& other) const {
    IntervalUnion out;
    for (auto [a, b] : parts)
        for (auto [c, d] : other.parts) {
            const double lo = std::max(a, c), hi = std::min(b, d);
            if (lo <= hi) out.add(lo, hi);
        }
    return out;
}

cplx weighted_dot(std::span<const double> w, std::span<const cplx> f, std::span<const cplx> g) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::conj(f[i]) * g[i];
    return s;
}

double weighted_dot(std::span<const double> w, std::span<const double> f,
                    std::span<const double> g) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f[i] * g[i];
    return s;
}

double weighted_norm(std::span<const double> w, std::span<const cplx> f) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::norm(f[i]);
    return std::sqrt(s);
}

Mat transition_matrix(const Graph& g) {
    const int n = g.num_vertices();
    Mat P(n, n);
    for (auto [u, v] : g.edges) {
        P(u, v) += 1.0 / g.degree[u];
        P(v, u) += 1.0 / g.degree[v];
    }
    return P;
}

std::vector<std::pair<int, int>> EigDecomp::clusters() const {
    std::vector<std::pair<int, int>> out;
    int begin = 0;
    for (int i = 1; i <= size(); ++i) {
        if (i == size() || values[i] - values[i - 1] > 10.0 * tol) {
            out.emplace_back(begin, i);
            begin = i;
        }
    }
    return out;
}

namespace {

/// Sign convention: first entry over the noise floor is positive.
void normalize_sign(Mat& V, int col) {
    for (int i = 0; i < V.rows(); ++i) {
        if (std::fabs(V(i, col)) > 1e-10) {
            if (V(i, col) < 0.0)
                for (int r = 0; r < V.rows(); ++r) V(r, col) = -V(r, col);
            return;
        }
    }
}

bool lex_less(const Mat& V, int a, int b) {
    for (int i = 0; i < V.rows(); ++i) {
        if (V(i, a) < V(i, b)) return true;
        if (V(i, a) > V(i, b)) return false;
    }
    return false;
}

}  // namespace

EigDecomp sym_eigendecomposition(const Graph& g, double tol) {
    if (tol <= 0.0) throw OutOfRange("tolerance must be positive");
    const int n = g.num_vertices();
    // conjugated operator A = D^{1/2} P D^{-1/2}: A(x,y) = adj(x,y)/sqrt(m0(x) m0(y))
    Mat A(n, n);
    for (auto [u, v] : g.edges) {
        const double a = 1.0 / std::sqrt(double(g.degree[u]) * double(g.degree[v]));
        A(u, v) = a;
        A(v, u) = a;
    }
    linalg::SymEig se = linalg::sym_eigen(std::move(A));

    EigDecomp e;
    e.tol = tol;
    e.weights = g.weights();
    e.values = se.values;
    e.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            e.vectors(i, j) = se.vectors(i, j) / std::sqrt(e.weights[i]);
    // (mapping by D^{-1/2} turns l2-orthonormal columns into weighted-orthonormal ones)

    for (int j = 0; j < n; ++j) normalize_sign(e.vectors, j);

    // deterministic order: ascending eigenvalue, exact ties by lexicographic vector order
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (e.values[a] != e.values[b]) return e.values[a] < e.values[b];
        return lex_less(e.vectors, a, b);
    });
    EigDecomp out;
    out.tol = tol;
    out.weights = e.weights;
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = e.values[idx[j]];
        for (int i = 0; i < n; ++i) out.vectors(i, j) = e.vectors(i, idx[j]);
    }

    // contract check: residual and weighted orthonormality
    Mat P = transition_matrix(g);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double r = -out.values[j] * out.vectors(i, j);
            for (int k = 0; k < n; ++k) r += P(i, k) * out.vectors(k, j);
            r2 += out.weights[i] * r * r;
        }
        worst = std::max(worst, std::sqrt(r2));
    }
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += out.weights[i] * out.vectors(i, a) * out.vectors(i, b);
            worst = std::max(worst, std::fabs(s - (a == b ? 1.0 : 0.0)));
        }
    if (worst > tol) throw ConvergenceFailure(tol, worst);
    return out;
}

Mat spectral_projector(const EigDecomp& e, const IntervalUnion& omega) {
    const int n = e.size();
    for (double mu : e.values)
        for (auto [lo, hi] : omega.parts) {
            if (std::fabs(mu - lo) <= 10.0 * e.tol) throw AmbiguousBoundary(mu, lo);
            if (std::fabs(mu - hi) <= 10.0 * e.tol) throw AmbiguousBoundary(mu, hi);
        }
    Mat E(n, n);
    for (int j = 0; j < n; ++j) {
        if (!omega.contains(e.values[j])) continue;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                E(r, c) += e.vectors(r, j) * e.vectors(c, j) * e.weights[c];
    }
    return E;
}

double weighted_opnorm(const Mat& A, std::span<const double> w) {
    // similarity by D^{1/2} turns the weighted norm into the plain 2-norm
    Mat B(A.rows(), A.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            B(i, j) = std::sqrt(w[i]) * A(i, j) / std::sqrt(w[j]);
    return linalg::opnorm(B);
}

double weighted_opnorm(const CMat& A, std::span<const double> w) {
    CMat B(A.rows(), A.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            B(i, j) = std::sqrt(w[i]) * A(i, j) / std::sqrt(w[j]);
    return linalg::opnorm(B);
}

Mat weighted_adjoint(const Mat& A, std::span<const double> w) {
    Mat B(A.cols(), A.rows());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) B(j, i) = w[i] * A(i, j) / w[j];
    return B;
}

CMat weighted_adjoint(const CMat& A, std::span<const double> w) {
    CMat B(A.cols(), A.rows());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) B(j, i) = w[i] * std::conj(A(i, j)) / w[j];
    return B;
}

}  // namespace spectral
