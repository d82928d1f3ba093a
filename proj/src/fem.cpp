#include "spectral/fem.hpp"

#include <algorithm>
#include <cmath>

#include "spectral/errors.hpp"
#include "spectral/weyl.hpp"

namespace spectral {

using linalg::CMat;
using linalg::Mat;

FemSystem assemble_fem(const Graph& g, int nodes) {
    if (nodes < 8) throw InvalidSize("need at least 8 elements per edge");
    FemSystem fem;
    fem.g = &g;
    fem.nodes = nodes;
    const int n = fem.size();
    fem.K = Mat(n, n);
    fem.M = Mat(n, n);
    const double h = 1.0 / double(nodes);
    for (int e = 0; e < g.num_edges(); ++e) {
        auto global = [&](int j) {
            if (j == 0) return fem.vertex_index(g.edges[e].first);
            if (j == nodes) return fem.vertex_index(g.edges[e].second);
            return fem.interior_index(e, j);
        };
        for (int k = 0; k < nodes; ++k) {
            const int a = global(k), b = global(k + 1);
            fem.K(a, a) += 1.0 / h;
            fem.K(b, b) += 1.0 / h;
            fem.K(a, b) += -1.0 / h;
            fem.K(b, a) += -1.0 / h;
            fem.M(a, a) += 2.0 * h / 6.0;
            fem.M(b, b) += 2.0 * h / 6.0;
            fem.M(a, b) += h / 6.0;
            fem.M(b, a) += h / 6.0;
        }
    }
    return fem;
}

OracleEig oracle_spectrum(const Graph& g, int nodes, double lambda_max) {
    const FemSystem fem = assemble_fem(g, nodes);
    const int n = fem.size();
    const Mat L = linalg::chol_lower(fem.M);

    // B = L^{-1} K L^{-T}, reduced to a standard symmetric problem
    Mat X = fem.K;
    linalg::kernels::solve_lower_inplace(L, X);  // X = L^{-1} K
    Mat Y = linalg::transpose(X);
    linalg::kernels::solve_lower_inplace(L, Y);  // Y = L^{-1} K^T L^{-T} (transposed)
    Mat B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B(i, j) = 0.5 * (Y(i, j) + Y(j, i));

    linalg::SymEig se = linalg::sym_eigen_window(std::move(B), -1.0, lambda_max);
    linalg::kernels::solve_lowerT_inplace(L, se.vectors);  // back to M-orthonormal vectors
    return {std::move(se.values), std::move(se.vectors)};
}

std::vector<cplx> sample_edgewave_nodes(const FemSystem& fem, const EdgeWave& F) {
    const Graph& g = *fem.g;
    std::vector<cplx> out(fem.size(), cplx(0.0));
    const double h = 1.0 / double(fem.nodes);
    for (int e = 0; e < g.num_edges(); ++e) {
        out[fem.vertex_index(g.edges[e].first)] = edgewave_eval(F, e, 0.0);
        out[fem.vertex_index(g.edges[e].second)] = edgewave_eval(F, e, 1.0);
        for (int j = 1; j < fem.nodes; ++j)
            out[fem.interior_index(e, j)] = edgewave_eval(F, e, h * double(j));
    }
    return out;
}

namespace {

double mnorm(const FemSystem& fem, const std::vector<cplx>& x) {
    // x^H M x via the assembled mass matrix
    double s = 0.0;
    const int n = fem.size();
    for (int i = 0; i < n; ++i) {
        cplx row = 0.0;
        for (int j = 0; j < n; ++j) row += fem.M(i, j) * x[j];
        s += (std::conj(x[i]) * row).real();
    }
    return std::sqrt(std::max(0.0, s));
}

/// M-inner-product matrix S^T M Q for real column blocks.
Mat cross_m(const FemSystem& fem, const Mat& S, const Mat& Q) {
    const int n = fem.size();
    Mat MQ(n, Q.cols());
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double m = fem.M(i, k);
            if (m == 0.0) continue;
            for (int c = 0; c < Q.cols(); ++c) MQ(i, c) += m * Q(k, c);
        }
    return linalg::matmul(linalg::transpose(S), MQ);
}

}  // namespace

OracleComparison oracle_compare(const Graph& g, const EigDecomp& e, int k, double a, double b,
                                int nodes) {
    const IntertwinerMap phi = phi_eigen_sum(g, e, k, a, b);
    const FemSystem fem = assemble_fem(g, nodes);
    const OracleEig oe = oracle_spectrum(g, nodes, b + 1.0);
    const double h = 1.0 / double(nodes);

    OracleComparison cmp;
    std::vector<char> claimed(oe.values.size(), 0);
    double window_max = 0.0;

    for (const Atom& at : phi.atoms) {
        if (sigma_distance(at.lambda).second <= 0.5) {
            cmp.skipped_sigma_window.push_back(at.lambda);
            continue;
        }
        const double window = 50.0 * h * h * std::max(std::fabs(at.lambda), 1.0);
        window_max = std::max(window_max, window);
        OracleCompareRow row;
        row.lambda = at.lambda;
        row.mult = at.multiplicity;
        std::vector<int> hits;
        for (std::size_t i = 0; i < oe.values.size(); ++i)
            if (!claimed[i] && std::fabs(oe.values[i] - at.lambda) <= window) hits.push_back(int(i));
        if (int(hits.size()) != at.multiplicity)
            throw MultiplicityMismatch(at.lambda, at.multiplicity, int(hits.size()));
        double err = 0.0;
        for (int i : hits) {
            claimed[i] = 1;
            row.fem_values.push_back(oe.values[i]);
            err = std::max(err,
                           std::fabs(oe.values[i] - at.lambda) / std::max(std::fabs(at.lambda), 1.0));
        }
        row.rel_err = err;

        // principal angles between the sampled image frame and the FEM cluster
        const int m = at.multiplicity, n = fem.size();
        Mat S(n, m), Q(n, m);
        for (int c = 0; c < m; ++c) {
            const std::vector<cplx> s = sample_edgewave_nodes(fem, at.image[c]);
            for (int i = 0; i < n; ++i) {
                S(i, c) = s[i].real();
                Q(i, c) = oe.vectors(i, hits[c]);
            }
        }
        // M-orthonormalize the sampled columns
        Mat Gs = cross_m(fem, S, S);
        const Mat Ls = linalg::chol_lower(Gs);
        // S_tilde = S L^{-T}: solve L S_tilde^T = S^T
        Mat St = linalg::transpose(S);
        linalg::kernels::solve_lower_inplace(Ls, St);
        const Mat Stil = linalg::transpose(St);
        const Mat C = cross_m(fem, Stil, Q);
        const std::vector<double> sv = linalg::sym_eigenvalues(
            linalg::matmul(linalg::transpose(C), C));
        const double smin2 = std::max(0.0, sv.front());
        row.sin_angle = std::sqrt(std::max(0.0, 1.0 - smin2));

        cmp.max_rel_err = std::max(cmp.max_rel_err, row.rel_err);
        cmp.max_sin_angle = std::max(cmp.max_sin_angle, row.sin_angle);
        cmp.rows.push_back(std::move(row));
    }

    // an unclaimed oracle eigenvalue well inside [a,b] means a missed atom
    for (std::size_t i = 0; i < oe.values.size(); ++i) {
        const double v = oe.values[i];
        if (claimed[i] || sigma_distance(v).second <= 0.5) continue;
        if (v > a + window_max && v < b - window_max)
            throw MultiplicityMismatch(v, 0, 1);
    }
    return cmp;
}

ResolventPair oracle_resolvent_apply(const Graph& g, int nodes, cplx z, const EdgeWave& rhs) {
    const FemSystem fem = assemble_fem(g, nodes);
    const int n = fem.size();
    const std::vector<cplx> f = sample_edgewave_nodes(fem, rhs);

    std::vector<cplx> Mf(n, cplx(0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Mf[i] += fem.M(i, j) * f[j];

    ResolventPair out;
    {
        CMat A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = fem.K(i, j) - z * fem.M(i, j);
        const linalg::LuFactor lu = linalg::lu_factor(std::move(A));
        out.full = linalg::lu_solve(lu, Mf);
    }
    {
        // decoupled Dirichlet edges: vertex unknowns pinned to zero
        const int nv = g.num_vertices();
        const int ni = n - nv;
        CMat A(ni, ni);
        for (int i = 0; i < ni; ++i)
            for (int j = 0; j < ni; ++j)
                A(i, j) = fem.K(nv + i, nv + j) - z * fem.M(nv + i, nv + j);
        std::vector<cplx> bd(ni);
        for (int i = 0; i < ni; ++i) bd[i] = Mf[nv + i];
        const linalg::LuFactor lu = linalg::lu_factor(std::move(A));
        const std::vector<cplx> ud = linalg::lu_solve(lu, std::move(bd));
        out.dirichlet.assign(n, cplx(0.0));
        for (int i = 0; i < ni; ++i) out.dirichlet[nv + i] = ud[i];
    }
    return out;
}

double krein_oracle_relerr(const Graph& g, const EigDecomp& e, int nodes, cplx z,
                           const EdgeWave& rhs, double* inv_norm) {
    const FemSystem fem = assemble_fem(g, nodes);
    const ResolventPair rp = oracle_resolvent_apply(g, nodes, z, rhs);
    const EdgeWave corr = krein_correction_apply(g, e, z, rhs, inv_norm);
    const std::vector<cplx> s = sample_edgewave_nodes(fem, corr);
    const int n = fem.size();
    std::vector<cplx> diff(n), err(n);
    for (int i = 0; i < n; ++i) {
        diff[i] = rp.full[i] - rp.dirichlet[i];
        err[i] = s[i] - diff[i];
    }
    const double denom = mnorm(fem, diff);
    if (denom == 0.0) return mnorm(fem, err);
    return mnorm(fem, err) / denom;
}

}  // namespace spectral
