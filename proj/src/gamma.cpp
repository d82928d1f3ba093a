#include "spectral/gamma.hpp"

#include <cmath>
#include <ostream>

#include "spectral/errors.hpp"
#include "spectral/weyl.hpp"

namespace spectral {

namespace detail {

namespace {

/// sin(c)/c, series below |c| = 0.5
cplx csinc(cplx c) {
    if (std::abs(c) >= 0.5) return std::sin(c) / c;
    const cplx c2 = c * c;
    cplx term = 1.0, sum = 1.0;
    for (int j = 1; j <= 10; ++j) {
        term *= -c2 / double((2 * j) * (2 * j + 1));
        sum += term;
    }
    return sum;
}

/// (1 - cos c)/c, series below |c| = 0.5
cplx ccosc(cplx c) {
    if (std::abs(c) >= 0.5) return (1.0 - std::cos(c)) / c;
    const cplx c2 = c * c;
    cplx term = c / 2.0, sum = term;
    for (int j = 2; j <= 10; ++j) {
        term *= -c2 / double((2 * j - 1) * (2 * j));
        sum += term;
    }
    return sum;
}

cplx rs(cplx c) { return 1.0 / csinc(c); }  // c / sin(c)

constexpr double kSeriesRadius = 3.5;
constexpr double kMixedSmall = 0.1;

/// Both |p|, |q| <= 3.5: double series.
///   A = rs(p) rs(q) sum (-1)^{j+k} p^{2j} q^{2k} / [(2j+1)!(2k+1)!(2j+2k+3)]
///   B = rs(p) rs(q) sum (-1)^{j+k} p^{2j} q^{2k} / (2j+2k+3)!
PairIntegrals pair_series(cplx p, cplx q) {
    constexpr int J = 21;
    static const std::vector<double> inv_fact = [] {
        std::vector<double> f(4 * J + 4, 1.0);  // indices reach 2j + 2k + 3
        for (std::size_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] / double(i);
        return f;
    }();
    cplx p2 = p * p, q2 = q * q;
    cplx ppow[J], qpow[J];
    ppow[0] = qpow[0] = 1.0;
    for (int j = 1; j < J; ++j) {
        ppow[j] = -ppow[j - 1] * p2;  // (-1)^j p^{2j}
        qpow[j] = -qpow[j - 1] * q2;
    }
    cplx sA = 0.0, sB = 0.0;
    for (int j = 0; j < J; ++j) {
        const double fj = inv_fact[2 * j + 1];
        for (int k = 0; k < J; ++k) {
            const cplx t = ppow[j] * qpow[k];
            sA += t * (fj * inv_fact[2 * k + 1] / double(2 * j + 2 * k + 3));
            sB += t * inv_fact[2 * j + 2 * k + 3];
        }
    }
    const cplx f = rs(p) * rs(q);
    return {sA * f, sB * f};
}

/// |small| <= 0.1, |large| > 3.5: series in the small frequency against
/// moment integrals W_n = int t^n sin(Lt) dt, V_n = int t^n cos(Lt) dt.
PairIntegrals pair_mixed(cplx small, cplx large) {
    constexpr int J = 6;  // small^{2J+1} remainder ~ 1e-19 at |small| = 0.1
    constexpr int N = 2 * J + 1;
    const cplx L = large;
    const cplx sinL = std::sin(L), cosL = std::cos(L);
    cplx W[N + 1], V[N + 1];
    W[0] = ccosc(L);
    V[0] = csinc(L);
    for (int n = 1; n <= N; ++n) {
        W[n] = -cosL / L + double(n) / L * V[n - 1];
        V[n] = sinL / L - double(n) / L * W[n - 1];
    }
    const cplx s2 = small * small;
    cplx coef = 1.0;  // (-1)^j small^{2j} / (2j+1)!
    cplx sumA = 0.0, sumB = 0.0;
    for (int j = 0; j <= J; ++j) {
        if (j > 0) coef *= -s2 / double((2 * j) * (2 * j + 1));
        const int n = 2 * j + 1;
        sumA += coef * W[n];
        sumB += coef * (sinL * V[n] - cosL * W[n]);  // U_n = int (1-t)^n sin(Lt) dt
    }
    const cplx f = rs(small) / sinL;
    return {sumA * f, sumB * f};
}

/// General closed form away from the small-frequency regimes.
PairIntegrals pair_closed(cplx p, cplx q) {
    const cplx sinp = std::sin(p), cosp = std::cos(p), sinq = std::sin(q);
    const cplx I = 0.5 * (csinc(p - q) - csinc(p + q));
    const cplx Jpq = 0.5 * (ccosc(q + p) + ccosc(q - p));
    const cplx denom = sinp * sinq;
    return {I / denom, (sinp * Jpq - cosp * I) / denom};
}

}  // namespace

PairIntegrals phi_pair_integrals(cplx p, cplx q) {
    const double ap = std::abs(p), aq = std::abs(q);
    if (ap <= kSeriesRadius && aq <= kSeriesRadius) return pair_series(p, q);
    if (ap <= kMixedSmall) return pair_mixed(p, q);
    if (aq <= kMixedSmall) return pair_mixed(q, p);
    return pair_closed(p, q);
}

cplx phi_eval(cplx w, bool linear, double t) {
    if (linear) return t;
    // sin(wt)/sin(w) = t sinc(wt)/sinc(w)
    return t * csinc(w * t) / csinc(w);
}

cplx phi_deriv_out(cplx w, bool linear, cplx near_coef, cplx far_coef) {
    if (linear) return far_coef - near_coef;
    return rs(w) * (far_coef - near_coef * std::cos(w));
}

}  // namespace detail

using detail::phi_pair_integrals;

EdgeWave zero_wave(const Graph& g, cplx z) {
    EdgeWave F;
    F.g = &g;
    if (std::abs(z) < 1e-12) {
        F.linear = true;
        F.w = 0.0;
    } else {
        if (sigma_pole(z)) throw SigmaPole("edge wave undefined: z in the forbidden set");
        F.w = std::sqrt(z);
    }
    F.coef.assign(g.num_edges(), {cplx(0.0), cplx(0.0)});
    return F;
}

EdgeWave gamma_apply(const Graph& g, cplx z, std::span<const cplx> xi) {
    EdgeWave F = zero_wave(g, z);
    for (int e = 0; e < g.num_edges(); ++e) {
        F.coef[e][0] = xi[g.edges[e].first];
        F.coef[e][1] = xi[g.edges[e].second];
    }
    return F;
}

cplx edgewave_inner(const EdgeWave& F, const EdgeWave& G) {
    if (F.g != G.g) throw GraphMismatch();
    const cplx p = F.linear ? cplx(0.0) : std::conj(F.w);
    const cplx q = G.linear ? cplx(0.0) : G.w;
    const auto [A, B] = phi_pair_integrals(p, q);
    cplx s = 0.0;
    for (int e = 0; e < F.num_edges(); ++e) {
        const cplx fa = std::conj(F.coef[e][0]), fb = std::conj(F.coef[e][1]);
        const cplx ga = G.coef[e][0], gb = G.coef[e][1];
        s += (fa * ga + fb * gb) * A + (fa * gb + fb * ga) * B;
    }
    return s;
}

std::vector<cplx> gamma_adjoint_apply(const Graph& g, cplx z, const EdgeWave& F) {
    if (F.g != &g) throw GraphMismatch();
    cplx w;
    bool linear = false;
    if (std::abs(z) < 1e-12) {
        linear = true;
        w = 0.0;
    } else {
        if (sigma_pole(z)) throw SigmaPole("gamma adjoint undefined: z in the forbidden set");
        w = std::sqrt(z);
    }
    const cplx p = linear ? cplx(0.0) : w;
    const cplx q = F.linear ? cplx(0.0) : F.w;
    const auto [A, B] = phi_pair_integrals(p, q);
    std::vector<cplx> eta(g.num_vertices(), cplx(0.0));
    for (int e = 0; e < g.num_edges(); ++e) {
        const auto [u, v] = g.edges[e];
        const cplx a = F.coef[e][0], b = F.coef[e][1];
        eta[u] += a * A + b * B;  // integral against phi_w(1-t)
        eta[v] += a * B + b * A;  // integral against phi_w(t)
    }
    for (int x = 0; x < g.num_vertices(); ++x) eta[x] /= double(g.degree[x]);
    return eta;
}

VertexResiduals vertex_residuals(const Graph& g, const EdgeWave& F, double lambda) {
    if (F.g != &g) throw GraphMismatch();
    if (!F.linear && std::abs(F.w * F.w - lambda) > 1e-8 * std::max(1.0, std::fabs(lambda)))
        throw OutOfRange("edge wave frequency does not match lambda");

    const int n = g.num_vertices();
    std::vector<std::vector<cplx>> traces(n);
    std::vector<cplx> outgoing(n, 0.0);
    for (int e = 0; e < g.num_edges(); ++e) {
        const auto [u, v] = g.edges[e];
        const cplx a = F.coef[e][0], b = F.coef[e][1];
        for (int end = 0; end < 2; ++end) {
            const int x = end == 0 ? u : v;
            const cplx near = end == 0 ? a : b;
            const cplx far = end == 0 ? b : a;
            traces[x].push_back(near);
            outgoing[x] += detail::phi_deriv_out(F.w, F.linear, near, far);
        }
    }
    VertexResiduals r{0.0, 0.0};
    for (int x = 0; x < n; ++x) {
        for (std::size_t i = 0; i < traces[x].size(); ++i)
            for (std::size_t j = i + 1; j < traces[x].size(); ++j)
                r.continuity = std::max(r.continuity, std::abs(traces[x][i] - traces[x][j]));
        r.kirchhoff = std::max(r.kirchhoff, std::abs(outgoing[x]));
    }
    return r;
}

double weyl_identity_residual(const Graph& g, cplx z1, cplx z2) {
    const int n = g.num_vertices();
    const auto w = g.weights();
    const linalg::Mat P = transition_matrix(g);

    // Gram side gamma(z2)^* gamma(z1): columns from the closed-form integrals
    linalg::CMat G(n, n);
    std::vector<cplx> e_x(n);
    for (int x = 0; x < n; ++x) {
        std::fill(e_x.begin(), e_x.end(), cplx(0.0));
        e_x[x] = 1.0;
        const EdgeWave col = gamma_apply(g, z1, e_x);
        const std::vector<cplx> eta = gamma_adjoint_apply(g, std::conj(z2), col);
        for (int i = 0; i < n; ++i) G(i, x) = eta[i];
    }

    if (std::abs(z1 - std::conj(z2)) < 1e-12 * std::max(1.0, std::abs(z1))) {
        if (std::abs(z1.imag()) < 1e-14) {
            // degenerate real case: the Gram is the derivative M'(lambda)
            const ScalarMaps s = scalar_maps(z1.real());
            linalg::CMat D(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const cplx mmT = (i == j ? s.m : 0.0) - P(i, j);
                    D(i, j) = (i == j ? s.mp / s.n : 0.0) - (s.np / (s.n * s.n)) * mmT;
                }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) D(i, j) -= G(i, j);
            return weighted_opnorm(D, w);
        }
        return 0.0;  // both sides vanish identically
    }

    const linalg::CMat M1 = weyl_matrix(g, P, z1);
    const linalg::CMat M2 = weyl_matrix(g, P, std::conj(z2));
    const cplx factor = z1 - std::conj(z2);
    linalg::CMat R(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) R(i, j) = M1(i, j) - M2(i, j) - factor * G(i, j);
    return weighted_opnorm(R, w);
}

cplx edgewave_eval(const EdgeWave& F, int edge, double t) {
    return F.coef[edge][0] * detail::phi_eval(F.w, F.linear, 1.0 - t) +
           F.coef[edge][1] * detail::phi_eval(F.w, F.linear, t);
}

cplx edgewave_eval_from(const EdgeWave& F, int edge, int from, double t) {
    const auto [u, v] = F.g->edges[edge];
    if (from == u) return edgewave_eval(F, edge, t);
    if (from == v) return edgewave_eval(F, edge, 1.0 - t);
    throw OutOfRange("vertex is not an endpoint of the edge");
}

cplx edgewave_deriv_out(const EdgeWave& F, int edge, int from) {
    const auto [u, v] = F.g->edges[edge];
    const cplx a = F.coef[edge][0], b = F.coef[edge][1];
    if (from == u) return detail::phi_deriv_out(F.w, F.linear, a, b);
    if (from == v) return detail::phi_deriv_out(F.w, F.linear, b, a);
    throw OutOfRange("vertex is not an endpoint of the edge");
}

void write_edgewave_csv(std::ostream& os, const EdgeWave& F, int samples) {
    if (samples < 2) throw InvalidSize("need at least 2 samples per edge");
    os << "edge_u,edge_v,t,re,im\n";
    const Graph& g = *F.g;
    for (int e = 0; e < g.num_edges(); ++e) {
        for (int s = 0; s < samples; ++s) {
            const double t = double(s) / double(samples - 1);
            const cplx v = edgewave_eval(F, e, t);
            os << g.vertices[g.edges[e].first] << ',' << g.vertices[g.edges[e].second] << ','
               << t << ',' << v.real() << ',' << v.imag() << '\n';
        }
    }
}

}  // namespace spectral
