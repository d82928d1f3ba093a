#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "spectral/discrete.hpp"
#include "spectral/graph.hpp"

namespace spectral {

/// Per-edge trigonometric wave
///     F(uv, t) = a phi_w(1-t) + b phi_w(t),   phi_w(t) = sin(w t)/sin(w),
/// with the w = 0 degeneration phi_0(t) = t. Coefficients are stored against
/// the canonical edge orientation; reading an edge backwards swaps (a, b).
struct EdgeWave {
    const Graph* g = nullptr;
    cplx w = 0.0;         // sqrt(z), ignored in linear mode
    bool linear = false;  // z = 0 mode
    std::vector<std::array<cplx, 2>> coef;  // {a, b} per canonical edge

    int num_edges() const { return int(coef.size()); }
};

EdgeWave zero_wave(const Graph& g, cplx z);

/// gamma(z) xi: per edge (u,v) the wave with a = xi(u), b = xi(v).
/// z = 0 (within 1e-12) produces the linear mode. Throws SigmaPole.
EdgeWave gamma_apply(const Graph& g, cplx z, std::span<const cplx> xi);

/// L2(X1) inner product, conjugate-linear in F, via closed-form integrals.
cplx edgewave_inner(const EdgeWave& F, const EdgeWave& G);

/// gamma(conj z)^* F in the weighted vertex space:
/// <xi, result>_w = <gamma(conj z) xi, F>_L2 for all xi.
std::vector<cplx> gamma_adjoint_apply(const Graph& g, cplx z, const EdgeWave& F);

struct VertexResiduals {
    double continuity;  // max over vertices of the spread of incident traces
    double kirchhoff;   // max over vertices of |sum of outgoing derivatives|
};
/// lambda must match the wave's frequency (w = sqrt(lambda), real).
VertexResiduals vertex_residuals(const Graph& g, const EdgeWave& F, double lambda);

/// Operator-norm defect of M(z1) - M(conj z2) = (z1 - conj z2) gamma(z2)^* gamma(z1),
/// Weyl side from the matrix formula, Gram side from closed-form integrals.
/// In the degenerate case z1 = z2 = real lambda the Gram is compared with
/// M'(lambda) instead.
double weyl_identity_residual(const Graph& g, cplx z1, cplx z2);

/// Point evaluation on the canonical edge parameterization.
cplx edgewave_eval(const EdgeWave& F, int edge, double t);
/// Evaluation reading the edge from vertex `from` (reflection-aware).
cplx edgewave_eval_from(const EdgeWave& F, int edge, int from, double t);
/// Outgoing derivative at the `from` end of the edge.
cplx edgewave_deriv_out(const EdgeWave& F, int edge, int from);

/// CSV sample: header edge_u,edge_v,t,re,im; `samples` points per edge.
void write_edgewave_csv(std::ostream& os, const EdgeWave& F, int samples);

namespace detail {
/// (A, B) with A = int phi_p(1-t) phi_q(1-t) dt = int phi_p(t) phi_q(t) dt and
/// B = int phi_p(1-t) phi_q(t) dt (symmetric in p, q). Linear modes enter as
/// p = 0 / q = 0 exactly.
struct PairIntegrals {
    cplx A, B;
};
PairIntegrals phi_pair_integrals(cplx p, cplx q);
cplx phi_eval(cplx w, bool linear, double t);
cplx phi_deriv_out(cplx w, bool linear, cplx near_coef, cplx far_coef);
}  // namespace detail

}  // namespace spectral
