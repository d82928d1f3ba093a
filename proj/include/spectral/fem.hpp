#pragma once

#include <vector>

#include "spectral/discrete.hpp"
#include "spectral/gamma.hpp"
#include "spectral/graph.hpp"
#include "spectral/intertwiner.hpp"

namespace spectral {

/// P1 discretization of the Kirchhoff Laplacian on the metric graph.
/// One unknown per vertex (continuity by node sharing) plus nodes-1 interior
/// unknowns per edge; the Kirchhoff condition is natural.
struct FemSystem {
    const Graph* g = nullptr;
    int nodes = 0;  // elements per edge, mesh h = 1/nodes
    linalg::Mat K, M;

    int size() const { return g->num_vertices() + g->num_edges() * (nodes - 1); }
    int vertex_index(int v) const { return v; }
    int interior_index(int e, int j) const {  // j in [1, nodes-1]
        return g->num_vertices() + e * (nodes - 1) + (j - 1);
    }
};

FemSystem assemble_fem(const Graph& g, int nodes);

/// Generalized symmetric eigenpairs of (K, M) with eigenvalue <= lambda_max.
/// Eigenvectors are M-orthonormal.
struct OracleEig {
    std::vector<double> values;
    linalg::Mat vectors;
};
OracleEig oracle_spectrum(const Graph& g, int nodes, double lambda_max);

/// Values of an edge wave at the FEM nodes (vertex traces taken from the
/// first incident edge; waves in range(gamma) have consistent traces).
std::vector<cplx> sample_edgewave_nodes(const FemSystem& fem, const EdgeWave& F);

struct OracleCompareRow {
    double lambda;       // analytic band preimage
    int mult;
    std::vector<double> fem_values;  // matched oracle eigenvalues
    double rel_err;      // max relative eigenvalue error (abs for lambda ~ 0)
    double sin_angle;    // largest principal angle between the eigenspaces
};

struct OracleComparison {
    std::vector<OracleCompareRow> rows;
    std::vector<double> skipped_sigma_window;  // analytic preimages inside the filter
    double max_rel_err = 0.0;
    double max_sin_angle = 0.0;
};

/// Eigenvalue multisets and eigenspace angles, analytic vs FEM, with a
/// radius-0.5 neighborhood of the forbidden set filtered on both sides.
/// Throws MultiplicityMismatch on a count disagreement.
OracleComparison oracle_compare(const Graph& g, const EigDecomp& e, int k, double a, double b,
                                int nodes);

/// FEM resolvents at z: the full Kirchhoff system and the decoupled
/// Dirichlet-edge system (vertex unknowns pinned to zero).
struct ResolventPair {
    std::vector<cplx> full, dirichlet;
};
ResolventPair oracle_resolvent_apply(const Graph& g, int nodes, cplx z, const EdgeWave& rhs);

/// Relative M-norm error between the analytic resolvent correction
/// -gamma(z) M(z)^{-1} gamma(conj z)^* F and the FEM resolvent difference.
/// inv_norm, when given, receives the weighted norm of M(z)^{-1}.
double krein_oracle_relerr(const Graph& g, const EigDecomp& e, int nodes, cplx z,
                           const EdgeWave& rhs, double* inv_norm = nullptr);

}  // namespace spectral
