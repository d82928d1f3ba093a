#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "spectral/linalg.hpp"
#include "spectral/verification.hpp"

namespace spectral {

/// Array of identical half-line dots (Dirichlet reference, scalar Weyl map
/// m(z) = i sqrt z) coupled through a bounded symmetric boundary operator T.
/// The gap is J = (-inf, 0); on it m(lambda) = -sqrt(-lambda).
struct DotArrayModel {
    int n = 0;
    linalg::Mat T;  // n x n, symmetric
};

/// Parse {"T": [[...], ...]}; unknown keys rejected. `strict_symmetry`
/// exists for fault injection in tests.
DotArrayModel load_dot_model(const std::string& text);
void check_symmetry(const DotArrayModel& model);

/// One bound-state atom: lambda = -mu^2 for an eigenvalue mu < 0 of T.
struct BoundState {
    double lambda;
    double kappa;          // sqrt(-lambda) = -mu
    double mu;             // the T eigenvalue
    int mult;
    linalg::Mat source;    // n x mult, orthonormal T-eigenvectors
};

/// Gap spectrum of H_T: one atom per negative eigenvalue cluster of T.
std::vector<BoundState> dot_spectrum(const DotArrayModel& model);

/// Atoms with image data: site coefficients sqrt(2 kappa) v(alpha) against
/// e^{-kappa x} per site.
struct DotIntertwiner {
    std::vector<BoundState> atoms;
    int rank() const {
        int r = 0;
        for (const auto& a : atoms) r += a.mult;
        return r;
    }
};
DotIntertwiner dot_intertwiner(const DotArrayModel& model);

/// Gram of the image frames in (+) L2(0, inf), closed-form exponentials.
linalg::Mat dot_image_gram(const DotIntertwiner& map);

struct DotOracleOptions {
    bool enabled = true;
    double R = 10.0;        // truncation length, Dirichlet at x = R
    int nodes_per_unit = 50;
    double tol_abs = 1e-3;
};

/// Verification rows: isometry, boundary condition f'(0) = (Tf)(0) per bound
/// state, the eigen-identity -f'' = lambda f, optional FEM-oracle agreement.
VerificationReport dot_verify(const DotArrayModel& model,
                              const DotOracleOptions& oracle = {});

/// Negative eigenvalues of the truncated FEM model (P1 on N coupled segments
/// [0,R], the coupling entering the bilinear form through T), found by
/// bisection on the inertia of the shifted pencil.
std::vector<double> dot_oracle_spectrum(const DotArrayModel& model, double R, int nodes_per_unit);

/// CSV: site,kappa,coefficient; states grouped in atom/column order.
void write_bound_state_csv(std::ostream& os, const DotIntertwiner& map);

}  // namespace spectral
