#pragma once

#include <complex>
#include <utility>

#include "spectral/discrete.hpp"
#include "spectral/graph.hpp"
#include "spectral/linalg.hpp"

namespace spectral {

/// Scalar evaluation bundle at a complex point z for the network model:
///   m(z)  = cos sqrt(z)          (entire, even in sqrt z)
///   m'(z) = -sin sqrt(z) / (2 sqrt z)
///   n(z)  = 2 m'(z)
///   n'(z) = 2 m''(z)
struct ScalarMaps {
    cplx m, mp, n, np;
};

/// Evaluated branch-independently; truncated series near z = 0.
ScalarMaps scalar_maps(cplx z);

inline constexpr double kScalarSeriesRadius = 1e-4;

/// Spectral band k: the open interval ((k pi)^2, ((k+1) pi)^2); band 0 is
/// extended to (-inf, pi^2) so real points in the resolvent set below the
/// spectrum stay usable. lo is -infinity for k = 0.
struct Band {
    int k;
    double lo, hi;
};
Band band(int k);

/// Unique solution of m(lambda) = mu in band k:
///   lambda = (k pi + arccos((-1)^k mu))^2.
/// Throws SigmaCollision when the preimage lands on the forbidden set and
/// OutOfRange for mu outside [-1, 1].
double band_inverse(int k, double mu);

/// Nearest element of {(k pi)^2 : k >= 1} and its distance.
std::pair<double, double> sigma_distance(double lambda);

/// True when z grazes the forbidden set (sin sqrt z numerically zero away
/// from z = 0).
bool sigma_pole(cplx z);

/// M(z) = (m(z) I - P) / n(z) on the weighted vertex space.
/// Throws SigmaPole when z is on (or numerically at) the forbidden set.
linalg::CMat weyl_matrix(const Graph& g, const linalg::Mat& P, cplx z);

}  // namespace spectral
