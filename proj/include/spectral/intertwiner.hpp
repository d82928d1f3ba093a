#pragma once

#include <cstdint>
#include <vector>

#include "spectral/discrete.hpp"
#include "spectral/gamma.hpp"
#include "spectral/graph.hpp"
#include "spectral/verification.hpp"

namespace spectral {

/// One spectral atom of the finite-rank intertwiner: a band point lambda,
/// a weighted-orthonormal source frame in the vertex space, and its image
/// frame of scaled edge waves sqrt(n/m') gamma(lambda) v_j.
struct Atom {
    double lambda = 0.0;
    double mu = 0.0;  // m(lambda)
    int multiplicity = 0;
    linalg::Mat source;           // n x multiplicity
    std::vector<EdgeWave> image;  // multiplicity waves
    std::vector<double> preimages;  // true spectral preimages this atom covers
};

struct IntertwinerMap {
    const Graph* g = nullptr;
    int band = 0;
    double a = 0.0, b = 0.0;
    std::vector<Atom> atoms;
    std::vector<double> sigma_excluded;  // mu whose band preimage lies in Sigma

    int rank() const {
        int r = 0;
        for (const auto& at : atoms) r += at.multiplicity;
        return r;
    }
};

struct BandEigenvalue {
    double lambda;
    double mu;
    int mult;
    int first, last;  // eigenvalue index range [first, last) in the EigDecomp
};

struct BandSystem {
    std::vector<BandEigenvalue> inside;  // preimages in (a, b), ascending
    std::vector<double> sigma_excluded;
};

/// Interval admissibility: [a,b] inside the band closure, clear of the
/// forbidden set, and with m(a), m(b) clear of spec P by 10*tol.
void validate_interval(const EigDecomp& e, int k, double a, double b);

/// Spectrum of H inside (a,b) in band k via the preimages of spec P.
BandSystem band_eigensystem(const EigDecomp& e, int k, double a, double b);

/// Phi([a,b]) collapsed onto the eigenvalue atoms.
IntertwinerMap phi_eigen_sum(const Graph& g, const EigDecomp& e, int k, double a, double b);

struct Partition {
    std::vector<double> points;  // ascending, first = a, last = b
    std::vector<double> eval;    // one point per cell, inside its closure
};

/// Riemann-Stieltjes partial sum Phi_Delta for an arbitrary partition.
/// Cell boundaries must stay clear of the preimages (AmbiguousBoundary).
IntertwinerMap phi_riemann_sum(const Graph& g, const EigDecomp& e, int k, double a, double b,
                               const Partition& partition);

/// max over true atoms of || (Phi_Delta - Phi) restricted to the atom ||.
double riemann_defect(const IntertwinerMap& riemann, const IntertwinerMap& eigen);

/// Uniform partition with evaluation points held at a quarter-cell offset
/// from each covered preimage (linear-rate probe for the convergence table).
Partition probe_partition(const BandSystem& bs, double a, double b, int cells);
/// Boundaries at midpoints between consecutive preimages (one preimage per
/// cell by construction), evaluation exactly at the preimages.
Partition exact_partition(const BandSystem& bs, double a, double b);

struct StieltjesRow {
    int cells;
    double mesh;
    double defect;
};
std::vector<StieltjesRow> stieltjes_table(const Graph& g, const EigDecomp& e, int k, double a,
                                          double b, const std::vector<int>& cell_counts);

// Gram machinery shared by the verification suite.
linalg::CMat image_gram(const IntertwinerMap& phi);
linalg::CMat cross_gram(const IntertwinerMap& phi1, const IntertwinerMap& phi2);
/// Phi^* Phi as a matrix on the weighted vertex space (via closed-form Grams).
linalg::CMat phi_star_phi(const IntertwinerMap& phi);

/// The full per-interval verification suite (isometry, eigen-residuals,
/// disjointness, transport, conjugation, per-atom Gram identity).
VerificationReport verify_interval(const Graph& g, const EigDecomp& e, int k, double a, double b,
                                   std::uint64_t seed = 0x5eed);

/// -gamma(z) M(z)^{-1} gamma(conj z)^* F, the correction term of the
/// resolvent difference. Throws SigmaPole / SingularWeyl. When given,
/// inv_norm receives the weighted norm of M(z)^{-1}.
EdgeWave krein_correction_apply(const Graph& g, const EigDecomp& e, cplx z, const EdgeWave& F,
                                double* inv_norm = nullptr);

}  // namespace spectral
