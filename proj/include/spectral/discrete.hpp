#pragma once

#include <complex>
#include <span>
#include <vector>

#include "spectral/graph.hpp"
#include "spectral/linalg.hpp"

namespace spectral {

using linalg::cplx;

/// Finite union of closed real intervals (sorted, disjoint after add()).
struct IntervalUnion {
    std::vector<std::pair<double, double>> parts;

    static IntervalUnion interval(double a, double b);
    void add(double a, double b);
    bool contains(double x) const;
    IntervalUnion intersect(const IntervalUnion& other) const;
    bool empty() const { return parts.empty(); }
};

// Weighted vertex space l2(X0, m0): <f,g> = sum_x m0(x) conj(f(x)) g(x).
cplx weighted_dot(std::span<const double> w, std::span<const cplx> f, std::span<const cplx> g);
double weighted_dot(std::span<const double> w, std::span<const double> f,
                    std::span<const double> g);
double weighted_norm(std::span<const double> w, std::span<const cplx> f);

/// Matrix of the transition operator P: (Pf)(x) = (1/m0(x)) sum_{y~x} f(y).
linalg::Mat transition_matrix(const Graph& g);

/// Eigendecomposition of P, ascending, weighted-orthonormal columns.
struct EigDecomp {
    std::vector<double> values;
    linalg::Mat vectors;           // column i is the eigenvector of values[i]
    double tol = 1e-12;
    std::vector<double> weights;   // m0 copy

    int size() const { return int(values.size()); }
    /// Runs [begin,end) of eigenvalues closer than 10*tol (degenerate clusters).
    std::vector<std::pair<int, int>> clusters() const;
};

EigDecomp sym_eigendecomposition(const Graph& g, double tol = 1e-12);

/// E_P(Omega) as a matrix on the weighted space. Interval endpoints must
/// stay clear of the spectrum by 10*tol (AmbiguousBoundary otherwise).
linalg::Mat spectral_projector(const EigDecomp& e, const IntervalUnion& omega);

// Operator-norm and adjoint with respect to the weighted inner product.
double weighted_opnorm(const linalg::Mat& A, std::span<const double> w);
double weighted_opnorm(const linalg::CMat& A, std::span<const double> w);
linalg::Mat weighted_adjoint(const linalg::Mat& A, std::span<const double> w);
linalg::CMat weighted_adjoint(const linalg::CMat& A, std::span<const double> w);

}  // namespace spectral
