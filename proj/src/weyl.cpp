#include "spectral/weyl.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "spectral/errors.hpp"

namespace spectral {

namespace {

constexpr double kPi = std::numbers::pi;

/// Series in z: cos sqrt z = sum_j (-1)^j z^j / (2j)!, differentiated termwise.
ScalarMaps series_maps(cplx z) {
    constexpr int kTerms = 12;
    cplx zpow[kTerms];
    zpow[0] = 1.0;
    for (int j = 1; j < kTerms; ++j) zpow[j] = zpow[j - 1] * z;

    cplx m = 0.0, mp = 0.0, mpp = 0.0;
    double c = 1.0;  // (-1)^j / (2j)!
    for (int j = 0; j < kTerms; ++j) {
        m += c * zpow[j];
        if (j >= 1) mp += double(j) * c * zpow[j - 1];
        if (j >= 2) mpp += double(j) * double(j - 1) * c * zpow[j - 2];
        c = -c / double((2 * j + 1) * (2 * j + 2));
    }
    return {m, mp, 2.0 * mp, 2.0 * mpp};
}

}  // namespace

ScalarMaps scalar_maps(cplx z) {
    if (std::abs(z) < kScalarSeriesRadius) return series_maps(z);
    const cplx w = std::sqrt(z);
    const cplx sw = std::sin(w), cw = std::cos(w);
    ScalarMaps s;
    s.m = cw;
    s.mp = -sw / (2.0 * w);
    s.n = 2.0 * s.mp;
    // m'' = -cos w/(4 z) + sin w/(4 w^3)
    const cplx mpp = -cw / (4.0 * z) + sw / (4.0 * w * z);
    s.np = 2.0 * mpp;
    return s;
}

Band band(int k) {
    if (k < 0) throw OutOfRange("band index must be >= 0");
    const double lo = k == 0 ? -std::numeric_limits<double>::infinity() : (k * kPi) * (k * kPi);
    const double hi = ((k + 1) * kPi) * ((k + 1) * kPi);
    return {k, lo, hi};
}

double band_inverse(int k, double mu) {
    if (k < 0) throw OutOfRange("band index must be >= 0");
    if (mu < -1.0 || mu > 1.0)
        throw OutOfRange("mu = " + std::to_string(mu) + " outside [-1, 1]");
    // preimages of +-1 at band ends lie in the forbidden set, except mu=1,k=0
    if (k == 0) {
        if (mu == -1.0) throw SigmaCollision(k, mu);
    } else {
        if (mu == 1.0 || mu == -1.0) throw SigmaCollision(k, mu);
    }
    const double arg = (k % 2 == 0) ? mu : -mu;
    const double lambda_sqrt = k * kPi + std::acos(arg);
    return lambda_sqrt * lambda_sqrt;
}

std::pair<double, double> sigma_distance(double lambda) {
    if (lambda <= kPi * kPi) return {kPi * kPi, kPi * kPi - lambda};
    const double r = std::sqrt(lambda) / kPi;
    double best_pt = 0.0, best = std::numeric_limits<double>::infinity();
    for (long k = std::max(1L, std::lround(r) - 1); k <= std::lround(r) + 1; ++k) {
        const double pt = double(k) * kPi * double(k) * kPi;
        const double d = std::fabs(lambda - pt);
        if (d < best) {
            best = d;
            best_pt = pt;
        }
    }
    return {best_pt, best};
}

bool sigma_pole(cplx z) {
    if (std::abs(z) < 1e-12) return false;  // z = 0 degenerates to the linear mode
    const cplx w = std::sqrt(z);
    return std::abs(std::sin(w)) <= 1e-12 * std::max(1.0, std::abs(w));
}

linalg::CMat weyl_matrix(const Graph& g, const linalg::Mat& P, cplx z) {
    if (sigma_pole(z)) throw SigmaPole("Weyl matrix undefined: z in the forbidden set");
    const ScalarMaps s = scalar_maps(z);
    const int n = g.num_vertices();
    linalg::CMat M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            M(i, j) = ((i == j ? s.m : 0.0) - P(i, j)) / s.n;
    return M;
}

}  // namespace spectral
