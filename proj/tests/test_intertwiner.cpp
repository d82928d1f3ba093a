#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spectral/errors.hpp"
#include "spectral/intertwiner.hpp"
#include "spectral/sampling.hpp"
#include "spectral/weyl.hpp"

using namespace spectral;
using linalg::CMat;
using linalg::Mat;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("band eigensystem of the triangle") {
    const Graph tri = builtin_graph(GraphFamily::cycle, 3);
    const EigDecomp e = sym_eigendecomposition(tri);

    // [4,5] contains only (2 pi/3)^2 with multiplicity 2
    const BandSystem bs = band_eigensystem(e, 0, 4.0, 5.0);
    REQUIRE(bs.inside.size() == 1);
    CHECK(bs.inside[0].lambda == doctest::Approx(std::pow(2.0 * kPi / 3.0, 2)).epsilon(1e-12));
    CHECK(bs.inside[0].mult == 2);

    // [5,6] is empty
    CHECK(band_eigensystem(e, 0, 5.0, 6.0).inside.empty());
}

TEST_CASE("band eigensystem of the star(4)") {
    const Graph star = builtin_graph(GraphFamily::star, 4);
    const EigDecomp e = sym_eigendecomposition(star);
    // spec P = {-1, 0, 0, 1}: in [2,3] only (pi/2)^2 from mu = 0, mult 2
    const BandSystem bs = band_eigensystem(e, 0, 2.0, 3.0);
    REQUIRE(bs.inside.size() == 1);
    CHECK(bs.inside[0].lambda == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-12));
    CHECK(bs.inside[0].mult == 2);
    // mu = -1 is a forbidden-set collision in band 0
    REQUIRE(bs.sigma_excluded.size() == 1);
    CHECK(bs.sigma_excluded[0] == doctest::Approx(-1.0));
}

TEST_CASE("endpoint admissibility is enforced") {
    const Graph tri = builtin_graph(GraphFamily::cycle, 3);
    const EigDecomp e = sym_eigendecomposition(tri);
    // m(a) on spec P: a = (2pi/3)^2 has m(a) = -1/2 in spec P
    CHECK_THROWS_AS(band_eigensystem(e, 0, std::pow(2.0 * kPi / 3.0, 2), 5.0),
                    EndpointOnSpectrum);
    // leaving the band
    CHECK_THROWS_AS(band_eigensystem(e, 0, 4.0, 11.0), OutOfRange);
    // forbidden-set endpoint
    CHECK_THROWS_AS(band_eigensystem(e, 1, kPi * kPi, 12.0), EndpointOnSpectrum);
}

TEST_CASE("phi_eigen_sum on the triangle has exact eigenfunction images") {
    const Graph tri = builtin_graph(GraphFamily::cycle, 3);
    const EigDecomp e = sym_eigendecomposition(tri);
    const IntertwinerMap phi = phi_eigen_sum(tri, e, 0, 4.0, 5.0);
    REQUIRE(phi.rank() == 2);
    for (const Atom& at : phi.atoms)
        for (const EdgeWave& wv : at.image) {
            const VertexResiduals r = vertex_residuals(tri, wv, at.lambda);
            CHECK(r.continuity <= 1e-12);
            CHECK(r.kirchhoff <= 1e-12);
        }
}

TEST_CASE("interval without preimages yields the zero map") {
    const Graph tri = builtin_graph(GraphFamily::cycle, 3);
    const EigDecomp e = sym_eigendecomposition(tri);
    const IntertwinerMap phi = phi_eigen_sum(tri, e, 0, 5.0, 6.0);
    CHECK(phi.rank() == 0);
    CHECK(phi.atoms.empty());
}

TEST_CASE("path(2) over (-0.5, 9): single atom at lambda = 0, constant image") {
    const Graph p2 = builtin_graph(GraphFamily::path, 2);
    const EigDecomp e = sym_eigendecomposition(p2);
    const IntertwinerMap phi = phi_eigen_sum(p2, e, 0, -0.5, 9.0);
    REQUIRE(phi.atoms.size() == 1);
    CHECK(phi.atoms[0].lambda == doctest::Approx(0.0));
    CHECK(phi.atoms[0].multiplicity == 1);
    // mu = -1 excluded as a forbidden-set collision
    REQUIRE(phi.sigma_excluded.size() == 1);
    // the image is the constant function (linear mode with equal traces)
    const EdgeWave& wv = phi.atoms[0].image[0];
    CHECK(wv.linear);
    const cplx v0 = edgewave_eval(wv, 0, 0.0);
    for (double t : {0.25, 0.5, 0.75, 1.0})
        CHECK(std::abs(edgewave_eval(wv, 0, t) - v0) < 1e-14);
}

TEST_CASE("verify_interval passes on the triangle over [-0.5, 9]") {
    const Graph tri = builtin_graph(GraphFamily::cycle, 3);
    const EigDecomp e = sym_eigendecomposition(tri);
    const VerificationReport rep = verify_interval(tri, e, 0, -0.5, 9.0);
    REQUIRE(rep.checks.size() == 6);
    for (const auto& row : rep.checks) {
        INFO(row.name, " defect=", row.defect);
        CHECK(row.pass);
        CHECK(row.defect <= 1e-10);
    }
}

TEST_CASE("verify_interval on cycle(4) band 1") {
    const Graph c4 = builtin_graph(GraphFamily::cycle, 4);
    const EigDecomp e = sym_eigendecomposition(c4);
    // the band-1 preimage of mu = 0 is (3 pi/2)^2 ~ 22.2; [11,25] contains it
    const BandSystem bs = band_eigensystem(e, 1, 11.0, 25.0);
    REQUIRE(bs.inside.size() == 1);
    CHECK(bs.inside[0].lambda == doctest::Approx(std::pow(1.5 * kPi, 2)).epsilon(1e-12));
    CHECK(bs.inside[0].mult == 2);
    const VerificationReport rep = verify_interval(c4, e, 1, 11.0, 25.0);
    for (const auto& row : rep.checks) {
        INFO(row.name, " defect=", row.defect);
        CHECK(row.pass);
    }
    // [11,18] misses it: trivial pass at rank 0
    CHECK(phi_eigen_sum(c4, e, 1, 11.0, 18.0).rank() == 0);
    const VerificationReport rep0 = verify_interval(c4, e, 1, 11.0, 18.0);
    for (const auto& row : rep0.checks) CHECK(row.pass);
}

TEST_CASE("Riemann-Stieltjes sum coincides with Phi when evaluated at preimages") {
    const Graph tri = builtin_graph(GraphFamily::cycle, 3);
    const EigDecomp e = sym_eigendecomposition(tri);
    const BandSystem bs = band_eigensystem(e, 0, 4.0, 5.0);
    const IntertwinerMap phi = phi_eigen_sum(tri, e, 0, 4.0, 5.0);
    const Partition part = exact_partition(bs, 4.0, 5.0);
    const IntertwinerMap phid = phi_riemann_sum(tri, e, 0, 4.0, 5.0, part);
    CHECK(phid.rank() == phi.rank());
    CHECK(riemann_defect(phid, phi) <= 1e-12);
}

TEST_CASE("empty cells contribute nothing to the Riemann sum") {
    const Graph tri = builtin_graph(GraphFamily::cycle, 3);
    const EigDecomp e = sym_eigendecomposition(tri);
    const BandSystem bs = band_eigensystem(e, 0, 4.0, 5.0);
    const Partition part = probe_partition(bs, 4.0, 5.0, 8);
    const IntertwinerMap phid = phi_riemann_sum(tri, e, 0, 4.0, 5.0, part);
    // exactly one cell carries spectrum
    CHECK(phid.atoms.size() == 1);
    CHECK(phid.rank() == 2);
}

TEST_CASE("Riemann-Stieltjes defect halves with the mesh") {
    const Graph tri = builtin_graph(GraphFamily::cycle, 3);
    const EigDecomp e = sym_eigendecomposition(tri);
    const auto rows = stieltjes_table(tri, e, 0, 4.0, 5.0, {8, 16, 32, 64});
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const double ratio = rows[i + 1].defect / rows[i].defect;
        INFO("mesh ", rows[i].mesh, " -> ", rows[i + 1].mesh, " ratio ", ratio);
        CHECK(ratio >= 0.3);
        CHECK(ratio <= 0.7);
    }
}

TEST_CASE("partition boundaries near preimages are rejected") {
    const Graph tri = builtin_graph(GraphFamily::cycle, 3);
    const EigDecomp e = sym_eigendecomposition(tri);
    const double lam = band_inverse(0, -0.5);
    Partition part;
    part.points = {4.0, lam + 1e-13, 5.0};
    part.eval = {4.2, 4.8};
    CHECK_THROWS_AS(phi_riemann_sum(tri, e, 0, 4.0, 5.0, part), AmbiguousBoundary);
}

TEST_CASE("monotone exhaustion stabilizes once the margin clears all preimages") {
    const Graph c4 = builtin_graph(GraphFamily::cycle, 4);
    const EigDecomp e = sym_eigendecomposition(c4);
    // band 1 = (pi^2, 4 pi^2); full-band maps with shrinking margin
    const Band bd = band(1);
    const double eps1 = 0.5, eps2 = 0.25, eps3 = 0.1;
    const IntertwinerMap m1 = phi_eigen_sum(c4, e, 1, bd.lo + eps1, bd.hi - eps1);
    const IntertwinerMap m2 = phi_eigen_sum(c4, e, 1, bd.lo + eps2, bd.hi - eps2);
    const IntertwinerMap m3 = phi_eigen_sum(c4, e, 1, bd.lo + eps3, bd.hi - eps3);
    CHECK(m1.rank() <= m2.rank());
    CHECK(m2.rank() <= m3.rank());
    // shared atoms are identical
    for (const Atom& a1 : m1.atoms) {
        bool found = false;
        for (const Atom& a2 : m2.atoms)
            if (a2.lambda == a1.lambda) {
                found = true;
                CHECK(a2.multiplicity == a1.multiplicity);
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < a1.multiplicity; ++j)
                        CHECK(a1.source(i, j) == a2.source(i, j));
            }
        CHECK(found);
    }
}

TEST_CASE("scalar spectral mapping: multisets of m(lambda) and spec T agree") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const Graph g = random_connected_graph(rng);
        const EigDecomp e = sym_eigendecomposition(g);
        const auto intv = random_admissible_interval(rng, e, rng.uniform_int(0, 2));
        if (!intv) continue;
        const IntertwinerMap phi = phi_eigen_sum(g, e, intv->band, intv->a, intv->b);
        // every atom's m(lambda) must match its cluster eigenvalue, and the
        // total multiplicity must count spec P inside the window
        int expected = 0;
        for (auto [first, last] : e.clusters()) {
            const double mu = e.values[first];
            bool counted = false;
            for (const Atom& at : phi.atoms)
                if (std::fabs(at.mu - mu) < 1e-9) {
                    CHECK(std::fabs(scalar_maps(at.lambda).m.real() - mu) < 1e-11);
                    counted = true;
                }
            if (counted) expected += last - first;
        }
        CHECK(expected == phi.rank());
    }
}

TEST_CASE("the operator sum of lambda_i projectors reconstructs the interval operator") {
    // two-sided integral form: Phi^* H|_image Phi = sum lambda_i Q_i
    const Graph tri = builtin_graph(GraphFamily::cycle, 3);
    const EigDecomp e = sym_eigendecomposition(tri);
    const IntertwinerMap phi = phi_eigen_sum(tri, e, 0, -0.5, 9.0);
    const auto w = tri.weights();
    const int n = 3, r = phi.rank();

    const CMat gram = image_gram(phi);
    std::vector<double> lam_col;
    Mat V(n, r);
    int col = 0;
    for (const Atom& at : phi.atoms)
        for (int j = 0; j < at.multiplicity; ++j, ++col) {
            lam_col.push_back(at.lambda);
            for (int i = 0; i < n; ++i) V(i, col) = at.source(i, j);
        }
    // X = V (gram diag(lambda)) V^T D  vs  sum lambda_i v v^T D
    CMat X(n, n);
    Mat Y(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx sx = 0.0;
            double sy = 0.0;
            for (int c = 0; c < r; ++c) {
                for (int d = 0; d < r; ++d) sx += V(i, c) * gram(c, d) * lam_col[d] * V(j, d);
                sy += lam_col[c] * V(i, c) * V(j, c);
            }
            X(i, j) = sx * w[j];
            Y(i, j) = sy * w[j];
        }
    CMat diff(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) diff(i, j) = X(i, j) - Y(i, j);
    CHECK(weighted_opnorm(diff, w) <= 1e-10);
}

TEST_CASE("krein correction guards") {
    const Graph tri = builtin_graph(GraphFamily::cycle, 3);
    const EigDecomp e = sym_eigendecomposition(tri);
    std::vector<cplx> xi = {1.0, 0.0, 0.0};
    const EdgeWave F = gamma_apply(tri, -4.0, xi);

    // z at a spectral point: the Weyl matrix is singular
    CHECK_THROWS_AS(krein_correction_apply(tri, e, band_inverse(0, -0.5), F), SingularWeyl);
    // zero input maps to zero
    const EdgeWave Z = zero_wave(tri, -1.0);
    const EdgeWave C = krein_correction_apply(tri, e, -1.0, Z);
    for (const auto& c : C.coef) {
        CHECK(std::abs(c[0]) == 0.0);
        CHECK(std::abs(c[1]) == 0.0);
    }
    // finite output at a gap point
    CHECK_NOTHROW(krein_correction_apply(tri, e, -1.0, F));
}

TEST_CASE("atoms come out ascending with distinct band points") {
    Rng rng(71);
    for (int trial = 0; trial < 8; ++trial) {
        const Graph g = random_connected_graph(rng);
        const EigDecomp e = sym_eigendecomposition(g);
        const auto intv = random_admissible_interval(rng, e, rng.uniform_int(0, 2));
        if (!intv) continue;
        const IntertwinerMap phi = phi_eigen_sum(g, e, intv->band, intv->a, intv->b);
        for (std::size_t i = 0; i + 1 < phi.atoms.size(); ++i)
            CHECK(phi.atoms[i].lambda < phi.atoms[i + 1].lambda);
        for (const Atom& at : phi.atoms) {
            CHECK(at.lambda > intv->a);
            CHECK(at.lambda < intv->b);
        }
    }
}

TEST_CASE("krein correction rejects forbidden-set points") {
    const Graph tri = builtin_graph(GraphFamily::cycle, 3);
    const EigDecomp e = sym_eigendecomposition(tri);
    const EdgeWave F = zero_wave(tri, -1.0);
    CHECK_THROWS_AS(krein_correction_apply(tri, e, kPi * kPi, F), SigmaPole);
}

TEST_CASE("complete graph: the multiplicity-9 cluster transports cleanly") {
    // K10: P = (J - I)/9 with eigenvalues {1, -1/9 x 9}
    const Graph k10 = builtin_graph(GraphFamily::complete, 10);
    const EigDecomp e = sym_eigendecomposition(k10);
    for (int i = 0; i < 9; ++i) CHECK(e.values[i] == doctest::Approx(-1.0 / 9.0).epsilon(1e-12));
    CHECK(e.values[9] == doctest::Approx(1.0).epsilon(1e-12));
    const VerificationReport rep = verify_interval(k10, e, 0, -0.5, 9.0);
    for (const auto& row : rep.checks) {
        INFO(row.name, " defect=", row.defect);
        CHECK(row.pass);
    }
    const IntertwinerMap phi = phi_eigen_sum(k10, e, 0, -0.5, 9.0);
    CHECK(phi.rank() == 10);  // lambda = 0 once, arccos(-1/9)^2 nine times
}

TEST_CASE("band 2 verification on cycle(5)") {
    const Graph c5 = builtin_graph(GraphFamily::cycle, 5);
    const EigDecomp e = sym_eigendecomposition(c5);
    const Band bd = band(2);
    const VerificationReport rep = verify_interval(c5, e, 2, bd.lo + 1.0, bd.hi - 1.0);
    CHECK(rep.pass());
    const IntertwinerMap phi = phi_eigen_sum(c5, e, 2, bd.lo + 1.0, bd.hi - 1.0);
    CHECK(phi.rank() == 4);  // two double eigenvalues cos(2 pi j/5), j = 1, 2
}
