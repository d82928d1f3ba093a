#include <doctest.h>

#include <cmath>
#include <sstream>

#include "spectral/dots.hpp"
#include "spectral/errors.hpp"
#include "spectral/sampling.hpp"

using namespace spectral;
using linalg::Mat;

namespace {

DotArrayModel model_from(std::initializer_list<std::initializer_list<double>> rows) {
    DotArrayModel m;
    m.n = int(rows.size());
    m.T = Mat(m.n, m.n);
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (double v : row) m.T(i, j++) = v;
        ++i;
    }
    return m;
}

}  // namespace

TEST_CASE("dot model file parsing") {
    const DotArrayModel m = load_dot_model(R"({"T":[[0,1],[1,0]]})");
    CHECK(m.n == 2);
    CHECK(m.T(0, 1) == 1.0);
    CHECK_NOTHROW(check_symmetry(m));
    CHECK_THROWS_AS(load_dot_model(R"({"T":[[0,1]]})"), ParseError);
    CHECK_THROWS_AS(load_dot_model(R"({"T":[[0,1],[1,0]],"x":1})"), ParseError);
    CHECK_THROWS_AS(load_dot_model("nope"), ParseError);
    const DotArrayModel bad = load_dot_model(R"({"T":[[0,1],[2,0]]})");
    CHECK_THROWS_AS(check_symmetry(bad), InputError);
}

TEST_CASE("single site bound state: T = [-2] gives lambda = -4") {
    const DotArrayModel m = model_from({{-2.0}});
    const auto spec = dot_spectrum(m);
    REQUIRE(spec.size() == 1);
    CHECK(spec[0].lambda == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(spec[0].kappa == doctest::Approx(2.0).epsilon(1e-14));
    // normalized image: |sqrt(2k) e^{-kx}|^2 integrates to 1
    const DotIntertwiner map = dot_intertwiner(m);
    const Mat G = dot_image_gram(map);
    CHECK(G(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("coupled pair: T = [[0,1],[1,0]] has one bound state at -1") {
    const DotArrayModel m = model_from({{0.0, 1.0}, {1.0, 0.0}});
    const auto spec = dot_spectrum(m);
    REQUIRE(spec.size() == 1);
    CHECK(spec[0].lambda == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(spec[0].mult == 1);
    // source = (1,-1)/sqrt(2) up to sign
    const double a = spec[0].source(0, 0), b = spec[0].source(1, 0);
    CHECK(std::fabs(a + b) < 1e-13);
    CHECK(a * a + b * b == doctest::Approx(1.0));
}

TEST_CASE("positive semidefinite T has no gap spectrum") {
    const DotArrayModel m = model_from({{1.0, 0.0}, {0.0, 0.0}});
    CHECK(dot_spectrum(m).empty());
    const DotArrayModel zero = model_from({{0.0}});
    CHECK(dot_spectrum(zero).empty());
    const VerificationReport rep = dot_verify(zero, {.enabled = false});
    CHECK(rep.pass());
}

TEST_CASE("diagonal T: bound states and cross-atom orthogonality") {
    const DotArrayModel m = model_from({{-1.0, 0.0}, {0.0, -2.0}});
    const auto spec = dot_spectrum(m);
    REQUIRE(spec.size() == 2);
    CHECK(spec[0].lambda == doctest::Approx(-4.0));
    CHECK(spec[1].lambda == doctest::Approx(-1.0));
    const DotIntertwiner map = dot_intertwiner(m);
    const Mat G = dot_image_gram(map);
    CHECK(G(0, 1) == doctest::Approx(0.0));
    CHECK(G(0, 0) == doctest::Approx(1.0));
    CHECK(G(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("T = diag(-1,-2,3) has bound states {-4, -1}") {
    const DotArrayModel m = model_from({{-1, 0, 0}, {0, -2, 0}, {0, 0, 3}});
    const auto spec = dot_spectrum(m);
    REQUIRE(spec.size() == 2);
    CHECK(spec[0].lambda == doctest::Approx(-4.0));
    CHECK(spec[1].lambda == doctest::Approx(-1.0));
}

TEST_CASE("scaling covariance: spec of sT maps lambda to -(s mu)^2") {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = rng.uniform_int(2, 5);
        DotArrayModel m;
        m.n = n;
        m.T = random_symmetric(rng, n, 2.0);
        const double s = rng.uniform(0.5, 3.0);
        DotArrayModel ms;
        ms.n = n;
        ms.T = Mat(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ms.T(i, j) = s * m.T(i, j);
        const auto orig = dot_spectrum(m);
        const auto scaled = dot_spectrum(ms);
        REQUIRE(orig.size() == scaled.size());
        for (std::size_t i = 0; i < orig.size(); ++i)
            CHECK(scaled[i].lambda ==
                  doctest::Approx(-std::pow(s * orig[i].mu, 2)).epsilon(1e-11));
    }
}

TEST_CASE("dot_verify passes on random symmetric couplings") {
    Rng rng(42);
    for (int trial = 0; trial < 5; ++trial) {
        DotArrayModel m;
        m.n = 5;
        m.T = random_symmetric(rng, 5, 2.0);
        const VerificationReport rep = dot_verify(m, {.enabled = false});
        for (const auto& row : rep.checks) {
            INFO(row.name, " defect=", row.defect);
            CHECK(row.pass);
        }
    }
}

TEST_CASE("boundary condition residual for the coupled pair") {
    const DotArrayModel m = model_from({{0.0, 1.0}, {1.0, 0.0}});
    const VerificationReport rep = dot_verify(m, {.enabled = false});
    for (const auto& row : rep.checks)
        if (row.name == "dot_boundary_condition") CHECK(row.defect <= 1e-12);
}

TEST_CASE("FEM oracle: single site") {
    const DotArrayModel m = model_from({{-2.0}});
    const auto fem = dot_oracle_spectrum(m, 10.0, 50);
    REQUIRE(fem.size() == 1);
    CHECK(std::fabs(fem[0] + 4.0) <= 1e-3);
}

TEST_CASE("FEM oracle: coupled pair and positive coupling") {
    const DotArrayModel m = model_from({{0.0, 1.0}, {1.0, 0.0}});
    const auto fem = dot_oracle_spectrum(m, 10.0, 50);
    REQUIRE(fem.size() == 1);
    CHECK(std::fabs(fem[0] + 1.0) <= 1e-3);

    const DotArrayModel pos = model_from({{1.0}});
    CHECK(dot_oracle_spectrum(pos, 10.0, 50).empty());
}

TEST_CASE("dot_verify with the oracle row") {
    const DotArrayModel m = model_from({{0.0, 1.0}, {1.0, 0.0}});
    const VerificationReport rep = dot_verify(m);
    REQUIRE(rep.checks.size() == 4);
    for (const auto& row : rep.checks) {
        INFO(row.name, " defect=", row.defect);
        CHECK(row.pass);
    }
}

TEST_CASE("bound state csv export") {
    const DotArrayModel m = model_from({{-2.0}});
    const DotIntertwiner map = dot_intertwiner(m);
    std::ostringstream os;
    write_bound_state_csv(os, map);
    CHECK(os.str() == "site,kappa,coefficient\n0,2,2\n");  // sqrt(2*2)*1 = 2
}

TEST_CASE("oracle argument validation") {
    const DotArrayModel m = model_from({{-2.0}});
    CHECK_THROWS_AS(dot_oracle_spectrum(m, 10.0, 4), InvalidSize);
    CHECK_THROWS_AS(dot_oracle_spectrum(m, -1.0, 50), InvalidSize);
}
