#pragma once

#include <cstdint>
#include <optional>

#include "spectral/discrete.hpp"
#include "spectral/graph.hpp"
#include "spectral/linalg.hpp"

namespace spectral {

/// Deterministic splitmix64 generator. The standard distributions are
/// implementation-defined, so report-stable sampling goes through this.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    double uniform();                      // [0, 1)
    double uniform(double lo, double hi);  // [lo, hi)
    int uniform_int(int lo, int hi);       // inclusive bounds
};

/// Random connected simple graph on [nmin, nmax] vertices: a random
/// attachment tree plus a sprinkle of extra edges.
Graph random_connected_graph(Rng& rng, int nmin = 4, int nmax = 10);

struct RandomInterval {
    int band;
    double a, b;
};

/// Admissible interval inside the given band (endpoint conditions hold);
/// nullopt when none is found within the retry budget.
std::optional<RandomInterval> random_admissible_interval(Rng& rng, const EigDecomp& e, int band);

/// Non-real z of moderate modulus, clear of the forbidden set.
cplx random_z(Rng& rng);

linalg::Mat random_symmetric(Rng& rng, int n, double scale);

}  // namespace spectral
