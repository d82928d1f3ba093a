#include "spectral/sampling.hpp"

#include <cmath>
#include <set>

#include "spectral/errors.hpp"
#include "spectral/intertwiner.hpp"
#include "spectral/weyl.hpp"

namespace spectral {

std::uint64_t Rng::next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() { return double(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
    return lo + int(next() % std::uint64_t(hi - lo + 1));
}

Graph random_connected_graph(Rng& rng, int nmin, int nmax) {
    const int n = rng.uniform_int(nmin, nmax);
    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> seen;
    for (int v = 1; v < n; ++v) {
        const int u = rng.uniform_int(0, v - 1);
        edges.emplace_back(u, v);
        seen.insert({u, v});
    }
    const double p = 1.5 / double(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (seen.count({u, v})) continue;
            if (rng.uniform() < p) {
                edges.emplace_back(u, v);
                seen.insert({u, v});
            }
        }
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = "v" + std::to_string(i);
    return make_graph(std::move(labels), std::move(edges));
}

std::optional<RandomInterval> random_admissible_interval(Rng& rng, const EigDecomp& e, int k) {
    const Band bd = band(k);
    const double lo = k == 0 ? -1.0 : bd.lo;
    const double hi = bd.hi;
    for (int tries = 0; tries < 500; ++tries) {
        double a = rng.uniform(lo + 0.02 * (hi - lo), hi - 0.2 * (hi - lo));
        double b = rng.uniform(a + 0.15 * (hi - lo), hi - 0.005 * (hi - lo));
        if (!(a < b)) continue;
        try {
            validate_interval(e, k, a, b);
        } catch (const InputError&) {
            continue;
        }
        return RandomInterval{k, a, b};
    }
    return std::nullopt;
}

cplx random_z(Rng& rng) {
    const double re = rng.uniform(-5.0, 30.0);
    const double im = rng.uniform(0.3, 3.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    return {re, im};
}

linalg::Mat random_symmetric(Rng& rng, int n, double scale) {
    linalg::Mat T(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = rng.uniform(-scale, scale);
            T(i, j) = v;
            T(j, i) = v;
        }
    return T;
}

}  // namespace spectral
