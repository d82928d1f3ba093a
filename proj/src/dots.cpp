#include "spectral/dots.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "spectral/errors.hpp"

namespace spectral {

using linalg::Mat;

DotArrayModel load_dot_model(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("dot model file: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("dot model file: top level must be an object");
    for (auto& [key, _] : j.items())
        if (key != "T") throw ParseError("dot model file: unknown key '" + key + "'");
    if (!j.contains("T") || !j["T"].is_array())
        throw ParseError("dot model file: need a matrix under 'T'");
    const auto& rows = j["T"];
    const int n = int(rows.size());
    if (n == 0) throw ParseError("dot model file: empty matrix");
    DotArrayModel model;
    model.n = n;
    model.T = Mat(n, n);
    for (int i = 0; i < n; ++i) {
        if (!rows[i].is_array() || int(rows[i].size()) != n)
            throw ParseError("dot model file: 'T' must be a dense square matrix");
        for (int k = 0; k < n; ++k) {
            if (!rows[i][k].is_number())
                throw ParseError("dot model file: matrix entries must be numbers");
            model.T(i, k) = rows[i][k].get<double>();
        }
    }
    return model;
}

void check_symmetry(const DotArrayModel& model) {
    for (int i = 0; i < model.n; ++i)
        for (int j = i + 1; j < model.n; ++j)
            if (model.T(i, j) != model.T(j, i))
                throw InputError("coupling matrix T is not symmetric at (" + std::to_string(i) +
                                 "," + std::to_string(j) + ")");
}

namespace {

struct TEigen {
    std::vector<double> values;
    Mat vectors;
};

TEigen t_eigen(const DotArrayModel& model) {
    // the eigensolver reads the full matrix; symmetrize the lower/upper halves
    Mat S(model.n, model.n);
    for (int i = 0; i < model.n; ++i)
        for (int j = 0; j < model.n; ++j) S(i, j) = 0.5 * (model.T(i, j) + model.T(j, i));
    linalg::SymEig se = linalg::sym_eigen(std::move(S));
    return {std::move(se.values), std::move(se.vectors)};
}

double t_scale(const DotArrayModel& model) {
    double s = 1e-30;
    for (int i = 0; i < model.n; ++i)
        for (int j = 0; j < model.n; ++j) s = std::max(s, std::fabs(model.T(i, j)));
    return s;
}

}  // namespace

std::vector<BoundState> dot_spectrum(const DotArrayModel& model) {
    const TEigen te = t_eigen(model);
    const double cluster_gap = 1e-10 * std::max(1.0, t_scale(model));
    std::vector<BoundState> out;
    int i = 0;
    while (i < model.n) {
        int j = i + 1;
        while (j < model.n && te.values[j] - te.values[j - 1] <= cluster_gap) ++j;
        double mu = 0.0;
        for (int c = i; c < j; ++c) mu += te.values[c];
        mu /= double(j - i);
        if (mu < -cluster_gap) {  // strictly negative: inside the gap image m(J) = (-inf, 0)
            BoundState bs;
            bs.mu = mu;
            bs.kappa = -mu;
            bs.lambda = -mu * mu;
            bs.mult = j - i;
            bs.source = Mat(model.n, bs.mult);
            for (int c = i; c < j; ++c)
                for (int r = 0; r < model.n; ++r) bs.source(r, c - i) = te.vectors(r, c);
            out.push_back(std::move(bs));
        }
        i = j;
    }
    // ascending lambda = -mu^2: most negative mu first, which is already the order
    return out;
}

DotIntertwiner dot_intertwiner(const DotArrayModel& model) { return {dot_spectrum(model)}; }

Mat dot_image_gram(const DotIntertwiner& map) {
    const int r = map.rank();
    Mat G(r, r);
    int ci = 0;
    for (const BoundState& ai : map.atoms) {
        for (int i = 0; i < ai.mult; ++i, ++ci) {
            int cj = 0;
            for (const BoundState& aj : map.atoms) {
                for (int j = 0; j < aj.mult; ++j, ++cj) {
                    // <sqrt(2k) v e^{-kx}, sqrt(2k') v' e^{-k'x}> = 2 sqrt(kk')/(k+k') <v,v'>
                    double dot = 0.0;
                    for (int s = 0; s < ai.source.rows(); ++s)
                        dot += ai.source(s, i) * aj.source(s, j);
                    G(ci, cj) = 2.0 * std::sqrt(ai.kappa * aj.kappa) / (ai.kappa + aj.kappa) * dot;
                }
            }
        }
    }
    return G;
}

VerificationReport dot_verify(const DotArrayModel& model, const DotOracleOptions& oracle) {
    VerificationReport rep;
    const DotIntertwiner map = dot_intertwiner(model);

    {
        Mat G = dot_image_gram(map);
        for (int i = 0; i < G.rows(); ++i) G(i, i) -= 1.0;
        rep.add("dot_isometry", "Phi* Phi = E_T(m(J)) on the coupling space", linalg::opnorm(G),
                1e-12);
    }
    {
        // f(x) = c e^{-kx}: f'(0) = -k c must equal (T f)(0) = T c
        double worst = 0.0;
        for (const BoundState& bs : map.atoms)
            for (int j = 0; j < bs.mult; ++j)
                for (int i = 0; i < model.n; ++i) {
                    double tc = 0.0;
                    for (int s = 0; s < model.n; ++s) tc += model.T(i, s) * bs.source(s, j);
                    worst = std::max(worst, std::fabs(tc + bs.kappa * bs.source(i, j)));
                }
        rep.add("dot_boundary_condition", "f'(0) = (T f)(0) on ker(Gamma' - T Gamma)", worst,
                1e-10);
    }
    {
        // -f'' = lambda f holds identically for e^{-kx}; assert kappa^2 = -lambda
        double worst = 0.0;
        for (const BoundState& bs : map.atoms)
            worst = std::max(worst, std::fabs(bs.kappa * bs.kappa + bs.lambda) /
                                        std::max(1.0, std::fabs(bs.lambda)));
        rep.add("dot_eigen_identity", "-f'' = lambda f for f = e^{-kappa x}", worst, 1e-13);
    }
    if (oracle.enabled) {
        const std::vector<double> fem = dot_oracle_spectrum(model, oracle.R, oracle.nodes_per_unit);
        double worst = 0.0;
        if (int(fem.size()) != map.rank()) {
            rep.add("dot_oracle_count",
                    "gap spectrum count equals the number of negative eigenvalues of T",
                    std::fabs(double(int(fem.size()) - map.rank())), 0.0);
        } else {
            std::size_t idx = 0;
            for (const BoundState& bs : map.atoms)
                for (int j = 0; j < bs.mult; ++j, ++idx)
                    worst = std::max(worst, std::fabs(fem[idx] - bs.lambda));
            rep.add("dot_oracle_spectrum", "spec H_T in J = m^{-1}(spec T in m(J)), FEM check",
                    worst, oracle.tol_abs);
        }
    }
    return rep;
}

std::vector<double> dot_oracle_spectrum(const DotArrayModel& model, double R, int nodes_per_unit) {
    if (nodes_per_unit < 8) throw InvalidSize("need at least 8 elements per unit length");
    if (R <= 0.0) throw InvalidSize("truncation length must be positive");
    const int n = model.n;
    const int m = int(std::lround(R * nodes_per_unit));  // elements per site
    if (m < 2) throw InvalidSize("truncation too short for the mesh");
    const double h = 1.0 / double(nodes_per_unit);

    // per-site P1 matrices on [0, R] with Dirichlet at x = R: unknowns j = 0..m-1
    // diag K: j=0: 1/h else 2/h; offdiag -1/h; diag M: j=0: h/3 else 2h/3; offdiag h/6
    const double kd0 = 1.0 / h, kd = 2.0 / h, ko = -1.0 / h;
    const double md0 = h / 3.0, md = 2.0 * h / 3.0, mo = h / 6.0;

    // inertia of (K - s M): eliminate each site's chain from the far end onto
    // its x=0 unknown, then count the small coupled block
    auto inertia = [&](double s) {
        int neg = 0;
        std::vector<double> schur(n);  // Schur complement onto each site's 0-node
        const double od = ko - s * mo;
        for (int alpha = 0; alpha < n; ++alpha) {
            double delta = kd - s * md;  // j = m-1
            if (delta == 0.0) delta = -1e-300;
            if (delta < 0.0) ++neg;
            for (int j = m - 2; j >= 1; --j) {
                delta = (kd - s * md) - od * od / delta;
                if (delta == 0.0) delta = -1e-300;
                if (delta < 0.0) ++neg;
            }
            schur[alpha] = (kd0 - s * md0) - od * od / delta;
        }
        Mat C(n, n);
        for (int a = 0; a < n; ++a) {
            C(a, a) = schur[a] + model.T(a, a);
            for (int b2 = 0; b2 < n; ++b2)
                if (b2 != a) C(a, b2) = 0.5 * (model.T(a, b2) + model.T(b2, a));
        }
        for (double ev : linalg::sym_eigenvalues(std::move(C)))
            if (ev < 0.0) ++neg;
        return neg;
    };

    // Gershgorin bound on spec T gives lambda >= -bound^2
    double bound = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += std::fabs(model.T(i, j));
        bound = std::max(bound, row);
    }
    const double lo0 = -bound * bound - 1.0;
    const int count = inertia(0.0);

    std::vector<double> out;
    for (int j = 1; j <= count; ++j) {
        double lo = lo0, hi = 0.0;
        for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::fabs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (inertia(mid) >= j)
                hi = mid;
            else
                lo = mid;
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;  // ascending
}

void write_bound_state_csv(std::ostream& os, const DotIntertwiner& map) {
    os << "site,kappa,coefficient\n";
    for (const BoundState& bs : map.atoms) {
        const double factor = std::sqrt(2.0 * bs.kappa);
        for (int j = 0; j < bs.mult; ++j)
            for (int s = 0; s < bs.source.rows(); ++s)
                os << s << ',' << bs.kappa << ',' << factor * bs.source(s, j) << '\n';
    }
}

}  // namespace spectral
