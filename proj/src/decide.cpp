#include "posnet/decide.hpp"

#include <Eigen/LU>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace posnet {

double spectral_radius(const Matrix& a, double tol, std::uint64_t seed, int max_iters) {
    const Eigen::Index n = a.rows();
    if (n == 0 || a.cols() != n) throw std::invalid_argument("spectral_radius: square matrix required");
    if ((a.array() < 0.0).any()) throw std::invalid_argument("spectral_radius: negative entry");

    // Nilpotent shortcut: nonnegative arithmetic has no cancellation, so
    // A^n * 1 == 0 exactly iff A^n == 0.
    {
        Vector w = Vector::Ones(n);
        for (Eigen::Index k = 0; k < n; ++k) w = a * w;
        if (w.lpNorm<Eigen::Infinity>() == 0.0) return 0.0;
    }

    const int restarts = 4;
    const int per_start = max_iters / restarts;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int rs = 0; rs < restarts; ++rs) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(rs));
        std::uniform_real_distribution<double> unif(0.5, 1.5);
        Vector x(n);
        for (Eigen::Index i = 0; i < n; ++i) x(i) = unif(rng);
        x /= x.lpNorm<1>();
        for (int it = 0; it < per_start; ++it) {
            Vector bx = x + a * x;  // (I + A) x, entrywise positive
            double lo = std::numeric_limits<double>::infinity();
            double hi = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double ratio = bx(i) / x(i);
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
            const double gap = hi - lo;
            const double resid = (bx - hi * x).lpNorm<Eigen::Infinity>() / bx.lpNorm<Eigen::Infinity>();
            best_gap = std::min(best_gap, gap);
            if (gap <= tol * std::max(1.0, hi) || resid <= 0.5 * tol) {
                return (gap <= tol * std::max(1.0, hi)) ? 0.5 * (lo + hi) - 1.0 : hi - 1.0;
            }
            x = bx / bx.lpNorm<1>();
        }
    }
    throw std::runtime_error("spectral_radius: power iteration did not converge (gap " +
                             std::to_string(best_gap) + ")");
}

TransportFamily::TransportFamily(TransportSystem sys) : sys_(std::move(sys)) {}

Matrix TransportFamily::seed_map() const {
    return incidence_matrices(sys_.graph).out_weighted.get().transpose();
}

Matrix TransportFamily::lift_profiles(double mu, int points) const {
    Matrix out(sys_.n_edges(), points);
    const double dx = 1.0 / (points - 1);
    for (int j = 0; j < sys_.n_edges(); ++j) {
        const double rate = (sys_.absorption(j) - mu) / sys_.velocity(j);
        for (int p = 0; p < points; ++p) out(j, p) = std::exp(rate * (1.0 - p * dx));
    }
    return out;
}

namespace {

// Spectral radius when the transfer data is nonnegative and the iteration
// converges; the row-sum norm as a safe upper bound otherwise.
double transfer_radius_bound(const BoundaryFamily& family, double mu, std::uint64_t seed) {
    const Matrix t = family.transfer(mu);
    if (is_nonnegative(t)) {
        try {
            return spectral_radius(t, 1e-9, seed);
        } catch (const std::runtime_error&) {
        }
    }
    return t.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

FrequencyProbe make_probe(const BoundaryFamily& family, const ProbeParams& params,
                          std::uint64_t seed) {
    FrequencyProbe probe;
    double mu_min;
    if (params.mu_min) {
        mu_min = *params.mu_min;
        if (mu_min <= family.spectral_bound()) {
            throw std::invalid_argument("probe: mu_min must exceed the spectral bound");
        }
    } else {
        mu_min = std::max(family.spectral_bound() + 0.1, 0.1);
        bool found = false;
        for (int it = 0; it < 60; ++it) {
            if (transfer_radius_bound(family, mu_min, seed) <= 0.9) {
                found = true;
                break;
            }
            mu_min *= 2.0;
        }
        if (!found) throw std::runtime_error("probe: no mu with r(Gamma D_mu) <= 0.9 found");
    }
    const int count = std::max(1, params.mu_count);
    probe.mus.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double expo = (count == 1) ? 0.0 : static_cast<double>(i) / (count - 1);
        probe.mus[static_cast<std::size_t>(i)] = mu_min * std::pow(10.0, expo);
    }
    probe.n_max = params.n_max ? *params.n_max : std::max(family.edge_count() - 1, 16);

    probe.r_at_mu_min = transfer_radius_bound(family, mu_min, seed);
    if (probe.r_at_mu_min < 1.0) {
        probe.neumann_tail = std::pow(probe.r_at_mu_min, probe.n_max + 1) / (1.0 - probe.r_at_mu_min);
    } else {
        probe.neumann_tail = std::numeric_limits<double>::infinity();
    }
    return probe;
}

const char* to_string(Verdict::Decision d) {
    switch (d) {
        case Verdict::Decision::controllable: return "controllable";
        case Verdict::Decision::not_controllable: return "not_controllable";
        case Verdict::Decision::inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(Verdict::Mode m) {
    return m == Verdict::Mode::positive ? "positive" : "control_constrained";
}

namespace {

// lift (M x P) applied to a per-edge seed vector, flattened edge-major.
Vector lifted(const Matrix& lift, const Vector& seed) {
    const int m = static_cast<int>(lift.rows());
    const int pts = static_cast<int>(lift.cols());
    Vector out(static_cast<Eigen::Index>(m) * pts);
    for (int j = 0; j < m; ++j) {
        out.segment(static_cast<Eigen::Index>(j) * pts, pts) = seed(j) * lift.row(j).transpose();
    }
    return out;
}

Vector lifted_edge_direction(const Matrix& lift, int edge) {
    const int m = static_cast<int>(lift.rows());
    const int pts = static_cast<int>(lift.cols());
    Vector out = Vector::Zero(static_cast<Eigen::Index>(m) * pts);
    out.segment(static_cast<Eigen::Index>(edge) * pts, pts) = lift.row(edge).transpose();
    return out;
}

}  // namespace

Verdict decide_transport_rank(const TransportSystem& sys, double tol, std::uint64_t seed) {
    Verdict v;
    v.mode = Verdict::Mode::positive;
    v.tol = tol;

    const bool zero_absorption = sys.absorption.cwiseAbs().maxCoeff() == 0.0;
    if (!zero_absorption || !sys.uniform_velocity() || !is_strongly_connected(sys.graph)) {
        Verdict fb = decide_transport_frequency(sys, ProbeParams{}, tol, seed);
        fb.notes.insert(fb.notes.begin(),
                        "rank-test preconditions not met; fell back to the frequency test");
        return fb;
    }

    const int m = sys.n_edges();
    const IncidenceMatrices inc = incidence_matrices(sys.graph);
    const Matrix wt = inc.out_weighted.get().transpose();
    const Matrix adj = adjacency(sys.graph).get();
    Matrix acc = sys.control.get();
    for (int power = 0; power < m; ++power) {
        for (int l = 0; l < acc.cols(); ++l) {
            v.generators.push_back(wt * acc.col(l));
            v.generator_info.push_back({-1, power, l});
        }
        acc = adj * acc;
    }
    v.cone = cone_equals_positive_orthant(v.generators, m, tol);
    v.decision = v.cone.verdict ? Verdict::Decision::controllable
                                : Verdict::Decision::not_controllable;
    v.probe.n_max = m - 1;
    return v;
}

Verdict decide_transport_frequency(const TransportSystem& sys, const ProbeParams& params,
                                   double tol, std::uint64_t seed) {
    Verdict v;
    v.mode = Verdict::Mode::positive;
    v.tol = tol;

    TransportFamily family(sys);
    try {
        v.probe = make_probe(family, params, seed);
    } catch (const std::runtime_error& e) {
        v.decision = Verdict::Decision::inconclusive;
        v.notes.push_back(e.what());
        return v;
    }
    if (v.probe.r_at_mu_min >= 1.0) {
        v.decision = Verdict::Decision::inconclusive;
        v.notes.push_back("spectral radius of Gamma D_mu at mu_min is not below one");
        return v;
    }

    const int m = sys.n_edges();
    const Matrix wt = family.seed_map();
    for (std::size_t mi = 0; mi < v.probe.mus.size(); ++mi) {
        const Matrix t = family.transfer(v.probe.mus[mi]);
        Matrix acc = sys.control.get();
        std::vector<Vector> local;
        for (int power = 0; power <= v.probe.n_max; ++power) {
            for (int l = 0; l < acc.cols(); ++l) {
                Vector gen = wt * acc.col(l);
                local.push_back(gen);
                v.generators.push_back(std::move(gen));
                v.generator_info.push_back({static_cast<int>(mi), power, l});
            }
            acc = t * acc;
        }
        const ConeReport per_mu = cone_equals_positive_orthant(local, m, tol);
        v.per_mu_controllable.push_back(per_mu.verdict ? 1 : 0);
    }
    v.cone = cone_equals_positive_orthant(v.generators, m, tol);
    v.decision = v.cone.verdict ? Verdict::Decision::controllable
                                : Verdict::Decision::not_controllable;

    bool uniform = true;
    for (int flag : v.per_mu_controllable) {
        if (flag != v.per_mu_controllable.front()) uniform = false;
    }
    if (!uniform) v.notes.push_back("per-mu verdicts disagree; pooled decision reported");
    return v;
}

Verdict decide_control_constrained(const BoundaryFamily& family, const ProbeParams& params, double tol,
                        int points, std::uint64_t seed) {
    Verdict v;
    v.mode = Verdict::Mode::control_constrained;
    v.tol = tol;
    v.grid_points = points;

    try {
        v.probe = make_probe(family, params, seed);
    } catch (const std::runtime_error& e) {
        v.decision = Verdict::Decision::inconclusive;
        v.notes.push_back(e.what());
        return v;
    }

    const int m = family.edge_count();
    const Matrix seed_map = family.seed_map();
    const Matrix& k = family.control();
    for (std::size_t mi = 0; mi < v.probe.mus.size(); ++mi) {
        const double mu = v.probe.mus[mi];
        const Matrix t = family.transfer(mu);
        const Matrix eye = Matrix::Identity(t.rows(), t.cols());
        Eigen::FullPivLU<Matrix> lu(eye - t);
        if (!lu.isInvertible() || lu.rcond() < 1e-12) {
            std::ostringstream msg;
            msg << "I - Gamma D_mu numerically singular at mu = " << mu;
            v.decision = Verdict::Decision::inconclusive;
            v.notes.push_back(msg.str());
            return v;
        }
        const Matrix x = lu.solve(k);
        const Matrix lift = family.lift_profiles(mu, points);
        const Matrix seeds = seed_map * x;  // M x n
        for (int l = 0; l < seeds.cols(); ++l) {
            v.generators.push_back(lifted(lift, seeds.col(l)));
            v.generator_info.push_back({static_cast<int>(mi), -1, l});
        }
    }

    const Matrix lift_ref = family.lift_profiles(v.probe.mus.front(), points);
    std::vector<Vector> targets;
    for (int j = 0; j < m; ++j) targets.push_back(lifted_edge_direction(lift_ref, j));
    for (int j = 0; j < m; ++j) targets.push_back(-lifted_edge_direction(lift_ref, j));

    const Vector weights = grid_mass_weights(m, points);
    ConeReport pooled;
    pooled.tol = tol;
    pooled.verdict = true;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        ConeReport r = cone_member(v.generators, targets[i], tol, weights);
        pooled.residual = std::max(pooled.residual, r.residual);
        if (r.lambda) pooled.memberships.push_back(*r.lambda);
        if (!r.verdict) {
            pooled.verdict = false;
            pooled.failed_target = static_cast<int>(i);
            pooled.phi = r.phi;
            break;
        }
    }
    v.cone = pooled;
    v.decision = pooled.verdict ? Verdict::Decision::controllable
                                : Verdict::Decision::not_controllable;
    return v;
}

Verdict decide_positive(const BoundaryFamily& family, const ProbeParams& params, double tol,
                        int points, std::uint64_t seed) {
    if (!family.positive_system() || !family.positive_control()) {
        throw std::invalid_argument(
            "decide_positive: positive controllability requires positive coupling and control data");
    }

    Verdict v;
    v.mode = Verdict::Mode::positive;
    v.tol = tol;
    v.grid_points = points;

    try {
        v.probe = make_probe(family, params, seed);
    } catch (const std::runtime_error& e) {
        v.decision = Verdict::Decision::inconclusive;
        v.notes.push_back(e.what());
        return v;
    }
    if (v.probe.r_at_mu_min >= 1.0) {
        v.decision = Verdict::Decision::inconclusive;
        v.notes.push_back("spectral radius of Gamma D_mu at mu_min is not below one");
        return v;
    }

    const int m = family.edge_count();
    const Matrix seed_map = family.seed_map();
    const Matrix& k = family.control();
    for (std::size_t mi = 0; mi < v.probe.mus.size(); ++mi) {
        const double mu = v.probe.mus[mi];
        const Matrix t = family.transfer(mu);
        const Matrix lift = family.lift_profiles(mu, points);
        Matrix acc = k;
        for (int power = 0; power <= v.probe.n_max; ++power) {
            const Matrix seeds = seed_map * acc;
            for (int l = 0; l < seeds.cols(); ++l) {
                v.generators.push_back(lifted(lift, seeds.col(l)));
                v.generator_info.push_back({static_cast<int>(mi), power, l});
            }
            acc = t * acc;
        }
    }

    // (a) hull inside the orthant
    for (std::size_t g = 0; g < v.generators.size(); ++g) {
        if (v.generators[g].minCoeff() < -tol) {
            v.decision = Verdict::Decision::not_controllable;
            v.cone.verdict = false;
            v.cone.tol = tol;
            v.cone.note = "generator " + std::to_string(g) + " leaves the positive orthant";
            return v;
        }
    }

    // (b) every lifted edge direction at mu_min is reachable
    const Matrix lift_ref = family.lift_profiles(v.probe.mus.front(), points);
    const Vector weights = grid_mass_weights(m, points);
    ConeReport pooled;
    pooled.tol = tol;
    pooled.verdict = true;
    for (int j = 0; j < m; ++j) {
        ConeReport r = cone_member(v.generators, lifted_edge_direction(lift_ref, j), tol, weights);
        pooled.residual = std::max(pooled.residual, r.residual);
        if (r.lambda) pooled.memberships.push_back(*r.lambda);
        if (!r.verdict) {
            pooled.verdict = false;
            pooled.failed_target = j;
            pooled.phi = r.phi;
            pooled.note = "lifted direction of edge " + std::to_string(j + 1) + " is not reachable";
            break;
        }
    }
    v.cone = pooled;
    v.decision = pooled.verdict ? Verdict::Decision::controllable
                                : Verdict::Decision::not_controllable;
    return v;
}

}  // namespace posnet
