#include "posnet/transport.hpp"

#include "posnet/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace posnet {

TransportSystem::TransportSystem(NetworkGraph g, Vector v, Vector q_star, PositiveMatrix k)
    : graph(std::move(g)), velocity(std::move(v)), absorption(std::move(q_star)), control(std::move(k)) {
    const int m = graph.n_edges();
    if (velocity.size() == 1 && m > 1) velocity = Vector::Constant(m, velocity(0));
    if (absorption.size() == 1 && m > 1) absorption = Vector::Constant(m, absorption(0));
    if (velocity.size() != m || absorption.size() != m) {
        throw std::invalid_argument("TransportSystem: per-edge parameter size mismatch");
    }
    if ((velocity.array() <= 0.0).any()) {
        throw std::invalid_argument("TransportSystem: velocities must be strictly positive");
    }
    if (control.rows() != graph.n_vertices()) {
        throw std::invalid_argument("TransportSystem: control matrix must have N rows");
    }
}

bool TransportSystem::uniform_velocity() const {
    return (velocity.array() == velocity(0)).all();
}

GridFunction free_semigroup_apply(const TransportSystem& sys, const GridFunction& f, double t) {
    if (t < 0.0) throw std::invalid_argument("free_semigroup_apply: negative time");
    GridFunction out(f.edges, f.points, f.norm_p);
    const double dx = f.dx();
    for (int j = 0; j < f.edges; ++j) {
        const double decay = std::exp(sys.absorption(j) * t);
        const double shift_idx = sys.velocity(j) * t / dx;  // index-space shift, exact on-grid
        for (int p = 0; p < f.points; ++p) {
            const double pos = p + shift_idx;
            if (pos > f.points - 1 + 1e-12) continue;  // x + v t > 1
            const int p0 = std::min(static_cast<int>(pos), f.points - 2);
            const double frac = std::min(pos - p0, 1.0);
            out.values(j, p) =
                decay * (frac == 0.0 ? f.values(j, p0)
                                     : (1.0 - frac) * f.values(j, p0) + frac * f.values(j, p0 + 1));
        }
    }
    return out;
}

GridFunction dirichlet_apply(const TransportSystem& sys, double mu, const Vector& d, int points) {
    if (mu <= sys.spectral_shift()) {
        throw std::invalid_argument("dirichlet_apply: mu must exceed the spectral shift");
    }
    const IncidenceMatrices inc = incidence_matrices(sys.graph);
    const Vector seed = inc.out_weighted.get().transpose() * d;  // (I_out_w)^T d, per edge
    GridFunction out(sys.n_edges(), points, 1);
    const double dx = 1.0 / (points - 1);
    for (int j = 0; j < sys.n_edges(); ++j) {
        const double rate = (sys.absorption(j) - mu) / sys.velocity(j);
        for (int p = 0; p < points; ++p) {
            out.values(j, p) = std::exp(rate * (1.0 - p * dx)) * seed(j);
        }
    }
    return out;
}

PositiveMatrix transfer_simple(const TransportSystem& sys, double mu) {
    if (!sys.uniform_velocity()) {
        throw std::invalid_argument("transfer_simple: requires a single velocity");
    }
    if (sys.absorption.cwiseAbs().maxCoeff() != 0.0) {
        throw std::invalid_argument("transfer_simple: requires q == 0");
    }
    const double factor = std::exp(-mu / sys.velocity(0));
    return PositiveMatrix(factor * adjacency(sys.graph).get());
}

Matrix transport_transfer(const TransportSystem& sys, double mu) {
    const IncidenceMatrices inc = incidence_matrices(sys.graph);
    Vector damp(sys.n_edges());
    for (int j = 0; j < sys.n_edges(); ++j) {
        damp(j) = std::exp((sys.absorption(j) - mu) / sys.velocity(j));
    }
    return inc.in.get() * damp.asDiagonal() * inc.out_weighted.get().transpose();
}

Matrix transport_transfer_via_trace(const TransportSystem& sys, double mu, int points) {
    const int n = sys.n_vertices();
    const IncidenceMatrices inc = incidence_matrices(sys.graph);
    Matrix out(n, n);
    for (int i = 0; i < n; ++i) {
        const GridFunction lift = dirichlet_apply(sys, mu, Vector::Unit(n, i), points);
        out.col(i) = inc.in.get() * lift.values.col(0);  // trace at x = 0
    }
    return out;
}

void KineticScattering::validate(int n_edges) const {
    if (vgrid.size() < 1 || vgrid(0) <= 0.0) {
        throw std::invalid_argument("KineticScattering: velocities must be positive");
    }
    for (int q = 1; q < vgrid.size(); ++q) {
        if (vgrid(q) <= vgrid(q - 1)) {
            throw std::invalid_argument("KineticScattering: velocity grid must increase");
        }
    }
    if (static_cast<int>(ell.size()) != n_edges) {
        throw std::invalid_argument("KineticScattering: need one kernel per edge");
    }
    for (const Matrix& m : ell) {
        if (m.rows() != vgrid.size() || m.cols() != vgrid.size()) {
            throw std::invalid_argument("KineticScattering: kernel sample shape mismatch");
        }
        if ((m.array() < 0.0).any()) {
            throw std::invalid_argument("KineticScattering: kernel samples must be nonnegative");
        }
    }
}

Vector KineticScattering::quad_weights() const {
    const int q = static_cast<int>(vgrid.size());
    if (q == 1) return Vector::Ones(1);
    Vector w = Vector::Zero(q);
    for (int i = 0; i + 1 < q; ++i) {
        const double h = vgrid(i + 1) - vgrid(i);
        w(i) += 0.5 * h;
        w(i + 1) += 0.5 * h;
    }
    return w;
}

Matrix transfer_kinetic(const TransportSystem& sys, const KineticScattering& sc, double mu,
                        const Matrix& g) {
    sc.validate(sys.n_edges());
    const int n = sys.n_vertices();
    const int q = static_cast<int>(sc.vgrid.size());
    if (g.rows() != n || g.cols() != q) {
        throw std::invalid_argument("transfer_kinetic: boundary data must be N x Q");
    }
    const IncidenceMatrices inc = incidence_matrices(sys.graph);
    const Vector w = sc.quad_weights();

    // seed_j(v') = e^{-mu/v'} sum_i w_ij iota^out_ij g_i(v'),
    // (A(mu)g)_k(v) = sum_j iota^in_kj int ell_j(0,v,v') seed_j(v') dv'.
    Matrix seed(sys.n_edges(), q);
    for (int j = 0; j < sys.n_edges(); ++j) {
        for (int iv = 0; iv < q; ++iv) {
            const double damp = std::exp((sys.absorption(j) - mu) / sc.vgrid(iv));
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += inc.out_weighted(i, j) * g(i, iv);
            seed(j, iv) = damp * acc;
        }
    }
    Matrix out = Matrix::Zero(n, q);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < sys.n_edges(); ++j) {
            if (inc.in(k, j) == 0.0) continue;
            for (int iv = 0; iv < q; ++iv) {
                double acc = 0.0;
                for (int jv = 0; jv < q; ++jv) {
                    acc += sc.ell[static_cast<std::size_t>(j)](iv, jv) * seed(j, jv) * w(jv);
                }
                out(k, iv) += acc;
            }
        }
    }
    return out;
}

GridFunction resolvent_apply(const TransportSystem& sys, double mu, const GridFunction& f) {
    if (mu <= sys.spectral_shift()) {
        throw std::invalid_argument("resolvent_apply: mu must exceed the spectral shift");
    }
    GridFunction out(f.edges, f.points, f.norm_p);
    const double dx = f.dx();
    for (int j = 0; j < f.edges; ++j) {
        const double v = sys.velocity(j);
        const double e = std::exp((sys.absorption(j) - mu) * dx / v);
        // integrate from the right: r(1) = 0
        out.values(j, f.points - 1) = 0.0;
        for (int p = f.points - 2; p >= 0; --p) {
            out.values(j, p) = e * out.values(j, p + 1) +
                               dx / (2.0 * v) * (f.values(j, p) + e * f.values(j, p + 1));
        }
    }
    return out;
}

namespace {

// One exact characteristic step of length dx/v: shift one cell toward x=0,
// then refill the inflow end x=1 with the weighted redistribution of the
// fresh vertex traces plus control.
void step_once(const TransportSystem& sys, const IncidenceMatrices& inc, Matrix& state,
               const Vector& u_next, const Vector& decay) {
    const int m = sys.n_edges();
    const int pts = static_cast<int>(state.cols());
    parallel_for(m, [&](std::int64_t j) {
        for (int p = 0; p + 1 < pts; ++p) state(j, p) = decay(j) * state(j, p + 1);
    });
    const Vector vertex = inc.in.get() * state.col(0) + sys.control.get() * u_next;
    const Vector inflow = inc.out_weighted.get().transpose() * vertex;
    for (int j = 0; j < m; ++j) state(j, pts - 1) = inflow(j);
}

}  // namespace

TransportTrajectory simulate_mild(const TransportSystem& sys, const GridFunction& f0,
                                  const ControlSignal& u, double t_final, bool positivity_mode,
                                  int record_stride) {
    if (!sys.uniform_velocity()) {
        throw std::invalid_argument("simulate_mild: CFL-incompatible step (velocities must agree)");
    }
    if (f0.edges != sys.n_edges()) throw std::invalid_argument("simulate_mild: edge count mismatch");
    if (!u.samples.empty() && u.inputs() != sys.control.cols()) {
        throw std::invalid_argument("simulate_mild: control width does not match K");
    }
    if (positivity_mode) {
        if (f0.min_value() < 0.0) {
            throw std::invalid_argument("simulate_mild: negative initial state in positivity mode");
        }
        if (!u.positive) throw std::invalid_argument("simulate_mild: control not flagged positive");
        u.validate();
    }
    const double v = sys.velocity(0);
    const double dt = f0.dx() / v;
    const long steps = static_cast<long>(std::llround(t_final / dt));
    if (std::abs(steps * dt - t_final) > 1e-9 * std::max(1.0, t_final)) {
        throw std::invalid_argument("simulate_mild: CFL-incompatible time horizon (t_final must be a multiple of dx/v)");
    }

    const IncidenceMatrices inc = incidence_matrices(sys.graph);
    Vector decay(sys.n_edges());
    for (int j = 0; j < sys.n_edges(); ++j) decay(j) = std::exp(sys.absorption(j) * dt);

    TransportTrajectory traj;
    GridFunction state = f0;
    traj.times.push_back(0.0);
    traj.states.push_back(state);
    for (long s = 1; s <= steps; ++s) {
        const double t_next = static_cast<double>(s) * dt;
        const Vector u_next = u.samples.empty() ? Vector::Zero(sys.control.cols()) : u.value(t_next);
        step_once(sys, inc, state.values, u_next, decay);
        if (positivity_mode) {
            traj.positivity_violations += (state.values.array() < 0.0).count();
        }
        if (s % record_stride == 0 || s == steps) {
            traj.times.push_back(t_next);
            traj.states.push_back(state);
        }
    }
    return traj;
}

}  // namespace posnet
