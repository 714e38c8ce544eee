#include "posnet/heat.hpp"

#include "posnet/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace posnet {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

HeatNetwork::HeatNetwork(Vector c, Vector q, Matrix b, Matrix k)
    : edges(static_cast<int>(c.size())),
      diffusivity(std::move(c)),
      absorption(std::move(q)),
      coupling(std::move(b)),
      control(std::move(k)) {
    if (absorption.size() != edges) throw std::invalid_argument("HeatNetwork: q size mismatch");
    if ((diffusivity.array() <= 0.0).any() || (absorption.array() <= 0.0).any()) {
        throw std::invalid_argument("HeatNetwork: c_j and q_j must be strictly positive");
    }
    if (coupling.rows() != edges || coupling.cols() != edges) {
        throw std::invalid_argument("HeatNetwork: coupling must be M x M");
    }
    if (control.rows() != edges) throw std::invalid_argument("HeatNetwork: control must have M rows");
    coupling_positive = is_nonnegative(coupling);
    control_positive = is_nonnegative(control);
}

SpectralBasis make_spectral_basis(int k_max, int points) {
    if (k_max < 0) throw std::invalid_argument("make_spectral_basis: k_max must be >= 0");
    SpectralBasis b;
    b.k_max = k_max;
    b.points = points;
    b.phi = Matrix(k_max + 1, points);
    b.norms = Vector(k_max + 1);
    b.weights = trapezoid_weights(points);
    const double dx = 1.0 / (points - 1);
    for (int k = 0; k <= k_max; ++k) {
        for (int p = 0; p < points; ++p) b.phi(k, p) = std::cos(k * kPi * p * dx);
        b.norms(k) = (k == 0) ? 1.0 : 0.5;
    }
    return b;
}

double heat_eigenvalue(const HeatNetwork& net, int edge, int k) {
    return -net.absorption(edge) - net.diffusivity(edge) * k * k * kPi * kPi;
}

Matrix spectral_analyze_serial(const SpectralBasis& basis, const GridFunction& h) {
    Matrix coeffs(h.edges, basis.k_max + 1);
    for (int j = 0; j < h.edges; ++j) {
        for (int k = 0; k <= basis.k_max; ++k) {
            double acc = 0.0;
            for (int p = 0; p < basis.points; ++p) {
                acc += basis.weights(p) * h.values(j, p) * basis.phi(k, p);
            }
            coeffs(j, k) = acc;
        }
    }
    return coeffs;
}

Matrix spectral_analyze(const SpectralBasis& basis, const GridFunction& h) {
    if (h.points != basis.points) throw std::invalid_argument("spectral_analyze: grid mismatch");
    Matrix coeffs(h.edges, basis.k_max + 1);
    parallel_for(static_cast<std::int64_t>(h.edges) * (basis.k_max + 1), [&](std::int64_t idx) {
        const int j = static_cast<int>(idx / (basis.k_max + 1));
        const int k = static_cast<int>(idx % (basis.k_max + 1));
        double acc = 0.0;
        for (int p = 0; p < basis.points; ++p) {
            acc += basis.weights(p) * h.values(j, p) * basis.phi(k, p);
        }
        coeffs(j, k) = acc;
    });
    return coeffs;
}

GridFunction spectral_synthesize_serial(const SpectralBasis& basis, const Matrix& coeffs) {
    GridFunction out(static_cast<int>(coeffs.rows()), basis.points, 2);
    for (int j = 0; j < out.edges; ++j) {
        for (int p = 0; p < basis.points; ++p) {
            double acc = 0.0;
            for (int k = 0; k <= basis.k_max; ++k) {
                acc += coeffs(j, k) / basis.norms(k) * basis.phi(k, p);
            }
            out.values(j, p) = acc;
        }
    }
    return out;
}

GridFunction spectral_synthesize(const SpectralBasis& basis, const Matrix& coeffs) {
    GridFunction out(static_cast<int>(coeffs.rows()), basis.points, 2);
    parallel_for(static_cast<std::int64_t>(out.edges) * basis.points, [&](std::int64_t idx) {
        const int j = static_cast<int>(idx / basis.points);
        const int p = static_cast<int>(idx % basis.points);
        double acc = 0.0;
        for (int k = 0; k <= basis.k_max; ++k) {
            acc += coeffs(j, k) / basis.norms(k) * basis.phi(k, p);
        }
        out.values(j, p) = acc;
    });
    return out;
}

GridFunction heat_semigroup_apply(const HeatNetwork& net, const SpectralBasis& basis,
                                  const GridFunction& h, double t) {
    if (t < 0.0) throw std::invalid_argument("heat_semigroup_apply: negative time");
    Matrix coeffs = spectral_analyze(basis, h);
    for (int j = 0; j < net.edges; ++j) {
        for (int k = 0; k <= basis.k_max; ++k) {
            coeffs(j, k) *= std::exp(heat_eigenvalue(net, j, k) * t);
        }
    }
    return spectral_synthesize(basis, coeffs);
}

double xi_kernel(const HeatNetwork& net, double mu, int edge, double x) {
    if (mu + net.absorption(edge) <= 0.0) {
        throw std::invalid_argument("xi_kernel: mu + q_j must be positive");
    }
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("xi_kernel: x outside [0,1]");
    const double s = std::sqrt((mu + net.absorption(edge)) / net.diffusivity(edge));
    // cosh(s x) / (s sinh s) in exponentially scaled form; the naive
    // quotient overflows to inf/inf once s exceeds ~710
    return std::exp(s * (x - 1.0)) * (1.0 + std::exp(-2.0 * s * x)) /
           (s * (1.0 - std::exp(-2.0 * s)));
}

Matrix dirichlet_profiles(const HeatNetwork& net, double mu, int points) {
    Matrix out(net.edges, points);
    const double dx = 1.0 / (points - 1);
    for (int j = 0; j < net.edges; ++j) {
        for (int p = 0; p < points; ++p) out(j, p) = xi_kernel(net, mu, j, p * dx);
    }
    return out;
}

Matrix heat_transfer(const HeatNetwork& net, double mu) {
    if (mu <= -net.min_absorption()) {
        throw std::invalid_argument("heat_transfer: mu must exceed -min q_j");
    }
    Vector xi0(net.edges);
    for (int j = 0; j < net.edges; ++j) xi0(j) = xi_kernel(net, mu, j, 0.0);
    return net.coupling * xi0.asDiagonal();
}

bool is_path_topology(const HeatNetwork& net, double* b_out) {
    if (net.edges != 3) return false;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double expected = (i == j + 1) ? 1.0 : 0.0;
            if (net.coupling(i, j) != expected) return false;
        }
    }
    if (net.control.cols() < 1) return false;
    const double b = net.control(0, 0);
    if (b == 0.0) return false;
    for (int i = 0; i < net.control.rows(); ++i) {
        for (int j = 0; j < net.control.cols(); ++j) {
            if ((i != 0 || j != 0) && net.control(i, j) != 0.0) return false;
        }
    }
    if (b_out) *b_out = b;
    return true;
}

GridFunction path_H_operator(const HeatNetwork& net, double mu, double u, int points) {
    double b = 0.0;
    if (!is_path_topology(net, &b)) {
        throw std::invalid_argument("path_H_operator: network is not the 3-edge path configuration");
    }
    GridFunction out(3, points, 2);
    const double xi1_0 = xi_kernel(net, mu, 0, 0.0);
    const double xi2_0 = xi_kernel(net, mu, 1, 0.0);
    const double dx = 1.0 / (points - 1);
    for (int p = 0; p < points; ++p) {
        const double x = p * dx;
        out.values(0, p) = xi_kernel(net, mu, 0, x) * b * u;
        out.values(1, p) = xi_kernel(net, mu, 1, x) * xi1_0 * b * u;
        out.values(2, p) = xi_kernel(net, mu, 2, x) * xi2_0 * xi1_0 * b * u;
    }
    return out;
}

namespace {

// Tail of the boundary-lift coefficient series beyond k_max:
// sum_{k>K} 2 |c_j d_j| / (q_j + c_j k^2 pi^2) <= 2 |d_j| / (pi^2 K).
double forcing_tail_bound(const HeatNetwork& net, int k_max, const Vector& d) {
    double worst = 0.0;
    for (int j = 0; j < net.edges; ++j) {
        worst = std::max(worst, 2.0 * std::abs(d(j)) / (kPi * kPi * k_max));
    }
    return worst;
}

}  // namespace

HeatTrajectory heat_simulate_mild(const HeatNetwork& net, const SpectralBasis& basis,
                                  const GridFunction& h0, const ControlSignal& u, double t_final,
                                  double dt, bool positivity_mode, int record_stride,
                                  double truncation_tolerance) {
    if (dt <= 0.0) throw std::invalid_argument("heat_simulate_mild: dt must be positive");
    if (h0.edges != net.edges) throw std::invalid_argument("heat_simulate_mild: edge mismatch");
    if (!u.samples.empty() && u.inputs() != net.control.cols()) {
        throw std::invalid_argument("heat_simulate_mild: control width does not match K");
    }
    if (positivity_mode) {
        if (!net.coupling_positive || !net.control_positive) {
            throw std::invalid_argument("heat_simulate_mild: positivity mode requires B >= 0 and K >= 0");
        }
        if (h0.min_value() < 0.0) {
            throw std::invalid_argument("heat_simulate_mild: negative initial state in positivity mode");
        }
        u.validate();
    }

    Matrix coeffs = spectral_analyze(basis, h0);
    Matrix sign_src(net.edges, basis.k_max + 1);
    for (int j = 0; j < net.edges; ++j) {
        for (int k = 0; k <= basis.k_max; ++k) {
            sign_src(j, k) = net.diffusivity(j) * ((k % 2 == 0) ? 1.0 : -1.0);
        }
    }
    // exact one-step factors per (edge, mode) for a given step size
    Matrix efac(net.edges, basis.k_max + 1);
    Matrix gfac(net.edges, basis.k_max + 1);
    auto set_step = [&](double step) {
        for (int j = 0; j < net.edges; ++j) {
            for (int k = 0; k <= basis.k_max; ++k) {
                const double lam = heat_eigenvalue(net, j, k);
                efac(j, k) = std::exp(lam * step);
                gfac(j, k) = (efac(j, k) - 1.0) / lam;
            }
        }
    };
    set_step(dt);
    Vector inv_norms = basis.norms.cwiseInverse();

    HeatTrajectory traj;
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(t_final / dt - 1e-12)));
    traj.times.push_back(0.0);
    traj.states.push_back(spectral_synthesize(basis, coeffs));
    double t = 0.0;
    for (long s = 1; s <= steps; ++s) {
        if (s == steps) {
            const double last = t_final - t;  // land exactly on the horizon
            if (std::abs(last - dt) > 1e-12 * std::max(1.0, dt)) set_step(last);
        }
        const Vector trace0 = coeffs * inv_norms;  // phi_k(0) = 1 for all k
        const Vector uval = u.samples.empty() ? Vector::Zero(net.control.cols()) : u.value(t);
        const Vector d = net.coupling * trace0 + net.control * uval;
        traj.tail_estimate = std::max(traj.tail_estimate, forcing_tail_bound(net, basis.k_max, d));
        parallel_for(net.edges, [&](std::int64_t j) {
            for (int k = 0; k <= basis.k_max; ++k) {
                coeffs(j, k) = efac(j, k) * coeffs(j, k) + gfac(j, k) * sign_src(j, k) * d(j);
            }
        });
        t = (s == steps) ? t_final : static_cast<double>(s) * dt;
        if (s % record_stride == 0 || s == steps) {
            GridFunction state = spectral_synthesize(basis, coeffs);
            if (positivity_mode) {
                traj.positivity_violations +=
                    (state.values.array() < -traj.tail_estimate).count();
            }
            traj.times.push_back(t);
            traj.states.push_back(std::move(state));
        }
    }
    traj.truncation_flagged = traj.tail_estimate > truncation_tolerance;
    return traj;
}

}  // namespace posnet
