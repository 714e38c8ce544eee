#pragma once

#include "posnet/graph.hpp"
#include "posnet/grid.hpp"

#include <vector>

namespace posnet {

/// Transport network in the single-velocity, unit-scattering reduction.
/// `absorption` stores the signed per-edge constant q*_j: the semigroup
/// damps as e^{q*_j t}, so stable runs use q*_j <= 0. The scenario file
/// carries the sign explicitly.
struct TransportSystem {
    NetworkGraph graph;
    Vector velocity;        // per edge, strictly positive
    Vector absorption;      // signed q*_j per edge
    PositiveMatrix control; // K, N x n_controls

    TransportSystem(NetworkGraph g, Vector v, Vector q_star, PositiveMatrix k);

    int n_edges() const { return graph.n_edges(); }
    int n_vertices() const { return graph.n_vertices(); }
    bool uniform_velocity() const;
    /// Largest admissible lower bound for resolvent/Dirichlet frequencies.
    double spectral_shift() const { return absorption.maxCoeff(); }
};

/// (T(t)f)_j(x) = e^{q*_j t} f_j(x + v_j t) when x + v_j t <= 1, else 0.
/// Linear interpolation between nodes; exact when v_j t hits the grid.
GridFunction free_semigroup_apply(const TransportSystem& sys, const GridFunction& f, double t);

/// Dirichlet lift of vertex data d: edge j profile
/// e^{(q*_j - mu)(1-x)/v_j} * ((I_out_w)^T d)_j.
GridFunction dirichlet_apply(const TransportSystem& sys, double mu, const Vector& d, int points);

/// e^{-mu/v} A for the single-velocity, q=0 reduction.
PositiveMatrix transfer_simple(const TransportSystem& sys, double mu);

/// Gamma D_mu for general per-edge velocity and absorption:
/// I_in diag(e^{(q*_j-mu)/v_j}) (I_out_w)^T.
Matrix transport_transfer(const TransportSystem& sys, double mu);

/// Gamma D_mu evaluated compositionally: lift each vertex basis vector,
/// trace at x=0, route through the incoming incidence matrix.
Matrix transport_transfer_via_trace(const TransportSystem& sys, double mu, int points);

/// Velocity-resolved boundary data on a Q-point quadrature grid.
struct KineticScattering {
    Vector vgrid;              // strictly positive velocities, increasing
    std::vector<Matrix> ell;   // per edge: Q x Q samples ell_j(0, v, v')

    void validate(int n_edges) const;
    /// Trapezoid weights on vgrid (a single point gets weight 1).
    Vector quad_weights() const;
};

/// Kinetic transfer operator of the velocity-resolved model, boundary data
/// g as an N x Q matrix; the spatial exponent is evaluated at the edge
/// origin.
Matrix transfer_kinetic(const TransportSystem& sys, const KineticScattering& sc, double mu,
                        const Matrix& g);

/// r_j(x) = (1/v_j) int_x^1 e^{(q*_j - mu)(y-x)/v_j} f_j(y) dy, composite
/// trapezoid, so that (mu - A) r = f with r(1) = 0.
GridFunction resolvent_apply(const TransportSystem& sys, double mu, const GridFunction& f);

struct TransportTrajectory {
    std::vector<double> times;
    std::vector<GridFunction> states;
    long positivity_violations = 0;
};

/// Mild solution by exact shifts along characteristics: interior advection
/// with damping, inflow boundary refilled through the weighted Kirchhoff
/// redistribution of vertex traces plus control. Requires a uniform
/// velocity so every step moves exactly one grid cell.
TransportTrajectory simulate_mild(const TransportSystem& sys, const GridFunction& f0,
                                  const ControlSignal& u, double t_final, bool positivity_mode,
                                  int record_stride = 1);

}  // namespace posnet
