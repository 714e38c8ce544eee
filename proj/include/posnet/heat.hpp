#pragma once

#include "posnet/grid.hpp"

#include <vector>

namespace posnet {

/// Coupled heat equations with Robin boundary coupling: on each edge
/// dz/dt = c_j z'' - q_j z with z'(0) = 0 and z'(1) = (B z(0) + K u).
struct HeatNetwork {
    int edges = 0;
    Vector diffusivity;   // c_j > 0
    Vector absorption;    // q_j > 0
    Matrix coupling;      // B, M x M (signed entries allowed)
    bool coupling_positive = false;
    Matrix control;       // K, M x n (signed entries allowed)
    bool control_positive = false;

    HeatNetwork(Vector c, Vector q, Matrix b, Matrix k);

    double min_absorption() const { return absorption.minCoeff(); }
};

/// Neumann cosine modes: eigenvalues lambda_{j,k} = -q_j - c_j k^2 pi^2 and
/// eigenfunctions cos(k pi x) with ||phi_0||^2 = 1, ||phi_k||^2 = 1/2.
struct SpectralBasis {
    int k_max = 0;
    int points = 0;
    Matrix phi;      // (k_max+1) x P samples of cos(k pi x)
    Vector norms;    // squared L2 norms
    Vector weights;  // trapezoid weights on the grid
};

SpectralBasis make_spectral_basis(int k_max, int points);

double heat_eigenvalue(const HeatNetwork& net, int edge, int k);

/// Unnormalized pairings a_{j,k} = <h_j, phi_k> by trapezoid quadrature.
Matrix spectral_analyze(const SpectralBasis& basis, const GridFunction& h);
Matrix spectral_analyze_serial(const SpectralBasis& basis, const GridFunction& h);

/// Grid synthesis sum_k (a_{j,k}/||phi_k||^2) phi_k(x).
GridFunction spectral_synthesize(const SpectralBasis& basis, const Matrix& coeffs);
GridFunction spectral_synthesize_serial(const SpectralBasis& basis, const Matrix& coeffs);

/// Truncated-series heat semigroup.
GridFunction heat_semigroup_apply(const HeatNetwork& net, const SpectralBasis& basis,
                                  const GridFunction& h, double t);

/// xi_j(x) = cosh(s x) / (s sinh s), s = sqrt((mu + q_j)/c_j); the Dirichlet
/// kernel for flux data at x=1 (grad traces: xi'(1) = 1, xi'(0) = 0).
double xi_kernel(const HeatNetwork& net, double mu, int edge, double x);

/// Per-edge Dirichlet profiles xi_j on the grid (M x P).
Matrix dirichlet_profiles(const HeatNetwork& net, double mu, int points);

/// Transfer matrix A(mu) = B diag(xi_j(0)).
Matrix heat_transfer(const HeatNetwork& net, double mu);

bool is_path_topology(const HeatNetwork& net, double* b_out = nullptr);

/// The three-edge path operator (H u)(x) =
/// (xi_1 b u, xi_2 xi_1(0) b u, xi_3 xi_2(0) xi_1(0) b u).
GridFunction path_H_operator(const HeatNetwork& net, double mu, double u, int points);

struct HeatTrajectory {
    std::vector<double> times;
    std::vector<GridFunction> states;
    double tail_estimate = 0.0;   // sup-norm bound on the truncated forcing tail
    bool truncation_flagged = false;
    long positivity_violations = 0;  // dips below the truncation floor
};

/// Mode-wise exact integration: each cosine pairing evolves by
/// a' = lambda a + c_j (-1)^k d_j(t) with the flux data d = B z(.,0) + K u
/// frozen over a step (exponential integrator); this is the mu=0 boundary
/// lifting scheme in coefficient form.
HeatTrajectory heat_simulate_mild(const HeatNetwork& net, const SpectralBasis& basis,
                                  const GridFunction& h0, const ControlSignal& u, double t_final,
                                  double dt, bool positivity_mode, int record_stride = 1,
                                  double truncation_tolerance = 1e-2);

}  // namespace posnet
