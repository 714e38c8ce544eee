#pragma once

#include "posnet/common.hpp"

namespace posnet {

/// Vector-valued function on a uniform P-point grid over [0,1] per edge.
/// Row j holds the samples of edge j at x_p = p/(P-1). `norm_p` selects the
/// L^p grid norm (1 for transport, 2 for heat).
struct GridFunction {
    int edges = 0;
    int points = 0;
    Matrix values;  // edges x points
    int norm_p = 2;

    GridFunction() = default;
    GridFunction(int n_edges, int n_points, int p = 2)
        : edges(n_edges), points(n_points), values(Matrix::Zero(n_edges, n_points)), norm_p(p) {}

    double dx() const { return 1.0 / (points - 1); }

    /// Composite-trapezoid L^p norm summed over edges.
    double norm() const;
    double min_value() const { return values.minCoeff(); }
    double max_abs() const { return values.cwiseAbs().maxCoeff(); }

    /// Trapezoid pairing  sum_j int_0^1 a_j b_j dx.
    static double inner(const GridFunction& a, const GridFunction& b);

    /// Flatten to a single vector (edge-major), e.g. for cone problems.
    Vector flatten() const;
    static GridFunction unflatten(const Vector& v, int edges, int points, int norm_p);
};

/// Concatenated per-edge trapezoid weights matching GridFunction::flatten.
Vector grid_mass_weights(int edges, int points);

/// Sampled control signal, sample-and-hold in time.
struct ControlSignal {
    double dt = 0.0;
    std::vector<Vector> samples;
    bool positive = false;

    Vector value(double t) const;
    int inputs() const { return samples.empty() ? 0 : static_cast<int>(samples.front().size()); }
    void validate() const;
};

}  // namespace posnet
