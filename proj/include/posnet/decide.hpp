#pragma once

#include "posnet/cone.hpp"
#include "posnet/heat.hpp"
#include "posnet/transport.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace posnet {

/// Spectral radius of a nonnegative square matrix by power iteration with
/// restarts (Collatz-Wielandt bracket on I + A, exact-zero shortcut for
/// nilpotent input). For column-stochastic input this returns 1 +- tol.
double spectral_radius(const Matrix& a, double tol = 1e-10, std::uint64_t seed = 12345,
                       int max_iters = 400000);

struct ProbeParams {
    std::optional<double> mu_min;  // override for the r <= 0.9 scan
    int mu_count = 8;
    std::optional<int> n_max;      // default max(M-1, 16)
};

struct FrequencyProbe {
    std::vector<double> mus;       // mu_min first, logarithmically spaced
    int n_max = 0;
    double r_at_mu_min = 0.0;      // spectral radius of Gamma D_mu at mu_min
    double neumann_tail = 0.0;     // r^{n_max+1} / (1 - r)
};

/// The frequency-domain data of a boundary control system: transfer matrix
/// Gamma D_mu on the boundary space, the map from boundary data to per-edge
/// lift seeds, and the per-edge interior lift profiles of D_mu.
class BoundaryFamily {
public:
    virtual ~BoundaryFamily() = default;
    virtual int boundary_dim() const = 0;
    virtual int edge_count() const = 0;
    virtual double spectral_bound() const = 0;
    virtual Matrix transfer(double mu) const = 0;
    virtual Matrix seed_map() const = 0;                         // M x boundary_dim
    virtual Matrix lift_profiles(double mu, int points) const = 0;  // M x P, strictly positive
    virtual const Matrix& control() const = 0;                   // boundary_dim x n
    virtual bool positive_system() const = 0;
    virtual bool positive_control() const = 0;
};

class TransportFamily final : public BoundaryFamily {
public:
    explicit TransportFamily(TransportSystem sys);
    int boundary_dim() const override { return sys_.n_vertices(); }
    int edge_count() const override { return sys_.n_edges(); }
    double spectral_bound() const override { return sys_.spectral_shift(); }
    Matrix transfer(double mu) const override { return transport_transfer(sys_, mu); }
    Matrix seed_map() const override;
    Matrix lift_profiles(double mu, int points) const override;
    const Matrix& control() const override { return sys_.control.get(); }
    bool positive_system() const override { return true; }
    bool positive_control() const override { return true; }
    const TransportSystem& system() const { return sys_; }

private:
    TransportSystem sys_;
};

class HeatFamily final : public BoundaryFamily {
public:
    explicit HeatFamily(HeatNetwork net) : net_(std::move(net)) {}
    int boundary_dim() const override { return net_.edges; }
    int edge_count() const override { return net_.edges; }
    double spectral_bound() const override { return -net_.min_absorption(); }
    Matrix transfer(double mu) const override { return heat_transfer(net_, mu); }
    Matrix seed_map() const override { return Matrix::Identity(net_.edges, net_.edges); }
    Matrix lift_profiles(double mu, int points) const override {
        return dirichlet_profiles(net_, mu, points);
    }
    const Matrix& control() const override { return net_.control; }
    bool positive_system() const override { return net_.coupling_positive; }
    bool positive_control() const override { return net_.control_positive; }
    const HeatNetwork& network() const { return net_; }

private:
    HeatNetwork net_;
};

FrequencyProbe make_probe(const BoundaryFamily& family, const ProbeParams& params,
                          std::uint64_t seed = 12345);

struct Verdict {
    enum class Mode { control_constrained, positive };
    enum class Decision { controllable, not_controllable, inconclusive };

    Mode mode = Mode::positive;
    Decision decision = Decision::inconclusive;
    FrequencyProbe probe;
    double tol = 0.0;
    int grid_points = 0;  // 0 when generators live in the edge/boundary space

    std::vector<Vector> generators;
    // (mu index, Neumann power, control input); -1 where not applicable
    std::vector<std::array<int, 3>> generator_info;
    ConeReport cone;
    std::vector<int> per_mu_controllable;  // frequency test only
    std::vector<std::string> notes;
};

/// Kalman-type rank test for single-velocity, zero-absorption transport on
/// a strongly connected Kirchhoff graph: the cone of
/// (I_out_w)^T A^m K e_l, m = 0..M-1, must be the positive orthant of the
/// edge space. Falls back to the frequency test when preconditions fail.
Verdict decide_transport_rank(const TransportSystem& sys, double tol, std::uint64_t seed = 12345);

/// mu-sampled transport test: generators (I_out_w)^T A(mu)^m K e_l per
/// probe; per-mu verdicts recorded, decision from the pooled set.
Verdict decide_transport_frequency(const TransportSystem& sys, const ProbeParams& params,
                                   double tol, std::uint64_t seed = 12345);

/// Controllability with respect to positive controls: generators are the
/// grid lifts of D_mu (I - Gamma D_mu)^{-1} K e_l pooled across probes; the
/// full-space polar test runs against +- the lifted edge directions at
/// mu_min.
Verdict decide_control_constrained(const BoundaryFamily& family, const ProbeParams& params,
                                   double tol, int points, std::uint64_t seed = 12345);

/// Positive controllability: generators are the grid lifts of
/// D_mu (Gamma D_mu)^n K e_l, n = 0..n_max, pooled across probes; requires
/// positive transfer/control data and r(Gamma D_mu_min) < 1; the orthant
/// test checks entrywise nonnegativity plus membership of every lifted edge
/// direction at mu_min.
Verdict decide_positive(const BoundaryFamily& family, const ProbeParams& params, double tol,
                        int points, std::uint64_t seed = 12345);

const char* to_string(Verdict::Decision d);
const char* to_string(Verdict::Mode m);

}  // namespace posnet
