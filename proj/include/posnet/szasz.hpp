#pragma once

#include "posnet/common.hpp"

#include <functional>
#include <vector>

namespace posnet {

/// Warped Szasz-Mirakjan evaluation. The warp is phi(x) = (1-x)/v on [0,1]
/// and 0 beyond, so the Poisson rate at x is n*phi(x). The series is cut at
/// k_cut = n phi + 10 sqrt(n phi) + 20 (Poisson concentration), which keeps
/// the truncation tail below ~1e-12 for the weights that matter here.
struct MirakjanEval {
    int order = 8;        // n >= 1
    double velocity = 1.0;

    double warp(double x) const { return x >= 1.0 ? 0.0 : (1.0 - x) / velocity; }
    /// Inverse of the warp restricted to [0,1]; arguments beyond 1/v clamp
    /// to x = 0 where phi stops being invertible.
    double warp_inverse(double y) const { return std::max(0.0, 1.0 - velocity * y); }
    int cutoff(double rate) const {
        return static_cast<int>(rate + 10.0 * std::sqrt(rate)) + 21;
    }
};

/// Core series in the warped variable: e^{-rate} sum_k g(k/n) rate^k / k!.
/// `g` must accept any argument in [0, rate/n + O(sqrt(rate)/n)].
double szasz_warped(const MirakjanEval& cfg, const std::function<double(double)>& g, double rate);

/// M_n(f; x) for f given on [0,1] (constant extension beyond 1 happens
/// automatically; arguments past the invertible range of the warp clamp to
/// x=0, see MirakjanEval::warp_inverse).
double mirakjan_apply(const MirakjanEval& cfg, const std::function<double(double)>& f, double x);

/// Grid evaluation of M_n f on [0,1].
Vector mirakjan_apply_grid(const MirakjanEval& cfg, const std::function<double(double)>& f,
                           const Vector& xs);
Vector mirakjan_apply_grid_serial(const MirakjanEval& cfg, const std::function<double(double)>& f,
                                  const Vector& xs);

struct DensityPairing {
    int n = 0;
    double value = 0.0;
};

struct DensityDualReport {
    std::vector<DensityPairing> pairings;  // int_0^1 e^{-n(1-x)/v} g(x) dx per n
    bool all_pairings_nonnegative = true;
    bool has_negative_region = false;      // g dips below -tol somewhere
    bool blind_spot = false;               // pairings all >= 0 yet g has a negative region
    int smallest_violating_n = -1;         // first n with a negative pairing
};

/// Property check of the exponential-family density mechanism: nonnegative
/// pairings against e^{-n(1-x)/v} should only happen for g >= 0; duals that
/// slip through at the sampled n are flagged, not proven.
std::vector<DensityDualReport> exponential_family_density_check(
    double v, const std::vector<Vector>& duals, const std::vector<int>& n_range,
    double tol = 1e-12);

}  // namespace posnet
