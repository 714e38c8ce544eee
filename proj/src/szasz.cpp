#include "posnet/szasz.hpp"

#include "posnet/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace posnet {

double szasz_warped(const MirakjanEval& cfg, const std::function<double(double)>& g, double rate) {
    if (cfg.order < 1) throw std::invalid_argument("szasz: order must be >= 1");
    if (rate < 0.0) throw std::invalid_argument("szasz: negative rate");
    if (rate == 0.0) return g(0.0);
    const int k_cut = cfg.cutoff(rate);
    const double log_rate = std::log(rate);
    double acc = 0.0;
    for (int k = 0; k <= k_cut; ++k) {
        const double log_w = -rate + k * log_rate - std::lgamma(k + 1.0);
        if (log_w < -745.0) continue;  // weight underflows
        acc += g(static_cast<double>(k) / cfg.order) * std::exp(log_w);
    }
    return acc;
}

double mirakjan_apply(const MirakjanEval& cfg, const std::function<double(double)>& f, double x) {
    if (x < 0.0) throw std::invalid_argument("mirakjan_apply: x must be >= 0");
    const double rate = cfg.order * cfg.warp(x);
    auto g = [&](double y) { return f(cfg.warp_inverse(y)); };
    return szasz_warped(cfg, g, rate);
}

Vector mirakjan_apply_grid_serial(const MirakjanEval& cfg, const std::function<double(double)>& f,
                                  const Vector& xs) {
    Vector out(xs.size());
    for (Eigen::Index i = 0; i < xs.size(); ++i) out(i) = mirakjan_apply(cfg, f, xs(i));
    return out;
}

Vector mirakjan_apply_grid(const MirakjanEval& cfg, const std::function<double(double)>& f,
                           const Vector& xs) {
    Vector out(xs.size());
    parallel_for(xs.size(), [&](std::int64_t i) { out(i) = mirakjan_apply(cfg, f, xs(i)); });
    return out;
}

std::vector<DensityDualReport> exponential_family_density_check(
    double v, const std::vector<Vector>& duals, const std::vector<int>& n_range, double tol) {
    if (v <= 0.0) throw std::invalid_argument("density check: v must be positive");
    std::vector<DensityDualReport> out;
    out.reserve(duals.size());
    for (const Vector& g : duals) {
        const int points = static_cast<int>(g.size());
        const Vector w = trapezoid_weights(points);
        const double dx = 1.0 / (points - 1);
        DensityDualReport rep;
        rep.has_negative_region = (g.array() < -tol).any();
        for (int n : n_range) {
            double acc = 0.0;
            for (int p = 0; p < points; ++p) {
                acc += w(p) * std::exp(-n * (1.0 - p * dx) / v) * g(p);
            }
            rep.pairings.push_back({n, acc});
            if (acc < -tol) {
                rep.all_pairings_nonnegative = false;
                if (rep.smallest_violating_n < 0) rep.smallest_violating_n = n;
            }
        }
        rep.blind_spot = rep.all_pairings_nonnegative && rep.has_negative_region;
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace posnet
