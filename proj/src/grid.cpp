#include "posnet/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace posnet {

double GridFunction::norm() const {
    const Vector w = trapezoid_weights(points);
    if (norm_p == 1) {
        return (values.cwiseAbs() * w).sum();
    }
    double acc = 0.0;
    for (int j = 0; j < edges; ++j) {
        for (int p = 0; p < points; ++p) {
            acc += w(p) * std::pow(std::abs(values(j, p)), norm_p);
        }
    }
    return std::pow(acc, 1.0 / norm_p);
}

double GridFunction::inner(const GridFunction& a, const GridFunction& b) {
    if (a.edges != b.edges || a.points != b.points) {
        throw std::invalid_argument("GridFunction::inner: shape mismatch");
    }
    const Vector w = trapezoid_weights(a.points);
    return (a.values.cwiseProduct(b.values) * w).sum();
}

Vector GridFunction::flatten() const {
    Vector v(static_cast<Eigen::Index>(edges) * points);
    for (int j = 0; j < edges; ++j) v.segment(static_cast<Eigen::Index>(j) * points, points) = values.row(j).transpose();
    return v;
}

GridFunction GridFunction::unflatten(const Vector& v, int edges, int points, int norm_p) {
    if (v.size() != static_cast<Eigen::Index>(edges) * points) {
        throw std::invalid_argument("GridFunction::unflatten: size mismatch");
    }
    GridFunction f(edges, points, norm_p);
    for (int j = 0; j < edges; ++j) f.values.row(j) = v.segment(static_cast<Eigen::Index>(j) * points, points).transpose();
    return f;
}

Vector grid_mass_weights(int edges, int points) {
    const Vector w = trapezoid_weights(points);
    Vector out(static_cast<Eigen::Index>(edges) * points);
    for (int j = 0; j < edges; ++j) out.segment(static_cast<Eigen::Index>(j) * points, points) = w;
    return out;
}

Vector ControlSignal::value(double t) const {
    if (samples.empty()) return Vector();
    if (dt <= 0.0) return samples.front();
    auto k = static_cast<std::size_t>(std::max(0.0, std::floor(t / dt + 1e-12)));
    if (k >= samples.size()) k = samples.size() - 1;
    return samples[k];
}

void ControlSignal::validate() const {
    if (!positive) return;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if ((samples[k].array() < 0.0).any()) {
            throw std::invalid_argument("ControlSignal: negative sample at index " +
                                        std::to_string(k) + " in positive mode");
        }
    }
}

}  // namespace posnet
