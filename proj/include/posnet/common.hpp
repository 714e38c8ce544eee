#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace posnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Matrix with entrywise nonnegative entries, checked at construction.
/// Signed data (duals, certificates, coupling matrices with mixed signs)
/// uses the unconstrained Matrix alias instead.
class PositiveMatrix {
public:
    PositiveMatrix() = default;

    explicit PositiveMatrix(Matrix m) : data_(std::move(m)) {
        if ((data_.array() < 0.0).any()) {
            throw std::invalid_argument("PositiveMatrix: negative entry");
        }
    }

    static PositiveMatrix zero(Eigen::Index rows, Eigen::Index cols) {
        return PositiveMatrix(Matrix::Zero(rows, cols));
    }

    const Matrix& get() const { return data_; }
    Eigen::Index rows() const { return data_.rows(); }
    Eigen::Index cols() const { return data_.cols(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }

private:
    Matrix data_;
};

inline bool is_nonnegative(const Matrix& m, double tol = 0.0) {
    return (m.array() >= -tol).all();
}

/// Composite trapezoid weights for a uniform P-point grid on [0,1].
inline Vector trapezoid_weights(int points) {
    if (points < 2) throw std::invalid_argument("trapezoid_weights: need P >= 2");
    const double dx = 1.0 / (points - 1);
    Vector w = Vector::Constant(points, dx);
    w(0) = 0.5 * dx;
    w(points - 1) = 0.5 * dx;
    return w;
}

inline Vector uniform_grid(int points) {
    if (points < 2) throw std::invalid_argument("uniform_grid: need P >= 2");
    Vector x(points);
    for (int p = 0; p < points; ++p) x(p) = static_cast<double>(p) / (points - 1);
    return x;
}

}  // namespace posnet
