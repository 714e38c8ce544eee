#include "posnet/cone.hpp"

#include "posnet/parallel.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

namespace posnet {

namespace detail {

namespace {

constexpr double kRcEps = 1e-11;     // reduced-cost zero threshold
constexpr double kPivEps = 1e-9;     // ratio-test pivot threshold
constexpr int kRefactorEvery = 64;

// Column j of the standard-form problem  min 1'(alpha+beta)
// s.t. G lambda + alpha - beta = t, all vars >= 0.
// Order: lambda columns, then alpha (+e_i), then beta (-e_i).
struct Columns {
    const Matrix& gens;
    int m;  // lambda count
    int d;  // rows

    Vector column(int j) const {
        if (j < m) return gens.col(j);
        Vector c = Vector::Zero(d);
        if (j < m + d) {
            c(j - m) = 1.0;
        } else {
            c(j - m - d) = -1.0;
        }
        return c;
    }
};

}  // namespace

L1Fit l1_cone_fit(const Matrix& gens, const Vector& target) {
    const int d = static_cast<int>(target.size());
    const int m = static_cast<int>(gens.cols());
    Columns cols{gens, m, d};

    // Deterministic right-hand-side perturbation against stalling on the
    // (heavily degenerate) zero rows of function-space targets. The
    // perturbation only steers the pivot path: lambda stays feasible and the
    // reported residual is recomputed on the unperturbed target.
    const double scale = std::max(1.0, target.lpNorm<Eigen::Infinity>());
    Vector rhs = target;
    for (int i = 0; i < d; ++i) rhs(i) += 1e-11 * scale * (1.0 + i) / d;

    // Start basis: alpha_i where rhs_i >= 0, else beta_i. B^{-1} = diag(sign).
    std::vector<int> basis(static_cast<std::size_t>(d));
    Matrix binv = Matrix::Zero(d, d);
    Vector xb(d);
    for (int i = 0; i < d; ++i) {
        if (rhs(i) >= 0.0) {
            basis[static_cast<std::size_t>(i)] = m + i;
            binv(i, i) = 1.0;
            xb(i) = rhs(i);
        } else {
            basis[static_cast<std::size_t>(i)] = m + d + i;
            binv(i, i) = -1.0;
            xb(i) = -rhs(i);
        }
    }

    const int iter_cap = 20000 + 50 * (m + 2 * d);
    int iter = 0;
    int degenerate_run = 0;
    bool bland = false;  // Dantzig pricing until a stall, then Bland's rule
    Vector y(d);

    auto refactor = [&]() {
        Matrix b(d, d);
        for (int i = 0; i < d; ++i) b.col(i) = cols.column(basis[static_cast<std::size_t>(i)]);
        binv = b.partialPivLu().inverse();
        if (!binv.allFinite()) throw LpIterationLimit("cone LP: basis became singular");
        Vector t2 = binv * rhs;
        xb = t2.cwiseMax(0.0);  // clip drift
    };

    for (;; ++iter) {
        if (iter >= iter_cap) throw LpIterationLimit("cone LP iteration cap exceeded");
        if (iter > 0 && iter % kRefactorEvery == 0) refactor();

        // Duals y = c_B' B^{-1}: only alpha/beta basic columns carry cost 1.
        y.setZero();
        for (int i = 0; i < d; ++i) {
            if (basis[static_cast<std::size_t>(i)] >= m) y += binv.row(i).transpose();
        }
        if (!y.allFinite() || !xb.allFinite()) {
            refactor();
            y.setZero();
            for (int i = 0; i < d; ++i) {
                if (basis[static_cast<std::size_t>(i)] >= m) y += binv.row(i).transpose();
            }
            if (!y.allFinite() || !xb.allFinite()) {
                throw LpIterationLimit("cone LP: numerical breakdown");
            }
        }

        int enter = -1;
        if (bland) {
            // smallest column index with negative reduced cost
            for (int k = 0; k < m && enter < 0; ++k) {
                if (-(y.dot(gens.col(k))) < -kRcEps) enter = k;
            }
            for (int i = 0; i < d && enter < 0; ++i) {
                if (1.0 - y(i) < -kRcEps) enter = m + i;
            }
            for (int i = 0; i < d && enter < 0; ++i) {
                if (1.0 + y(i) < -kRcEps) enter = m + d + i;
            }
        } else {
            double best = -kRcEps;
            const Vector rc_lambda = -(gens.transpose() * y);
            for (int k = 0; k < m; ++k) {
                if (rc_lambda(k) < best) {
                    best = rc_lambda(k);
                    enter = k;
                }
            }
            for (int i = 0; i < d; ++i) {
                if (1.0 - y(i) < best) {
                    best = 1.0 - y(i);
                    enter = m + i;
                }
                if (1.0 + y(i) < best) {
                    best = 1.0 + y(i);
                    enter = m + d + i;
                }
            }
        }
        if (enter < 0) break;  // optimal

        Vector w = binv * cols.column(enter);

        // Ratio test; ties resolved toward the smallest basic variable index.
        int leave_row = -1;
        double theta = std::numeric_limits<double>::infinity();
        for (int i = 0; i < d; ++i) {
            if (w(i) > kPivEps) {
                const double ratio = xb(i) / w(i);
                if (leave_row < 0 || ratio < theta * (1.0 - 1e-12) - 1e-300) {
                    theta = ratio;
                    leave_row = i;
                } else if (ratio <= theta * (1.0 + 1e-12) &&
                           basis[static_cast<std::size_t>(i)] <
                               basis[static_cast<std::size_t>(leave_row)]) {
                    theta = std::min(theta, ratio);
                    leave_row = i;
                }
            }
        }
        if (leave_row < 0) {
            // Objective bounded below by zero; an unbounded ray means numeric
            // breakdown of the basis.
            throw LpIterationLimit("cone LP: degenerate ray (numerical failure)");
        }
        if (theta <= 1e-13 * scale) {
            if (++degenerate_run >= 50) bland = true;  // anti-cycling backstop
        } else {
            degenerate_run = 0;
        }

        xb -= theta * w;
        xb = xb.cwiseMax(0.0);
        xb(leave_row) = theta;
        basis[static_cast<std::size_t>(leave_row)] = enter;
        const double piv = w(leave_row);
        binv.row(leave_row) /= piv;
        for (int i = 0; i < d; ++i) {
            if (i != leave_row && w(i) != 0.0) binv.row(i) -= w(i) * binv.row(leave_row);
        }
    }

    L1Fit fit;
    fit.iterations = iter;
    fit.lambda = Vector::Zero(m);
    std::vector<int> support;
    for (int i = 0; i < d; ++i) {
        const int j = basis[static_cast<std::size_t>(i)];
        if (j < m) {
            fit.lambda(j) = std::max(0.0, xb(i));
            support.push_back(j);
        }
    }
    fit.phi = y.cwiseMax(-1.0).cwiseMin(1.0);
    fit.value = (target - gens * fit.lambda).lpNorm<1>();

    // Refit on the discovered support against the unperturbed target; this
    // removes the steering perturbation from exact memberships.
    if (!support.empty()) {
        Matrix gs(d, static_cast<int>(support.size()));
        for (std::size_t c = 0; c < support.size(); ++c) gs.col(static_cast<int>(c)) = gens.col(support[c]);
        Vector ls = gs.colPivHouseholderQr().solve(target);
        if (ls.allFinite() && ls.minCoeff() >= 0.0) {
            Vector cand = Vector::Zero(m);
            for (std::size_t c = 0; c < support.size(); ++c) cand(support[c]) = ls(static_cast<int>(c));
            const double value = (target - gens * cand).lpNorm<1>();
            if (value <= fit.value) {
                fit.lambda = cand;
                fit.value = value;
            }
        }
    }
    return fit;
}

}  // namespace detail

namespace {

Vector effective_weights(int dimension, const Vector& weights) {
    if (weights.size() == 0) return Vector::Ones(dimension);
    if (weights.size() != dimension) throw std::invalid_argument("cone: weight size mismatch");
    return weights;
}

// Assemble the weighted generator matrix; columns normalized to unit sup
// norm for conditioning (lambda is rescaled back afterwards).
Matrix weighted_matrix(const std::vector<Vector>& generators, const Vector& w,
                       std::vector<double>& scales) {
    const int d = static_cast<int>(w.size());
    const int m = static_cast<int>(generators.size());
    Matrix g(d, m);
    scales.assign(static_cast<std::size_t>(m), 1.0);
    for (int k = 0; k < m; ++k) {
        if (generators[static_cast<std::size_t>(k)].size() != d) {
            throw std::invalid_argument("cone: generator dimension mismatch");
        }
        Vector col = w.cwiseProduct(generators[static_cast<std::size_t>(k)]);
        double s = col.lpNorm<Eigen::Infinity>();
        if (s > 0.0) {
            col /= s;
            scales[static_cast<std::size_t>(k)] = s;
        }
        g.col(k) = col;
    }
    return g;
}

}  // namespace

ConeReport cone_member(const std::vector<Vector>& generators, const Vector& target, double tol,
                       const Vector& weights) {
    if (tol <= 0.0) throw std::invalid_argument("cone_member: tol must be positive");
    const int d = static_cast<int>(target.size());
    Vector w = effective_weights(d, weights);
    std::vector<double> scales;
    Matrix g = weighted_matrix(generators, w, scales);
    detail::L1Fit fit = detail::l1_cone_fit(g, w.cwiseProduct(target));

    ConeReport rep;
    rep.tol = tol;
    rep.residual = fit.value;
    rep.verdict = fit.value <= tol;
    if (rep.verdict) {
        Vector lam = fit.lambda;
        for (int k = 0; k < lam.size(); ++k) lam(k) /= scales[static_cast<std::size_t>(k)];
        rep.lambda = lam;
    } else {
        rep.phi = fit.phi;
    }
    return rep;
}

namespace {

// Shared driver for the multi-target questions: every target must be a
// member. Targets are solved independently (parallel), the verdict folds in
// index order so reports are deterministic.
ConeReport all_members(const std::vector<Vector>& generators, const std::vector<Vector>& targets,
                       double tol, const Vector& weights) {
    const int n = static_cast<int>(targets.size());
    std::vector<ConeReport> reports(static_cast<std::size_t>(n));
    std::mutex err_mutex;
    std::exception_ptr err;
    parallel_for(n, [&](std::int64_t i) {
        try {
            reports[static_cast<std::size_t>(i)] =
                cone_member(generators, targets[static_cast<std::size_t>(i)], tol, weights);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            err = std::current_exception();
        }
    });
    if (err) std::rethrow_exception(err);

    ConeReport out;
    out.tol = tol;
    out.verdict = true;
    for (int i = 0; i < n; ++i) {
        const ConeReport& r = reports[static_cast<std::size_t>(i)];
        out.residual = std::max(out.residual, r.residual);
        if (!r.verdict && out.verdict) {
            out.verdict = false;
            out.failed_target = i;
            out.phi = r.phi;
        }
        if (r.lambda) out.memberships.push_back(*r.lambda);
    }
    return out;
}

}  // namespace

ConeReport polar_is_trivial(const std::vector<Vector>& generators, int dimension, double tol,
                            const Vector& weights) {
    std::vector<Vector> targets;
    targets.reserve(static_cast<std::size_t>(2 * dimension));
    for (int i = 0; i < dimension; ++i) targets.push_back(Vector::Unit(dimension, i));
    for (int i = 0; i < dimension; ++i) targets.push_back(-Vector::Unit(dimension, i));
    ConeReport rep = all_members(generators, targets, tol, weights);
    if (!rep.verdict) rep.note = "nonzero functional in the polar cone";
    return rep;
}

ConeReport cone_equals_positive_orthant(const std::vector<Vector>& generators, int dimension,
                                        double tol, const Vector& weights) {
    // (a) hull inside the orthant
    for (std::size_t k = 0; k < generators.size(); ++k) {
        const Vector& g = generators[k];
        for (int i = 0; i < g.size(); ++i) {
            if (g(i) < -tol) {
                ConeReport rep;
                rep.tol = tol;
                rep.verdict = false;
                rep.residual = -g(i);
                rep.note = "generator " + std::to_string(k) + " leaves the positive orthant at coordinate " +
                           std::to_string(i);
                return rep;
            }
        }
    }
    // (b) orthant inside the hull
    std::vector<Vector> targets;
    targets.reserve(static_cast<std::size_t>(dimension));
    for (int i = 0; i < dimension; ++i) targets.push_back(Vector::Unit(dimension, i));
    ConeReport rep = all_members(generators, targets, tol, weights);
    if (!rep.verdict) {
        rep.note = "basis direction " + std::to_string(rep.failed_target) + " is not reachable";
    }
    return rep;
}

ConeReport solve(const ConeProblem& problem) {
    switch (problem.question) {
        case ConeQuestion::member:
            return cone_member(problem.generators, problem.target, problem.tol, problem.weights);
        case ConeQuestion::full_space:
            return polar_is_trivial(problem.generators, problem.dimension, problem.tol,
                                    problem.weights);
        case ConeQuestion::equals_positive_orthant:
            return cone_equals_positive_orthant(problem.generators, problem.dimension, problem.tol,
                                                problem.weights);
    }
    throw std::logic_error("unreachable");
}

}  // namespace posnet
