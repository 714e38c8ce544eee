#pragma once

#include "posnet/common.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace posnet {

/// Raised when the simplex iteration cap is exceeded (numerical failure).
struct LpIterationLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ConeQuestion { member, full_space, equals_positive_orthant };

/// A finite generator set together with a cone question. `weights` carries
/// quadrature mass when the vectors discretize functions; pairings are then
/// sum_i w_i a_i b_i. Empty weights means plain Euclidean pairing.
struct ConeProblem {
    int dimension = 0;
    std::vector<Vector> generators;
    ConeQuestion question = ConeQuestion::member;
    Vector target;   // only for member
    Vector weights;  // optional, size == dimension
    double tol = 1e-9;
};

struct ConeReport {
    bool verdict = false;
    double residual = 0.0;  // weighted-L1 membership residual, or best separation value
    double tol = 0.0;
    std::optional<Vector> phi;        // separating functional when verdict is false
    std::optional<Vector> lambda;     // nonnegative coefficients for single-target membership
    std::vector<Vector> memberships;  // per-target coefficients for multi-target questions
    int failed_target = -1;
    std::string note;
};

/// target in the closed conic hull of the generators, within tol.
///
/// Solved as min_{lambda>=0} ||t - sum_k lambda_k g_k||_{1,w} by a dense
/// primal simplex with Bland's rule; the simplex multipliers at optimality
/// are exactly the maximizer of <t,phi> over { <g_k,phi> <= 0, ||phi||_inf <= 1 },
/// so one solve yields both the coefficients and the Farkas certificate.
ConeReport cone_member(const std::vector<Vector>& generators, const Vector& target, double tol,
                       const Vector& weights = Vector());

/// Polar cone of the generators is {0}; equivalently the conic hull is dense
/// in the whole space. Implemented as cone_member for +e_i and -e_i for
/// every coordinate.
ConeReport polar_is_trivial(const std::vector<Vector>& generators, int dimension, double tol,
                            const Vector& weights = Vector());

/// Closed conic hull equals the positive orthant: (a) every generator is
/// entrywise >= -tol and (b) every standard basis vector is a member.
ConeReport cone_equals_positive_orthant(const std::vector<Vector>& generators, int dimension,
                                        double tol, const Vector& weights = Vector());

ConeReport solve(const ConeProblem& problem);

namespace detail {

struct L1Fit {
    double value = 0.0;  // min ||t - G lambda||_{1}
    Vector lambda;       // size m
    Vector phi;          // size d, the optimal dual: max <t,phi>, G^T phi <= 0, |phi|<=1
    int iterations = 0;
};

/// Core LP on already weighted data.
L1Fit l1_cone_fit(const Matrix& gens, const Vector& target);

}  // namespace detail

}  // namespace posnet
