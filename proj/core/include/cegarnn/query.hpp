#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cegarnn {

/// sum_k coeffs[k] * x[k] <= rhs over the network inputs.
struct LinearConstraint {
    std::vector<double> coeffs;
    double rhs = 0.0;

    double evaluate(std::span<const double> x) const;
    bool operator==(const LinearConstraint &) const = default;
};

/// A verification query <N, P, Q> for a query-ready network. P is the box
/// [lower, upper] plus the linear conjuncts in `constraints`; Q is y > threshold.
///
/// Strict inequality is realized numerically: an output counts as satisfying
/// Q when y >= threshold + eps_strict.
struct Query {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<LinearConstraint> constraints;
    double threshold = 0.0;
    double eps_strict = 1e-6;

    std::size_t num_inputs() const { return lower.size(); }

    /// Some lower bound exceeds its upper bound; P is unsatisfiable.
    bool box_empty() const;

    /// x lies in the box and satisfies every linear conjunct, each within `slack`.
    bool satisfies_input(std::span<const double> x, double slack = 0.0) const;

    bool satisfies_output(double y) const { return y >= threshold + eps_strict; }

    /// Throws ShapeError/InvalidQueryError when sizes disagree or bounds are not finite.
    void validate(std::size_t input_size) const;

    bool operator==(const Query &) const = default;
};

} // namespace cegarnn
