#pragma once

#include "cegarnn/network.hpp"
#include "cegarnn/query.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cegarnn {

/// sum(coeff * y[index]) + constant > 0 (strict) or >= 0 (non-strict).
struct OutputAtom {
    std::vector<std::pair<std::size_t, double>> terms;
    double constant = 0.0;
    bool strict = true;

    double evaluate(std::span<const double> outputs) const;
    bool operator==(const OutputAtom &) const = default;
};

/// A property as written by the user: a box and linear conjuncts over the
/// inputs, and a disjunction of linear atoms over the original outputs.
/// Satisfying inputs are counterexamples to the property being verified.
struct RawProperty {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<LinearConstraint> constraints;
    std::vector<OutputAtom> disjuncts;

    std::size_t num_inputs() const { return lower.size(); }
    bool operator==(const RawProperty &) const = default;
};

/// Parses the line-oriented property grammar:
///
///     # comment
///     x0 >= -1.5
///     x0 + 2 x1 <= 3
///     y1 - y0 > 0 || y1 - y2 > 0
///
/// Lines over x variables are input conjuncts (`<=` or `>=`); single-variable
/// lines become box bounds. The one line over y variables is the output
/// disjunction, its alternatives separated by `||`. When `num_inputs` is
/// given every x0..x{n-1} must be bounded on both sides; otherwise every
/// variable up to the largest mentioned index must be.
RawProperty parse_property(std::string_view text, std::optional<std::size_t> num_inputs = std::nullopt);
RawProperty load_property(const std::string &path, std::optional<std::size_t> num_inputs = std::nullopt);

/// Writes `prop` in the grammar accepted by parse_property, numbers in
/// shortest round-trip form.
std::string format_property(const RawProperty &prop);

/// A single-output network together with its y > c query.
struct EncodedQuery {
    Network network;
    Query query;
};

/// Reduces a disjunction of output atoms to the single-output form: the
/// affine output layer is composed with one ReLU neuron t_k = ReLU(l_k(y))
/// per atom and a new output z = sum_k t_k, queried as z > 0. Non-strict
/// atoms l_k(y) >= 0 are shifted to l_k(y) + eps_strict so that z >= eps_strict
/// matches l_k(y) >= 0 up to rounding.
EncodedQuery encode_output_property(const Network &net, const RawProperty &prop, double eps_strict = 1e-6);

/// The adversarial-robustness query "some x with |x - x0|_inf <= delta has
/// y[better] >= y[than]": the box around x0 is clipped to `declared_lower`
/// and `declared_upper` when provided.
EncodedQuery generate_robustness_query(const Network &net, std::span<const double> x0, double delta,
                                       std::size_t better, std::size_t than,
                                       std::span<const double> declared_lower = {},
                                       std::span<const double> declared_upper = {}, double eps_strict = 1e-6);

} // namespace cegarnn
