#pragma once

#include "cegarnn/network.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace cegarnn {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
};

enum class Phase : unsigned char { Free, Active, Inactive };

/// Phase decisions per layer and neuron (entries only matter for hidden layers).
using PhaseMap = std::vector<std::vector<Phase>>;

PhaseMap free_phases(const Network &net);

/// Pre- and post-activation intervals of every neuron. Layer 0 holds the
/// input box in both. `feasible` is false when a fixed phase contradicts the
/// intervals (an active neuron that is always negative or vice versa).
struct Bounds {
    std::vector<std::vector<Interval>> pre;
    std::vector<std::vector<Interval>> post;
    bool feasible = true;

    const Interval &output() const { return post.back().front(); }
};

/// Interval arithmetic layer by layer: pre = W [l, u] + B with the weights
/// split by sign, post = [max(0, lo), max(0, hi)] on hidden layers. Fixed
/// phases clip the pre-activation interval to their half-line (active:
/// pre >= 0, inactive: post = 0). Sound for every x in the box that respects
/// the fixed phases.
Bounds propagate_bounds(const Network &net, std::span<const double> lower, std::span<const double> upper,
                        const PhaseMap *phases = nullptr);

} // namespace cegarnn
