#pragma once

#include "cegarnn/network.hpp"
#include "cegarnn/property.hpp"

#include <cstddef>
#include <cstdint>

namespace cegarnn {

/// Shape of the generated "hard UNSAT" benchmark networks.
struct HardCorpusOptions {
    std::size_t inputs = 5;
    std::size_t hidden_layers = 3;
    std::size_t width = 8;
    /// Half-width of the uniform noise added to the shared base weights.
    double noise = 0.05;
    /// Threshold distance above the saturated abstraction's maximum, relative
    /// to max(1, |maximum|).
    double margin = 1e-3;
};

struct GeneratedQuery {
    Network network;
    RawProperty property;
};

/// Network whose neurons in each hidden layer are noisy copies of one base
/// neuron. Weights after the first layer and output weights are positive,
/// so classification keeps every layer intact and saturation shrinks each
/// hidden layer to a single neuron.
Network hard_network(const HardCorpusOptions &options, std::uint64_t seed);

/// Largest output of the saturated abstraction of `net` over `prop`'s box,
/// located by bisection on the verifier to within `tolerance`.
double saturated_maximum(const Network &net, const RawProperty &box, double tolerance = 1e-6);

/// hard_network over [0, 1]^inputs with y0 > c, where c lies just above the
/// saturated maximum: the query is UNSAT and already refuted by the first
/// abstraction, while the concrete network has width * hidden_layers ReLUs.
/// Networks whose query plain interval propagation refutes are skipped
/// (the next network seed is drawn from `seed`).
GeneratedQuery hard_unsat_query(const HardCorpusOptions &options, std::uint64_t seed);

} // namespace cegarnn
