#include "cegarnn/generate.hpp"

#include "cegarnn/abstraction.hpp"
#include "cegarnn/bounds.hpp"
#include "cegarnn/classifier.hpp"
#include "cegarnn/error.hpp"
#include "cegarnn/partition.hpp"
#include "cegarnn/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cegarnn {

Network hard_network(const HardCorpusOptions &options, std::uint64_t seed)
{
    if (options.inputs == 0 || options.width == 0 || options.hidden_layers == 0)
        throw ShapeError("generated networks need at least one input, hidden layer and neuron");
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto noise = [&] { return uniform(-options.noise, options.noise); };

    NetworkData d;
    d.layer_sizes.push_back(options.inputs);
    for (std::size_t l = 0; l < options.hidden_layers; ++l)
        d.layer_sizes.push_back(options.width);
    d.layer_sizes.push_back(1);
    d.weights.resize(d.layer_sizes.size());
    d.biases.resize(d.layer_sizes.size());

    for (std::size_t layer = 1; layer < d.layer_sizes.size(); ++layer) {
        const std::size_t rows = d.layer_sizes[layer], cols = d.layer_sizes[layer - 1];
        std::vector<double> base(cols);
        double base_bias = 0.0;
        if (layer == 1) {
            for (double &w : base)
                w = uniform(-1.0, 1.0);
            base_bias = uniform(-0.2, 0.2);
        } else {
            for (double &w : base)
                w = uniform(0.5, 1.5) / static_cast<double>(cols);
            base_bias = uniform(-0.3, 0.0);
        }
        Matrix w(rows, cols);
        std::vector<double> b(rows);
        for (std::size_t j = 0; j < rows; ++j) {
            for (std::size_t k = 0; k < cols; ++k) {
                if (layer == 1) {
                    w(j, k) = base[k] + noise();
                    continue;
                }
                const double v = std::max(base[k] * (1.0 + noise()), 1e-3);
                // The first layer's second half enters the next layer negatively.
                w(j, k) = layer == 2 && 2 * k >= cols ? -v : v;
            }
            b[j] = base_bias + noise();
        }
        d.weights[layer] = std::move(w);
        d.biases[layer] = std::move(b);
    }
    return Network(std::move(d));
}

double saturated_maximum(const Network &net, const RawProperty &box, double tolerance)
{
    Query query;
    query.lower = box.lower;
    query.upper = box.upper;
    query.constraints = box.constraints;
    query.eps_strict = 0.0;

    const Network classified = classify(net);
    const Network abstract = materialize(classified, saturate(Partition::identity(classified))).network;
    double lo = evaluate(abstract, std::vector<double>(box.lower)).front();
    double hi = propagate_bounds(abstract, box.lower, box.upper).output().hi;
    while (hi - lo > tolerance) {
        query.threshold = 0.5 * (lo + hi);
        const Verdict v = verify(abstract, query);
        if (v.status == VerdictStatus::Sat)
            lo = evaluate(abstract, *v.witness).front();
        else if (v.status == VerdictStatus::Unsat)
            hi = query.threshold;
        else
            throw NumericError("could not bound the saturated abstraction: " + v.message);
    }
    return hi;
}

GeneratedQuery hard_unsat_query(const HardCorpusOptions &options, std::uint64_t seed)
{
    RawProperty prop;
    prop.lower.assign(options.inputs, 0.0);
    prop.upper.assign(options.inputs, 1.0);
    std::mt19937_64 seeds(seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Network net = hard_network(options, seeds());
        const double top = saturated_maximum(net, prop);
        const double threshold = top + options.margin * std::max(1.0, std::abs(top));
        if (propagate_bounds(net, prop.lower, prop.upper).output().hi <= threshold)
            continue;
        OutputAtom atom;
        atom.terms = {{0, 1.0}};
        atom.constant = -threshold;
        prop.disjuncts.push_back(atom);
        return {std::move(net), std::move(prop)};
    }
    throw InvariantError("no generated network escaped interval refutation; increase the width or depth");
}

} // namespace cegarnn
