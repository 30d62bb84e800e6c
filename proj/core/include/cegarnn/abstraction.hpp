#pragma once

#include "cegarnn/network.hpp"
#include "cegarnn/partition.hpp"
#include "cegarnn/query.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace cegarnn {

/// A network over-approximating a classified network, materialized from a
/// partition. Abstract hidden neuron g of layer i stands for
/// `partition.members(i, g)`.
struct AbstractNetwork {
    Network network;
    Partition partition;
};

/// Builds the abstract network of `partition`. The weight from abstract
/// source group U to abstract target group V is
///
///     sum_{u in U} ( AGG_{v in V} w(u, v) )
///
/// with AGG = max for inc targets and min for dec targets; biases are
/// aggregated the same way (a bias is an edge from a constant-1 input).
/// This is the network obtained by merging the layers from the output side
/// inwards, and it only grows when groups are joined and only shrinks when a
/// neuron is split off. Sums run over members in increasing order, so the
/// result depends only on the partition.
///
/// The bound N(x) <= abstract(x) relies on every layer feeding an abstract
/// neuron being non-negative; for the first hidden layer that means the
/// inputs themselves must be non-negative over the query domain.
AbstractNetwork materialize(const Network &classified, const Partition &partition);

/// Score of merging groups a and b of `layer` in `abstract`: the largest
/// |a_p - b_p| over their incoming weights (bias included). Lower is better.
double merge_score(const Network &abstract, std::size_t layer, std::size_t a, std::size_t b);

struct MergeCandidate {
    std::size_t layer;
    std::size_t a;
    std::size_t b;
    double score;
};

/// Best same-label pair of the partition's current abstract network; ties
/// go to the lowest (layer, a, b). With `sample_cap` > 0 only that many
/// uniformly drawn pairs are scored. Empty when no pair can be merged.
std::optional<MergeCandidate> best_merge(const AbstractNetwork &abstract, std::size_t sample_cap = 0,
                                         std::mt19937_64 *rng = nullptr);

struct IndicatorOptions {
    /// Score at most this many candidate pairs per step (0 = all pairs).
    std::size_t sample_cap = 0;
    std::uint64_t seed = 0;
};

struct IndicatorResult {
    Partition partition;
    std::size_t merges = 0;
    /// No indicator points were given; the result is the saturation partition.
    bool fell_back_to_saturation = false;
};

/// Greedy abstraction monitored by indicator inputs: starting from the
/// identity partition, repeatedly merge the best-scoring pair and keep the
/// merge as long as no indicator becomes a counterexample of the abstract
/// network (output >= threshold + eps_strict). Stops at the first merge that
/// would violate the query, or when nothing is left to merge.
IndicatorResult indicator_guided_abstraction(const Network &classified, const Query &query,
                                             std::span<const std::vector<double>> indicators,
                                             const IndicatorOptions &options = {});

/// Per-neuron refinement scores for a spurious counterexample x: for hidden
/// neuron v in group V and each predecessor u (mapped to U),
/// |w(u, v) - w_abs(U, V)| * |v(x) - V(x)|, maximized over u and the bias.
/// Neurons alone in their group score nothing (they cannot be split off).
struct RefinementScore {
    NeuronId neuron;
    double score;
};
std::vector<RefinementScore> refinement_scores(const Network &classified, const AbstractNetwork &abstract,
                                               std::span<const double> x);

/// The neuron to split off for spurious counterexample x: highest refinement
/// score, lowest (layer, index) on ties. If every score is zero the first
/// splittable neuron is returned. Throws RefinementError when the partition
/// is already the identity.
NeuronId cex_guided_refinement(const Network &classified, const AbstractNetwork &abstract, std::span<const double> x);

/// A uniformly random neuron whose group has at least two members.
NeuronId random_refinement(const AbstractNetwork &abstract, std::mt19937_64 &rng);

} // namespace cegarnn
