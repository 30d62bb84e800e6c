#pragma once

#include "cegarnn/network.hpp"

#include <compare>
#include <cstddef>
#include <vector>

namespace cegarnn {

/// A hidden neuron of a classified network, by layer and position.
struct NeuronId {
    std::size_t layer = 0;
    std::size_t index = 0;

    auto operator<=>(const NeuronId &) const = default;
};

/// Grouping of the hidden neurons of a classified network into abstract
/// neurons. Within a layer the groups are disjoint, cover every neuron and
/// only join neurons with identical labels.
///
/// The representation is canonical: each group lists its members in
/// increasing order and the groups of a layer are ordered by their smallest
/// member. Two partitions with the same grouping therefore compare equal no
/// matter which merges produced them, and group indices double as the
/// positions of the abstract neurons.
class Partition {
public:
    /// Every neuron in its own group. Requires `classified.classified()`.
    static Partition identity(const Network &classified);

    std::size_t num_layers() const { return _groups.size(); }
    const std::vector<std::vector<std::size_t>> &groups(std::size_t layer) const { return _groups.at(layer); }
    const std::vector<std::size_t> &members(std::size_t layer, std::size_t group) const
    {
        return _groups.at(layer).at(group);
    }
    std::size_t group_of(NeuronId neuron) const { return _owner.at(neuron.layer).at(neuron.index); }
    NeuronClass label(NeuronId neuron) const { return _labels.at(neuron.layer).at(neuron.index); }
    NeuronClass group_label(std::size_t layer, std::size_t group) const
    {
        return _labels.at(layer).at(_groups.at(layer).at(group).front());
    }

    /// Number of concrete neurons in hidden layer `layer`.
    std::size_t layer_size(std::size_t layer) const { return _owner.at(layer).size(); }

    /// Total number of groups (abstract hidden neurons).
    std::size_t group_count() const;
    /// Total number of concrete hidden neurons.
    std::size_t neuron_count() const;
    bool is_identity() const { return group_count() == neuron_count(); }

    /// Throws PartitionError unless the partition fits `classified`
    /// (same layer sizes and labels).
    void check_compatible(const Network &classified) const;

    bool operator==(const Partition &) const = default;

private:
    friend Partition merge(const Partition &, std::size_t, std::size_t, std::size_t);
    friend Partition refine_split(const Partition &, NeuronId);
    friend Partition saturate(const Partition &);

    void normalize(std::size_t layer);

    std::vector<std::vector<std::vector<std::size_t>>> _groups;
    std::vector<std::vector<std::size_t>> _owner;
    std::vector<std::vector<NeuronClass>> _labels;
};

/// Unions groups `a` and `b` of `layer`. Throws MergeError if they are the
/// same group, out of range, or carry different labels.
Partition merge(const Partition &p, std::size_t layer, std::size_t a, std::size_t b);

/// Moves `neuron` out of its group into a new singleton group. Throws
/// RefinementError if the neuron is already alone.
Partition refine_split(const Partition &p, NeuronId neuron);

/// Merges every same-label pair of each hidden layer until no merge is
/// possible: at most four groups per layer.
Partition saturate(const Partition &p);

} // namespace cegarnn
