#include "cegarnn/partition.hpp"

#include "cegarnn/error.hpp"

#include <algorithm>

namespace cegarnn {

Partition Partition::identity(const Network &classified)
{
    if (!classified.classified())
        throw PartitionError("partitions are defined over classified networks only");
    Partition p;
    const std::size_t n = classified.num_layers();
    p._groups.resize(n);
    p._owner.resize(n);
    p._labels.resize(n);
    for (std::size_t layer = 1; layer + 1 < n; ++layer) {
        const std::size_t size = classified.layer_size(layer);
        for (std::size_t j = 0; j < size; ++j) {
            p._groups[layer].push_back({j});
            p._owner[layer].push_back(j);
            p._labels[layer].push_back(classified.info(layer, j).label());
        }
    }
    return p;
}

std::size_t Partition::group_count() const
{
    std::size_t total = 0;
    for (const auto &layer : _groups)
        total += layer.size();
    return total;
}

std::size_t Partition::neuron_count() const
{
    std::size_t total = 0;
    for (const auto &layer : _owner)
        total += layer.size();
    return total;
}

void Partition::check_compatible(const Network &classified) const
{
    if (classified.num_layers() != num_layers())
        throw PartitionError("partition and network have different layer counts");
    for (std::size_t layer = 1; layer + 1 < num_layers(); ++layer) {
        if (classified.layer_size(layer) != _owner[layer].size())
            throw PartitionError("partition does not cover layer " + std::to_string(layer));
        for (std::size_t j = 0; j < _owner[layer].size(); ++j) {
            const NeuronInfo &info = classified.info(layer, j);
            if (!info.classified() || info.label() != _labels[layer][j])
                throw PartitionError("label mismatch at neuron " + std::to_string(j) + " of layer " +
                                     std::to_string(layer));
        }
    }
}

void Partition::normalize(std::size_t layer)
{
    auto &groups = _groups[layer];
    for (auto &g : groups)
        std::sort(g.begin(), g.end());
    std::erase_if(groups, [](const auto &g) { return g.empty(); });
    std::sort(groups.begin(), groups.end(), [](const auto &a, const auto &b) { return a.front() < b.front(); });
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (std::size_t member : groups[g])
            _owner[layer][member] = g;
}

Partition merge(const Partition &p, std::size_t layer, std::size_t a, std::size_t b)
{
    if (layer >= p.num_layers() || p._groups[layer].empty())
        throw MergeError("layer " + std::to_string(layer) + " is not a hidden layer");
    const auto &groups = p._groups[layer];
    if (a >= groups.size() || b >= groups.size())
        throw MergeError("group index out of range");
    if (a == b)
        throw MergeError("cannot merge a group with itself");
    if (p.group_label(layer, a) != p.group_label(layer, b))
        throw MergeError("cannot merge " + to_string(p.group_label(layer, a)) + " and " +
                         to_string(p.group_label(layer, b)) + " neurons");
    Partition out = p;
    auto &g = out._groups[layer];
    g[a].insert(g[a].end(), g[b].begin(), g[b].end());
    g[b].clear();
    out.normalize(layer);
    return out;
}

Partition refine_split(const Partition &p, NeuronId neuron)
{
    if (neuron.layer >= p.num_layers() || neuron.index >= p._owner[neuron.layer].size())
        throw RefinementError("neuron out of range");
    const std::size_t group = p.group_of(neuron);
    if (p._groups[neuron.layer][group].size() < 2)
        throw RefinementError("neuron " + std::to_string(neuron.index) + " of layer " + std::to_string(neuron.layer) +
                              " is already in its own group");
    Partition out = p;
    auto &groups = out._groups[neuron.layer];
    std::erase(groups[group], neuron.index);
    groups.push_back({neuron.index});
    out.normalize(neuron.layer);
    return out;
}

Partition saturate(const Partition &p)
{
    Partition out = p;
    for (std::size_t layer = 0; layer < out.num_layers(); ++layer) {
        auto &groups = out._groups[layer];
        if (groups.empty())
            continue;
        std::vector<std::vector<std::size_t>> by_label;
        std::vector<NeuronClass> seen;
        for (const auto &g : groups) {
            const NeuronClass cls = out._labels[layer][g.front()];
            auto it = std::find(seen.begin(), seen.end(), cls);
            if (it == seen.end()) {
                seen.push_back(cls);
                by_label.push_back(g);
            } else {
                auto &target = by_label[static_cast<std::size_t>(it - seen.begin())];
                target.insert(target.end(), g.begin(), g.end());
            }
        }
        groups = std::move(by_label);
        out.normalize(layer);
    }
    return out;
}

} // namespace cegarnn
