#include "cegarnn/abstraction.hpp"

#include "cegarnn/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cegarnn {

namespace {

/// Groups of `layer` as index lists; input and output layers are singletons.
std::vector<std::vector<std::size_t>> layer_groups(const Network &net, const Partition &p, std::size_t layer)
{
    if (net.is_hidden(layer))
        return p.groups(layer);
    std::vector<std::vector<std::size_t>> singletons(net.layer_size(layer));
    for (std::size_t j = 0; j < singletons.size(); ++j)
        singletons[j] = {j};
    return singletons;
}

double aggregate(Direction direction, double current, double value)
{
    return direction == Direction::Inc ? std::max(current, value) : std::min(current, value);
}

} // namespace

AbstractNetwork materialize(const Network &classified, const Partition &partition)
{
    partition.check_compatible(classified);
    const std::size_t n = classified.num_layers();

    NetworkData d;
    d.layer_sizes.resize(n);
    d.weights.resize(n);
    d.biases.resize(n);
    d.hidden_info.resize(n);

    auto sources = layer_groups(classified, partition, 0);
    d.layer_sizes[0] = sources.size();
    for (std::size_t layer = 1; layer < n; ++layer) {
        auto targets = layer_groups(classified, partition, layer);
        const bool hidden = classified.is_hidden(layer);
        const Matrix &w = classified.weights(layer);
        const auto &b = classified.bias(layer);

        Matrix out(targets.size(), sources.size());
        std::vector<double> bias(targets.size());
        std::vector<double> agg(w.cols());
        for (std::size_t g = 0; g < targets.size(); ++g) {
            const auto &members = targets[g];
            const Direction dir = hidden ? partition.group_label(layer, g).direction : Direction::Inc;
            // Aggregate over the target members per concrete source neuron.
            const std::size_t first = members.front();
            for (std::size_t u = 0; u < w.cols(); ++u)
                agg[u] = w(first, u);
            bias[g] = b[first];
            for (std::size_t m = 1; m < members.size(); ++m) {
                for (std::size_t u = 0; u < w.cols(); ++u)
                    agg[u] = aggregate(dir, agg[u], w(members[m], u));
                bias[g] = aggregate(dir, bias[g], b[members[m]]);
            }
            // Then add up the members of each source group.
            auto row = out.row(g);
            for (std::size_t h = 0; h < sources.size(); ++h) {
                const auto &src = sources[h];
                double sum = agg[src.front()];
                for (std::size_t i = 1; i < src.size(); ++i)
                    sum = sum + agg[src[i]];
                row[h] = sum;
            }
            if (hidden)
                d.hidden_info[layer].push_back(classified.info(layer, first));
        }
        d.layer_sizes[layer] = targets.size();
        d.weights[layer] = std::move(out);
        d.biases[layer] = std::move(bias);
        sources = std::move(targets);
    }
    return {Network(std::move(d)), partition};
}

double merge_score(const Network &abstract, std::size_t layer, std::size_t a, std::size_t b)
{
    const Matrix &w = abstract.weights(layer);
    double m = std::abs(abstract.bias(layer)[a] - abstract.bias(layer)[b]);
    for (std::size_t p = 0; p < w.cols(); ++p)
        m = std::max(m, std::abs(w(a, p) - w(b, p)));
    return m;
}

std::optional<MergeCandidate> best_merge(const AbstractNetwork &abstract, std::size_t sample_cap,
                                         std::mt19937_64 *rng)
{
    const Partition &p = abstract.partition;
    std::vector<MergeCandidate> pairs;
    for (std::size_t layer = 1; layer + 1 < p.num_layers(); ++layer) {
        const std::size_t count = p.groups(layer).size();
        for (std::size_t a = 0; a < count; ++a)
            for (std::size_t b = a + 1; b < count; ++b)
                if (p.group_label(layer, a) == p.group_label(layer, b))
                    pairs.push_back({layer, a, b, 0.0});
    }
    if (pairs.empty())
        return std::nullopt;

    if (sample_cap > 0 && pairs.size() > sample_cap) {
        if (rng == nullptr)
            throw InvariantError("pair sampling needs a random generator");
        std::vector<std::size_t> picked(pairs.size());
        for (std::size_t i = 0; i < picked.size(); ++i)
            picked[i] = i;
        // Partial Fisher-Yates, then restore (layer, a, b) order for tie-breaking.
        for (std::size_t i = 0; i < sample_cap; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, picked.size() - 1);
            std::swap(picked[i], picked[pick(*rng)]);
        }
        picked.resize(sample_cap);
        std::sort(picked.begin(), picked.end());
        std::vector<MergeCandidate> sampled;
        for (std::size_t i : picked)
            sampled.push_back(pairs[i]);
        pairs = std::move(sampled);
    }

    std::optional<MergeCandidate> best;
    for (auto &cand : pairs) {
        cand.score = merge_score(abstract.network, cand.layer, cand.a, cand.b);
        if (!best || cand.score < best->score)
            best = cand;
    }
    return best;
}

namespace {

bool any_indicator_violates(const Network &abstract, const Query &query,
                            std::span<const std::vector<double>> indicators)
{
    for (const auto &x : indicators)
        if (query.satisfies_output(evaluate(abstract, x).front()))
            return true;
    return false;
}

} // namespace

IndicatorResult indicator_guided_abstraction(const Network &classified, const Query &query,
                                             std::span<const std::vector<double>> indicators,
                                             const IndicatorOptions &options)
{
    Partition current = Partition::identity(classified);
    if (indicators.empty())
        return {saturate(current), 0, true};

    AbstractNetwork abstract = materialize(classified, current);
    IndicatorResult result{current, 0, false};
    if (any_indicator_violates(abstract.network, query, indicators))
        return result;

    std::mt19937_64 rng(options.seed);
    while (true) {
        const auto cand = best_merge(abstract, options.sample_cap, &rng);
        if (!cand)
            break;
        Partition next = merge(current, cand->layer, cand->a, cand->b);
        AbstractNetwork next_abstract = materialize(classified, next);
        if (any_indicator_violates(next_abstract.network, query, indicators))
            break;
        current = std::move(next);
        abstract = std::move(next_abstract);
        ++result.merges;
    }
    result.partition = std::move(current);
    return result;
}

std::vector<RefinementScore> refinement_scores(const Network &classified, const AbstractNetwork &abstract,
                                               std::span<const double> x)
{
    const Partition &p = abstract.partition;
    const Network &abs_net = abstract.network;
    const Assignment concrete_values = evaluate_all(classified, x);
    const Assignment abstract_values = evaluate_all(abs_net, x);

    std::vector<RefinementScore> scores;
    for (std::size_t layer = 1; layer + 1 < classified.num_layers(); ++layer) {
        const Matrix &w = classified.weights(layer);
        const Matrix &w_abs = abs_net.weights(layer);
        const bool pred_hidden = classified.is_hidden(layer - 1);
        for (std::size_t j = 0; j < classified.layer_size(layer); ++j) {
            const std::size_t g = p.group_of({layer, j});
            if (p.members(layer, g).size() < 2)
                continue;
            const double value_gap = std::abs(concrete_values[layer][j] - abstract_values[layer][g]);
            double best = std::abs(classified.bias(layer)[j] - abs_net.bias(layer)[g]) * value_gap;
            for (std::size_t k = 0; k < w.cols(); ++k) {
                const std::size_t k_abs = pred_hidden ? p.group_of({layer - 1, k}) : k;
                best = std::max(best, std::abs(w(j, k) - w_abs(g, k_abs)) * value_gap);
            }
            scores.push_back({{layer, j}, best});
        }
    }
    return scores;
}

NeuronId cex_guided_refinement(const Network &classified, const AbstractNetwork &abstract, std::span<const double> x)
{
    const auto scores = refinement_scores(classified, abstract, x);
    if (scores.empty())
        throw RefinementError("the abstraction is already the identity; nothing to refine");
    // Scores come in (layer, index) order, so a strict comparison keeps the lowest on ties.
    const RefinementScore *best = &scores.front();
    for (const auto &s : scores)
        if (s.score > best->score)
            best = &s;
    return best->neuron;
}

NeuronId random_refinement(const AbstractNetwork &abstract, std::mt19937_64 &rng)
{
    const Partition &p = abstract.partition;
    std::vector<NeuronId> eligible;
    for (std::size_t layer = 1; layer + 1 < p.num_layers(); ++layer)
        for (const auto &group : p.groups(layer))
            if (group.size() >= 2)
                for (std::size_t j : group)
                    eligible.push_back({layer, j});
    if (eligible.empty())
        throw RefinementError("the abstraction is already the identity; nothing to refine");
    std::sort(eligible.begin(), eligible.end());
    std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
    return eligible[pick(rng)];
}

} // namespace cegarnn
