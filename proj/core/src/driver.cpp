#include "cegarnn/driver.hpp"

#include "cegarnn/abstraction.hpp"
#include "cegarnn/classifier.hpp"
#include "cegarnn/error.hpp"
#include "cegarnn/partition.hpp"

#include <chrono>

namespace cegarnn {

std::string to_string(AbstractionMode mode)
{
    switch (mode) {
    case AbstractionMode::Saturation:
        return "saturation";
    case AbstractionMode::Indicator:
        return "indicator";
    case AbstractionMode::None:
        return "none";
    }
    return "unknown";
}

std::string to_string(RefinementMode mode)
{
    return mode == RefinementMode::Cegar ? "cegar" : "random";
}

std::vector<std::vector<double>> sample_indicators(const Query &query, std::size_t count, std::mt19937_64 &rng)
{
    std::vector<std::vector<double>> points;
    if (count == 0)
        return points;
    if (query.box_empty())
        throw InvalidQueryError("cannot sample indicator points from an empty input box");
    const std::size_t attempts = 100 * count;
    for (std::size_t attempt = 0; attempt < attempts && points.size() < count; ++attempt) {
        std::vector<double> x(query.num_inputs());
        for (std::size_t k = 0; k < x.size(); ++k)
            x[k] = std::uniform_real_distribution<double>(query.lower[k], query.upper[k])(rng);
        if (query.satisfies_input(x))
            points.push_back(std::move(x));
    }
    if (points.size() < count)
        throw InvalidQueryError("could not sample " + std::to_string(count) +
                                " indicator points satisfying the input constraints");
    return points;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

} // namespace

VerdictReport run_query(const Network &net, const Query &query, const DriverConfig &config, VerifierBackend *backend)
{
    const auto start = Clock::now();
    if (!net.query_ready())
        throw ShapeError("the driver needs a single-output network");
    query.validate(net.input_size());

    BranchAndBoundVerifier default_backend;
    if (backend == nullptr)
        backend = &default_backend;
    Budget budget;
    if (config.timeout_seconds)
        budget = Budget::seconds(*config.timeout_seconds);

    // Shift inputs with negative lower bounds to start at zero.
    std::vector<double> offset(net.input_size(), 0.0);
    for (std::size_t k = 0; k < offset.size(); ++k)
        if (query.lower[k] < 0.0)
            offset[k] = query.lower[k];
    Query shifted = query;
    for (std::size_t k = 0; k < offset.size(); ++k) {
        shifted.lower[k] -= offset[k];
        shifted.upper[k] -= offset[k];
    }
    for (auto &c : shifted.constraints)
        c.rhs -= c.evaluate(offset);
    const Network classified = classify(translate_inputs(net, offset));

    VerdictReport report;
    RunStats &stats = report.stats;
    stats.original_size = net.hidden_count();
    stats.classified_size = classified.hidden_count();

    std::mt19937_64 rng(config.seed);
    Partition partition = Partition::identity(classified);
    switch (config.abstraction) {
    case AbstractionMode::Saturation:
        partition = saturate(partition);
        break;
    case AbstractionMode::Indicator: {
        std::vector<std::vector<double>> indicators;
        if (!shifted.box_empty())
            indicators = sample_indicators(shifted, config.indicator_count, rng);
        const auto result = indicator_guided_abstraction(classified, shifted, indicators,
                                                         {config.pair_sample_cap, config.seed});
        partition = result.partition;
        stats.indicator_fallback = result.fell_back_to_saturation;
        break;
    }
    case AbstractionMode::None:
        break;
    }
    stats.initial_abstract_size = partition.group_count();
    stats.preprocess_ms = ms_since(start);

    auto finish = [&](Status status) {
        report.status = status;
        stats.final_abstract_size = partition.group_count();
        stats.total_ms = ms_since(start);
        return report;
    };

    while (true) {
        if (budget.expired()) {
            report.message = "time limit reached";
            return finish(Status::Timeout);
        }
        const AbstractNetwork abstract = materialize(classified, partition);
        const auto solve_start = Clock::now();
        ++stats.solver_calls;
        const Verdict verdict = backend->verify(abstract.network, shifted, budget);
        stats.solve_ms += ms_since(solve_start);

        switch (verdict.status) {
        case VerdictStatus::Unsat:
            return finish(Status::Unsat);
        case VerdictStatus::Timeout:
            report.message = verdict.message.empty() ? "time limit reached" : verdict.message;
            return finish(Status::Timeout);
        case VerdictStatus::Inconclusive:
            report.message = verdict.message;
            return finish(Status::Inconclusive);
        case VerdictStatus::Sat:
            break;
        }
        if (!verdict.witness)
            throw InvariantError("backend reported SAT without a witness");

        const std::vector<double> &shifted_x = *verdict.witness;
        std::vector<double> x(shifted_x.size());
        for (std::size_t k = 0; k < x.size(); ++k)
            x[k] = shifted_x[k] + offset[k];
        const double y = evaluate(net, x).front();
        if (query.satisfies_output(y)) {
            report.witness = x;
            return finish(Status::Sat);
        }
        if (partition.is_identity()) {
            if (y >= query.threshold + query.eps_strict - 1e-9) {
                report.witness = x;
                return finish(Status::Sat);
            }
            report.message = "backend witness does not re-check on the original network";
            return finish(Status::Inconclusive);
        }

        const NeuronId neuron = config.refinement == RefinementMode::Cegar
                                    ? cex_guided_refinement(classified, abstract, shifted_x)
                                    : random_refinement(abstract, rng);
        partition = refine_split(partition, neuron);
        ++stats.refinement_rounds;
    }
}

VerdictReport run(const Network &raw, const RawProperty &prop, const DriverConfig &config, VerifierBackend *backend)
{
    const auto start = Clock::now();
    EncodedQuery encoded = encode_output_property(raw, prop, config.eps_strict);
    encoded.query.eps_strict = config.eps_strict;
    const double encode_ms = ms_since(start);
    VerdictReport report = run_query(encoded.network, encoded.query, config, backend);
    report.stats.preprocess_ms += encode_ms;
    report.stats.total_ms += encode_ms;
    return report;
}

} // namespace cegarnn
