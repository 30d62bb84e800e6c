#pragma once

#include "cegarnn/network.hpp"
#include "cegarnn/property.hpp"
#include "cegarnn/query.hpp"
#include "cegarnn/report.hpp"
#include "cegarnn/solver.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace cegarnn {

enum class AbstractionMode { Saturation, Indicator, None };
enum class RefinementMode { Cegar, Random };

std::string to_string(AbstractionMode mode);
std::string to_string(RefinementMode mode);

struct DriverConfig {
    AbstractionMode abstraction = AbstractionMode::Saturation;
    RefinementMode refinement = RefinementMode::Cegar;
    std::size_t indicator_count = 20;
    std::uint64_t seed = 0;
    /// Wall-clock limit for the whole run, in seconds.
    std::optional<double> timeout_seconds;
    double eps_strict = 1e-6;
    /// Candidate pairs scored per indicator-guided merge step (0 = all).
    std::size_t pair_sample_cap = 0;
};

/// Encodes the property, then runs run_query. `eps_strict` of the query
/// comes from the config.
VerdictReport run(const Network &raw, const RawProperty &prop, const DriverConfig &config,
                  VerifierBackend *backend = nullptr);

/// The abstraction-refinement loop on a single-output network and query:
///
///   classify, build the initial partition (saturation, indicator-guided or
///   identity), then repeatedly verify the materialized abstract network;
///   UNSAT is final, a SAT witness is checked on `net` itself and either
///   returned or used to split one neuron off its group.
///
/// Inputs whose lower bound is negative are translated to start at zero
/// before classification. Witnesses are reported in the original
/// coordinates. Uses a BranchAndBoundVerifier when `backend` is null.
VerdictReport run_query(const Network &net, const Query &query, const DriverConfig &config,
                        VerifierBackend *backend = nullptr);

/// `count` points drawn uniformly from the query box that satisfy every
/// linear conjunct. Rejected draws are retried up to 100 * count times in
/// total before InvalidQueryError is thrown.
std::vector<std::vector<double>> sample_indicators(const Query &query, std::size_t count, std::mt19937_64 &rng);

} // namespace cegarnn
