#pragma once

#include "cegarnn/lp.hpp"
#include "cegarnn/network.hpp"
#include "cegarnn/query.hpp"

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cegarnn {

/// Resource limits for one verification call.
struct Budget {
    using Clock = std::chrono::steady_clock;

    std::optional<Clock::time_point> deadline;
    /// Search-tree node limit; 0 means unlimited.
    std::size_t max_nodes = 0;

    static Budget unlimited() { return {}; }
    static Budget seconds(double s);

    bool expired() const { return deadline && Clock::now() >= *deadline; }
};

enum class VerdictStatus { Unsat, Sat, Timeout, Inconclusive };

struct SolverStats {
    std::size_t nodes = 0;
    std::size_t leaves = 0;
    std::size_t lp_calls = 0;
    std::size_t splits = 0;
    std::size_t pruned = 0;
};

struct Verdict {
    VerdictStatus status = VerdictStatus::Inconclusive;
    /// Present iff status == Sat.
    std::optional<std::vector<double>> witness;
    SolverStats stats;
    std::string message;
};

/// The verification procedure used by the CEGAR loop. Implementations must
/// be sound for UNSAT and return only witnesses that re-check under evaluate.
class VerifierBackend {
public:
    virtual ~VerifierBackend() = default;
    virtual Verdict verify(const Network &net, const Query &query, const Budget &budget) = 0;
};

struct SolverOptions {
    LpOptions lp;
    /// Amount by which extra linear conjuncts are tightened in leaf LPs.
    double conjunct_margin = 1e-7;
    /// Slack allowed when re-checking a witness against P.
    double witness_slack = 1e-9;
};

/// Complete verifier: depth-first branch and bound over ReLU phases.
///
/// Each node propagates interval bounds under its fixed phases and is pruned
/// when infeasible or when the output upper bound is below threshold +
/// eps_strict. Otherwise the undetermined ReLU with the widest pre-activation
/// interval is split (active branch first). Neurons with identical incoming
/// weights and bias share a phase and are split together. When every phase
/// is fixed the output is affine in the input and a leaf LP maximizes it over
/// P and the phase constraints; a maximizer reaching threshold + eps_strict
/// is re-evaluated on the network and returned as the witness.
class BranchAndBoundVerifier : public VerifierBackend {
public:
    explicit BranchAndBoundVerifier(SolverOptions options = {})
        : _options(options)
    {
    }

    Verdict verify(const Network &net, const Query &query, const Budget &budget) override;

private:
    SolverOptions _options;
};

/// Convenience wrapper around BranchAndBoundVerifier.
Verdict verify(const Network &net, const Query &query, const Budget &budget = {});

} // namespace cegarnn
