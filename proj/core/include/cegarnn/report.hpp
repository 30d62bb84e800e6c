#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cegarnn {

enum class Status { Unsat, Sat, Timeout, Inconclusive };

std::string to_string(Status status);
/// Throws Error for an unknown name.
Status status_from_string(std::string_view name);

struct RunStats {
    std::size_t refinement_rounds = 0;
    std::size_t solver_calls = 0;
    /// Hidden-neuron counts of the first and last abstract network verified.
    std::size_t initial_abstract_size = 0;
    std::size_t final_abstract_size = 0;
    /// Hidden neurons of the (property-encoded) input network and of its classified form.
    std::size_t original_size = 0;
    std::size_t classified_size = 0;
    /// Indicator-guided abstraction had no indicator points and fell back to saturation.
    bool indicator_fallback = false;
    double preprocess_ms = 0.0;
    double solve_ms = 0.0;
    double total_ms = 0.0;

    bool operator==(const RunStats &) const = default;
};

struct VerdictReport {
    Status status = Status::Inconclusive;
    /// Present iff status == Sat.
    std::optional<std::vector<double>> witness;
    RunStats stats;
    /// Free-form detail for inconclusive runs; empty otherwise.
    std::string message;

    bool operator==(const VerdictReport &) const = default;
};

/// JSON object {status, witness, stats{...}}; witness is null unless SAT.
/// Without `include_timing` the *_ms entries are left out, which makes the
/// output a pure function of the inputs and the seed.
std::string emit_report(const VerdictReport &report, bool include_timing = true);
/// Inverse of emit_report; missing timing entries read as 0. Throws Error on malformed JSON or schema mismatch.
VerdictReport parse_report(std::string_view json);

} // namespace cegarnn
