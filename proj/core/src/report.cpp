#include "cegarnn/report.hpp"

#include "cegarnn/error.hpp"

#include <json.hpp>

namespace cegarnn {

using nlohmann::ordered_json;

std::string to_string(Status status)
{
    switch (status) {
    case Status::Unsat: return "UNSAT";
    case Status::Sat: return "SAT";
    case Status::Timeout: return "TIMEOUT";
    case Status::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

Status status_from_string(std::string_view name)
{
    if (name == "UNSAT")
        return Status::Unsat;
    if (name == "SAT")
        return Status::Sat;
    if (name == "TIMEOUT")
        return Status::Timeout;
    if (name == "INCONCLUSIVE")
        return Status::Inconclusive;
    throw Error("unknown status '" + std::string(name) + "'");
}

std::string emit_report(const VerdictReport &report, bool include_timing)
{
    ordered_json j;
    j["status"] = to_string(report.status);
    j["witness"] = report.witness ? ordered_json(*report.witness) : ordered_json(nullptr);
    const RunStats &s = report.stats;
    j["stats"] = {
        {"refinement_rounds", s.refinement_rounds},
        {"solver_calls", s.solver_calls},
        {"initial_abstract_size", s.initial_abstract_size},
        {"final_abstract_size", s.final_abstract_size},
        {"original_size", s.original_size},
        {"classified_size", s.classified_size},
        {"indicator_fallback", s.indicator_fallback},
    };
    if (include_timing) {
        j["stats"]["preprocess_ms"] = s.preprocess_ms;
        j["stats"]["solve_ms"] = s.solve_ms;
        j["stats"]["total_ms"] = s.total_ms;
    }
    if (!report.message.empty())
        j["message"] = report.message;
    return j.dump(2) + "\n";
}

VerdictReport parse_report(std::string_view text)
{
    try {
        const auto j = ordered_json::parse(text);
        VerdictReport r;
        r.status = status_from_string(j.at("status").get<std::string>());
        if (!j.at("witness").is_null())
            r.witness = j.at("witness").get<std::vector<double>>();
        const auto &s = j.at("stats");
        r.stats.refinement_rounds = s.at("refinement_rounds").get<std::size_t>();
        r.stats.solver_calls = s.at("solver_calls").get<std::size_t>();
        r.stats.initial_abstract_size = s.at("initial_abstract_size").get<std::size_t>();
        r.stats.final_abstract_size = s.at("final_abstract_size").get<std::size_t>();
        r.stats.original_size = s.value("original_size", std::size_t{0});
        r.stats.classified_size = s.value("classified_size", std::size_t{0});
        r.stats.indicator_fallback = s.value("indicator_fallback", false);
        r.stats.preprocess_ms = s.value("preprocess_ms", 0.0);
        r.stats.solve_ms = s.value("solve_ms", 0.0);
        r.stats.total_ms = s.value("total_ms", 0.0);
        r.message = j.value("message", std::string());
        if ((r.status == Status::Sat) != r.witness.has_value())
            throw Error("report witness must be present exactly when status is SAT");
        return r;
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("malformed report: ") + e.what());
    }
}

} // namespace cegarnn
