#include <cegarnn/abstraction.hpp>
#include <cegarnn/classifier.hpp>
#include <cegarnn/driver.hpp>
#include <cegarnn/error.hpp>
#include <cegarnn/generate.hpp>
#include <cegarnn/nnet.hpp>
#include <cegarnn/partition.hpp>
#include <cegarnn/property.hpp>
#include <cegarnn/report.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace cegarnn;

namespace {

constexpr int exit_unsat = 0;
constexpr int exit_sat = 1;
constexpr int exit_inconclusive = 2;
constexpr int exit_usage = 3;

/// A failure tied to an input; printed as "<path>: <message>".
struct InputError {
    std::string path;
    std::string message;
};

int exit_code(Status status)
{
    switch (status) {
    case Status::Unsat:
        return exit_unsat;
    case Status::Sat:
        return exit_sat;
    case Status::Timeout:
    case Status::Inconclusive:
        break;
    }
    return exit_inconclusive;
}

struct RunOptions {
    std::string abstraction = "saturation";
    bool no_abstraction = false;
    std::size_t indicators = 20;
    std::string refine = "cegar";
    std::optional<double> timeout;
    std::uint64_t seed = 0;
    double eps_strict = 1e-6;
    bool apply_normalization = false;
    std::string out;
    std::string dump_classified;
    bool omit_timing = false;

    DriverConfig config() const
    {
        DriverConfig cfg;
        cfg.abstraction = no_abstraction                ? AbstractionMode::None
                          : abstraction == "indicator" ? AbstractionMode::Indicator
                                                        : AbstractionMode::Saturation;
        cfg.refinement = refine == "random" ? RefinementMode::Random : RefinementMode::Cegar;
        cfg.indicator_count = indicators;
        cfg.seed = seed;
        cfg.timeout_seconds = timeout;
        cfg.eps_strict = eps_strict;
        return cfg;
    }
};

void add_run_options(CLI::App *cmd, RunOptions &o)
{
    cmd->add_option("--abstraction", o.abstraction, "Initial abstraction")
        ->check(CLI::IsMember({"saturation", "indicator"}))
        ->capture_default_str();
    cmd->add_flag("--no-abstraction", o.no_abstraction, "Verify the classified network directly");
    cmd->add_option("--indicators", o.indicators, "Indicator points for --abstraction indicator")
        ->capture_default_str();
    cmd->add_option("--refine", o.refine, "Refinement strategy")
        ->check(CLI::IsMember({"cegar", "random"}))
        ->capture_default_str();
    cmd->add_option("--timeout", o.timeout, "Wall-clock limit in seconds")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "Seed for indicator sampling and random refinement")->capture_default_str();
    cmd->add_option("--eps-strict", o.eps_strict,
                    "A strict y > c holds when y >= c + eps; non-strict atoms are shifted by eps")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_flag("--apply-normalization", o.apply_normalization,
                  "Fold the NNet normalization constants into the network (property in raw units)");
    cmd->add_option("--out", o.out, "Write the JSON report here instead of stdout");
    cmd->add_option("--dump-classified", o.dump_classified, "Write the classified network as NNet");
    cmd->add_flag("--omit-timing", o.omit_timing, "Leave the timing entries out of the JSON report");
}

NNetModel load_model(const std::string &path)
{
    try {
        return load_nnet(path);
    } catch (const ParseError &e) {
        throw InputError{path + ":" + std::to_string(e.line()), e.detail()};
    } catch (const Error &e) {
        throw InputError{{}, e.what()};
    }
}

Network load_network(const std::string &path, bool normalize)
{
    const NNetModel model = load_model(path);
    return normalize ? apply_normalization(model) : model.network;
}

RawProperty load_prop(const std::string &path, std::size_t inputs)
{
    try {
        return load_property(path, inputs);
    } catch (const PropertyError &e) {
        throw InputError{e.line() > 0 ? path + ":" + std::to_string(e.line()) : path, e.detail()};
    } catch (const Error &e) {
        throw InputError{{}, e.what()};
    }
}

void write_text(const std::string &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out)
        throw InputError{path, "cannot write file"};
}

void print_summary(const VerdictReport &r)
{
    const RunStats &s = r.stats;
    std::cerr << to_string(r.status) << ": abstract size " << s.initial_abstract_size << " -> " << s.final_abstract_size
              << " of " << s.classified_size << " classified (" << s.original_size << " original) neurons, "
              << s.refinement_rounds << " refinement round" << (s.refinement_rounds == 1 ? "" : "s") << ", "
              << std::fixed << std::setprecision(1) << s.total_ms << " ms\n";
    std::cerr.unsetf(std::ios::floatfield);
    if (r.witness) {
        std::cerr << "counterexample:";
        for (double v : *r.witness)
            std::cerr << ' ' << std::setprecision(17) << v;
        std::cerr << '\n';
    }
    if (!r.message.empty())
        std::cerr << r.message << '\n';
}

int finish_run(const EncodedQuery &encoded, const RunOptions &o)
{
    if (!o.dump_classified.empty()) {
        const Network classified = classify(encoded.network);
        write_text(o.dump_classified, serialize_nnet(classified, identity_normalization(classified)));
    }
    const VerdictReport report = run_query(encoded.network, encoded.query, o.config());
    const std::string json = emit_report(report, !o.omit_timing);
    if (o.out.empty())
        std::cout << json;
    else
        write_text(o.out, json);
    print_summary(report);
    return exit_code(report.status);
}

int cmd_verify(const std::string &net_path, const std::string &prop_path, const RunOptions &o)
{
    const Network net = load_network(net_path, o.apply_normalization);
    const RawProperty prop = load_prop(prop_path, net.input_size());
    EncodedQuery encoded = [&] {
        try {
            return encode_output_property(net, prop, o.eps_strict);
        } catch (const Error &e) {
            throw InputError{prop_path, e.what()};
        }
    }();
    encoded.query.eps_strict = o.eps_strict;
    return finish_run(encoded, o);
}

struct RobustnessArgs {
    std::vector<double> center;
    double delta = 0.1;
    std::size_t better = 0;
    std::size_t than = 1;
};

int cmd_robustness(const std::string &net_path, const RobustnessArgs &a, const RunOptions &o)
{
    const NNetModel model = load_model(net_path);
    const Network net = o.apply_normalization ? apply_normalization(model) : model.network;
    std::vector<double> lower, upper;
    if (o.apply_normalization) {
        lower = model.normalization.input_mins;
        upper = model.normalization.input_maxes;
    }
    EncodedQuery encoded = [&] {
        try {
            return generate_robustness_query(net, a.center, a.delta, a.better, a.than, lower, upper, o.eps_strict);
        } catch (const Error &e) {
            throw InputError{"--center/--better/--than", e.what()};
        }
    }();
    encoded.query.eps_strict = o.eps_strict;
    return finish_run(encoded, o);
}

int cmd_classify(const std::string &net_path, const std::string &out, bool normalize)
{
    const Network net = load_network(net_path, normalize);
    const Network classified = classify(net);
    write_text(out, serialize_nnet(classified, identity_normalization(classified)));
    std::cerr << "hidden neurons: " << net.hidden_count() << " -> " << classified.hidden_count() << '\n';
    return 0;
}

int cmd_abstract(const std::string &net_path, const std::string &prop_path, const std::string &out,
                 const RunOptions &o)
{
    const Network net = load_network(net_path, o.apply_normalization);
    const RawProperty prop = load_prop(prop_path, net.input_size());
    EncodedQuery encoded = encode_output_property(net, prop, o.eps_strict);
    for (std::size_t k = 0; k < encoded.query.num_inputs(); ++k)
        if (encoded.query.lower[k] < 0.0)
            throw InputError{prop_path, "abstract needs non-negative input lower bounds; verify shifts them itself"};
    const Network classified = classify(encoded.network);
    Partition partition = Partition::identity(classified);
    const DriverConfig cfg = o.config();
    if (cfg.abstraction == AbstractionMode::Saturation) {
        partition = saturate(partition);
    } else if (cfg.abstraction == AbstractionMode::Indicator) {
        std::mt19937_64 rng(cfg.seed);
        const auto points = sample_indicators(encoded.query, cfg.indicator_count, rng);
        partition = indicator_guided_abstraction(classified, encoded.query, points, {0, cfg.seed}).partition;
    }
    const Network abstract = materialize(classified, partition).network;
    write_text(out, serialize_nnet(abstract, identity_normalization(abstract)));
    std::cerr << "hidden neurons: " << encoded.network.hidden_count() << " encoded, " << classified.hidden_count()
              << " classified, " << abstract.hidden_count() << " abstract\n";
    return 0;
}

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

struct BenchMode {
    std::string name;
    DriverConfig config;
};

std::optional<BenchMode> bench_mode(const std::string &name, std::uint64_t seed, std::size_t indicators)
{
    BenchMode m{name, {}};
    m.config.seed = seed;
    m.config.indicator_count = indicators;
    const auto dash = name.find('-');
    const std::string abs = name.substr(0, dash);
    const std::string ref = dash == std::string::npos ? "cegar" : name.substr(dash + 1);
    if (abs == "none")
        m.config.abstraction = AbstractionMode::None;
    else if (abs == "indicator")
        m.config.abstraction = AbstractionMode::Indicator;
    else if (abs != "saturation")
        return std::nullopt;
    if (ref == "random")
        m.config.refinement = RefinementMode::Random;
    else if (ref != "cegar")
        return std::nullopt;
    return m;
}

struct BenchArgs {
    std::string dir;
    std::vector<std::string> modes{"saturation-cegar", "none"};
    std::optional<double> timeout;
    std::uint64_t seed = 0;
    std::size_t indicators = 20;
    std::string out;
    bool apply_normalization = false;
};

/// Every `<id>.prop` in the directory paired with `<id>.nnet`, or with the
/// network named by the part of <id> before its first '.'.
std::vector<std::pair<std::string, fs::path>> bench_queries(const fs::path &dir)
{
    std::vector<std::pair<std::string, fs::path>> out;
    for (const auto &entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".prop")
            out.emplace_back(entry.path().stem().string(), entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

int cmd_bench(const BenchArgs &a)
{
    std::vector<BenchMode> modes;
    for (const auto &name : a.modes) {
        auto m = bench_mode(name, a.seed, a.indicators);
        if (!m)
            throw InputError{"--mode", "unknown mode '" + name + "'"};
        m->config.timeout_seconds = a.timeout;
        modes.push_back(*m);
    }
    if (!fs::is_directory(a.dir))
        throw InputError{a.dir, "not a directory"};

    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out, std::ios::binary);
        if (!file)
            throw InputError{a.out, "cannot write file"};
    }
    std::ostream &out = a.out.empty() ? std::cout : file;
    out << "query,mode,verdict,rounds,solver_calls,final_abstract_size,wall_ms\n";

    for (const auto &[id, prop_path] : bench_queries(a.dir)) {
        fs::path net_path = fs::path(a.dir) / (id + ".nnet");
        if (!fs::exists(net_path))
            net_path = fs::path(a.dir) / (id.substr(0, id.find('.')) + ".nnet");
        for (const auto &mode : modes) {
            const auto start = std::chrono::steady_clock::now();
            std::string verdict;
            std::string rounds, calls, size;
            try {
                const Network net = load_network(net_path.string(), a.apply_normalization);
                const RawProperty prop = load_prop(prop_path.string(), net.input_size());
                const VerdictReport r = run(net, prop, mode.config);
                verdict = to_string(r.status);
                rounds = std::to_string(r.stats.refinement_rounds);
                calls = std::to_string(r.stats.solver_calls);
                size = std::to_string(r.stats.final_abstract_size);
            } catch (const InputError &e) {
                verdict = "ERROR: " + (e.path.empty() ? "" : e.path + ": ") + e.message;
            } catch (const std::exception &e) {
                verdict = std::string("ERROR: ") + e.what();
            }
            const double ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            std::ostringstream wall;
            wall << std::fixed << std::setprecision(3) << ms;
            out << csv_field(id) << ',' << csv_field(mode.name) << ',' << csv_field(verdict) << ',' << rounds << ','
                << calls << ',' << size << ',' << wall.str() << '\n';
            out.flush();
        }
    }
    return 0;
}

struct GenerateArgs {
    std::string dir;
    std::size_t count = 20;
    std::uint64_t seed = 0;
    HardCorpusOptions options;
};

int cmd_generate(const GenerateArgs &a)
{
    fs::create_directories(a.dir);
    for (std::size_t i = 0; i < a.count; ++i) {
        const GeneratedQuery g = hard_unsat_query(a.options, a.seed + i);
        std::ostringstream id;
        id << "hard_" << std::setw(3) << std::setfill('0') << i;
        const fs::path base = fs::path(a.dir) / id.str();
        write_text(base.string() + ".nnet", serialize_nnet(g.network, identity_normalization(g.network)));
        write_text(base.string() + ".prop", format_property(g.property));
    }
    std::cerr << "wrote " << a.count << " queries to " << a.dir << '\n';
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Abstraction-refinement verification of ReLU networks.\n"
                 "Exit codes: 0 UNSAT (property holds), 1 SAT (counterexample), 2 timeout or inconclusive, "
                 "3 usage or input error."};
    app.require_subcommand(1);

    std::string net_path, prop_path, out_path;
    RunOptions run_opts;

    auto *verify_cmd = app.add_subcommand("verify", "Verify a property given as an NNet network and a property file");
    verify_cmd->add_option("--net", net_path, "Network in NNet format")->required();
    verify_cmd->add_option("--prop", prop_path, "Property file")->required();
    add_run_options(verify_cmd, run_opts);

    RobustnessArgs robust;
    auto *robust_cmd = app.add_subcommand(
        "robustness", "Check whether some input within --delta of --center makes output --better reach output --than");
    robust_cmd->add_option("--net", net_path, "Network in NNet format")->required();
    robust_cmd->add_option("--center", robust.center, "Centre point, comma separated")->required()->delimiter(',');
    robust_cmd->add_option("--delta", robust.delta, "L-infinity radius")->capture_default_str();
    robust_cmd->add_option("--better", robust.better, "Output index that should not catch up")->capture_default_str();
    robust_cmd->add_option("--than", robust.than, "Output index expected to stay on top")->capture_default_str();
    add_run_options(robust_cmd, run_opts);

    BenchArgs bench;
    auto *bench_cmd = app.add_subcommand("bench", "Run every <id>.prop/<id>.nnet pair of a directory, CSV out");
    bench_cmd->add_option("dir", bench.dir, "Query directory")->required();
    bench_cmd->add_option("--mode", bench.modes,
                          "Modes to compare: saturation|indicator|none, optionally suffixed -cegar or -random")
        ->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--timeout", bench.timeout, "Per-query limit in seconds")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", bench.seed)->capture_default_str();
    bench_cmd->add_option("--indicators", bench.indicators)->capture_default_str();
    bench_cmd->add_option("--out", bench.out, "CSV path (default stdout)");
    bench_cmd->add_flag("--apply-normalization", bench.apply_normalization);

    bool normalize = false;
    auto *classify_cmd = app.add_subcommand("classify", "Write the classified network");
    classify_cmd->add_option("--net", net_path)->required();
    classify_cmd->add_option("--out", out_path)->required();
    classify_cmd->add_flag("--apply-normalization", normalize);

    auto *abstract_cmd = app.add_subcommand("abstract", "Write the initial abstract network of a query");
    abstract_cmd->add_option("--net", net_path)->required();
    abstract_cmd->add_option("--prop", prop_path)->required();
    abstract_cmd->add_option("--net-out", out_path, "Where to write the abstract network")->required();
    add_run_options(abstract_cmd, run_opts);

    GenerateArgs gen;
    auto *generate_cmd = app.add_subcommand("generate", "Write a corpus of hard UNSAT queries");
    generate_cmd->add_option("dir", gen.dir)->required();
    generate_cmd->add_option("--count", gen.count)->capture_default_str();
    generate_cmd->add_option("--seed", gen.seed)->capture_default_str();
    generate_cmd->add_option("--inputs", gen.options.inputs)->capture_default_str();
    generate_cmd->add_option("--layers", gen.options.hidden_layers, "Hidden layers")->capture_default_str();
    generate_cmd->add_option("--width", gen.options.width)->capture_default_str();
    generate_cmd->add_option("--noise", gen.options.noise)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (*verify_cmd)
            return cmd_verify(net_path, prop_path, run_opts);
        if (*robust_cmd)
            return cmd_robustness(net_path, robust, run_opts);
        if (*bench_cmd)
            return cmd_bench(bench);
        if (*classify_cmd)
            return cmd_classify(net_path, out_path, normalize);
        if (*abstract_cmd)
            return cmd_abstract(net_path, prop_path, out_path, run_opts);
        if (*generate_cmd)
            return cmd_generate(gen);
    } catch (const InputError &e) {
        std::cerr << "error: " << (e.path.empty() ? "" : e.path + ": ") << e.message << '\n';
        return exit_usage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
