// seqpack command-line tool.
//
// Exit codes: 0 sat / ok, 1 unsat / violations found, 2 timeout,
// 3 bad input or usage, 4 solver process failure, 5 internal error.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "seqpack/bench.hpp"
#include "seqpack/cegar.hpp"
#include "seqpack/errors.hpp"
#include "seqpack/io.hpp"
#include "seqpack/render.hpp"
#include "seqpack/verify.hpp"

using namespace seqpack;

namespace {

enum Exit : int { kSat = 0, kUnsat = 1, kTimeout = 2, kInput = 3, kSolver = 4, kInternal = 5 };

int exit_for(SolveStatus status)
{
    switch (status) {
    case SolveStatus::Sat:
        return kSat;
    case SolveStatus::Unsat:
        return kUnsat;
    case SolveStatus::Timeout:
        return kTimeout;
    }
    return kInternal;
}

struct SolveArgs
{
    std::string instance;
    std::optional<std::string> mode;
    std::optional<bool> sigma_opt;
    std::optional<std::string> epsilon_xy;
    std::optional<std::string> epsilon_t;
    std::optional<long long> timeout_ms;
    std::optional<std::string> solver_cmd;
    bool multi_plate = false;
    std::string out;
    std::string svg;
};

struct VerifyArgs
{
    std::string instance;
    std::string solution;
    std::optional<std::string> sigma;
    bool strict = false;
};

struct RenderArgs
{
    std::string instance;
    std::string solution;
    std::string out;
};

struct BenchArgs
{
    std::string corpus = "cuboids";
    bool full_protocol = false;
    std::optional<std::size_t> k_min, k_max, repeats;
    std::uint64_t seed = 1;
    std::optional<long long> timeout_ms;
    std::vector<std::string> modes;
    unsigned jobs = 1;
    bool no_sigma_opt = false;
    int vertex_min = 5;
    int vertex_max = 12;
    std::optional<std::string> solver_cmd;
    std::string out_dir = "bench-out";
    bool quiet = false;
};

struct GenerateArgs
{
    std::string corpus = "cuboids";
    std::size_t k = 4;
    std::uint64_t seed = 1;
    int vertex_min = 5;
    int vertex_max = 12;
    std::string out;
};

Rat parse_rat_arg(const std::string& text, const std::string& flag)
{
    try {
        return Rat::parse(text);
    } catch (const std::invalid_argument&) {
        throw InvalidInstance(flag + ": '" + text + "' is not an exact number");
    }
}

void print_warnings(const Instance& inst)
{
    for (const std::string& w : inst.warnings)
        std::cerr << "warning: " << w << "\n";
}

/// Re-checks every plate of a solution; returns the violations per plate.
std::vector<std::pair<std::size_t, VerifyReport>> check_solution(const Instance& inst, const Solution& sol,
                                                                  const std::optional<Rat>& sigma_override,
                                                                  const VerifyOptions& options)
{
    std::map<std::size_t, std::size_t> seen;
    std::vector<std::pair<std::size_t, VerifyReport>> reports;
    for (const SolutionPlate& plate : sol.plates) {
        const std::vector<std::size_t> idx = resolve_ids(inst, plate);
        for (std::size_t i : idx)
            if (!seen.emplace(i, plate.index).second)
                throw MissingPlacement("object '" + inst.objects[i].id + "' is placed on more than one plate");
        if (plate.placement.positions.size() != idx.size())
            throw MissingPlacement("plate " + std::to_string(plate.index) + " has mismatched positions");
        reports.emplace_back(plate.index, verify_solution(inst.subset(idx), plate.placement,
                                                          sigma_override.value_or(plate.sigma), options));
    }
    for (std::size_t i = 0; i < inst.objects.size(); ++i)
        if (!seen.count(i))
            throw MissingPlacement("solution has no placement for object '" + inst.objects[i].id + "'");
    return reports;
}

int cmd_solve(const SolveArgs& a)
{
    Instance inst = load_instance(a.instance);
    print_warnings(inst);
    if (a.mode)
        inst.params.mode = parse_mode(*a.mode);
    if (a.sigma_opt)
        inst.params.optimize_sigma = *a.sigma_opt;
    if (a.epsilon_xy)
        inst.params.epsilon_xy = parse_rat_arg(*a.epsilon_xy, "--epsilon-xy");
    if (a.epsilon_t)
        inst.params.epsilon_t = parse_rat_arg(*a.epsilon_t, "--epsilon-t");
    if (a.timeout_ms)
        inst.params.timeout_ms = *a.timeout_ms;
    inst.validate();

    SolverConfig config;
    config.command = resolve_solver_command(a.solver_cmd);

    Solution solution;
    if (a.multi_plate) {
        std::vector<PlateAssignment> plates;
        try {
            plates = solve_multi_plate(inst, config);
        } catch (const ObjectNeverFits& e) {
            std::cout << "status: unsat\n";
            std::cerr << "seqpack: " << e.what() << "\n";
            return kUnsat;
        }
        solution = make_solution(inst, plates, config.command);
    } else {
        const SolveOutcome out = solve(inst, config);
        if (out.status != SolveStatus::Sat) {
            std::cout << "status: " << to_string(out.status) << "\n";
            return exit_for(out.status);
        }
        solution = make_solution(inst, out, config.command);
    }

    for (const auto& [index, report] : check_solution(inst, solution, std::nullopt, {}))
        if (!report.ok)
            throw std::logic_error("solver output for plate " + std::to_string(index) +
                                   " failed verification: " + report.violations.front().witness);

    const std::string text = print_solution(solution, inst);
    if (a.out.empty())
        std::cout << text;
    else
        write_text_file(a.out, text);
    if (!a.svg.empty())
        write_text_file(a.svg, render_svg(inst, solution));

    if (!a.out.empty()) {
        std::cout << "status: sat\nplates: " << solution.plates.size() << "\n";
        for (const SolutionPlate& p : solution.plates)
            std::cout << "plate " << p.index << ": " << p.ids.size() << " objects, sigma " << p.sigma.str()
                      << (p.partial ? " (search cut off by timeout)" : "") << "\n";
    }
    return kSat;
}

int cmd_verify(const VerifyArgs& a)
{
    const Instance inst = load_instance(a.instance);
    const Solution sol = load_solution(a.solution);
    std::optional<Rat> sigma;
    if (a.sigma)
        sigma = parse_rat_arg(*a.sigma, "--sigma");
    VerifyOptions options;
    options.reject_touching = a.strict;

    bool ok = true;
    std::ostringstream os;
    os << "plates:\n";
    for (const auto& [index, report] : check_solution(inst, sol, sigma, options)) {
        const SolutionPlate& plate = *std::find_if(sol.plates.begin(), sol.plates.end(),
                                                   [&](const SolutionPlate& p) { return p.index == index; });
        ok = ok && report.ok;
        os << "  - index: " << index << "\n    ok: " << (report.ok ? "true" : "false") << "\n    violations:";
        if (report.violations.empty())
            os << " []";
        os << "\n";
        for (const Violation& v : report.violations) {
            os << "      - kind: " << to_string(v.kind) << "\n        objects: [" << plate.ids[v.first];
            if (v.second != v.first)
                os << ", " << plate.ids[v.second];
            os << "]\n        witness: \"" << v.witness << "\"\n";
        }
    }
    std::cout << "ok: " << (ok ? "true" : "false") << "\n" << os.str();
    return ok ? kSat : kUnsat;
}

int cmd_render(const RenderArgs& a)
{
    const Instance inst = load_instance(a.instance);
    const Solution sol = load_solution(a.solution);
    write_text_file(a.out, render_svg(inst, sol));
    return kSat;
}

int cmd_bench(const BenchArgs& a)
{
    SuiteConfig c = a.full_protocol ? full_protocol_config() : desk_config();
    c.corpus = parse_corpus(a.corpus);
    if (a.k_min)
        c.k_min = *a.k_min;
    if (a.k_max)
        c.k_max = *a.k_max;
    if (a.repeats)
        c.repeats = *a.repeats;
    c.seed = a.seed;
    if (a.timeout_ms)
        c.timeout_ms = *a.timeout_ms;
    if (!a.modes.empty()) {
        c.modes.clear();
        for (const std::string& m : a.modes)
            c.modes.push_back(parse_mode(m));
    }
    c.jobs = a.jobs;
    c.optimize_sigma = !a.no_sigma_opt;
    c.vertex_min = a.vertex_min;
    c.vertex_max = a.vertex_max;
    c.command = resolve_solver_command(a.solver_cmd);

    std::filesystem::create_directories(a.out_dir);
    const SuiteResult result = run_suite(c, [&](const BenchRecord& r) {
        if (!a.quiet)
            std::cerr << r.instance_id << " " << to_string(r.mode) << " " << to_string(r.status) << " "
                      << r.wall_ms << " ms\n";
    });
    const std::filesystem::path dir(a.out_dir);
    write_text_file(dir / "results.csv", to_csv(result.records));
    write_text_file(dir / "manifest.yaml", suite_manifest(c, result));

    std::map<std::string, std::pair<std::size_t, std::size_t>> per_mode;
    for (const BenchRecord& r : result.records) {
        auto& [solved, total] = per_mode[to_string(r.mode)];
        solved += r.status != SolveStatus::Timeout;
        ++total;
    }
    for (const auto& [mode, counts] : per_mode)
        std::cout << mode << ": solved " << counts.first << " of " << counts.second << "\n";
    std::cout << "wrote " << (dir / "results.csv").string() << " and " << (dir / "manifest.yaml").string() << "\n";
    return kSat;
}

int cmd_generate(const GenerateArgs& a)
{
    const Instance inst = parse_corpus(a.corpus) == Corpus::Cuboids
                              ? gen_cuboids(a.k, a.seed)
                              : gen_complex(a.k, a.seed, a.vertex_min, a.vertex_max);
    const std::string text = print_instance(inst);
    if (a.out.empty())
        std::cout << text;
    else
        write_text_file(a.out, text);
    return kSat;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sequential print packing: place objects on a plate and order their prints"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve_cmd = app.add_subcommand("solve", "Solve an instance file");
    solve_cmd->add_option("instance", sa.instance, "Instance file")->required();
    solve_cmd->add_option("--mode", sa.mode, "cegar (lazy refinement) or eager")
        ->check(CLI::IsMember({"cegar", "eager"}));
    solve_cmd->add_flag("--sigma-opt,!--no-sigma-opt", sa.sigma_opt, "Shrink the plate scale toward the center");
    solve_cmd->add_option("--epsilon-xy", sa.epsilon_xy, "Scale search granularity, e.g. 1/128");
    solve_cmd->add_option("--epsilon-t", sa.epsilon_t, "Minimum gap between print times");
    solve_cmd->add_option("--timeout-ms", sa.timeout_ms, "Wall-clock budget for the whole solve");
    solve_cmd->add_option("--solver-cmd", sa.solver_cmd,
                          "SMT solver command line (overrides $" + std::string(kSolverEnvVar) + ")");
    solve_cmd->add_flag("--multi-plate", sa.multi_plate, "Spill objects that do not fit onto further plates");
    solve_cmd->add_option("--out,-o", sa.out, "Solution file to write (default: stdout)");
    solve_cmd->add_option("--svg", sa.svg, "Also render the solution to this SVG file");

    VerifyArgs va;
    auto* verify_cmd = app.add_subcommand("verify", "Check a solution file against its instance");
    verify_cmd->add_option("instance", va.instance, "Instance file")->required();
    verify_cmd->add_option("solution", va.solution, "Solution file")->required();
    verify_cmd->add_option("--sigma", va.sigma, "Plate scale to check against (default: the solution's)");
    verify_cmd->add_flag("--strict", va.strict, "Reject boundary contact as well as overlap");

    RenderArgs ra;
    auto* render_cmd = app.add_subcommand("render", "Render a solution as SVG");
    render_cmd->add_option("instance", ra.instance, "Instance file")->required();
    render_cmd->add_option("solution", ra.solution, "Solution file")->required();
    render_cmd->add_option("--out,-o", ra.out, "SVG file to write")->required();

    BenchArgs ba;
    auto* bench_cmd = app.add_subcommand("bench", "Run a generated benchmark suite");
    bench_cmd->add_option("--corpus", ba.corpus, "cuboids or complex")->check(CLI::IsMember({"cuboids", "complex"}));
    bench_cmd->add_flag("--full-protocol", ba.full_protocol, "k = 1..32, both modes");
    bench_cmd->add_option("--k-min", ba.k_min, "Smallest object count");
    bench_cmd->add_option("--k-max", ba.k_max, "Largest object count");
    bench_cmd->add_option("--repeats", ba.repeats, "Instances per object count");
    bench_cmd->add_option("--seed", ba.seed, "Base seed");
    bench_cmd->add_option("--timeout-ms", ba.timeout_ms, "Per-solve budget");
    bench_cmd->add_option("--modes", ba.modes, "Solve modes to run")
        ->delimiter(',')
        ->check(CLI::IsMember({"cegar", "eager"}));
    bench_cmd->add_option("--jobs,-j", ba.jobs, "Concurrent solves")->check(CLI::PositiveNumber);
    bench_cmd->add_flag("--no-sigma-opt", ba.no_sigma_opt, "Decide feasibility at full scale only");
    bench_cmd->add_option("--vertex-min", ba.vertex_min, "Complex corpus: fewest vertices");
    bench_cmd->add_option("--vertex-max", ba.vertex_max, "Complex corpus: most vertices");
    bench_cmd->add_option("--solver-cmd", ba.solver_cmd, "SMT solver command line");
    bench_cmd->add_option("--out-dir", ba.out_dir, "Directory for results.csv and manifest.yaml");
    bench_cmd->add_flag("--quiet,-q", ba.quiet, "No per-record progress on stderr");

    GenerateArgs ga;
    auto* gen_cmd = app.add_subcommand("generate", "Write a generated instance file");
    gen_cmd->add_option("--corpus", ga.corpus, "cuboids or complex")->check(CLI::IsMember({"cuboids", "complex"}));
    gen_cmd->add_option("--k,-k", ga.k, "Object count")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", ga.seed, "Seed");
    gen_cmd->add_option("--vertex-min", ga.vertex_min, "Complex corpus: fewest vertices");
    gen_cmd->add_option("--vertex-max", ga.vertex_max, "Complex corpus: most vertices");
    gen_cmd->add_option("--out,-o", ga.out, "Instance file to write (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInput;
    }

    try {
        if (*solve_cmd)
            return cmd_solve(sa);
        if (*verify_cmd)
            return cmd_verify(va);
        if (*render_cmd)
            return cmd_render(ra);
        if (*bench_cmd)
            return cmd_bench(ba);
        if (*gen_cmd)
            return cmd_generate(ga);
    } catch (const ParseError& e) {
        std::cerr << "seqpack: " << e.what() << "\n";
        return kInput;
    } catch (const SolverSpawnError& e) {
        std::cerr << "seqpack: " << e.what() << "\n";
        return kSolver;
    } catch (const HandshakeError& e) {
        std::cerr << "seqpack: " << e.what() << "\n";
        return kSolver;
    } catch (const SolverProtocolError& e) {
        std::cerr << "seqpack: " << e.what() << "\n";
        return kSolver;
    } catch (const MalformedModelValue& e) {
        std::cerr << "seqpack: " << e.what() << "\n";
        return kSolver;
    } catch (const std::invalid_argument& e) {
        std::cerr << "seqpack: " << e.what() << "\n";
        return kInput;
    } catch (const std::logic_error& e) {
        std::cerr << "seqpack: internal error: " << e.what() << "\n";
        return kInternal;
    } catch (const std::exception& e) {
        std::cerr << "seqpack: " << e.what() << "\n";
        return kInput;
    }
    return kInternal;
}
