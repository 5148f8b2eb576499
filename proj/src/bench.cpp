#include "seqpack/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <yaml-cpp/yaml.h>

#include "seqpack/errors.hpp"
#include "seqpack/verify.hpp"

namespace seqpack {

Rng::Rng(std::uint64_t seed) : m_engine(seed) {}

std::uint64_t Rng::next()
{
    return m_engine();
}

long Rng::uniform(long lo, long hi)
{
    if (hi < lo)
        throw std::invalid_argument("empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    // Reject the incomplete top bucket so every value is equally likely.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do
        x = next();
    while (x >= limit);
    return lo + static_cast<long>(x % span);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b)
{
    // splitmix64 finalizer over a simple combination
    std::uint64_t z = base * 0x9E3779B97F4A7C15ULL + (a << 32) + b + 0x632BE59BD9B4E019ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

Instance empty_instance(const GeneratorOptions& options)
{
    return Instance{Plate(ConvexPolygon::rectangle(Rat(0), Rat(0), options.plate_width, options.plate_height)),
                    Extruder(options.extruder),
                    {},
                    options.params,
                    {}};
}

std::string object_id(std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "o%02zu", i + 1);
    return buf;
}

} // namespace

Instance gen_cuboids(std::size_t k, std::uint64_t seed, const GeneratorOptions& options)
{
    if (k < 1)
        throw std::invalid_argument("need at least one object");
    Rng rng(seed);
    Instance inst = empty_instance(options);
    for (std::size_t i = 0; i < k; ++i) {
        const long length = rng.uniform(options.dim_min, options.dim_max);
        const long width = rng.uniform(options.dim_min, options.dim_max);
        const long height = rng.uniform(options.dim_min, options.dim_max);
        inst.objects.push_back(
            {object_id(i), ConvexPolygon::rectangle(Rat(0), Rat(0), Rat(length), Rat(width)), {}, Rat(height)});
    }
    return inst;
}

namespace {

constexpr long kGrid = 8;

/// Nearest multiple of 1/grid, ties rounded up.
Rat snap(const Rat& v, long grid)
{
    const mpq_class scaled = v.raw() * grid;
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), mpz_class(scaled.get_num() * 2 + scaled.get_den()).get_mpz_t(),
               mpz_class(scaled.get_den() * 2).get_mpz_t());
    return Rat(mpq_class(r, grid));
}

} // namespace

Instance gen_complex(std::size_t k, std::uint64_t seed, int vertex_min, int vertex_max,
                     const GeneratorOptions& options)
{
    if (k < 1)
        throw std::invalid_argument("need at least one object");
    if (vertex_min < 3 || vertex_max < vertex_min || vertex_max > 64)
        throw std::invalid_argument("vertex range must satisfy 3 <= min <= max <= 64");
    constexpr long q = 16;
    Rng rng(seed);
    Instance inst = empty_instance(options);
    for (std::size_t i = 0; i < k; ++i) {
        const Rat a = Rat(rng.uniform(options.dim_min, options.dim_max)) / Rat(2);
        const Rat b = Rat(rng.uniform(options.dim_min, options.dim_max)) / Rat(2);
        const long n = rng.uniform(vertex_min, vertex_max);

        // t = p/q parametrizes the right half of the unit circle; the mirror
        // flag covers the left half. (p = +-q with either flag is the same
        // point, so those are drawn only unmirrored.) Points are snapped to
        // a 1/8 mm grid, as CAD exports are; draws where snapping merges or
        // flattens a vertex are repeated.
        ConvexPolygon fp = ConvexPolygon::rectangle(Rat(0), Rat(0), Rat(1), Rat(1));
        for (int attempt = 0;; ++attempt) {
            if (attempt == 1000)
                throw std::invalid_argument("cannot fit " + std::to_string(n) + " grid vertices on a " + a.str() +
                                            " x " + b.str() + " ellipse");
            std::set<std::pair<long, long>> chosen;
            // The four axis extremes pin the bounding box to 2a x 2b.
            if (n >= 4)
                chosen = {{0, 0}, {0, 1}, {q, 0}, {-q, 0}};
            while (static_cast<long>(chosen.size()) < n) {
                const long p = rng.uniform(-q, q);
                const long mirror = (p == q || p == -q) ? 0 : rng.uniform(0, 1);
                chosen.insert({p, mirror});
            }
            std::vector<Point2> pts;
            for (const auto& [p, mirror] : chosen) {
                const Rat t(p, q);
                const Rat d = Rat(1) + t * t;
                Rat x = a * (Rat(1) - t * t) / d;
                if (mirror)
                    x = -x;
                pts.push_back({snap(x + a, kGrid), snap(b * Rat(2) * t / d + b, kGrid)});
            }
            fp = convex_hull(pts);
            if (static_cast<long>(fp.size()) == n)
                break;
        }
        const long height = rng.uniform(options.dim_min, options.dim_max);
        inst.objects.push_back({object_id(i), std::move(fp), {}, Rat(height)});
    }
    return inst;
}

std::string to_string(Corpus corpus)
{
    return corpus == Corpus::Cuboids ? "cuboids" : "complex";
}

Corpus parse_corpus(const std::string& text)
{
    if (text == "cuboids")
        return Corpus::Cuboids;
    if (text == "complex")
        return Corpus::Complex;
    throw std::invalid_argument("unknown corpus '" + text + "' (expected cuboids or complex)");
}

SuiteConfig desk_config()
{
    return SuiteConfig{};
}

SuiteConfig full_protocol_config()
{
    SuiteConfig c;
    c.k_max = 32;
    c.modes = {SolveMode::Cegar, SolveMode::Eager};
    return c;
}

std::vector<SuiteInstance> suite_instances(const SuiteConfig& config)
{
    if (config.k_min < 1 || config.k_max < config.k_min)
        throw std::invalid_argument("k range must satisfy 1 <= k_min <= k_max");
    std::vector<SuiteInstance> out;
    for (std::size_t k = config.k_min; k <= config.k_max; ++k) {
        for (std::size_t r = 0; r < config.repeats; ++r) {
            char id[64];
            std::snprintf(id, sizeof id, "%s-k%02zu-r%02zu", to_string(config.corpus).c_str(), k, r);
            out.push_back({id, k, r, derive_seed(config.seed, k, r)});
        }
    }
    return out;
}

Instance make_suite_instance(const SuiteConfig& config, const SuiteInstance& which)
{
    GeneratorOptions g = config.generator;
    g.params.timeout_ms = config.timeout_ms;
    g.params.epsilon_xy = config.epsilon_xy;
    g.params.optimize_sigma = config.optimize_sigma;
    return config.corpus == Corpus::Cuboids ? gen_cuboids(which.k, which.seed, g)
                                            : gen_complex(which.k, which.seed, config.vertex_min, config.vertex_max, g);
}

namespace {

BenchRecord run_one(const SuiteConfig& config, const SuiteInstance& which, SolveMode mode, std::string& version)
{
    Instance inst = make_suite_instance(config, which);
    inst.params.mode = mode;
    SolverConfig sc;
    sc.command = config.command;
    const SolveOutcome out = solve(inst, sc);
    version = out.solver_version;

    BenchRecord r;
    r.instance_id = which.id;
    r.k = which.k;
    r.mode = mode;
    r.status = out.partial ? SolveStatus::Timeout : out.status;
    r.wall_ms = out.stats.wall_ms;
    r.refinement_rounds = out.stats.refinement_rounds;
    r.sigma_star = out.sigma_star;
    r.constraints_added = out.stats.constraints_added;
    r.full_plni_constraints = out.stats.full_plni_constraints;
    r.partial = out.partial;
    if (out.placement) {
        const VerifyReport report = verify_solution(inst, *out.placement, out.sigma_star.value_or(Rat(1)));
        if (!report.ok)
            throw std::logic_error("placement for " + which.id + " (" + to_string(mode) +
                                   ") failed verification: " + report.violations.front().witness);
        r.certified = true;
    }
    return r;
}

} // namespace

SuiteResult run_suite(const SuiteConfig& config, const std::function<void(const BenchRecord&)>& progress)
{
    const std::vector<SuiteInstance> instances = suite_instances(config);
    std::vector<std::pair<std::size_t, SolveMode>> jobs;
    for (std::size_t i = 0; i < instances.size(); ++i)
        for (SolveMode m : config.modes)
            jobs.emplace_back(i, m);

    std::vector<BenchRecord> records(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex lock;
    std::string version;
    std::exception_ptr failure;

    const auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size())
                return;
            {
                std::lock_guard g(lock);
                if (failure)
                    return;
            }
            try {
                std::string v;
                BenchRecord r = run_one(config, instances[jobs[j].first], jobs[j].second, v);
                std::lock_guard g(lock);
                if (version.empty())
                    version = v;
                records[j] = r;
                if (progress)
                    progress(r);
            } catch (...) {
                std::lock_guard g(lock);
                if (!failure)
                    failure = std::current_exception();
                return;
            }
        }
    };

    const unsigned n = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(jobs.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (unsigned t = 0; t < n; ++t)
            threads.emplace_back(worker);
        for (std::thread& t : threads)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    std::sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
        return std::tie(a.instance_id, a.mode) < std::tie(b.instance_id, b.mode);
    });
    return {std::move(records), version};
}

std::string to_csv(const std::vector<BenchRecord>& records)
{
    std::vector<const BenchRecord*> rows;
    for (const BenchRecord& r : records)
        rows.push_back(&r);
    std::sort(rows.begin(), rows.end(), [](const BenchRecord* a, const BenchRecord* b) {
        return std::tie(a->mode, a->wall_ms, a->instance_id) < std::tie(b->mode, b->wall_ms, b->instance_id);
    });
    std::ostringstream os;
    os << "instance_id,k,mode,status,wall_ms,refinement_rounds,sigma_star\n";
    for (const BenchRecord* r : rows)
        os << r->instance_id << ',' << r->k << ',' << to_string(r->mode) << ',' << to_string(r->status) << ','
           << r->wall_ms << ',' << r->refinement_rounds << ',' << (r->sigma_star ? r->sigma_star->str() : "") << '\n';
    return os.str();
}

std::string suite_manifest(const SuiteConfig& config, const SuiteResult& result)
{
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "config" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "corpus" << YAML::Value << to_string(config.corpus);
    out << YAML::Key << "k_min" << YAML::Value << config.k_min;
    out << YAML::Key << "k_max" << YAML::Value << config.k_max;
    out << YAML::Key << "repeats" << YAML::Value << config.repeats;
    out << YAML::Key << "seed" << YAML::Value << config.seed;
    out << YAML::Key << "timeout_ms" << YAML::Value << config.timeout_ms;
    out << YAML::Key << "modes" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (SolveMode m : config.modes)
        out << to_string(m);
    out << YAML::EndSeq;
    out << YAML::Key << "epsilon_xy" << YAML::Value << config.epsilon_xy.str();
    out << YAML::Key << "optimize_sigma" << YAML::Value << (config.optimize_sigma ? "true" : "false");
    if (config.corpus == Corpus::Complex) {
        out << YAML::Key << "vertex_min" << YAML::Value << config.vertex_min;
        out << YAML::Key << "vertex_max" << YAML::Value << config.vertex_max;
    }
    out << YAML::Key << "jobs" << YAML::Value << config.jobs;
    out << YAML::Key << "plate" << YAML::Value << YAML::Flow << YAML::BeginSeq << config.generator.plate_width.str()
        << config.generator.plate_height.str() << YAML::EndSeq;
    out << YAML::Key << "dims" << YAML::Value << YAML::Flow << YAML::BeginSeq << config.generator.dim_min
        << config.generator.dim_max << YAML::EndSeq;
    out << YAML::Key << "extruder" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const Point2& p : config.generator.extruder)
        out << YAML::Flow << YAML::BeginSeq << p.x.str() << p.y.str() << YAML::EndSeq;
    out << YAML::EndSeq;
    out << YAML::EndMap;

    std::string command;
    for (const std::string& w : config.command)
        command += (command.empty() ? "" : " ") + w;
    out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "command" << YAML::Value << command;
    out << YAML::Key << "version" << YAML::Value << result.solver_version;
    out << YAML::EndMap;

    out << YAML::Key << "instances" << YAML::Value << YAML::BeginSeq;
    for (const SuiteInstance& s : suite_instances(config))
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "id" << YAML::Value << s.id << YAML::Key << "k"
            << YAML::Value << s.k << YAML::Key << "seed" << YAML::Value << s.seed << YAML::EndMap;
    out << YAML::EndSeq;

    std::size_t solved = 0;
    std::size_t timeouts = 0;
    std::size_t certified = 0;
    for (const BenchRecord& r : result.records) {
        solved += r.status != SolveStatus::Timeout;
        timeouts += r.status == SolveStatus::Timeout;
        certified += r.certified;
    }
    out << YAML::Key << "summary" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "records" << YAML::Value << result.records.size();
    out << YAML::Key << "solved" << YAML::Value << solved;
    out << YAML::Key << "timeouts" << YAML::Value << timeouts;
    out << YAML::Key << "certified_placements" << YAML::Value << certified;
    out << YAML::EndMap;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

} // namespace seqpack
