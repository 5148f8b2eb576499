#pragma once

// Instance generators and the benchmark suite runner.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "seqpack/cegar.hpp"
#include "seqpack/model.hpp"

namespace seqpack {

/// Small deterministic generator: mt19937_64 with rejection-sampled
/// bounded draws, so sequences match on every platform.
class Rng
{
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();
    /// Uniform integer in [lo, hi].
    long uniform(long lo, long hi);

private:
    std::mt19937_64 m_engine;
};

/// Mixes a base seed with coordinates into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

struct GeneratorOptions
{
    Rat plate_width{250};
    Rat plate_height{210};
    /// Default print head: 8 x 8 mm square centred on the nozzle.
    ConvexPolygon extruder = ConvexPolygon::rectangle(Rat(-4), Rat(-4), Rat(4), Rat(4));
    long dim_min = 8;
    long dim_max = 64;
    SolverParams params;
};

/// k axis-aligned boxes, length/width/height uniform in [dim_min, dim_max].
Instance gen_cuboids(std::size_t k, std::uint64_t seed, const GeneratorOptions& options = {});

/// k convex polygons with vertex counts uniform in [vertex_min, vertex_max].
/// Vertices are rational points of an axis-aligned ellipse whose diameters
/// are drawn from [dim_min, dim_max], snapped to a 1/8 mm grid.
Instance gen_complex(std::size_t k, std::uint64_t seed, int vertex_min = 5, int vertex_max = 12,
                     const GeneratorOptions& options = {});

enum class Corpus { Cuboids, Complex };

std::string to_string(Corpus corpus);
Corpus parse_corpus(const std::string& text);

struct SuiteConfig
{
    Corpus corpus = Corpus::Cuboids;
    std::size_t k_min = 1;
    std::size_t k_max = 16;
    std::size_t repeats = 10;
    std::uint64_t seed = 1;
    std::int64_t timeout_ms = 8000;
    std::vector<SolveMode> modes{SolveMode::Cegar};
    Rat epsilon_xy{1, 128};
    bool optimize_sigma = true;
    int vertex_min = 5;
    int vertex_max = 12;
    unsigned jobs = 1;
    GeneratorOptions generator;
    std::vector<std::string> command = resolve_solver_command();
};

/// Desk-scale default: cuboids, k = 1..16, 10 repeats, 8 s, CEGAR.
SuiteConfig desk_config();

/// The full published protocol: cuboids, k = 1..32, 10 repeats, 8 s, both modes.
SuiteConfig full_protocol_config();

struct SuiteInstance
{
    std::string id;
    std::size_t k = 0;
    std::size_t repeat = 0;
    std::uint64_t seed = 0;
};

/// The instance list a config expands to, in generation order.
std::vector<SuiteInstance> suite_instances(const SuiteConfig& config);

/// Builds one suite instance with the config's solver parameters applied.
Instance make_suite_instance(const SuiteConfig& config, const SuiteInstance& which);

struct BenchRecord
{
    std::string instance_id;
    std::size_t k = 0;
    SolveMode mode = SolveMode::Cegar;
    /// Sat only when the search completed; a scale search cut off by the
    /// deadline is recorded as Timeout with its best sigma kept.
    SolveStatus status = SolveStatus::Timeout;
    std::int64_t wall_ms = 0;
    std::size_t refinement_rounds = 0;
    std::optional<Rat> sigma_star;
    std::size_t constraints_added = 0;
    std::size_t full_plni_constraints = 0;
    bool partial = false;
    /// Every returned placement passed verify_solution.
    bool certified = false;
};

struct SuiteResult
{
    std::vector<BenchRecord> records;
    std::string solver_version;
};

/// Runs every (instance, mode) pair, independently re-verifying each
/// placement. Records come back ordered by instance id, then mode.
/// Throws std::logic_error if a placement fails verification.
SuiteResult run_suite(const SuiteConfig& config,
                      const std::function<void(const BenchRecord&)>& progress = {});

/// CSV with header instance_id,k,mode,status,wall_ms,refinement_rounds,sigma_star,
/// rows grouped by mode and sorted by ascending runtime.
std::string to_csv(const std::vector<BenchRecord>& records);

/// Run manifest: the config, per-instance seeds and solver metadata.
std::string suite_manifest(const SuiteConfig& config, const SuiteResult& result);

} // namespace seqpack
