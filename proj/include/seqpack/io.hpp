#pragma once

// Instance and solution files (YAML).

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "seqpack/cegar.hpp"
#include "seqpack/model.hpp"

namespace seqpack {

/// Parses an instance document. Unknown keys, bad numbers and invalid
/// polygons raise ParseError with the offending line and column.
/// Footprints given as non-convex point lists are hulled and a warning is
/// appended to Instance::warnings.
Instance parse_instance(std::string_view text);
Instance load_instance(const std::filesystem::path& path);

/// Exact serialization; parse_instance(print_instance(x)) reproduces x.
std::string print_instance(const Instance& instance);

struct SolutionPlate
{
    std::size_t index = 0;
    /// Object ids on this plate, in input order.
    std::vector<std::string> ids;
    /// Indexed like ids.
    Placement placement;
    /// Plate scale the placement was certified against.
    Rat sigma{1};
    Rat sigma_lo{0};
    bool partial = false;
    SolveStats stats;
};

struct Solution
{
    SolveStatus status = SolveStatus::Sat;
    SolveMode mode = SolveMode::Cegar;
    std::string solver_command;
    std::string solver_version;
    std::vector<SolutionPlate> plates;
};

/// Wraps a single-plate outcome (which must be SAT).
Solution make_solution(const Instance& instance, const SolveOutcome& outcome, const std::vector<std::string>& command);

/// Wraps a multi-plate schedule.
Solution make_solution(const Instance& instance, const std::vector<PlateAssignment>& plates,
                       const std::vector<std::string>& command);

/// Print order is derived from T with the instance's epsilon_t.
std::string print_solution(const Solution& solution, const Instance& instance);

Solution parse_solution(std::string_view text);
Solution load_solution(const std::filesystem::path& path);

/// Maps a plate's ids back to the instance. Throws MissingPlacement for
/// ids the instance does not know.
std::vector<std::size_t> resolve_ids(const Instance& instance, const SolutionPlate& plate);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

} // namespace seqpack
