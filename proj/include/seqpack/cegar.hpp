#pragma once

// Counterexample-guided solving of sequential packing: lazy edge-crossing
// refinement, plate-scale bisection, the eager baseline, and multi-plate
// spill scheduling.

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "seqpack/encoder.hpp"
#include "seqpack/model.hpp"
#include "seqpack/smt.hpp"

namespace seqpack {

struct SolverConfig
{
    std::vector<std::string> command = resolve_solver_command();
    /// Called with every certified placement a bounded solve returns.
    std::function<void(const Rat& sigma, const Placement&)> on_placement;
};

/// One lazily added Lines-not-Intersect constraint.
struct RefinementRecord
{
    std::size_t first;
    std::size_t second;
    std::size_t edge_a;
    std::size_t edge_b;
    std::size_t round;
};

enum class BoundedStatus { Sat, Unsat, Timeout };

struct BoundedResult
{
    BoundedStatus status = BoundedStatus::Unsat;
    std::optional<Placement> placement;
};

/// Owns one solver session for one instance and threads the growing
/// formula through every bounded solve. Refinements found while the plate
/// scope is open are re-asserted at base level after it closes, so they
/// persist across scale iterations.
class CegarSolver
{
public:
    /// `abstraction` selects the lazy formula (PLnI omitted) over the eager
    /// one. The wall-clock budget (params.timeout_ms) starts here.
    CegarSolver(const Instance& instance, const SolverConfig& config, bool abstraction);

    /// Decides feasibility on the plate scaled by sigma.
    BoundedResult solve_bounded(const Rat& sigma);

    /// Full search per params.optimize_sigma.
    SolveOutcome solve();

    const ConstraintSet& formula() const { return m_formula; }
    const std::vector<RefinementRecord>& refinements() const { return m_refinements; }
    const SolveStats& stats() const { return m_stats; }
    const SeqEncoder& encoder() const { return m_encoder; }
    const SolverSession& session() const { return m_session; }

    /// Upper bound on refinement rounds: total non-parallel edge pairs.
    std::size_t refinement_bound() const { return m_refinement_bound; }

private:
    using EdgePairKey = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>;

    std::vector<EdgePairKey> find_crossings(const Placement& placement) const;
    Placement placement_from(const Assignment& model) const;
    std::chrono::milliseconds remaining() const;
    void certify(const Placement& placement, const Rat& sigma) const;

    const Instance& m_instance;
    SolverConfig m_config;
    bool m_abstraction;
    SeqEncoder m_encoder;
    ConstraintSet m_formula;
    SolverSession m_session;
    std::vector<RefinementRecord> m_refinements;
    std::set<EdgePairKey> m_refined;
    std::size_t m_refinement_bound = 0;
    SolveStats m_stats;
    std::chrono::steady_clock::time_point m_start;
    std::chrono::steady_clock::time_point m_deadline;
};

/// Lazy (CEGAR) solve.
SolveOutcome solve_cegar(const Instance& instance, const SolverConfig& config = {});

/// All PLnI constraints asserted up front; no refinement loop.
SolveOutcome solve_eager(const Instance& instance, const SolverConfig& config = {});

/// Dispatches on instance.params.mode.
SolveOutcome solve(const Instance& instance, const SolverConfig& config = {});

struct PlateAssignment
{
    std::size_t plate_index;
    /// Indices into the original instance's objects, in input order.
    std::vector<std::size_t> objects;
    SolveOutcome outcome;
};

/// Greedy spill over fresh plates: each plate takes the longest feasible
/// prefix of the remaining objects (dropping the last on failure).
/// Throws ObjectNeverFits when some object cannot be placed even alone.
std::vector<PlateAssignment> solve_multi_plate(const Instance& instance, const SolverConfig& config = {});

} // namespace seqpack
