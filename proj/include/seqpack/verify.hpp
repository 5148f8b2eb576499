#pragma once

// Independent certification of placements with exact geometry only.

#include <cstddef>
#include <string>
#include <vector>

#include "seqpack/geometry.hpp"
#include "seqpack/model.hpp"

namespace seqpack {

enum class ViolationKind { SeqOverlap, PlateEscape, TemporalTie };

struct Violation
{
    ViolationKind kind;
    /// Earlier object for SeqOverlap, the object for PlateEscape.
    std::size_t first = 0;
    /// Later object for SeqOverlap and TemporalTie; equal to first otherwise.
    std::size_t second = 0;
    /// Human-readable localization: edge pair, vertex, or time gap.
    std::string witness;
};

struct VerifyReport
{
    bool ok = true;
    std::vector<Violation> violations;
};

struct VerifyOptions
{
    /// Reject boundary contact too, not just interior overlap.
    bool reject_touching = false;
};

/// Checks, for every pair printed in order i before j, that object i's placed
/// hull does not overlap object j's placed extruder envelope; that each placed
/// hull lies inside the plate scaled by sigma; and that print times are
/// separated by more than epsilon_t.
///
/// Extruder traversability needs no check of its own here: a later object's
/// whole envelope clearing every earlier object already leaves vertical
/// access free in this planar abstraction.
///
/// Throws MissingPlacement when the placement does not cover every object.
VerifyReport verify_solution(const Instance& instance, const Placement& placement, const Rat& sigma,
                             const VerifyOptions& options = {});

/// Grid-sampling overlap test used as an oracle in tests: true iff some grid
/// point strictly inside one polygon is strictly inside the other.
bool sample_overlap_oracle(const ConvexPolygon& a, const ConvexPolygon& b, const Rat& grid_step);

std::string to_string(ViolationKind kind);

} // namespace seqpack
