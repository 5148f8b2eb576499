#pragma once

// Problem and solution data model.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seqpack/geometry.hpp"
#include "seqpack/rat.hpp"

namespace seqpack {

struct PrintObject
{
    std::string id;
    /// Convex footprint in object-local coordinates (mm).
    ConvexPolygon footprint;
    /// 3D points the footprint was projected from, when ingested that way.
    std::vector<Point3> source_points;
    /// Informational only; the planar model ignores heights.
    std::optional<Rat> height;
};

/// Footprint of everything that moves with the nozzle. The nozzle sits at
/// the origin, which must lie inside or on the footprint.
class Extruder
{
public:
    explicit Extruder(ConvexPolygon footprint);

    const ConvexPolygon& footprint() const { return m_footprint; }

private:
    ConvexPolygon m_footprint;
};

class Plate
{
public:
    /// Center defaults to the polygon centroid.
    explicit Plate(ConvexPolygon polygon);
    Plate(ConvexPolygon polygon, Point2 center);

    const ConvexPolygon& polygon() const { return m_polygon; }
    const Point2& center() const { return m_center; }

    /// The plate shrunk by sigma about its center.
    ConvexPolygon scaled(const Rat& sigma) const;

private:
    ConvexPolygon m_polygon;
    Point2 m_center;
};

enum class SolveMode { Cegar, Eager };

struct SolverParams
{
    Rat epsilon_t{1};
    Rat epsilon_xy{1, 128};
    std::int64_t timeout_ms = 8000;
    SolveMode mode = SolveMode::Cegar;
    bool optimize_sigma = true;

    /// Throws InvalidInstance when a parameter is out of range.
    void validate() const;
};

struct Instance
{
    Plate plate;
    Extruder extruder;
    std::vector<PrintObject> objects;
    SolverParams params;
    /// Ingestion notes, e.g. footprints that had to be convex-hulled.
    std::vector<std::string> warnings;

    /// Checks object count, id uniqueness and parameters. Throws InvalidInstance.
    void validate() const;

    /// Same plate, extruder and params with the selected objects in the given order.
    Instance subset(const std::vector<std::size_t>& indices) const;
};

/// Minkowski sum of an object footprint with the extruder footprint: the
/// region swept by the print head while that object is printed.
ConvexPolygon build_envelope(const PrintObject& object, const Extruder& extruder);

/// Builds a footprint from arbitrary planar points, convex-hulling them.
/// Returns the hull and whether the input was already a convex CCW polygon.
std::pair<ConvexPolygon, bool> footprint_from_points(std::span<const Point2> points);

struct ObjectPlacement
{
    Rat x;
    Rat y;
    Rat t;

    friend bool operator==(const ObjectPlacement&, const ObjectPlacement&) = default;
};

struct Placement
{
    /// Indexed like Instance::objects.
    std::vector<ObjectPlacement> positions;

    friend bool operator==(const Placement&, const Placement&) = default;
};

/// Object indices in print order (ascending T). Throws TieError when two
/// times are not separated by more than epsilon_t.
std::vector<std::size_t> permutation_of(const Placement& placement, const Rat& epsilon_t);

enum class SolveStatus { Sat, Unsat, Timeout };

struct SolveStats
{
    std::size_t refinement_rounds = 0;
    std::size_t constraints_added = 0;
    std::size_t solver_calls = 0;
    std::size_t sigma_iterations = 0;
    /// PLnI conjunct count of the complete (eager) formula, for comparison.
    std::size_t full_plni_constraints = 0;
    std::int64_t wall_ms = 0;
};

struct SolveOutcome
{
    SolveStatus status = SolveStatus::Unsat;
    std::optional<Placement> placement;
    /// Smallest plate scale found feasible; the placement fits sigma_star * plate.
    std::optional<Rat> sigma_star;
    /// Largest scale answered infeasible (0 when none was).
    Rat sigma_lo;
    /// The deadline hit during the scale search; sigma_star is the best so far.
    bool partial = false;
    SolveStats stats;
    /// Version string reported by the solver process.
    std::string solver_version;
};

std::string to_string(SolveStatus status);
std::string to_string(SolveMode mode);
SolveMode parse_mode(const std::string& text);

} // namespace seqpack
