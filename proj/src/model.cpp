#include "seqpack/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "seqpack/errors.hpp"

namespace seqpack {

Extruder::Extruder(ConvexPolygon footprint) : m_footprint(std::move(footprint))
{
    if (point_in_convex_polygon({0, 0}, m_footprint) == Location::Outside)
        throw InvalidInstance("extruder footprint must contain the nozzle point (0,0)");
}

Plate::Plate(ConvexPolygon polygon) : m_polygon(std::move(polygon)), m_center(polygon_centroid(m_polygon)) {}

Plate::Plate(ConvexPolygon polygon, Point2 center) : m_polygon(std::move(polygon)), m_center(std::move(center))
{
    if (point_in_convex_polygon(m_center, m_polygon) != Location::Inside)
        throw InvalidInstance("plate center must lie strictly inside the plate");
}

ConvexPolygon Plate::scaled(const Rat& sigma) const
{
    return scale_about(m_polygon, sigma, m_center);
}

void SolverParams::validate() const
{
    if (epsilon_t.sign() <= 0)
        throw InvalidInstance("epsilon_t must be positive");
    if (epsilon_xy.sign() <= 0 || epsilon_xy >= Rat(1))
        throw InvalidInstance("epsilon_xy must lie in (0, 1)");
    if (timeout_ms <= 0)
        throw InvalidInstance("timeout_ms must be positive");
}

void Instance::validate() const
{
    if (objects.empty())
        throw InvalidInstance("instance has no objects");
    std::set<std::string> ids;
    for (const PrintObject& obj : objects)
        if (!ids.insert(obj.id).second)
            throw InvalidInstance("duplicate object id '" + obj.id + "'");
    params.validate();
}

Instance Instance::subset(const std::vector<std::size_t>& indices) const
{
    Instance out{plate, extruder, {}, params, {}};
    out.objects.reserve(indices.size());
    for (std::size_t i : indices)
        out.objects.push_back(objects.at(i));
    return out;
}

ConvexPolygon build_envelope(const PrintObject& object, const Extruder& extruder)
{
    return minkowski_sum(object.footprint, extruder.footprint());
}

std::pair<ConvexPolygon, bool> footprint_from_points(std::span<const Point2> points)
{
    ConvexPolygon hull = convex_hull(points);
    bool already_convex = false;
    try {
        already_convex = ConvexPolygon::from_ccw({points.begin(), points.end()}) == hull;
    } catch (const InvalidPolygon&) {
        already_convex = false;
    }
    return {std::move(hull), already_convex};
}

std::vector<std::size_t> permutation_of(const Placement& placement, const Rat& epsilon_t)
{
    std::vector<std::size_t> order(placement.positions.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return placement.positions[a].t < placement.positions[b].t;
    });
    for (std::size_t k = 1; k < order.size(); ++k) {
        const Rat& prev = placement.positions[order[k - 1]].t;
        const Rat& cur = placement.positions[order[k]].t;
        if (cur - prev <= epsilon_t)
            throw TieError("objects " + std::to_string(order[k - 1]) + " and " + std::to_string(order[k]) +
                           " are not separated in time by more than epsilon_t");
    }
    return order;
}

std::string to_string(SolveStatus status)
{
    switch (status) {
    case SolveStatus::Sat:
        return "sat";
    case SolveStatus::Unsat:
        return "unsat";
    case SolveStatus::Timeout:
        return "timeout";
    }
    return "unknown";
}

std::string to_string(SolveMode mode)
{
    return mode == SolveMode::Cegar ? "cegar" : "eager";
}

SolveMode parse_mode(const std::string& text)
{
    if (text == "cegar")
        return SolveMode::Cegar;
    if (text == "eager")
        return SolveMode::Eager;
    throw InvalidInstance("unknown solve mode '" + text + "' (expected cegar or eager)");
}

} // namespace seqpack
