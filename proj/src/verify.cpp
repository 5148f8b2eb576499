#include "seqpack/verify.hpp"

#include <algorithm>

#include "seqpack/errors.hpp"

namespace seqpack {

namespace {

Vec2 offset_of(const ObjectPlacement& p)
{
    return {p.x, p.y};
}

std::string describe_overlap(const ConvexPolygon& earlier, const ConvexPolygon& later)
{
    for (std::size_t a = 0; a < earlier.size(); ++a)
        for (std::size_t b = 0; b < later.size(); ++b)
            if (segments_intersect(earlier.edge(a), later.edge(b)))
                return "hull edge " + std::to_string(a) + " meets envelope edge " + std::to_string(b);
    for (std::size_t a = 0; a < earlier.size(); ++a)
        if (point_in_convex_polygon(earlier.vertex(a), later) != Location::Outside)
            return "hull vertex " + std::to_string(a) + " inside envelope";
    for (std::size_t b = 0; b < later.size(); ++b)
        if (point_in_convex_polygon(later.vertex(b), earlier) != Location::Outside)
            return "envelope vertex " + std::to_string(b) + " inside hull";
    return "interiors overlap";
}

} // namespace

VerifyReport verify_solution(const Instance& instance, const Placement& placement, const Rat& sigma,
                             const VerifyOptions& options)
{
    const std::size_t k = instance.objects.size();
    if (placement.positions.size() != k)
        throw MissingPlacement("placement covers " + std::to_string(placement.positions.size()) + " of " +
                               std::to_string(k) + " objects");

    VerifyReport report;
    std::vector<ConvexPolygon> hulls;
    std::vector<ConvexPolygon> envelopes;
    hulls.reserve(k);
    envelopes.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Vec2 off = offset_of(placement.positions[i]);
        hulls.push_back(translate(instance.objects[i].footprint, off));
        envelopes.push_back(translate(build_envelope(instance.objects[i], instance.extruder), off));
    }

    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const Rat gap = abs(placement.positions[i].t - placement.positions[j].t);
            if (gap <= instance.params.epsilon_t)
                report.violations.push_back(
                    {ViolationKind::TemporalTie, i, j, "|T_i - T_j| = " + gap.str() + " <= epsilon_t"});
        }
    }

    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j || !(placement.positions[i].t < placement.positions[j].t))
                continue;
            const Contact c = polygons_disjoint(hulls[i], envelopes[j]);
            if (c == Contact::Overlapping || (options.reject_touching && c == Contact::Touching))
                report.violations.push_back({ViolationKind::SeqOverlap, i, j, describe_overlap(hulls[i], envelopes[j])});
        }
    }

    const ConvexPolygon plate = instance.plate.scaled(sigma);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t v = 0; v < hulls[i].size(); ++v) {
            if (point_in_convex_polygon(hulls[i].vertex(v), plate) == Location::Outside) {
                report.violations.push_back(
                    {ViolationKind::PlateEscape, i, i, "vertex " + std::to_string(v) + " outside plate"});
                break;
            }
        }
    }

    report.ok = report.violations.empty();
    return report;
}

bool sample_overlap_oracle(const ConvexPolygon& a, const ConvexPolygon& b, const Rat& grid_step)
{
    if (grid_step.sign() <= 0)
        throw InvalidScale("grid step must be positive");

    const auto probe = [&](const ConvexPolygon& p, const ConvexPolygon& q) {
        Rat x0 = p.vertex(0).x, x1 = x0, y0 = p.vertex(0).y, y1 = y0;
        for (const Point2& v : p) {
            x0 = min(x0, v.x);
            x1 = max(x1, v.x);
            y0 = min(y0, v.y);
            y1 = max(y1, v.y);
        }
        // Half-step offset keeps samples off axis-aligned edges.
        const Rat half = grid_step / Rat(2);
        for (Rat x = x0 + half; x < x1; x += grid_step)
            for (Rat y = y0 + half; y < y1; y += grid_step) {
                const Point2 s{x, y};
                if (point_in_convex_polygon(s, p) == Location::Inside &&
                    point_in_convex_polygon(s, q) == Location::Inside)
                    return true;
            }
        return false;
    };
    return probe(a, b) || probe(b, a);
}

std::string to_string(ViolationKind kind)
{
    switch (kind) {
    case ViolationKind::SeqOverlap:
        return "SEQ_OVERLAP";
    case ViolationKind::PlateEscape:
        return "PLATE_ESCAPE";
    case ViolationKind::TemporalTie:
        return "TEMPORAL_TIE";
    }
    return "?";
}

} // namespace seqpack
