#include "seqpack/geometry.hpp"

#include <algorithm>
#include <set>

#include "seqpack/errors.hpp"

namespace seqpack {

namespace {

Rat shoelace(const std::vector<Point2>& pts)
{
    Rat sum;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point2& p = pts[i];
        const Point2& q = pts[(i + 1) % pts.size()];
        sum += p.x * q.y - p.y * q.x;
    }
    return sum;
}

// Index of the vertex with the smallest (y, x); the Minkowski merge starts there.
std::size_t lowest_vertex(const ConvexPolygon& poly)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < poly.size(); ++i) {
        const Point2& p = poly.vertex(i);
        const Point2& b = poly.vertex(best);
        if (p.y < b.y || (p.y == b.y && p.x < b.x))
            best = i;
    }
    return best;
}

bool on_collinear_segment(const Point2& p, const Point2& q, const Point2& r)
{
    return min(p.x, q.x) <= r.x && r.x <= max(p.x, q.x) && min(p.y, q.y) <= r.y && r.y <= max(p.y, q.y);
}

} // namespace

ConvexPolygon ConvexPolygon::from_ccw(std::vector<Point2> vertices)
{
    const std::size_t n = vertices.size();
    if (n < 3)
        throw InvalidPolygon("polygon needs at least 3 vertices, got " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = vertices[i];
        const Point2& b = vertices[(i + 1) % n];
        const Point2& c = vertices[(i + 2) % n];
        if (a == b)
            throw InvalidPolygon("duplicate consecutive vertex at index " + std::to_string(i));
        if (orient(a, b, c).sign() <= 0)
            throw InvalidPolygon("polygon is not strictly convex and counterclockwise at vertex " +
                                 std::to_string((i + 1) % n));
    }
    // Local convexity alone admits polygons that wind twice; the fan from
    // vertex 0 must also turn left throughout.
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (orient(vertices[0], vertices[i], vertices[i + 1]).sign() <= 0)
            throw InvalidPolygon("polygon winds more than once");

    auto first = std::min_element(vertices.begin(), vertices.end());
    std::rotate(vertices.begin(), first, vertices.end());
    return ConvexPolygon(std::move(vertices));
}

ConvexPolygon ConvexPolygon::rectangle(const Rat& x0, const Rat& y0, const Rat& x1, const Rat& y1)
{
    return from_ccw({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

Rat ConvexPolygon::doubled_area() const
{
    return shoelace(m_vertices);
}

ConvexPolygon convex_hull(std::span<const Point2> points)
{
    std::vector<Point2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3)
        throw DegenerateInput("convex hull needs at least 3 distinct points");

    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point2& p : pts) {
        while (k >= 2 && orient(hull[k - 2], hull[k - 1], p).sign() <= 0)
            --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && orient(hull[k - 2], hull[k - 1], pts[i]).sign() <= 0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3)
        throw DegenerateInput("convex hull input is collinear");
    return ConvexPolygon::from_ccw(std::move(hull));
}

ConvexPolygon minkowski_sum(const ConvexPolygon& a, const ConvexPolygon& b)
{
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    const std::size_t sa = lowest_vertex(a);
    const std::size_t sb = lowest_vertex(b);

    std::vector<Point2> out;
    out.reserve(n + m);
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < n || j < m) {
        const Point2& pa = a.vertex(sa + i);
        const Point2& pb = b.vertex(sb + j);
        out.push_back({pa.x + pb.x, pa.y + pb.y});
        // Edges arrive sorted by polar angle from the lowest vertex, so the
        // cross product orders them; equal directions advance together.
        int turn = 0;
        if (i < n && j < m)
            turn = cross(a.edge_direction(sa + i), b.edge_direction(sb + j)).sign();
        else
            turn = i < n ? 1 : -1;
        if (turn >= 0)
            ++i;
        if (turn <= 0)
            ++j;
    }
    return ConvexPolygon::from_ccw(std::move(out));
}

Location point_in_convex_polygon(const Point2& p, const ConvexPolygon& poly)
{
    bool boundary = false;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const int s = orient(poly.vertex(i), poly.vertex(i + 1), p).sign();
        if (s < 0)
            return Location::Outside;
        if (s == 0)
            boundary = true;
    }
    return boundary ? Location::OnBoundary : Location::Inside;
}

bool segments_intersect(const Segment& s1, const Segment& s2)
{
    const int d1 = orient(s2.p, s2.q, s1.p).sign();
    const int d2 = orient(s2.p, s2.q, s1.q).sign();
    const int d3 = orient(s1.p, s1.q, s2.p).sign();
    const int d4 = orient(s1.p, s1.q, s2.q).sign();

    if (d1 * d2 < 0 && d3 * d4 < 0)
        return true;
    if (d1 == 0 && on_collinear_segment(s2.p, s2.q, s1.p))
        return true;
    if (d2 == 0 && on_collinear_segment(s2.p, s2.q, s1.q))
        return true;
    if (d3 == 0 && on_collinear_segment(s1.p, s1.q, s2.p))
        return true;
    if (d4 == 0 && on_collinear_segment(s1.p, s1.q, s2.q))
        return true;
    return false;
}

bool segments_cross_properly(const Segment& s1, const Segment& s2)
{
    const int d1 = orient(s2.p, s2.q, s1.p).sign();
    const int d2 = orient(s2.p, s2.q, s1.q).sign();
    const int d3 = orient(s1.p, s1.q, s2.p).sign();
    const int d4 = orient(s1.p, s1.q, s2.q).sign();
    return d1 * d2 < 0 && d3 * d4 < 0;
}

bool edges_parallel(const Vec2& u, const Vec2& v)
{
    return cross(u, v).is_zero();
}

std::vector<Point2> clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clip)
{
    std::vector<Point2> current(subject.begin(), subject.end());
    for (std::size_t e = 0; e < clip.size() && !current.empty(); ++e) {
        const Point2& c0 = clip.vertex(e);
        const Point2& c1 = clip.vertex(e + 1);
        std::vector<Point2> next;
        for (std::size_t i = 0; i < current.size(); ++i) {
            const Point2& p = current[i];
            const Point2& q = current[(i + 1) % current.size()];
            const Rat sp = orient(c0, c1, p);
            const Rat sq = orient(c0, c1, q);
            if (sp.sign() >= 0)
                next.push_back(p);
            if ((sp.sign() > 0 && sq.sign() < 0) || (sp.sign() < 0 && sq.sign() > 0)) {
                const Rat t = sp / (sp - sq);
                next.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
            }
        }
        current = std::move(next);
    }
    return current;
}

Contact polygons_disjoint(const ConvexPolygon& a, const ConvexPolygon& b)
{
    bool contact = false;
    for (const Point2& v : a) {
        const Location loc = point_in_convex_polygon(v, b);
        if (loc == Location::Inside)
            return Contact::Overlapping;
        contact = contact || loc == Location::OnBoundary;
    }
    for (const Point2& v : b) {
        const Location loc = point_in_convex_polygon(v, a);
        if (loc == Location::Inside)
            return Contact::Overlapping;
        contact = contact || loc == Location::OnBoundary;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Segment ea = a.edge(i);
        for (std::size_t j = 0; j < b.size(); ++j) {
            const Segment eb = b.edge(j);
            if (segments_cross_properly(ea, eb))
                return Contact::Overlapping;
            contact = contact || segments_intersect(ea, eb);
        }
    }
    if (!contact)
        return Contact::Disjoint;

    // Boundaries meet without a strict witness: coincident or collinear
    // edges can still hide a shared interior, so measure the intersection.
    const std::vector<Point2> common = clip_convex(a, b);
    if (common.size() >= 3 && shoelace(common).sign() > 0)
        return Contact::Overlapping;
    return Contact::Touching;
}

bool polygon_inside_polygon(const ConvexPolygon& inner, const ConvexPolygon& outer)
{
    return std::all_of(inner.begin(), inner.end(), [&](const Point2& v) {
        return point_in_convex_polygon(v, outer) != Location::Outside;
    });
}

ConvexPolygon scale_about(const ConvexPolygon& poly, const Rat& sigma, const Point2& center)
{
    if (sigma.sign() <= 0)
        throw InvalidScale("scale factor must be positive, got " + sigma.str());
    std::vector<Point2> out;
    out.reserve(poly.size());
    for (const Point2& v : poly)
        out.push_back({center.x + sigma * (v.x - center.x), center.y + sigma * (v.y - center.y)});
    return ConvexPolygon::from_ccw(std::move(out));
}

ConvexPolygon translate(const ConvexPolygon& poly, const Vec2& offset)
{
    std::vector<Point2> out;
    out.reserve(poly.size());
    for (const Point2& v : poly)
        out.push_back(v + offset);
    return ConvexPolygon::from_ccw(std::move(out));
}

std::vector<Point2> project_xy(std::span<const Point3> points)
{
    std::vector<Point2> out;
    std::set<Point2> seen;
    for (const Point3& p : points) {
        Point2 q{p.x, p.y};
        if (seen.insert(q).second)
            out.push_back(std::move(q));
    }
    return out;
}

Point2 polygon_centroid(const ConvexPolygon& poly)
{
    Rat doubled_area;
    Rat cx;
    Rat cy;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& p = poly.vertex(i);
        const Point2& q = poly.vertex(i + 1);
        const Rat c = p.x * q.y - q.x * p.y;
        doubled_area += c;
        cx += (p.x + q.x) * c;
        cy += (p.y + q.y) * c;
    }
    const Rat denom = Rat(3) * doubled_area;
    return {cx / denom, cy / denom};
}

} // namespace seqpack
