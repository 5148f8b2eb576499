#pragma once

// Exact 2D computational geometry over rationals.
//
// Every predicate here is decided with exact arithmetic; there is no epsilon
// anywhere. Polygons are convex, counterclockwise, and stored starting at
// the lexicographically smallest vertex so that equal polygons compare equal
// as plain vertex lists.

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "seqpack/rat.hpp"

namespace seqpack {

struct Vec2
{
    Rat dx;
    Rat dy;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Point2
{
    Rat x;
    Rat y;

    friend bool operator==(const Point2&, const Point2&) = default;
    friend std::strong_ordering operator<=>(const Point2& a, const Point2& b)
    {
        if (auto c = a.x <=> b.x; c != 0)
            return c;
        return a.y <=> b.y;
    }
};

struct Point3
{
    Rat x;
    Rat y;
    Rat z;

    friend bool operator==(const Point3&, const Point3&) = default;
};

inline Vec2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator+(const Point2& p, const Vec2& v) { return {p.x + v.dx, p.y + v.dy}; }
inline Vec2 operator-(const Vec2& v) { return {-v.dx, -v.dy}; }

inline Rat cross(const Vec2& u, const Vec2& v) { return u.dx * v.dy - u.dy * v.dx; }
inline Rat dot(const Vec2& u, const Vec2& v) { return u.dx * v.dx + u.dy * v.dy; }

/// Twice the signed area of triangle (a, b, c); positive when counterclockwise.
inline Rat orient(const Point2& a, const Point2& b, const Point2& c) { return cross(b - a, c - a); }

struct Segment
{
    Point2 p;
    Point2 q;

    Vec2 direction() const { return q - p; }
    friend bool operator==(const Segment&, const Segment&) = default;
};

class ConvexPolygon
{
public:
    /// Validates strict convexity and CCW orientation, then rotates the list
    /// to start at the smallest vertex. Throws InvalidPolygon.
    static ConvexPolygon from_ccw(std::vector<Point2> vertices);

    /// Axis-aligned rectangle [x0, x1] x [y0, y1].
    static ConvexPolygon rectangle(const Rat& x0, const Rat& y0, const Rat& x1, const Rat& y1);

    std::size_t size() const { return m_vertices.size(); }
    const Point2& vertex(std::size_t i) const { return m_vertices[i % m_vertices.size()]; }
    const std::vector<Point2>& vertices() const { return m_vertices; }

    /// Edge i runs from vertex(i) to vertex(i + 1).
    Segment edge(std::size_t i) const { return {vertex(i), vertex(i + 1)}; }
    Vec2 edge_direction(std::size_t i) const { return vertex(i + 1) - vertex(i); }

    /// Twice the (positive) area.
    Rat doubled_area() const;

    auto begin() const { return m_vertices.begin(); }
    auto end() const { return m_vertices.end(); }

    friend bool operator==(const ConvexPolygon&, const ConvexPolygon&) = default;

private:
    explicit ConvexPolygon(std::vector<Point2> vertices) : m_vertices(std::move(vertices)) {}

    std::vector<Point2> m_vertices;
};

enum class Location { Inside, OnBoundary, Outside };
enum class Contact { Disjoint, Touching, Overlapping };

/// Andrew's monotone chain. Throws DegenerateInput when fewer than three
/// distinct points remain or all are collinear.
ConvexPolygon convex_hull(std::span<const Point2> points);

/// Rotating-edge merge of the two CCW edge sequences.
ConvexPolygon minkowski_sum(const ConvexPolygon& a, const ConvexPolygon& b);

Location point_in_convex_polygon(const Point2& p, const ConvexPolygon& poly);

/// Closed-segment intersection, including endpoint contact and collinear overlap.
bool segments_intersect(const Segment& s1, const Segment& s2);

/// True iff the segments cross at a single point interior to both.
bool segments_cross_properly(const Segment& s1, const Segment& s2);

bool edges_parallel(const Vec2& u, const Vec2& v);

/// OVERLAPPING iff interiors intersect, TOUCHING iff only boundaries meet.
Contact polygons_disjoint(const ConvexPolygon& a, const ConvexPolygon& b);

bool polygon_inside_polygon(const ConvexPolygon& inner, const ConvexPolygon& outer);

/// center + sigma * (v - center) for every vertex. Throws InvalidScale if sigma <= 0.
ConvexPolygon scale_about(const ConvexPolygon& poly, const Rat& sigma, const Point2& center);

ConvexPolygon translate(const ConvexPolygon& poly, const Vec2& offset);

/// Drops z and removes duplicates, keeping first-occurrence order.
std::vector<Point2> project_xy(std::span<const Point3> points);

/// Exact area-weighted centroid.
Point2 polygon_centroid(const ConvexPolygon& poly);

/// Intersection of two convex polygons as a (possibly degenerate) vertex
/// list; empty when the closed sets are disjoint.
std::vector<Point2> clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clip);

} // namespace seqpack
