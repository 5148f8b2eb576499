#pragma once

// Linear real arithmetic encoding of sequential packing constraints, and
// its SMT-LIB rendering.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "seqpack/geometry.hpp"
#include "seqpack/model.hpp"
#include "seqpack/rat.hpp"

namespace seqpack {

enum class VarKind : std::uint8_t { X, Y, T, TParam, TPrimeParam };

/// Decision variable: object coordinates X/Y/T, or a fresh segment
/// parameter t / t' owned by exactly one Lines-not-Intersect constraint.
struct VarRef
{
    VarKind kind;
    std::uint32_t index;

    static VarRef x(std::size_t i) { return {VarKind::X, static_cast<std::uint32_t>(i)}; }
    static VarRef y(std::size_t i) { return {VarKind::Y, static_cast<std::uint32_t>(i)}; }
    static VarRef t(std::size_t i) { return {VarKind::T, static_cast<std::uint32_t>(i)}; }

    /// SMT-LIB symbol: X3, Y3, T3, p7, q7.
    std::string name() const;

    friend bool operator==(const VarRef&, const VarRef&) = default;
    friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

using Assignment = std::map<VarRef, Rat>;

class LinTerm
{
public:
    LinTerm() = default;
    LinTerm(Rat constant) : m_constant(std::move(constant)) {}
    LinTerm(int constant) : m_constant(constant) {}
    LinTerm(VarRef var) { m_coefficients.emplace(var, Rat(1)); }

    LinTerm& operator+=(const LinTerm& other);
    LinTerm& operator-=(const LinTerm& other);
    LinTerm& operator*=(const Rat& factor);

    friend LinTerm operator+(LinTerm a, const LinTerm& b) { return a += b; }
    friend LinTerm operator-(LinTerm a, const LinTerm& b) { return a -= b; }
    friend LinTerm operator*(LinTerm a, const Rat& k) { return a *= k; }
    friend LinTerm operator*(const Rat& k, LinTerm a) { return a *= k; }

    /// Nonzero coefficients keyed by variable, in a fixed order.
    const std::map<VarRef, Rat>& coefficients() const { return m_coefficients; }
    const Rat& constant() const { return m_constant; }

    /// Throws UndeclaredVariable when the assignment misses a variable.
    Rat evaluate(const Assignment& values) const;

    friend bool operator==(const LinTerm&, const LinTerm&) = default;

private:
    std::map<VarRef, Rat> m_coefficients;
    Rat m_constant;
};

enum class Relation : std::uint8_t { Less, LessEq, Equal, GreaterEq, Greater };

/// term REL 0
struct LinConstraint
{
    LinTerm term;
    Relation relation;

    bool holds(const Assignment& values) const;
    friend bool operator==(const LinConstraint&, const LinConstraint&) = default;
};

class Formula
{
public:
    enum class Kind : std::uint8_t { And, Or, Implies, Not, Atom };

    static Formula atom(LinConstraint constraint);
    static Formula conj(std::vector<Formula> parts);
    static Formula disj(std::vector<Formula> parts);
    static Formula implies(Formula guard, Formula body);
    static Formula negate(Formula inner);

    Kind kind() const { return m_kind; }
    const std::vector<Formula>& children() const { return m_children; }
    /// Only valid for Kind::Atom.
    const LinConstraint& constraint() const { return *m_atom; }

    bool evaluate(const Assignment& values) const;
    void collect_vars(std::set<VarRef>& out) const;
    std::size_t atom_count() const;

    friend bool operator==(const Formula&, const Formula&) = default;

private:
    Kind m_kind = Kind::And;
    std::vector<Formula> m_children;
    std::optional<LinConstraint> m_atom;
};

/// Placement offset of a polygon: object variables or a fixed point.
struct Position
{
    LinTerm x;
    LinTerm y;

    static Position of(std::size_t object) { return {VarRef::x(object), VarRef::y(object)}; }
    static Position fixed(const Point2& p) { return {p.x, p.y}; }
};

/// Allocates t / t' parameters; ids are never reused within one allocator.
class FreshVars
{
public:
    std::pair<VarRef, VarRef> next_pair();
    std::uint32_t issued() const { return m_next; }

private:
    std::uint32_t m_next = 0;
};

// Constraint primitives. Polygons are given in local coordinates and placed
// at the symbolic offsets `a` / `b`.

/// Vertex `b_vertex` (placed at b) lies strictly on the outer side of the edge
/// a_vertex -> a_next (placed at a). Throws DegenerateEdge.
Formula encode_poh(const Position& a, const Point2& a_vertex, const Point2& a_next, const Position& b,
                   const Point2& b_vertex);

/// Non-strict inner-side counterpart of encode_poh.
Formula encode_pih(const Position& a, const Point2& a_vertex, const Point2& a_next, const Position& b,
                   const Point2& b_vertex);

/// Segment a0-a1 (at a) and segment b0-b1 (at b) share no point, expressed
/// with fresh parameters t, t'. Throws ParallelEdges or DegenerateEdge.
Formula encode_lni(const Position& a, const Point2& a0, const Point2& a1, const Position& b, const Point2& b0,
                   const Point2& b1, FreshVars& fresh);

/// Points-outside-Polygon: some vertex of each polygon is outside some edge
/// half-plane of the other.
Formula encode_pop(const Position& a, const ConvexPolygon& pa, const Position& b, const ConvexPolygon& pb);

/// Polygon-Lines-not-Intersect over every non-parallel edge pair, one
/// constraint per unordered pair.
Formula encode_plni(const Position& a, const ConvexPolygon& pa, const Position& b, const ConvexPolygon& pb,
                    FreshVars& fresh);

/// Number of conjuncts encode_plni produces.
std::size_t plni_size(const ConvexPolygon& pa, const ConvexPolygon& pb);

/// Polygon-inside-Polygon: every vertex of pa is on the inner side of every edge of pb.
Formula encode_pip(const Position& a, const ConvexPolygon& pa, const Position& b, const ConvexPolygon& pb);

/// T_i + eps < T_j  or  T_j + eps < T_i.
Formula encode_temporal_pair(std::size_t i, std::size_t j, const Rat& epsilon_t);

/// T_i < T_j as an atom.
Formula encode_before(std::size_t i, std::size_t j);

/// T_i < T_j  =>  PoP(hull_i, env_j) and PoP(env_j, hull_i) [and PLnI(hull_i, env_j)].
Formula encode_seq_pair(std::size_t i, std::size_t j, const ConvexPolygon& hull_i, const ConvexPolygon& envelope_j,
                        bool abstraction, FreshVars& fresh);

/// Object i's hull placed inside the plate scaled by sigma. Throws InvalidScale.
Formula encode_plate(std::size_t i, const ConvexPolygon& hull_i, const Rat& sigma, const Plate& plate);

enum class ConstraintOrigin : std::uint8_t { Temporal, Pop, PlniRefinement, Plate, PlniEager };

struct ConstraintTag
{
    ConstraintOrigin origin;
    std::size_t first = 0;
    std::size_t second = 0;
    std::size_t edge_a = 0;
    std::size_t edge_b = 0;
    std::optional<Rat> sigma;
};

struct TaggedFormula
{
    Formula formula;
    ConstraintTag tag;
};

/// The growing formula F: every constraint with its provenance.
class ConstraintSet
{
public:
    void add(Formula formula, ConstraintTag tag);

    const std::vector<TaggedFormula>& constraints() const { return m_constraints; }
    std::size_t size() const { return m_constraints.size(); }
    std::size_t count(ConstraintOrigin origin) const;
    std::set<VarRef> variables() const;

private:
    std::vector<TaggedFormula> m_constraints;
};

/// Per-instance builder holding hulls, envelopes and the fresh-variable pool.
class SeqEncoder
{
public:
    explicit SeqEncoder(const Instance& instance);

    std::size_t object_count() const { return m_hulls.size(); }
    const ConvexPolygon& hull(std::size_t i) const { return m_hulls[i]; }
    const ConvexPolygon& envelope(std::size_t i) const { return m_envelopes[i]; }

    /// Temporal separation plus the sequential implications; PLnI omitted
    /// when `abstraction` is true.
    ConstraintSet initial(bool abstraction);

    /// Plate containment assumptions for every object at scale sigma.
    std::vector<TaggedFormula> plate_assumptions(const Rat& sigma) const;

    /// T_i < T_j => LnI(edge a of hull_i, edge b of envelope_j).
    TaggedFormula refinement(std::size_t i, std::size_t j, std::size_t a, std::size_t b);

    /// PLnI conjuncts of the full formula summed over ordered pairs.
    std::size_t full_plni_size() const;

    FreshVars& fresh() { return m_fresh; }

private:
    Plate m_plate;
    Rat m_epsilon_t;
    std::vector<ConvexPolygon> m_hulls;
    std::vector<ConvexPolygon> m_envelopes;
    FreshVars m_fresh;
};

/// Exact SMT-LIB literal: 3, (- 3), (/ 1 3), (- (/ 1 3)).
std::string to_smtlib(const Rat& value);
std::string to_smtlib(const Formula& formula);

/// Complete QF_LRA script: declarations, one assert per formula, check-sat
/// and get-value over `query`. Throws UndeclaredVariable.
std::string emit_smtlib(const std::vector<Formula>& formulas, const std::set<VarRef>& declarations,
                        const std::vector<VarRef>& query);

/// Object coordinate variables X_i, Y_i, T_i for i < k, in that order per object.
std::vector<VarRef> object_variables(std::size_t k);

} // namespace seqpack
