#include "seqpack/encoder.hpp"

#include <sstream>

#include "seqpack/errors.hpp"

namespace seqpack {

std::string VarRef::name() const
{
    switch (kind) {
    case VarKind::X:
        return "X" + std::to_string(index);
    case VarKind::Y:
        return "Y" + std::to_string(index);
    case VarKind::T:
        return "T" + std::to_string(index);
    case VarKind::TParam:
        return "p" + std::to_string(index);
    case VarKind::TPrimeParam:
        return "q" + std::to_string(index);
    }
    return "?";
}

LinTerm& LinTerm::operator+=(const LinTerm& other)
{
    for (const auto& [var, coef] : other.m_coefficients) {
        Rat& slot = m_coefficients[var];
        slot += coef;
        if (slot.is_zero())
            m_coefficients.erase(var);
    }
    m_constant += other.m_constant;
    return *this;
}

LinTerm& LinTerm::operator-=(const LinTerm& other)
{
    return *this += other * Rat(-1);
}

LinTerm& LinTerm::operator*=(const Rat& factor)
{
    if (factor.is_zero()) {
        m_coefficients.clear();
        m_constant = Rat(0);
        return *this;
    }
    for (auto& [var, coef] : m_coefficients)
        coef *= factor;
    m_constant *= factor;
    return *this;
}

Rat LinTerm::evaluate(const Assignment& values) const
{
    Rat sum = m_constant;
    for (const auto& [var, coef] : m_coefficients) {
        auto it = values.find(var);
        if (it == values.end())
            throw UndeclaredVariable("no value for variable " + var.name());
        sum += coef * it->second;
    }
    return sum;
}

bool LinConstraint::holds(const Assignment& values) const
{
    const int s = term.evaluate(values).sign();
    switch (relation) {
    case Relation::Less:
        return s < 0;
    case Relation::LessEq:
        return s <= 0;
    case Relation::Equal:
        return s == 0;
    case Relation::GreaterEq:
        return s >= 0;
    case Relation::Greater:
        return s > 0;
    }
    return false;
}

Formula Formula::atom(LinConstraint constraint)
{
    Formula f;
    f.m_kind = Kind::Atom;
    f.m_atom = std::move(constraint);
    return f;
}

Formula Formula::conj(std::vector<Formula> parts)
{
    Formula f;
    f.m_kind = Kind::And;
    f.m_children = std::move(parts);
    return f;
}

Formula Formula::disj(std::vector<Formula> parts)
{
    Formula f;
    f.m_kind = Kind::Or;
    f.m_children = std::move(parts);
    return f;
}

Formula Formula::implies(Formula guard, Formula body)
{
    Formula f;
    f.m_kind = Kind::Implies;
    f.m_children.push_back(std::move(guard));
    f.m_children.push_back(std::move(body));
    return f;
}

Formula Formula::negate(Formula inner)
{
    Formula f;
    f.m_kind = Kind::Not;
    f.m_children.push_back(std::move(inner));
    return f;
}

bool Formula::evaluate(const Assignment& values) const
{
    switch (m_kind) {
    case Kind::Atom:
        return m_atom->holds(values);
    case Kind::And:
        for (const Formula& c : m_children)
            if (!c.evaluate(values))
                return false;
        return true;
    case Kind::Or:
        for (const Formula& c : m_children)
            if (c.evaluate(values))
                return true;
        return false;
    case Kind::Implies:
        return !m_children[0].evaluate(values) || m_children[1].evaluate(values);
    case Kind::Not:
        return !m_children[0].evaluate(values);
    }
    return false;
}

void Formula::collect_vars(std::set<VarRef>& out) const
{
    if (m_kind == Kind::Atom) {
        for (const auto& [var, coef] : m_atom->term.coefficients())
            out.insert(var);
        return;
    }
    for (const Formula& c : m_children)
        c.collect_vars(out);
}

std::size_t Formula::atom_count() const
{
    if (m_kind == Kind::Atom)
        return 1;
    std::size_t n = 0;
    for (const Formula& c : m_children)
        n += c.atom_count();
    return n;
}

std::pair<VarRef, VarRef> FreshVars::next_pair()
{
    const std::uint32_t id = m_next++;
    return {VarRef{VarKind::TParam, id}, VarRef{VarKind::TPrimeParam, id}};
}

namespace {

Formula half_plane(const Position& a, const Point2& a_vertex, const Point2& a_next, const Position& b,
                   const Point2& b_vertex, Relation relation)
{
    if (a_vertex == a_next)
        throw DegenerateEdge("edge endpoints coincide");
    const Vec2 u = a_next - a_vertex;
    // ((B_b + P_B) - (A_a + P_A)) . (u.y, -u.x)
    const LinTerm dx = LinTerm(b_vertex.x) + b.x - LinTerm(a_vertex.x) - a.x;
    const LinTerm dy = LinTerm(b_vertex.y) + b.y - LinTerm(a_vertex.y) - a.y;
    return Formula::atom({dx * u.dy - dy * u.dx, relation});
}

} // namespace

Formula encode_poh(const Position& a, const Point2& a_vertex, const Point2& a_next, const Position& b,
                   const Point2& b_vertex)
{
    return half_plane(a, a_vertex, a_next, b, b_vertex, Relation::Greater);
}

Formula encode_pih(const Position& a, const Point2& a_vertex, const Point2& a_next, const Position& b,
                   const Point2& b_vertex)
{
    return half_plane(a, a_vertex, a_next, b, b_vertex, Relation::LessEq);
}

Formula encode_lni(const Position& a, const Point2& a0, const Point2& a1, const Position& b, const Point2& b0,
                   const Point2& b1, FreshVars& fresh)
{
    if (a0 == a1 || b0 == b1)
        throw DegenerateEdge("segment endpoints coincide");
    const Vec2 u = a1 - a0;
    const Vec2 v = b1 - b0;
    if (edges_parallel(u, v))
        throw ParallelEdges("segments are parallel");

    const auto [t, tp] = fresh.next_pair();
    // A_a + P_A + t U = B_b + P_B + t' V, per coordinate.
    const LinTerm ex = LinTerm(a0.x) + a.x + LinTerm(t) * u.dx - LinTerm(b0.x) - b.x - LinTerm(tp) * v.dx;
    const LinTerm ey = LinTerm(a0.y) + a.y + LinTerm(t) * u.dy - LinTerm(b0.y) - b.y - LinTerm(tp) * v.dy;

    std::vector<Formula> outside;
    outside.push_back(Formula::atom({LinTerm(t), Relation::Less}));
    outside.push_back(Formula::atom({LinTerm(t) - LinTerm(1), Relation::Greater}));
    outside.push_back(Formula::atom({LinTerm(tp), Relation::Less}));
    outside.push_back(Formula::atom({LinTerm(tp) - LinTerm(1), Relation::Greater}));

    std::vector<Formula> parts;
    parts.push_back(Formula::atom({ex, Relation::Equal}));
    parts.push_back(Formula::atom({ey, Relation::Equal}));
    parts.push_back(Formula::disj(std::move(outside)));
    return Formula::conj(std::move(parts));
}

Formula encode_pop(const Position& a, const ConvexPolygon& pa, const Position& b, const ConvexPolygon& pb)
{
    std::vector<Formula> b_outside_a;
    for (std::size_t i = 0; i < pa.size(); ++i)
        for (std::size_t j = 0; j < pb.size(); ++j)
            b_outside_a.push_back(encode_poh(a, pa.vertex(i), pa.vertex(i + 1), b, pb.vertex(j)));

    std::vector<Formula> a_outside_b;
    for (std::size_t j = 0; j < pb.size(); ++j)
        for (std::size_t i = 0; i < pa.size(); ++i)
            a_outside_b.push_back(encode_poh(b, pb.vertex(j), pb.vertex(j + 1), a, pa.vertex(i)));

    std::vector<Formula> parts;
    parts.push_back(Formula::disj(std::move(b_outside_a)));
    parts.push_back(Formula::disj(std::move(a_outside_b)));
    return Formula::conj(std::move(parts));
}

std::size_t plni_size(const ConvexPolygon& pa, const ConvexPolygon& pb)
{
    std::size_t n = 0;
    for (std::size_t i = 0; i < pa.size(); ++i)
        for (std::size_t j = 0; j < pb.size(); ++j)
            if (!edges_parallel(pa.edge_direction(i), pb.edge_direction(j)))
                ++n;
    return n;
}

Formula encode_plni(const Position& a, const ConvexPolygon& pa, const Position& b, const ConvexPolygon& pb,
                    FreshVars& fresh)
{
    std::vector<Formula> parts;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        for (std::size_t j = 0; j < pb.size(); ++j) {
            if (edges_parallel(pa.edge_direction(i), pb.edge_direction(j)))
                continue;
            parts.push_back(encode_lni(a, pa.vertex(i), pa.vertex(i + 1), b, pb.vertex(j), pb.vertex(j + 1), fresh));
        }
    }
    return Formula::conj(std::move(parts));
}

Formula encode_pip(const Position& a, const ConvexPolygon& pa, const Position& b, const ConvexPolygon& pb)
{
    std::vector<Formula> parts;
    for (std::size_t j = 0; j < pb.size(); ++j)
        for (std::size_t i = 0; i < pa.size(); ++i)
            parts.push_back(encode_pih(b, pb.vertex(j), pb.vertex(j + 1), a, pa.vertex(i)));
    return Formula::conj(std::move(parts));
}

Formula encode_before(std::size_t i, std::size_t j)
{
    return Formula::atom({LinTerm(VarRef::t(i)) - LinTerm(VarRef::t(j)), Relation::Less});
}

Formula encode_temporal_pair(std::size_t i, std::size_t j, const Rat& epsilon_t)
{
    const LinTerm ti(VarRef::t(i));
    const LinTerm tj(VarRef::t(j));
    std::vector<Formula> parts;
    parts.push_back(Formula::atom({ti + LinTerm(epsilon_t) - tj, Relation::Less}));
    parts.push_back(Formula::atom({tj + LinTerm(epsilon_t) - ti, Relation::Less}));
    return Formula::disj(std::move(parts));
}

Formula encode_seq_pair(std::size_t i, std::size_t j, const ConvexPolygon& hull_i, const ConvexPolygon& envelope_j,
                        bool abstraction, FreshVars& fresh)
{
    const Position pi = Position::of(i);
    const Position pj = Position::of(j);
    std::vector<Formula> body;
    body.push_back(encode_pop(pi, hull_i, pj, envelope_j));
    body.push_back(encode_pop(pj, envelope_j, pi, hull_i));
    if (!abstraction)
        body.push_back(encode_plni(pi, hull_i, pj, envelope_j, fresh));
    return Formula::implies(encode_before(i, j), Formula::conj(std::move(body)));
}

Formula encode_plate(std::size_t i, const ConvexPolygon& hull_i, const Rat& sigma, const Plate& plate)
{
    return encode_pip(Position::of(i), hull_i, Position::fixed({0, 0}), plate.scaled(sigma));
}

void ConstraintSet::add(Formula formula, ConstraintTag tag)
{
    m_constraints.push_back({std::move(formula), std::move(tag)});
}

std::size_t ConstraintSet::count(ConstraintOrigin origin) const
{
    std::size_t n = 0;
    for (const TaggedFormula& c : m_constraints)
        if (c.tag.origin == origin)
            ++n;
    return n;
}

std::set<VarRef> ConstraintSet::variables() const
{
    std::set<VarRef> vars;
    for (const TaggedFormula& c : m_constraints)
        c.formula.collect_vars(vars);
    return vars;
}

SeqEncoder::SeqEncoder(const Instance& instance)
    : m_plate(instance.plate), m_epsilon_t(instance.params.epsilon_t)
{
    m_hulls.reserve(instance.objects.size());
    m_envelopes.reserve(instance.objects.size());
    for (const PrintObject& obj : instance.objects) {
        m_hulls.push_back(obj.footprint);
        m_envelopes.push_back(build_envelope(obj, instance.extruder));
    }
}

ConstraintSet SeqEncoder::initial(bool abstraction)
{
    ConstraintSet set;
    const std::size_t k = object_count();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            set.add(encode_temporal_pair(i, j, m_epsilon_t), {ConstraintOrigin::Temporal, i, j, 0, 0, std::nullopt});
    const ConstraintOrigin origin = abstraction ? ConstraintOrigin::Pop : ConstraintOrigin::PlniEager;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j)
                continue;
            set.add(encode_seq_pair(i, j, m_hulls[i], m_envelopes[j], abstraction, m_fresh), {origin, i, j, 0, 0, std::nullopt});
        }
    }
    return set;
}

std::vector<TaggedFormula> SeqEncoder::plate_assumptions(const Rat& sigma) const
{
    std::vector<TaggedFormula> out;
    out.reserve(object_count());
    for (std::size_t i = 0; i < object_count(); ++i)
        out.push_back({encode_plate(i, m_hulls[i], sigma, m_plate), {ConstraintOrigin::Plate, i, i, 0, 0, sigma}});
    return out;
}

TaggedFormula SeqEncoder::refinement(std::size_t i, std::size_t j, std::size_t a, std::size_t b)
{
    const ConvexPolygon& hi = m_hulls[i];
    const ConvexPolygon& ej = m_envelopes[j];
    Formula lni = encode_lni(Position::of(i), hi.vertex(a), hi.vertex(a + 1), Position::of(j), ej.vertex(b),
                             ej.vertex(b + 1), m_fresh);
    return {Formula::implies(encode_before(i, j), std::move(lni)), {ConstraintOrigin::PlniRefinement, i, j, a, b, std::nullopt}};
}

std::size_t SeqEncoder::full_plni_size() const
{
    std::size_t n = 0;
    for (std::size_t i = 0; i < object_count(); ++i)
        for (std::size_t j = 0; j < object_count(); ++j)
            if (i != j)
                n += plni_size(m_hulls[i], m_envelopes[j]);
    return n;
}

std::string to_smtlib(const Rat& value)
{
    const Rat magnitude = abs(value);
    std::string body = magnitude.is_integer()
                           ? magnitude.numerator().get_str()
                           : "(/ " + magnitude.numerator().get_str() + " " + magnitude.denominator().get_str() + ")";
    return value.sign() < 0 ? "(- " + body + ")" : body;
}

namespace {

const char* relation_symbol(Relation r)
{
    switch (r) {
    case Relation::Less:
        return "<";
    case Relation::LessEq:
        return "<=";
    case Relation::Equal:
        return "=";
    case Relation::GreaterEq:
        return ">=";
    case Relation::Greater:
        return ">";
    }
    return "?";
}

void write_linear(std::ostream& os, const LinTerm& term)
{
    const auto& coefs = term.coefficients();
    if (coefs.empty()) {
        os << "0";
        return;
    }
    if (coefs.size() > 1)
        os << "(+";
    bool first = true;
    for (const auto& [var, coef] : coefs) {
        if (coefs.size() > 1 || !first)
            os << ' ';
        first = false;
        if (coef == Rat(1))
            os << var.name();
        else if (coef == Rat(-1))
            os << "(- " << var.name() << ')';
        else
            os << "(* " << to_smtlib(coef) << ' ' << var.name() << ')';
    }
    if (coefs.size() > 1)
        os << ')';
}

void write_formula(std::ostream& os, const Formula& f)
{
    switch (f.kind()) {
    case Formula::Kind::Atom: {
        // sum(c_i v_i) + k REL 0  is written as  sum(c_i v_i) REL -k
        const LinConstraint& c = f.constraint();
        os << '(' << relation_symbol(c.relation) << ' ';
        write_linear(os, c.term);
        os << ' ' << to_smtlib(-c.term.constant()) << ')';
        return;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        const bool is_and = f.kind() == Formula::Kind::And;
        if (f.children().empty()) {
            os << (is_and ? "true" : "false");
            return;
        }
        if (f.children().size() == 1) {
            write_formula(os, f.children().front());
            return;
        }
        os << (is_and ? "(and" : "(or");
        for (const Formula& c : f.children()) {
            os << ' ';
            write_formula(os, c);
        }
        os << ')';
        return;
    }
    case Formula::Kind::Implies:
        os << "(=> ";
        write_formula(os, f.children()[0]);
        os << ' ';
        write_formula(os, f.children()[1]);
        os << ')';
        return;
    case Formula::Kind::Not:
        os << "(not ";
        write_formula(os, f.children()[0]);
        os << ')';
        return;
    }
}

} // namespace

std::string to_smtlib(const Formula& formula)
{
    std::ostringstream os;
    write_formula(os, formula);
    return os.str();
}

std::string emit_smtlib(const std::vector<Formula>& formulas, const std::set<VarRef>& declarations,
                        const std::vector<VarRef>& query)
{
    std::set<VarRef> used;
    for (const Formula& f : formulas)
        f.collect_vars(used);
    used.insert(query.begin(), query.end());
    for (const VarRef& v : used)
        if (!declarations.contains(v))
            throw UndeclaredVariable("variable " + v.name() + " is used but not declared");

    std::ostringstream os;
    os << "(set-option :produce-models true)\n";
    os << "(set-logic QF_LRA)\n";
    for (const VarRef& v : declarations)
        os << "(declare-const " << v.name() << " Real)\n";
    for (const Formula& f : formulas)
        os << "(assert " << to_smtlib(f) << ")\n";
    os << "(check-sat)\n";
    if (!query.empty()) {
        os << "(get-value (";
        for (std::size_t i = 0; i < query.size(); ++i)
            os << (i ? " " : "") << query[i].name();
        os << "))\n";
    }
    return os.str();
}

std::vector<VarRef> object_variables(std::size_t k)
{
    std::vector<VarRef> vars;
    vars.reserve(3 * k);
    for (std::size_t i = 0; i < k; ++i) {
        vars.push_back(VarRef::x(i));
        vars.push_back(VarRef::y(i));
        vars.push_back(VarRef::t(i));
    }
    return vars;
}

} // namespace seqpack
