#include "seqpack/cegar.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "seqpack/errors.hpp"
#include "seqpack/verify.hpp"

namespace seqpack {

namespace {

struct Box
{
    Rat x0, y0, x1, y1;
};

Box bounds(const ConvexPolygon& poly, const Rat& dx, const Rat& dy)
{
    Box b{poly.vertex(0).x, poly.vertex(0).y, poly.vertex(0).x, poly.vertex(0).y};
    for (const Point2& v : poly) {
        b.x0 = min(b.x0, v.x);
        b.y0 = min(b.y0, v.y);
        b.x1 = max(b.x1, v.x);
        b.y1 = max(b.y1, v.y);
    }
    b.x0 += dx;
    b.x1 += dx;
    b.y0 += dy;
    b.y1 += dy;
    return b;
}

bool boxes_meet(const Box& a, const Box& b)
{
    return a.x0 <= b.x1 && b.x0 <= a.x1 && a.y0 <= b.y1 && b.y0 <= a.y1;
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point since)
{
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - since).count();
}

} // namespace

CegarSolver::CegarSolver(const Instance& instance, const SolverConfig& config, bool abstraction)
    : m_instance(instance),
      m_config(config),
      m_abstraction(abstraction),
      m_encoder(instance),
      m_session(SolverSession::open(config.command)),
      m_start(std::chrono::steady_clock::now()),
      m_deadline(m_start + std::chrono::milliseconds(instance.params.timeout_ms))
{
    instance.validate();
    m_refinement_bound = m_encoder.full_plni_size();
    m_stats.full_plni_constraints = m_refinement_bound;
    m_formula = m_encoder.initial(abstraction);
    for (const TaggedFormula& c : m_formula.constraints())
        m_session.assert_base(c.formula);
}

std::chrono::milliseconds CegarSolver::remaining() const
{
    return std::chrono::duration_cast<std::chrono::milliseconds>(m_deadline - std::chrono::steady_clock::now());
}

Placement CegarSolver::placement_from(const Assignment& model) const
{
    Placement p;
    p.positions.reserve(m_encoder.object_count());
    for (std::size_t i = 0; i < m_encoder.object_count(); ++i)
        p.positions.push_back({model.at(VarRef::x(i)), model.at(VarRef::y(i)), model.at(VarRef::t(i))});
    return p;
}

std::vector<CegarSolver::EdgePairKey> CegarSolver::find_crossings(const Placement& placement) const
{
    std::vector<EdgePairKey> found;
    const std::size_t k = m_encoder.object_count();
    for (std::size_t i = 0; i < k; ++i) {
        const ObjectPlacement& pi = placement.positions[i];
        const ConvexPolygon& hull = m_encoder.hull(i);
        const Box hull_box = bounds(hull, pi.x, pi.y);
        for (std::size_t j = 0; j < k; ++j) {
            const ObjectPlacement& pj = placement.positions[j];
            if (i == j || !(pi.t < pj.t))
                continue;
            const ConvexPolygon& env = m_encoder.envelope(j);
            if (!boxes_meet(hull_box, bounds(env, pj.x, pj.y)))
                continue;
            const Vec2 oi{pi.x, pi.y};
            const Vec2 oj{pj.x, pj.y};
            for (std::size_t a = 0; a < hull.size(); ++a) {
                const Segment ea{hull.vertex(a) + oi, hull.vertex(a + 1) + oi};
                for (std::size_t b = 0; b < env.size(); ++b) {
                    if (edges_parallel(hull.edge_direction(a), env.edge_direction(b)))
                        continue;
                    const Segment eb{env.vertex(b) + oj, env.vertex(b + 1) + oj};
                    if (segments_intersect(ea, eb))
                        found.emplace_back(i, j, a, b);
                }
            }
        }
    }
    return found;
}

void CegarSolver::certify(const Placement& placement, const Rat& sigma) const
{
    const VerifyReport report = verify_solution(m_instance, placement, sigma);
    if (!report.ok) {
        // A model with no crossing among non-parallel edge pairs cannot
        // overlap: any overlap of convex polygons that is not containment
        // puts a boundary point on two non-parallel edges.
        std::ostringstream os;
        os << "internal error: model passed the crossing scan but failed verification ("
           << to_string(report.violations.front().kind) << ": " << report.violations.front().witness << ")";
        throw std::logic_error(os.str());
    }
    if (m_config.on_placement)
        m_config.on_placement(sigma, placement);
}

BoundedResult CegarSolver::solve_bounded(const Rat& sigma)
{
    if (sigma.sign() <= 0 || sigma > Rat(1))
        throw InvalidScale("plate scale must lie in (0, 1], got " + sigma.str());

    const std::vector<VarRef> query = object_variables(m_encoder.object_count());
    std::vector<TaggedFormula> found_in_scope;

    m_session.push();
    for (const TaggedFormula& c : m_encoder.plate_assumptions(sigma))
        m_session.assert_scoped(c.formula);

    const auto close_scope = [&] {
        if (!m_session.alive())
            return;
        m_session.pop();
        for (const TaggedFormula& r : found_in_scope)
            m_session.assert_base(r.formula);
    };

    for (;;) {
        const auto budget = remaining();
        if (budget.count() <= 0) {
            close_scope();
            return {BoundedStatus::Timeout, std::nullopt};
        }
        ++m_stats.solver_calls;
        const SmtResult r = m_session.check(query, budget);
        if (r.status == SmtStatus::Timeout || r.status == SmtStatus::Unknown) {
            close_scope();
            return {BoundedStatus::Timeout, std::nullopt};
        }
        if (r.status == SmtStatus::Unsat) {
            close_scope();
            return {BoundedStatus::Unsat, std::nullopt};
        }

        Placement placement = placement_from(*r.model);
        const std::vector<EdgePairKey> crossings =
            m_abstraction ? find_crossings(placement) : std::vector<EdgePairKey>{};
        if (crossings.empty()) {
            certify(placement, sigma);
            close_scope();
            return {BoundedStatus::Sat, std::move(placement)};
        }

        ++m_stats.refinement_rounds;
        if (m_stats.refinement_rounds > m_refinement_bound)
            throw std::logic_error("refinement loop exceeded the number of edge pairs");
        for (const auto& key : crossings) {
            const auto& [i, j, a, b] = key;
            if (!m_refined.insert(key).second)
                throw std::logic_error("solver model violates an asserted refinement");
            TaggedFormula tf = m_encoder.refinement(i, j, a, b);
            m_session.assert_scoped(tf.formula);
            m_formula.add(tf.formula, tf.tag);
            found_in_scope.push_back(std::move(tf));
            m_refinements.push_back({i, j, a, b, m_stats.refinement_rounds});
            ++m_stats.constraints_added;
        }
    }
}

SolveOutcome CegarSolver::solve()
{
    SolveOutcome out;
    out.solver_version = m_session.version();
    const auto finish = [&]() -> SolveOutcome {
        m_stats.wall_ms = elapsed_ms(m_start);
        out.stats = m_stats;
        return out;
    };

    BoundedResult full = solve_bounded(Rat(1));
    if (full.status == BoundedStatus::Unsat) {
        out.status = SolveStatus::Unsat;
        out.sigma_lo = Rat(1);
        return finish();
    }
    if (full.status == BoundedStatus::Timeout) {
        out.status = SolveStatus::Timeout;
        return finish();
    }

    out.status = SolveStatus::Sat;
    out.placement = std::move(full.placement);
    Rat sigma_hi(1);
    Rat sigma_lo(0);
    if (m_instance.params.optimize_sigma) {
        while (sigma_hi - sigma_lo > m_instance.params.epsilon_xy) {
            const Rat sigma = (sigma_hi + sigma_lo) / Rat(2);
            ++m_stats.sigma_iterations;
            BoundedResult r = solve_bounded(sigma);
            if (r.status == BoundedStatus::Sat) {
                sigma_hi = sigma;
                out.placement = std::move(r.placement);
            } else if (r.status == BoundedStatus::Unsat) {
                sigma_lo = sigma;
            } else {
                out.partial = true;
                break;
            }
        }
    }
    out.sigma_star = sigma_hi;
    out.sigma_lo = sigma_lo;
    return finish();
}

namespace {

SolveOutcome run(const Instance& instance, const SolverConfig& config, bool abstraction)
{
    CegarSolver solver(instance, config, abstraction);
    return solver.solve();
}

} // namespace

SolveOutcome solve_cegar(const Instance& instance, const SolverConfig& config)
{
    return run(instance, config, true);
}

SolveOutcome solve_eager(const Instance& instance, const SolverConfig& config)
{
    return run(instance, config, false);
}

SolveOutcome solve(const Instance& instance, const SolverConfig& config)
{
    return run(instance, config, instance.params.mode == SolveMode::Cegar);
}

std::vector<PlateAssignment> solve_multi_plate(const Instance& instance, const SolverConfig& config)
{
    instance.validate();

    Instance probe_base = instance;
    probe_base.params.optimize_sigma = false;
    for (std::size_t i = 0; i < instance.objects.size(); ++i) {
        const SolveOutcome alone = solve(probe_base.subset({i}), config);
        if (alone.status != SolveStatus::Sat)
            throw ObjectNeverFits("object '" + instance.objects[i].id + "' does not fit the plate on its own (" +
                                  to_string(alone.status) + ")");
    }

    std::vector<PlateAssignment> plates;
    std::vector<std::size_t> remaining(instance.objects.size());
    for (std::size_t i = 0; i < remaining.size(); ++i)
        remaining[i] = i;

    while (!remaining.empty()) {
        std::size_t take = remaining.size();
        std::optional<SolveOutcome> accepted;
        for (; take > 0; --take) {
            std::vector<std::size_t> prefix(remaining.begin(), remaining.begin() + static_cast<std::ptrdiff_t>(take));
            SolveOutcome outcome = solve(instance.subset(prefix), config);
            if (outcome.status == SolveStatus::Sat) {
                accepted = std::move(outcome);
                break;
            }
        }
        if (!accepted)
            throw ObjectNeverFits("object '" + instance.objects[remaining.front()].id +
                                  "' could not be placed on a fresh plate");
        plates.push_back({plates.size(),
                          std::vector<std::size_t>(remaining.begin(),
                                                   remaining.begin() + static_cast<std::ptrdiff_t>(take)),
                          std::move(*accepted)});
        remaining.erase(remaining.begin(), remaining.begin() + static_cast<std::ptrdiff_t>(take));
    }
    return plates;
}

} // namespace seqpack
