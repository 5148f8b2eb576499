// Acceptance run: prints one PASS/FAIL line per criterion 1-8.
// Usage: acceptance [criterion numbers...]   (default: all)
//
// Placements produced by every solve in the run feed criterion 1, so its
// line is decided last but printed first.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "seqpack/bench.hpp"
#include "seqpack/cegar.hpp"
#include "seqpack/geometry.hpp"
#include "seqpack/io.hpp"
#include "seqpack/render.hpp"
#include "seqpack/verify.hpp"
#include "support/oracles.hpp"

using namespace seqpack;

namespace {

struct Verdict
{
    bool pass = false;
    std::string detail;
};

struct Soundness
{
    std::size_t cuboid = 0;
    std::size_t complex = 0;
    std::size_t other = 0;
    std::size_t failures = 0;
    std::vector<std::string> notes;

    std::size_t total() const { return cuboid + complex + other; }
};

Soundness g_sound;

enum class Origin { Cuboid, Complex, Other };

// Solver config whose callback re-verifies and tallies every placement.
SolverConfig tallying(const Instance& inst, Origin origin)
{
    SolverConfig config;
    const Instance* p = &inst;
    config.on_placement = [p, origin](const Rat& sigma, const Placement& placement) {
        const VerifyReport r = verify_solution(*p, placement, sigma);
        if (!r.ok) {
            ++g_sound.failures;
            if (g_sound.notes.size() < 5)
                g_sound.notes.push_back(to_string(r.violations.front().kind) + " " + r.violations.front().witness);
        }
        switch (origin) {
        case Origin::Cuboid: ++g_sound.cuboid; break;
        case Origin::Complex: ++g_sound.complex; break;
        case Origin::Other: ++g_sound.other; break;
        }
    };
    return config;
}

// certify() raises logic_error when a solver model fails verification.
SolveOutcome tallied_solve(const Instance& inst, Origin origin)
{
    try {
        return solve(inst, tallying(inst, origin));
    } catch (const std::logic_error& e) {
        ++g_sound.failures;
        if (g_sound.notes.size() < 5)
            g_sound.notes.push_back(e.what());
        SolveOutcome out;
        out.status = SolveStatus::Timeout;
        return out;
    }
}

ConvexPolygon rect(long w, long h)
{
    return ConvexPolygon::rectangle(Rat(0), Rat(0), Rat(w), Rat(h));
}

Instance on_default_plate(std::vector<PrintObject> objects)
{
    const GeneratorOptions g;
    return Instance{Plate(ConvexPolygon::rectangle(Rat(0), Rat(0), g.plate_width, g.plate_height)),
                    Extruder(g.extruder),
                    std::move(objects),
                    g.params,
                    {}};
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- C2

Verdict c2_geometry()
{
    Rng rng(20260502);
    const Rat step(1, 4);

    std::size_t contact_pairs = 0, overlap_resolved = 0, contact_bad = 0;
    for (int i = 0; i < 1200; ++i) {
        const ConvexPolygon a = oracle::random_convex(rng, 0, 0, 12, 12, static_cast<int>(rng.uniform(3, 8)));
        const ConvexPolygon b = oracle::random_convex(rng, rng.uniform(0, 8), rng.uniform(0, 8), 12, 12,
                                                      static_cast<int>(rng.uniform(3, 8)));
        const Contact c = polygons_disjoint(a, b);
        const std::vector<Point2> inter = oracle::clip(a.vertices(), b.vertices());
        const Rat area = inter.size() >= 3 ? oracle::area(inter) : Rat(0);
        const bool sampled = sample_overlap_oracle(a, b, step);
        bool ok = true;
        if (c == Contact::Overlapping) {
            ok = area.sign() > 0;
            // Inradius of the overlap exceeds area / perimeter; above one grid
            // step a sample point is guaranteed to land inside it.
            if (ok && area > step * oracle::perimeter_bound(inter)) {
                ok = sampled;
                ++overlap_resolved;
            }
        } else {
            ok = !sampled && area.is_zero();
        }
        ++contact_pairs;
        if (!ok)
            ++contact_bad;
    }

    std::size_t mink_bad = 0;
    const std::size_t mink_pairs = 1000;
    for (std::size_t i = 0; i < mink_pairs; ++i) {
        const ConvexPolygon a = oracle::random_convex(rng, -20, -20, 40, 40, static_cast<int>(rng.uniform(3, 12)));
        const ConvexPolygon b = oracle::random_convex(rng, -10, -10, 20, 20, static_cast<int>(rng.uniform(3, 12)));
        if (!(minkowski_sum(a, b) == ConvexPolygon::from_ccw(oracle::pairwise_sum_hull(a, b))))
            ++mink_bad;
    }

    std::size_t seg_bad = 0, seg_hits = 0;
    const std::size_t seg_pairs = 12000;
    for (std::size_t i = 0; i < seg_pairs; ++i) {
        // Small coordinates make collinear and endpoint contact common.
        const auto p = [&] { return Point2{Rat(rng.uniform(0, 6)), Rat(rng.uniform(0, 6))}; };
        const Point2 a = p(), b = p(), c = p(), d = p();
        const bool got = segments_intersect({a, b}, {c, d});
        if (got != oracle::orientation_intersect(a, b, c, d))
            ++seg_bad;
        seg_hits += got;
    }

    Verdict v;
    v.pass = contact_bad == 0 && mink_bad == 0 && seg_bad == 0 && contact_pairs >= 1000 && overlap_resolved > 0;
    v.detail = fmt("contact %zu pairs (%zu resolvable overlaps) %zu mismatches; minkowski %zu pairs %zu mismatches; "
                   "segments %zu pairs (%zu intersecting) %zu mismatches",
                   contact_pairs, overlap_resolved, contact_bad, mink_pairs, mink_bad, seg_pairs, seg_hits, seg_bad);
    return v;
}

// ---------------------------------------------------------------- C3

// k <= 6 boxes; SAT ones fit a 3 x 2 grid of 72 mm cells, UNSAT ones carry
// two boxes wider than half the plate and taller than half of it.
Instance c3_instance(std::size_t index, bool& expect_sat)
{
    Rng rng(derive_seed(33, index, 0));
    const std::size_t k = static_cast<std::size_t>(rng.uniform(1, 6));
    expect_sat = index % 2 == 0;
    if (expect_sat) {
        Instance inst = gen_cuboids(k, derive_seed(3, index, k));
        return inst;
    }
    std::vector<PrintObject> objects;
    for (int b = 0; b < 2; ++b)
        objects.push_back({fmt("big%d", b), rect(rng.uniform(126, 180), rng.uniform(106, 160)), {}, std::nullopt});
    for (std::size_t j = 2; j < std::max<std::size_t>(k, 2); ++j)
        objects.push_back({fmt("o%02zu", j), rect(rng.uniform(8, 64), rng.uniform(8, 64)), {}, std::nullopt});
    expect_sat = false;
    return on_default_plate(std::move(objects));
}

Verdict c3_agreement()
{
    const std::size_t n = 200;
    const Rat eps(1, 128);
    std::size_t sat = 0, unsat = 0, bad = 0;
    std::vector<std::string> notes;
    for (std::size_t i = 0; i < n; ++i) {
        bool expect_sat = false;
        Instance lazy = c3_instance(i, expect_sat);
        // Agreement is the point here, not speed: a budget large enough that
        // neither mode stops its scale search early.
        lazy.params.timeout_ms = 60000;
        Instance eager = lazy;
        lazy.params.mode = SolveMode::Cegar;
        eager.params.mode = SolveMode::Eager;
        const SolveOutcome a = tallied_solve(lazy, Origin::Cuboid);
        const SolveOutcome b = tallied_solve(eager, Origin::Cuboid);
        bool ok = a.status == b.status && !a.partial && !b.partial &&
                  a.status == (expect_sat ? SolveStatus::Sat : SolveStatus::Unsat);
        if (ok && a.status == SolveStatus::Sat)
            ok = abs(*a.sigma_star - *b.sigma_star) <= eps * Rat(2);
        if (!ok) {
            ++bad;
            if (notes.size() < 3)
                notes.push_back(fmt("#%zu %s/%s", i, to_string(a.status).c_str(), to_string(b.status).c_str()));
        }
        (expect_sat ? sat : unsat)++;
    }
    Verdict v;
    v.pass = bad == 0;
    v.detail = fmt("%zu instances (%zu sat, %zu unsat by construction), %zu disagreements", n, sat, unsat, bad);
    for (const std::string& s : notes)
        v.detail += " " + s;
    return v;
}

// ---------------------------------------------------------------- C4

// Decision problem at sigma = 1 under the 8 s budget. An instance counts as
// solved when a certified placement comes back before the deadline.
Verdict c4_complex()
{
    std::size_t cegar_total = 0, eager_total = 0, plni_bad = 0;
    std::string per_k;
    for (std::size_t k : {4u, 6u, 8u}) {
        std::size_t cegar_k = 0, eager_k = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            Instance inst = gen_complex(k, derive_seed(44, k, seed));
            inst.params.optimize_sigma = false;
            inst.params.timeout_ms = 8000;
            inst.params.mode = SolveMode::Cegar;
            const SolveOutcome lazy = tallied_solve(inst, Origin::Complex);
            inst.params.mode = SolveMode::Eager;
            const SolveOutcome eager = tallied_solve(inst, Origin::Complex);
            if (lazy.status == SolveStatus::Sat) {
                ++cegar_k;
                if (lazy.stats.constraints_added >= lazy.stats.full_plni_constraints)
                    ++plni_bad;
            }
            if (eager.status == SolveStatus::Sat)
                ++eager_k;
        }
        per_k += fmt(" k=%zu %zu/%zu", k, cegar_k, eager_k);
        cegar_total += cegar_k;
        eager_total += eager_k;
    }
    Verdict v;
    v.pass = cegar_total >= eager_total && plni_bad == 0;
    v.detail = fmt("solved cegar/eager:%s; total %zu/%zu; solved cegar runs using full PLnI: %zu", per_k.c_str(),
                   cegar_total, eager_total, plni_bad);
    return v;
}

// ---------------------------------------------------------------- C5

Verdict c5_bracket()
{
    const Rat eps(1, 128);
    std::size_t checked = 0, bad = 0, partial = 0;
    std::vector<std::string> notes;
    for (std::size_t k = 1; k <= 5; ++k)
        for (std::uint64_t r = 0; r < 10; ++r) {
            Instance inst = gen_cuboids(k, derive_seed(55, k, r));
            const SolveOutcome out = tallied_solve(inst, Origin::Cuboid);
            ++checked;
            bool ok = out.status == SolveStatus::Sat && out.sigma_star && out.placement &&
                      *out.sigma_star - out.sigma_lo <= eps;
            partial += out.partial;
            if (ok)
                ok = verify_solution(inst, *out.placement, *out.sigma_star).ok;
            if (ok) {
                CegarSolver fresh(inst, tallying(inst, Origin::Cuboid), true);
                const BoundedResult hi = fresh.solve_bounded(*out.sigma_star);
                ok = hi.status == BoundedStatus::Sat && hi.placement &&
                     verify_solution(inst, *hi.placement, *out.sigma_star).ok;
            }
            if (ok && out.sigma_lo.sign() > 0) {
                CegarSolver fresh(inst, tallying(inst, Origin::Cuboid), true);
                ok = fresh.solve_bounded(out.sigma_lo).status == BoundedStatus::Unsat;
            }
            if (!ok) {
                ++bad;
                if (notes.size() < 3)
                    notes.push_back(fmt("k%zu r%llu", k, static_cast<unsigned long long>(r)));
            }
        }

    std::size_t closed_bad = 0;
    const std::vector<long> sides{10, 37, 64, 99, 128, 150, 177, 200, 209, 210};
    for (long s : sides) {
        Instance inst = on_default_plate({{"sq", rect(s, s), {}, std::nullopt}});
        const SolveOutcome out = tallied_solve(inst, Origin::Other);
        const Rat exact(s, 210);
        if (out.status != SolveStatus::Sat || !(out.sigma_lo < exact) || !(exact <= *out.sigma_star) ||
            abs(*out.sigma_star - exact) > eps)
            ++closed_bad;
    }

    Verdict v;
    v.pass = bad == 0 && closed_bad == 0;
    v.detail = fmt("%zu instances re-checked at sigma+ and sigma0, %zu failures (%zu partial); "
                   "closed form on %zu squares, %zu off",
                   checked, bad, partial, sides.size(), closed_bad);
    for (const std::string& s : notes)
        v.detail += " " + s;
    return v;
}

// ---------------------------------------------------------------- C6

Verdict c6_desk()
{
    const SuiteConfig full = full_protocol_config();
    const GeneratorOptions& g = full.generator;
    const bool params_ok = g.plate_width == Rat(250) && g.plate_height == Rat(210) && g.dim_min == 8 &&
                           g.dim_max == 64 && full.k_min == 1 && full.k_max == 32 && full.repeats == 10 &&
                           full.timeout_ms == 8000 && full.modes.size() == 2 && full.corpus == Corpus::Cuboids &&
                           suite_instances(full).size() == 320;

    const SuiteConfig desk = desk_config();
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteResult result = run_suite(desk);
    const double wall = seconds_since(t0);

    std::size_t sat = 0, timeouts = 0, uncertified = 0;
    for (const BenchRecord& r : result.records) {
        sat += r.status == SolveStatus::Sat;
        timeouts += r.status == SolveStatus::Timeout;
        if (r.sigma_star && !r.certified)
            ++uncertified;
    }
    Verdict v;
    v.pass = params_ok && wall < 15 * 60 && uncertified == 0;
    v.detail = fmt("generator parameters %s; desk suite %zu runs in %.1f s (limit 900 s), %zu sat, %zu timeout, "
                   "%zu uncertified",
                   params_ok ? "match" : "DIFFER", result.records.size(), wall, sat, timeouts, uncertified);
    return v;
}

// ---------------------------------------------------------------- C7

Instance c7_instance(std::uint64_t seed)
{
    Rng rng(derive_seed(77, seed, 0));
    const long k = rng.uniform(4, 7);
    std::vector<PrintObject> objects;
    for (long j = 0; j < k; ++j) {
        const bool big = rng.uniform(0, 1) == 1;
        const long w = big ? rng.uniform(110, 170) : rng.uniform(8, 64);
        const long h = big ? rng.uniform(110, 170) : rng.uniform(8, 64);
        objects.push_back({fmt("o%ld", j), rect(w, h), {}, std::nullopt});
    }
    Instance inst = on_default_plate(std::move(objects));
    inst.params.optimize_sigma = false;
    return inst;
}

// Decremental greedy written from scratch: shrink the candidate prefix until
// the plate accepts it.
std::vector<std::vector<std::size_t>> greedy_plates(const Instance& inst)
{
    std::vector<std::vector<std::size_t>> plates;
    std::size_t next = 0;
    while (next < inst.objects.size()) {
        std::vector<std::size_t> prefix;
        for (std::size_t i = next; i < inst.objects.size(); ++i)
            prefix.push_back(i);
        while (!prefix.empty()) {
            Instance sub = inst.subset(prefix);
            if (tallied_solve(sub, Origin::Other).status == SolveStatus::Sat)
                break;
            prefix.pop_back();
        }
        if (prefix.empty())
            throw std::runtime_error("oracle: object does not fit alone");
        next += prefix.size();
        plates.push_back(std::move(prefix));
    }
    return plates;
}

Verdict c7_multi_plate()
{
    std::size_t instances = 0, bad = 0, plates_total = 0;
    std::vector<std::string> notes;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const Instance inst = c7_instance(seed);
        ++instances;
        // Plate placements belong to subset instances; they are checked below.
        const std::vector<PlateAssignment> plates = solve_multi_plate(inst);
        plates_total += plates.size();

        std::vector<int> seen(inst.objects.size(), 0);
        bool ok = true;
        for (const PlateAssignment& p : plates) {
            for (std::size_t i : p.objects)
                ++seen.at(i);
            const Instance sub = inst.subset(p.objects);
            const bool certified = p.outcome.status == SolveStatus::Sat && p.outcome.placement &&
                                   p.outcome.sigma_star &&
                                   verify_solution(sub, *p.outcome.placement, *p.outcome.sigma_star).ok;
            ++g_sound.other;
            g_sound.failures += !certified;
            ok = ok && certified;
        }
        for (int c : seen)
            ok = ok && c == 1;
        const auto expected = greedy_plates(inst);
        ok = ok && expected.size() == plates.size();
        for (std::size_t i = 0; ok && i < plates.size(); ++i)
            ok = plates[i].objects == expected[i];
        if (!ok) {
            ++bad;
            if (notes.size() < 3)
                notes.push_back(fmt("seed %llu: %zu plates vs oracle %zu", static_cast<unsigned long long>(seed),
                                    plates.size(), expected.size()));
        }
    }
    Verdict v;
    v.pass = bad == 0 && plates_total > instances;
    v.detail = fmt("%zu instances, %zu plates, %zu mismatches against the greedy oracle", instances, plates_total, bad);
    for (const std::string& s : notes)
        v.detail += " " + s;
    return v;
}

// ---------------------------------------------------------------- C8

struct RunImage
{
    std::vector<std::string> instance_texts;
    std::vector<std::string> statuses;
    std::vector<std::string> sigmas;
    std::vector<std::string> svgs;
};

RunImage c8_run()
{
    SuiteConfig config = desk_config();
    config.k_min = 1;
    config.k_max = 5;
    config.repeats = 3;
    config.seed = 8;
    RunImage img;
    for (const SuiteInstance& which : suite_instances(config)) {
        const Instance inst = make_suite_instance(config, which);
        img.instance_texts.push_back(print_instance(inst));
        const SolveOutcome out = tallied_solve(inst, Origin::Cuboid);
        img.statuses.push_back(to_string(out.status));
        img.sigmas.push_back(out.sigma_star ? out.sigma_star->str() : "-");
        if (out.status == SolveStatus::Sat)
            img.svgs.push_back(render_svg(inst, make_solution(inst, out, config.command)));
        else
            img.svgs.emplace_back();
    }
    return img;
}

Verdict c8_determinism()
{
    const RunImage a = c8_run();
    const RunImage b = c8_run();
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.instance_texts.size(); ++i)
        diff += a.instance_texts[i] != b.instance_texts[i] || a.statuses[i] != b.statuses[i] ||
                a.sigmas[i] != b.sigmas[i] || a.svgs[i] != b.svgs[i];
    std::size_t svgs = 0;
    for (const std::string& s : a.svgs)
        svgs += !s.empty();
    Verdict v;
    v.pass = diff == 0 && a.instance_texts.size() == b.instance_texts.size() && svgs > 0;
    v.detail = fmt("%zu instances solved twice, %zu SVGs compared, %zu differences", a.instance_texts.size(), svgs,
                   diff);
    return v;
}

// ---------------------------------------------------------------- C1

// Extra complex-corpus placements under the full scale search.
void c1_complex_runs()
{
    for (std::size_t k : {2u, 3u})
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            Instance inst = gen_complex(k, derive_seed(11, k, seed));
            inst.params.timeout_ms = 8000;
            tallied_solve(inst, Origin::Complex);
        }
}

Verdict c1_soundness()
{
    Verdict v;
    v.pass = g_sound.failures == 0 && g_sound.total() >= 500 && g_sound.cuboid > 0 && g_sound.complex > 0;
    v.detail = fmt("%zu placements verified (%zu cuboid, %zu complex, %zu other), %zu rejected", g_sound.total(),
                   g_sound.cuboid, g_sound.complex, g_sound.other, g_sound.failures);
    for (const std::string& s : g_sound.notes)
        v.detail += " [" + s + "]";
    return v;
}

Verdict guarded(const std::function<Verdict()>& f)
{
    try {
        return f();
    } catch (const std::exception& e) {
        return {false, std::string("exception: ") + e.what()};
    }
}

} // namespace

int main(int argc, char** argv)
{
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i)
        wanted.insert(std::atoi(argv[i]));
    if (wanted.empty())
        wanted = {1, 2, 3, 4, 5, 6, 7, 8};

    const std::map<int, std::pair<std::string, std::function<Verdict()>>> criteria{
        {2, {"geometry predicates agree with independent oracles", c2_geometry}},
        {3, {"CEGAR and eager agree on status and scale", c3_agreement}},
        {4, {"CEGAR solves at least as many complex instances as eager", c4_complex}},
        {5, {"scale bracket is tight and both ends re-check", c5_bracket}},
        {6, {"desk suite finishes within 15 minutes", c6_desk}},
        {7, {"multi-plate schedule matches the greedy oracle", c7_multi_plate}},
        {8, {"repeated runs are identical", c8_determinism}},
    };

    std::map<int, Verdict> verdicts;
    for (const auto& [id, entry] : criteria) {
        if (!wanted.contains(id))
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        verdicts[id] = guarded(entry.second);
        std::cerr << "  C" << id << " done in " << fmt("%.1f", seconds_since(t0)) << " s\n";
    }
    if (wanted.contains(1)) {
        const Verdict extra = guarded([] {
            c1_complex_runs();
            return Verdict{true, ""};
        });
        verdicts[1] = extra.pass ? c1_soundness() : extra;
    }

    bool all = true;
    for (int id = 1; id <= 8; ++id) {
        if (!verdicts.contains(id))
            continue;
        const Verdict& v = verdicts[id];
        const std::string title = id == 1 ? "every SAT placement passes independent verification" : criteria.at(id).first;
        std::cout << (v.pass ? "PASS" : "FAIL") << " C" << id << " " << title << ": " << v.detail << "\n";
        all = all && v.pass;
    }
    return all ? 0 : 1;
}
