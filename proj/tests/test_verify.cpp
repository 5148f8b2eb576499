#include <doctest.h>

#include "seqpack/bench.hpp"
#include "seqpack/errors.hpp"
#include "seqpack/verify.hpp"
#include "support/oracles.hpp"

using namespace seqpack;

namespace {

ConvexPolygon square(long x, long y, long s)
{
    return ConvexPolygon::rectangle(Rat(x), Rat(y), Rat(x + s), Rat(y + s));
}

// Two 10 x 10 squares, 4 x 4 head, 100 x 100 plate.
Instance pair_instance()
{
    return Instance{Plate(square(0, 0, 100)),
                    Extruder(ConvexPolygon::rectangle(Rat(-2), Rat(-2), Rat(2), Rat(2))),
                    {{"a", square(0, 0, 10), {}, std::nullopt}, {"b", square(0, 0, 10), {}, std::nullopt}},
                    {},
                    {}};
}

Placement at(std::vector<std::array<long, 3>> xyt)
{
    Placement p;
    for (const auto& [x, y, t] : xyt)
        p.positions.push_back({Rat(x), Rat(y), Rat(t)});
    return p;
}

bool has(const VerifyReport& r, ViolationKind kind)
{
    for (const Violation& v : r.violations)
        if (v.kind == kind)
            return true;
    return false;
}

} // namespace

TEST_CASE("separated objects pass")
{
    const VerifyReport r = verify_solution(pair_instance(), at({{10, 10, 0}, {40, 10, 5}}), Rat(1));
    CHECK(r.ok);
    CHECK(r.violations.empty());
}

TEST_CASE("overlap between earlier hull and later envelope")
{
    // b's envelope spans x in [19, 33]; a's hull ends at x = 20.
    const VerifyReport r = verify_solution(pair_instance(), at({{10, 10, 0}, {21, 10, 5}}), Rat(1));
    CHECK_FALSE(r.ok);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].kind == ViolationKind::SeqOverlap);
    CHECK(r.violations[0].first == 0);
    CHECK(r.violations[0].second == 1);
    CHECK_FALSE(r.violations[0].witness.empty());
    CHECK(to_string(ViolationKind::SeqOverlap) == "SEQ_OVERLAP");

    // Swapping the print order flips which pair is reported.
    const VerifyReport swapped = verify_solution(pair_instance(), at({{10, 10, 5}, {21, 10, 0}}), Rat(1));
    REQUIRE(swapped.violations.size() == 1);
    CHECK(swapped.violations[0].first == 1);
    CHECK(swapped.violations[0].second == 0);
}

TEST_CASE("touching is allowed unless requested otherwise")
{
    // Envelope of b starts exactly at x = 20.
    const Placement p = at({{10, 10, 0}, {22, 10, 5}});
    CHECK(verify_solution(pair_instance(), p, Rat(1)).ok);
    const VerifyReport strict = verify_solution(pair_instance(), p, Rat(1), {.reject_touching = true});
    CHECK(has(strict, ViolationKind::SeqOverlap));
}

TEST_CASE("plate escape depends on sigma")
{
    // At sigma = 1/2 the plate is [25, 75]^2.
    const Placement p = at({{10, 10, 0}, {60, 60, 5}});
    CHECK(verify_solution(pair_instance(), p, Rat(1)).ok);
    const VerifyReport half = verify_solution(pair_instance(), p, Rat(1, 2));
    CHECK_FALSE(half.ok);
    REQUIRE(half.violations.size() == 1);
    CHECK(half.violations[0].kind == ViolationKind::PlateEscape);
    CHECK(half.violations[0].first == 0);
    CHECK(to_string(ViolationKind::PlateEscape) == "PLATE_ESCAPE");

    CHECK(has(verify_solution(pair_instance(), at({{95, 10, 0}, {40, 10, 5}}), Rat(1)), ViolationKind::PlateEscape));
}

TEST_CASE("print times must be separated")
{
    const VerifyReport r = verify_solution(pair_instance(), at({{10, 10, 0}, {60, 60, 1}}), Rat(1));
    CHECK(has(r, ViolationKind::TemporalTie));
    CHECK(verify_solution(pair_instance(), at({{10, 10, 0}, {60, 60, 2}}), Rat(1)).ok);
}

TEST_CASE("placement must cover every object")
{
    CHECK_THROWS_AS(verify_solution(pair_instance(), at({{10, 10, 0}}), Rat(1)), MissingPlacement);
}

TEST_CASE("sampling oracle")
{
    CHECK(sample_overlap_oracle(square(0, 0, 4), square(2, 2, 4), Rat(1, 2)));
    CHECK_FALSE(sample_overlap_oracle(square(0, 0, 4), square(4, 0, 4), Rat(1, 2)));
    CHECK_FALSE(sample_overlap_oracle(square(0, 0, 4), square(10, 10, 4), Rat(1)));
    CHECK_THROWS_AS(sample_overlap_oracle(square(0, 0, 4), square(2, 2, 4), Rat(0)), InvalidScale);
}

TEST_CASE("accepted placements never overlap by sampling")
{
    Rng rng(5);
    std::size_t accepted = 0, rejected = 0;
    for (int round = 0; round < 300; ++round) {
        Instance inst = pair_instance();
        inst.objects[0].footprint = oracle::random_convex(rng, 0, 0, 12, 12, 3 + round % 5);
        inst.objects[1].footprint = oracle::random_convex(rng, 0, 0, 12, 12, 3 + round % 4);
        Placement p;
        p.positions.push_back({Rat(30), Rat(30), Rat(0)});
        p.positions.push_back({Rat(rng.uniform(40, 100), 2), Rat(rng.uniform(40, 100), 2), Rat(5)});
        const VerifyReport r = verify_solution(inst, p, Rat(1));
        const ConvexPolygon earlier = translate(inst.objects[0].footprint, {p.positions[0].x, p.positions[0].y});
        const ConvexPolygon later =
            translate(build_envelope(inst.objects[1], inst.extruder), {p.positions[1].x, p.positions[1].y});
        if (r.ok) {
            ++accepted;
            CHECK_FALSE(sample_overlap_oracle(earlier, later, Rat(1, 4)));
        } else {
            ++rejected;
            CHECK(oracle::area(oracle::clip(earlier.vertices(), later.vertices())) > Rat(0));
        }
    }
    CHECK(accepted > 20);
    CHECK(rejected > 20);
}
