#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "seqpack/bench.hpp"
#include "seqpack/io.hpp"
#include "seqpack/verify.hpp"

using namespace seqpack;

namespace {

struct Extent
{
    Rat w, h;
};

Extent extent(const ConvexPolygon& p)
{
    Rat x0 = p.vertex(0).x, x1 = x0, y0 = p.vertex(0).y, y1 = y0;
    for (const Point2& v : p) {
        x0 = min(x0, v.x);
        x1 = max(x1, v.x);
        y0 = min(y0, v.y);
        y1 = max(y1, v.y);
    }
    return {x1 - x0, y1 - y0};
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("rng is reproducible and bounded")
{
    Rng a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 200; ++i) {
        const long x = a.uniform(-3, 9);
        CHECK(x == b.uniform(-3, 9));
        CHECK(x >= -3);
        CHECK(x <= 9);
        differs = differs || x != c.uniform(-3, 9);
    }
    CHECK(differs);
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
}

TEST_CASE("cuboid generator follows the published setup")
{
    const Instance inst = gen_cuboids(32, 7);
    CHECK(inst.plate.polygon() == ConvexPolygon::rectangle(Rat(0), Rat(0), Rat(250), Rat(210)));
    REQUIRE(inst.objects.size() == 32);
    for (const PrintObject& o : inst.objects) {
        REQUIRE(o.footprint.size() == 4);
        const Extent e = extent(o.footprint);
        CHECK(e.w.is_integer());
        CHECK(e.h.is_integer());
        CHECK(e.w >= Rat(8));
        CHECK(e.w <= Rat(64));
        CHECK(e.h >= Rat(8));
        CHECK(e.h <= Rat(64));
        REQUIRE(o.height);
        CHECK(o.height->is_integer());
        CHECK(*o.height >= Rat(8));
        CHECK(*o.height <= Rat(64));
    }
    CHECK(inst.objects.front().id == "o01");
    CHECK(inst.objects.back().id == "o32");
    // Rectangular print head.
    CHECK(inst.extruder.footprint().size() == 4);

    CHECK(print_instance(gen_cuboids(5, 11)) == print_instance(gen_cuboids(5, 11)));
    CHECK(print_instance(gen_cuboids(5, 11)) != print_instance(gen_cuboids(5, 12)));
}

TEST_CASE("dimension draws cover the whole interval")
{
    std::set<long> seen;
    for (std::uint64_t seed = 1; seed <= 40; ++seed)
        for (const PrintObject& o : gen_cuboids(32, seed).objects)
            seen.insert(std::stol(extent(o.footprint).w.str()));
    CHECK(seen.size() == 57);
    CHECK(*seen.begin() == 8);
    CHECK(*seen.rbegin() == 64);
}

TEST_CASE("complex generator")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Instance inst = gen_complex(6, seed, 5, 12);
        for (const PrintObject& o : inst.objects) {
            CHECK(o.footprint.size() >= 5);
            CHECK(o.footprint.size() <= 12);
            const Extent e = extent(o.footprint);
            CHECK(e.w.is_integer());
            CHECK(e.h.is_integer());
            CHECK(e.w >= Rat(8));
            CHECK(e.w <= Rat(64));
            CHECK(e.h >= Rat(8));
            CHECK(e.h <= Rat(64));
            for (const Point2& v : o.footprint) {
                CHECK((v.x * Rat(8)).is_integer());
                CHECK((v.y * Rat(8)).is_integer());
            }
        }
    }
    CHECK(print_instance(gen_complex(4, 3)) == print_instance(gen_complex(4, 3)));
    const Instance narrow = gen_complex(10, 5, 7, 7);
    for (const PrintObject& o : narrow.objects)
        CHECK(o.footprint.size() == 7);
    CHECK_THROWS_AS(gen_complex(2, 1, 2, 5), std::invalid_argument);
    CHECK_THROWS_AS(gen_complex(0, 1), std::invalid_argument);
}

TEST_CASE("some complex instance needs refinement at a tight scale")
{
    bool found = false;
    for (std::uint64_t seed = 1; seed <= 10 && !found; ++seed) {
        const Instance inst = gen_complex(2, seed, 5, 12);
        const SolveOutcome out = solve_cegar(inst);
        if (out.status == SolveStatus::Sat)
            CHECK(verify_solution(inst, *out.placement, *out.sigma_star).ok);
        found = out.stats.refinement_rounds >= 1;
    }
    CHECK(found);
}

TEST_CASE("suite configurations")
{
    const SuiteConfig desk = desk_config();
    CHECK(desk.corpus == Corpus::Cuboids);
    CHECK(desk.k_min == 1);
    CHECK(desk.k_max == 16);
    CHECK(desk.repeats == 10);
    CHECK(desk.timeout_ms == 8000);
    CHECK(desk.modes == std::vector<SolveMode>{SolveMode::Cegar});

    const SuiteConfig full = full_protocol_config();
    CHECK(full.k_min == 1);
    CHECK(full.k_max == 32);
    CHECK(full.repeats == 10);
    CHECK(full.timeout_ms == 8000);
    CHECK(full.generator.plate_width == Rat(250));
    CHECK(full.generator.plate_height == Rat(210));
    CHECK(full.generator.dim_min == 8);
    CHECK(full.generator.dim_max == 64);
    CHECK(full.modes.size() == 2);
    CHECK(suite_instances(full).size() == 320);

    SuiteConfig eight = full;
    eight.k_max = 8;
    CHECK(suite_instances(eight).size() * eight.modes.size() == 160);

    const auto ids = suite_instances(desk);
    CHECK(ids.front().id == "cuboids-k01-r00");
    CHECK(ids.back().id == "cuboids-k16-r09");
    std::set<std::uint64_t> seeds;
    for (const SuiteInstance& s : ids)
        seeds.insert(s.seed);
    CHECK(seeds.size() == ids.size());

    CHECK(parse_corpus("complex") == Corpus::Complex);
    CHECK_THROWS_AS(parse_corpus("spheres"), std::invalid_argument);
}

TEST_CASE("small suite run, CSV and manifest")
{
    SuiteConfig c;
    c.k_min = 1;
    c.k_max = 3;
    c.repeats = 2;
    c.modes = {SolveMode::Cegar, SolveMode::Eager};
    std::size_t progress = 0;
    const SuiteResult result = run_suite(c, [&](const BenchRecord&) { ++progress; });
    REQUIRE(result.records.size() == 12);
    CHECK(progress == 12);
    CHECK_FALSE(result.solver_version.empty());
    for (const BenchRecord& r : result.records) {
        CHECK(r.status == SolveStatus::Sat);
        CHECK(r.certified);
        REQUIRE(r.sigma_star);
        CHECK(*r.sigma_star <= Rat(1));
    }
    // Same instance, both modes: same scale to within the resolution.
    for (std::size_t i = 0; i + 1 < result.records.size(); i += 2) {
        const BenchRecord& a = result.records[i];
        const BenchRecord& b = result.records[i + 1];
        CHECK(a.instance_id == b.instance_id);
        CHECK(abs(*a.sigma_star - *b.sigma_star) <= c.epsilon_xy);
    }

    const std::vector<std::string> csv = lines(to_csv(result.records));
    REQUIRE(csv.size() == 13);
    CHECK(csv[0] == "instance_id,k,mode,status,wall_ms,refinement_rounds,sigma_star");
    std::string last_mode;
    long last_ms = -1;
    for (std::size_t i = 1; i < csv.size(); ++i) {
        std::vector<std::string> f;
        std::istringstream row(csv[i]);
        for (std::string cell; std::getline(row, cell, ',');)
            f.push_back(cell);
        REQUIRE(f.size() == 7);
        CHECK_NOTHROW(Rat::parse(f[6]));
        if (f[2] != last_mode) {
            last_mode = f[2];
            last_ms = -1;
        }
        CHECK(std::stol(f[4]) >= last_ms);
        last_ms = std::stol(f[4]);
    }

    const std::string manifest = suite_manifest(c, result);
    CHECK(manifest.find("cuboids-k02-r01") != std::string::npos);
    CHECK(manifest.find("timeout_ms: 8000") != std::string::npos);
}
