#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "traverse/norm.hpp"

using namespace traverse;

namespace {
const std::string kData = TRAVERSE_DATA_DIR;
}

TEST_CASE("exact simplex: optimal, infeasible and unbounded instances") {
    // minimize x0 + x1 s.t. x0 + 2 x1 = 4, x0, x1 >= 0
    LPResult r = solve_lp({{Rat(1), Rat(2)}}, {Rat(4)}, {Rat(1), Rat(1)});
    REQUIRE(r.status == LPStatus::Optimal);
    CHECK(r.value == Rat(2));
    CHECK(r.x[1] == Rat(4, 2));
    CHECK(r.certified);

    // x0 + x1 = -1 with x >= 0 is infeasible
    LPResult inf = solve_lp({{Rat(1), Rat(1)}}, {Rat(-1)}, {Rat(1), Rat(1)});
    CHECK(inf.status == LPStatus::Infeasible);

    // minimize -x1 with x0 - x1 = 0: x1 free to grow
    LPResult unb = solve_lp({{Rat(1), Rat(-1)}}, {Rat(0)}, {Rat(0), Rat(-1)});
    CHECK(unb.status == LPStatus::Unbounded);

    // degenerate/redundant rows are tolerated
    LPResult red = solve_lp({{Rat(1), Rat(2)}, {Rat(2), Rat(4)}}, {Rat(4), Rat(8)},
                            {Rat(1), Rat(1)});
    REQUIRE(red.status == LPStatus::Optimal);
    CHECK(red.value == Rat(2));
}

TEST_CASE("surface validation catches broken complexes") {
    CHECK_THROWS_AS(make_surface(3, {{0, 1, 1}}), SurfaceError);       // degenerate
    CHECK_THROWS_AS(make_surface(4, {{0, 1, 2}, {2, 1, 0}}), SurfaceError);  // dup
    CHECK_THROWS_AS(make_surface(4, {{0, 1, 2}}), SurfaceError);       // unused vtx
    // same orientation on a shared edge
    CHECK_THROWS_AS(make_surface(4, {{0, 1, 2}, {0, 1, 3}}), SurfaceError);
    // edge in three triangles
    CHECK_THROWS_AS(make_surface(5, {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}}), SurfaceError);
}

TEST_CASE("bundled complexes have the expected topology") {
    TriangulatedSurface sphere = load_surface(kData + "/complexes/sphere.off");
    CHECK(euler_characteristic(sphere) == 2);
    CHECK(is_closed(sphere));
    CHECK(is_connected(sphere));
    CHECK(genus(sphere) == 0);
    CHECK(fundamental_cycle_closes(sphere));

    TriangulatedSurface torus = load_surface(kData + "/complexes/torus.off");
    CHECK(torus.triangles.size() == 14);
    CHECK(euler_characteristic(torus) == 0);
    CHECK(is_closed(torus));
    CHECK(genus(torus) == 1);
    CHECK(fundamental_cycle_closes(torus));

    TriangulatedSurface disk = load_surface(kData + "/complexes/disk.off");
    CHECK(euler_characteristic(disk) == 1);
    CHECK_FALSE(is_closed(disk));
    CHECK(boundary_circles(disk).size() == 1);
    CHECK_FALSE(fundamental_cycle_closes(disk));

    TriangulatedSurface annulus = load_surface(kData + "/complexes/annulus.off");
    CHECK(euler_characteristic(annulus) == 0);
    CHECK(boundary_circles(annulus).size() == 2);

    TriangulatedSurface pants = load_surface(kData + "/complexes/pants.off");
    CHECK(euler_characteristic(pants) == -1);
    CHECK(boundary_circles(pants).size() == 3);
}

TEST_CASE("doubling: chi(D) = 2 chi(X), closed, and genus from the formula") {
    struct Case {
        const char* name;
        int genus_double;
    } cases[] = {{"disk", 0}, {"annulus", 1}, {"pants", 2}};
    for (const auto& c : cases) {
        CAPTURE(c.name);
        TriangulatedSurface X =
            load_surface(kData + "/complexes/" + std::string(c.name) + ".off");
        TriangulatedSurface D = double_surface(X);
        CHECK(is_closed(D));
        CHECK(euler_characteristic(D) == 2 * euler_characteristic(X));
        CHECK(genus(D) == c.genus_double);
        CHECK(fundamental_cycle_closes(D));
    }
}

TEST_CASE("barycentric subdivision multiplies triangles by six, chi fixed") {
    TriangulatedSurface sphere = load_surface(kData + "/complexes/sphere.off");
    TriangulatedSurface sub = barycentric_subdivide(sphere);
    CHECK(sub.triangles.size() == 24);
    CHECK(euler_characteristic(sub) == 2);
    CHECK(is_closed(sub));
    TriangulatedSurface torus = load_surface(kData + "/complexes/torus.off");
    TriangulatedSurface tsub = barycentric_subdivide(torus);
    CHECK(tsub.triangles.size() == 84);
    CHECK(euler_characteristic(tsub) == 0);
}

TEST_CASE("norm LP value equals the triangle count on closed surfaces") {
    // the orientation-pairing constraint pins every 2-cycle in the class of
    // the fundamental representative to total weight #T, and the edge cycle
    // system leaves a one-dimensional solution space on a closed connected
    // surface, so the optimum is the representative itself
    TriangulatedSurface sphere = load_surface(kData + "/complexes/sphere.off");
    NormResult rs = norm_lp(sphere);
    CHECK(rs.value == Rat(4));
    CHECK(rs.certified);
    for (const auto& r : rs.coeffs) CHECK(r == Rat(1));

    TriangulatedSurface torus = load_surface(kData + "/complexes/torus.off");
    NormResult rt = norm_lp(torus);
    CHECK(rt.value == Rat(14));
    CHECK(rt.certified);
}

TEST_CASE("genus-2 double of the pair of pants clears the oracle bound") {
    TriangulatedSurface pants = load_surface(kData + "/complexes/pants.off");
    TriangulatedSurface D = double_surface(pants);
    REQUIRE(genus(D) == 2);
    NormResult res = norm_lp(D);
    // external surface-norm oracle: ||genus 2|| = 4g - 4 = 4
    CHECK(res.value >= Rat(4));
    CHECK(res.certified);
}

TEST_CASE("norm LP rejects open or disconnected input") {
    TriangulatedSurface disk = load_surface(kData + "/complexes/disk.off");
    CHECK_THROWS_AS(norm_lp(disk), SurfaceError);
}

TEST_CASE("stratified checker reproduces the six encoding verdicts") {
    struct Case {
        const char* file;
        bool cellular, ordered, interior, loops;
    } cases[] = {
        {"encoding_a.json", true, true, true, true},
        {"encoding_b.json", true, true, true, true},
        {"encoding_c.json", true, true, true, true},
        {"encoding_d.json", true, false, true, true},
        {"encoding_e.json", true, true, false, true},
        {"encoding_f.json", false, true, true, true},
    };
    for (const auto& c : cases) {
        CAPTURE(c.file);
        auto [poset, simplices] =
            load_stratified_cycle(kData + "/fig3/" + std::string(c.file));
        StratVerdict v = check_stratified_cycle(poset, simplices);
        CHECK(v.cellular == c.cellular);
        CHECK(v.ordered == c.ordered);
        CHECK(v.interior == c.interior);
        CHECK(v.loops_ok == c.loops);
    }
}

TEST_CASE("stratified checker flags non-constant loops and bad input") {
    StratPoset P = make_poset(1, {"all"}, {2}, {});
    StratSimplex s;
    s.dim = 1;
    s.vertex_points = {5, 5};  // both endpoints map to the same point
    s.faces = {{{0}, {0}, false}, {{1}, {0}, false}, {{0, 1}, {0}, false}};
    StratVerdict v = check_stratified_cycle(P, {s});
    CHECK_FALSE(v.loops_ok);
    s.faces[2].constant = true;
    CHECK(check_stratified_cycle(P, {s}).loops_ok);

    s.faces[2].strata.clear();  // unlabeled face is an input error
    CHECK_THROWS_AS(check_stratified_cycle(P, {s}), StratError);
}

TEST_CASE("poset construction rejects cycles") {
    CHECK_THROWS_AS(make_poset(2, {"a", "b"}, {0, 1}, {{0, 1}, {1, 0}}), StratError);
}
