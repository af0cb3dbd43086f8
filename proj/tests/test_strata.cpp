#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "traverse/strata.hpp"

using namespace traverse;

namespace {
const std::string kData = TRAVERSE_DATA_DIR;

bool has_point_near(const StratumSample& s, const Point& p, double tol) {
    for (const auto& tp : s.points) {
        double d = 0;
        for (size_t i = 0; i < p.size(); ++i)
            d += (tp.location[i] - p[i]) * (tp.location[i] - p[i]);
        if (std::sqrt(d) < tol) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("disk depth-2 stratum is the two horizontal poles") {
    Scene scene = load_scene(kData + "/scenes/disk.json");
    StratumSample s = find_strata(scene, 2, 400);
    REQUIRE(s.points.size() == 2);
    CHECK(has_point_near(s, {1.0, 0.0}, 1e-8));
    CHECK(has_point_near(s, {-1.0, 0.0}, 1e-8));
    for (const auto& p : s.points) CHECK(p.multiplicity == 2);
}

TEST_CASE("annulus depth-2 stratum has four points across both faces") {
    Scene scene = load_scene(kData + "/scenes/annulus.json");
    StratumSample s = find_strata(scene, 2, 400);
    REQUIRE(s.points.size() == 4);
    CHECK(has_point_near(s, {2.0, 0.0}, 1e-8));
    CHECK(has_point_near(s, {-2.0, 0.0}, 1e-8));
    CHECK(has_point_near(s, {1.0, 0.0}, 1e-8));
    CHECK(has_point_near(s, {-1.0, 0.0}, 1e-8));
}

TEST_CASE("seed doubling does not change the detected stratum") {
    Scene scene = load_scene(kData + "/scenes/annulus.json");
    StratumSample a = find_strata(scene, 2, 400);
    StratumSample b = find_strata(scene, 2, 800);
    CHECK(a.points.size() == b.points.size());
    for (const auto& p : a.points) CHECK(has_point_near(b, p.location, 1e-7));
}

TEST_CASE("depth capped by dimension; disk has no depth-3 points") {
    Scene scene = load_scene(kData + "/scenes/disk.json");
    CHECK_THROWS_AS(find_strata(scene, 3, 100), SceneError);
    // v^2 F = -2 never vanishes, so no genuine depth-2 point extends deeper:
    // every detected point must have multiplicity exactly 2
    StratumSample s = find_strata(scene, 2, 200);
    for (const auto& p : s.points) CHECK(p.multiplicity == 2);
}

TEST_CASE("point multiplicity classifies on and off boundary") {
    Scene scene = load_scene(kData + "/scenes/disk.json");
    CHECK(point_multiplicity(scene, {0.0, 0.0}, 1e-7) == 0);   // interior
    CHECK(point_multiplicity(scene, {0.0, 1.0}, 1e-7) == 1);   // transversal
    CHECK(point_multiplicity(scene, {1.0, 0.0}, 1e-7) == 2);   // tangency
}

TEST_CASE("ball depth-2 locus is the equator circle, traced as a curve") {
    Scene scene = load_scene(kData + "/scenes/ball.json");
    StratumSample s = find_strata(scene, 2, 600);
    REQUIRE(!s.points.empty());
    for (const auto& p : s.points) {
        CHECK(std::abs(p.location[2]) < 1e-8);
        CHECK(p.location[0] * p.location[0] + p.location[1] * p.location[1] ==
              doctest::Approx(1.0).epsilon(1e-8));
    }
    REQUIRE(!s.curves.empty());
    const auto& curve = s.curves.front();
    CHECK(curve.closed);
    CHECK(curve.polyline.size() > 100);
    for (const auto& q : curve.polyline) {
        CHECK(std::abs(q[2]) < 1e-6);
        CHECK(q[0] * q[0] + q[1] * q[1] == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("boundary genericity certificate passes on bundled scenes") {
    for (const char* name : {"disk", "annulus", "ball", "shell"}) {
        Scene scene = load_scene(kData + "/scenes/" + std::string(name) + ".json");
        for (int k = 2; k <= scene.dim() - (scene.dim() == 3 ? 1 : 0); ++k) {
            StratumSample s = find_strata(scene, k, 400);
            GenericityReport rep = check_boundary_generic(scene, s, 1e-6);
            CHECK(rep.all_pass());
        }
    }
}

TEST_CASE("newton refinement converges quadratically from a coarse guess") {
    Scene scene = load_scene(kData + "/scenes/disk.json");
    Point x{0.9, 0.2};
    REQUIRE(newton_stratum_point(scene, 0, 2, x));
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(x[1] == doctest::Approx(0.0).epsilon(1e-10));
}
