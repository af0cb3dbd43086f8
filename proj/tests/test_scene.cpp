#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "traverse/scene.hpp"

using namespace traverse;

namespace {
const std::string kData = TRAVERSE_DATA_DIR;
}

TEST_CASE("disk scene loads with metadata") {
    Scene scene = load_scene(kData + "/scenes/disk.json");
    CHECK(scene.dim() == 2);
    CHECK(scene.n() == 1);
    CHECK(scene.name == "disk");
    REQUIRE(scene.euler.has_value());
    CHECK(*scene.euler == 1);
    CHECK(scene.faces().size() == 1);
    CHECK(scene.inside(std::vector<double>{0.0, 0.0}));
    CHECK_FALSE(scene.inside(std::vector<double>{1.2, 0.0}));
    scene.validate();
}

TEST_CASE("lie derivative chain matches hand computation on the disk") {
    Scene scene = load_scene(kData + "/scenes/disk.json");
    // F = 1 - x^2 - y^2, v = (0,1): vF = -2y, v^2F = -2, v^3F = 0
    const Face& f = scene.face(0);
    Point p{0.3, -0.4};
    CHECK(f.lie_value(0, p) == doctest::Approx(1 - 0.09 - 0.16));
    CHECK(f.lie_value(1, p) == doctest::Approx(0.8));
    CHECK(f.lie_value(2, p) == doctest::Approx(-2.0));
    CHECK(f.lie_value(3, p) == doctest::Approx(0.0));
}

TEST_CASE("flow jet equals the integrated Taylor expansion") {
    Scene scene = load_scene(kData + "/scenes/annulus.json");
    // flow of v = (0,1) is explicit: phi_t(x, y) = (x, y + t)
    for (int face = 0; face < 2; ++face) {
        Point a{1.3, -0.9};
        FlowJet jet = scene.flow_jet(a, 4, face);
        for (double t : {-0.3, -0.05, 0.1, 0.25}) {
            double taylor = 0, tp = 1;
            for (double c : jet.coeff) {
                taylor += c * tp;
                tp *= t;
            }
            Point moved{a[0], a[1] + t};
            CHECK(taylor ==
                  doctest::Approx(scene.face(face).value(moved)).epsilon(1e-5));
        }
    }
}

TEST_CASE("scene validation rejects vanishing fields") {
    std::string bad = R"({"dim": 2, "F": "1 - x^2 - y^2", "v": ["0", "0"]})";
    Scene scene = scene_from_json_text(bad);
    CHECK_THROWS_AS(scene.validate(), SceneError);
}

TEST_CASE("malformed scene json throws") {
    CHECK_THROWS_AS(scene_from_json_text("{not json"), SceneError);
    CHECK_THROWS_AS(scene_from_json_text(R"({"dim": 2})"), SceneError);
    CHECK_THROWS_AS(
        scene_from_json_text(R"({"dim": 2, "F": "q + 1", "v": ["0", "1"]})"),
        std::runtime_error);
}

TEST_CASE("halton points fill the box and support offsets") {
    Point lo{-1, -2}, hi{3, 2};
    auto pts = halton_points(500, lo, hi);
    for (const auto& p : pts) {
        CHECK(p[0] >= -1.0);
        CHECK(p[0] <= 3.0);
        CHECK(p[1] >= -2.0);
        CHECK(p[1] <= 2.0);
    }
    // skipping reproduces the tail of the sequence
    auto tail = halton_points(100, lo, hi, 50);
    for (int i = 0; i < 100; ++i) {
        CHECK(tail[i][0] == doctest::Approx(pts[i + 50][0]));
        CHECK(tail[i][1] == doctest::Approx(pts[i + 50][1]));
    }
}
