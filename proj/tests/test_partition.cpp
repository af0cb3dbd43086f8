#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "traverse/partition.hpp"

using namespace traverse;

namespace {
const std::string kData = TRAVERSE_DATA_DIR;
}

TEST_CASE("fan space: partition succeeds with all distance properties") {
    DiscretizedStratifiedSpace sp = load_space(kData + "/spaces/fan_small.json");
    REQUIRE(sp.n_strata == 7);
    validate_space(sp);
    Partition part = build_partition(sp, 0.05);
    CHECK(part.all_ok());
    CHECK(part.violations.empty());
    REQUIRE(part.step_stratum.size() == 7);
    // strata are processed by increasing dimension
    for (size_t k = 1; k < part.step_stratum.size(); ++k)
        CHECK(sp.strat_dim[part.step_stratum[k - 1]] <= sp.strat_dim[part.step_stratum[k]]);
    // the realized scales are positive and non-increasing, delta below the last
    REQUIRE(!part.eps.empty());
    CHECK(part.eps.front() <= 0.05);
    for (size_t k = 1; k < part.eps.size(); ++k) {
        CHECK(part.eps[k] > 0);
        CHECK(part.eps[k] <= part.eps[k - 1]);
    }
    CHECK(part.delta > 0);
    CHECK(part.delta < part.eps.back() + 1e-15);
    // the patches cover the space exactly once
    for (int i = 0; i < sp.n_points; ++i) {
        CHECK(part.patch[i] >= 0);
        CHECK(part.patch[i] < sp.n_strata);
    }
    // every point of a stratum lies in a patch of a comparable stratum
    for (int i = 0; i < sp.n_points; ++i)
        CHECK(sp.comparable(part.patch[i], sp.stratum[i]));
}

TEST_CASE("single-stratum space: the lone patch is everything") {
    DiscretizedStratifiedSpace sp;
    sp.dim = 2;
    sp.n_points = 9;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
            sp.coords.push_back(i * 0.5);
            sp.coords.push_back(j * 0.5);
            sp.stratum.push_back(0);
        }
    sp.n_strata = 1;
    sp.names = {"plane"};
    sp.strat_dim = {2};
    sp.leq = {{true}};
    sp.in_u = {std::vector<char>(9, 1)};
    validate_space(sp);
    Partition part = build_partition(sp, 0.3);
    CHECK(part.all_ok());
    for (int p : part.patch) CHECK(p == 0);
}

TEST_CASE("crossing lines are rejected: incomparable strata too close") {
    CHECK_THROWS_AS(
        [&] {
            DiscretizedStratifiedSpace sp = load_space(kData + "/spaces/crossing.json");
            validate_space(sp);
            build_partition(sp, 0.05);
        }(),
        PartitionError);
}

TEST_CASE("refining the grid keeps the partition valid") {
    for (int grid : {50, 100}) {
        CAPTURE(grid);
        DiscretizedStratifiedSpace sp = fan_space(grid);
        Partition part = build_partition(sp, 0.05);
        CHECK(part.all_ok());
    }
}

TEST_CASE("scales shrink when the budget does") {
    DiscretizedStratifiedSpace sp = fan_space(60);
    Partition loose = build_partition(sp, 0.1);
    Partition tight = build_partition(sp, 0.02);
    REQUIRE(loose.all_ok());
    REQUIRE(tight.all_ok());
    CHECK(tight.eps.front() <= 0.02);
    CHECK(tight.eps.front() < loose.eps.front());
    CHECK(tight.delta <= loose.delta);
}

TEST_CASE("space loader rejects malformed input") {
    CHECK_THROWS_AS(space_from_json_text("{\"builtin\": \"nope\"}"), PartitionError);
    CHECK_THROWS_AS(space_from_json_text("not json"), std::exception);
    // stratum label out of range is caught at validation time
    DiscretizedStratifiedSpace bad = space_from_json_text(R"({
        "dim": 2, "points": [[0,0],[1,0]], "stratum": [0, 5],
        "names": ["a"], "strat_dims": [1], "relations": [],
        "U": [[0, 1]]
    })");
    CHECK_THROWS_AS(validate_space(bad), PartitionError);
    CHECK_THROWS_AS(build_partition(DiscretizedStratifiedSpace{}, 0.1), PartitionError);
    // nonpositive budget
    DiscretizedStratifiedSpace sp = fan_space(40);
    CHECK_THROWS_AS(build_partition(sp, 0.0), PartitionError);
}
