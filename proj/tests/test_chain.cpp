#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "traverse/chain.hpp"

using namespace traverse;

namespace {
const std::string kData = TRAVERSE_DATA_DIR;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::pair<Group, LabeledChain> load_chain(const std::string& name) {
    return chain_from_json_text(slurp(kData + "/chains/" + name));
}

std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> q(n);
    for (int i = 0; i < n; ++i) q[i] = i;
    std::vector<std::vector<int>> out;
    do out.push_back(q);
    while (std::next_permutation(q.begin(), q.end()));
    return out;
}

}  // namespace

TEST_CASE("edge labels satisfy the cocycle identity by construction") {
    Group G = Group::free_abelian(1);
    LabeledSimplex s;
    s.verts = {0, 1, 2};
    s.lifts = {{5}, {7}, {-2}};
    auto gab = edge_label(G, s, 0, 1);
    auto gbc = edge_label(G, s, 1, 2);
    auto gac = edge_label(G, s, 0, 2);
    CHECK(G.product(gab, gbc) == gac);
    CHECK(gab == Group::Elem{2});
    CHECK(gac == Group::Elem{-7});
}

TEST_CASE("straightening normalizes the basepoint lift and is idempotent") {
    Group G = Group::free_abelian(1);
    LabeledSimplex s;
    s.verts = {3, 4};
    s.lifts = {{5}, {9}};
    LabeledSimplex t = straighten_simplex(G, s);
    CHECK(t.lifts[0] == G.identity());
    CHECK(t.lifts[1] == Group::Elem{4});
    CHECK(edge_label(G, t, 0, 1) == edge_label(G, s, 0, 1));
    CHECK(straighten_simplex(G, t) == t);
}

TEST_CASE("symm is alternating: symm(q(c)) = sign(q) symm(c) exactly") {
    for (int nverts : {3, 4}) {
        Group G = Group::free_abelian(1);
        LabeledSimplex s;
        for (int i = 0; i < nverts; ++i) {
            s.verts.push_back(10 + i);
            s.lifts.push_back({2 * i - 1});
        }
        LabeledChain c;
        c.add(s, Rat(3, 2));
        LabeledChain sc = symm(G, straighten(G, c));
        for (const auto& q : all_permutations(nverts)) {
            LabeledChain pc;
            pc.add(permute_simplex(s, q), Rat(3, 2));
            LabeledChain spc = symm(G, straighten(G, pc));
            LabeledChain expect = sc.scaled(permutation_sign(q));
            CHECK(spc.terms() == expect.terms());
        }
    }
}

TEST_CASE("boundary commutes with symm in exact arithmetic") {
    Group G = Group::free_abelian(2);
    LabeledSimplex s;
    s.verts = {0, 1, 2, 3};
    s.lifts = {{0, 0}, {1, -1}, {2, 3}, {-1, 0}};
    LabeledChain c;
    c.add(s, Rat(1, 3));
    LabeledChain lhs = straighten(G, boundary(G, symm(G, c)));
    LabeledChain rhs = straighten(G, symm(G, boundary(G, c)));
    CHECK(lhs.terms() == rhs.terms());
    // and boundary of boundary vanishes identically
    CHECK(straighten(G, boundary(G, boundary(G, c))).empty());
}

TEST_CASE("push_vertex rewrites exactly the labels at that vertex") {
    Group G = Group::free_abelian(1);
    LabeledSimplex s;
    s.verts = {0, 1};
    s.lifts = {{0}, {4}};
    LabeledChain c;
    c.add(s, 1);
    LabeledChain pushed = push_vertex(G, c, 0, {3});
    REQUIRE(pushed.terms().size() == 1);
    const auto& ps = pushed.terms().begin()->first;
    // edge (0,1) had label 4; pushing vertex 0 by g=3 gives g^-1 * 4 = 1
    CHECK(edge_label(G, ps, 0, 1) == Group::Elem{1});
    LabeledChain back = push_vertex(G, pushed, 0, G.inverse({3}));
    CHECK(straighten(G, back).terms() == straighten(G, c).terms());
}

TEST_CASE("essential classification: same-color pairs and identity loops") {
    auto [G, c] = load_chain("z_cycle1.json");
    PartialColoring coloring =
        coloring_from_json_text(slurp(kData + "/chains/coloring_pair.json"));
    EssentialReport rep = classify_essential(G, c, coloring);
    REQUIRE(rep.entries.size() == 3);
    CHECK(rep.essential_norm == Rat(2));
    CHECK(rep.nonessential_norm == Rat(1));
    int noness = 0;
    for (const auto& e : rep.entries)
        if (!e.essential) {
            ++noness;
            CHECK(e.reason == "same-color pair");
            CHECK(e.simplex.verts == std::vector<int>{0, 1});
        }
    CHECK(noness == 1);

    // identity loop: repeated vertex id with trivial edge label
    LabeledSimplex loop;
    loop.verts = {7, 7};
    loop.lifts = {G.identity(), G.identity()};
    LabeledChain lc;
    lc.add(loop, 1);
    EssentialReport rep2 = classify_essential(G, lc, PartialColoring{});
    REQUIRE(rep2.entries.size() == 1);
    CHECK_FALSE(rep2.entries[0].essential);
    CHECK(rep2.entries[0].reason == "identity loop edge");
}

TEST_CASE("Folner boxes match the closed form 2|x|/N exactly") {
    Group Z = Group::free_abelian(1);
    FolnerResult fz = folner_set(Z, {{1}, {-1}}, Rat(1, 10));
    CHECK(fz.box_side == 20);
    CHECK(fz.worst_ratio == Rat(2, 20));
    CHECK(fz.set.size() == 20);
    CHECK(folner_ratio(Z, {1}, fz.set) == Rat(2, 20));

    Group Z2 = Group::free_abelian(2);
    FolnerResult f2 = folner_set(Z2, {{3, 0}}, Rat(1, 10));
    CHECK(f2.box_side == 60);
    CHECK(f2.worst_ratio == Rat(2 * (60LL * 60 - 60 * 57), 60LL * 60));
    CHECK(f2.worst_ratio == Rat(6, 60));

    Group S3 = load_chain("s3_cycle.json").first;
    FolnerResult ff = folner_set(S3, {{1}, {4}}, Rat(1, 100));
    CHECK(ff.worst_ratio == 0);
    CHECK(ff.set.size() == 6);
}

TEST_CASE("involution partial sum cancels exactly on the square subset") {
    Group Z = Group::free_abelian(1);
    auto A = folner_set(Z, {{1}}, Rat(1, 10)).set;
    InvolutionReport rep = involution_check(Z, {1}, A, Rat(1, 10));
    CHECK(rep.partial_sum.empty());
    CHECK(rep.total_pairs == 400);
    CHECK(rep.subset_pairs == 19 * 19);
    CHECK(rep.square_bound);  // 361 > 0.9 * 400
}

TEST_CASE("amenable averaging obeys the epsilon bound on bundled cycles") {
    struct Case {
        const char* chain;
        const char* coloring;
        Rat ess, noness;
    } cases[] = {
        {"z_cycle1.json", "coloring_pair.json", Rat(2), Rat(1)},
        {"z2_cycle.json", "coloring_pair.json", Rat(1), Rat(1, 2)},
        {"z_cycle2.json", "coloring_tetra_pair.json", Rat(2), Rat(2)},
        {"z_cycle2.json", "coloring_full.json", Rat(4), Rat(0)},
    };
    for (const auto& cse : cases) {
        for (Rat eps : {Rat(1, 10), Rat(1, 100)}) {
            CAPTURE(cse.chain);
            CAPTURE(cse.coloring);
            auto [G, c] = load_chain(cse.chain);
            PartialColoring coloring = coloring_from_json_text(
                slurp(kData + "/chains/" + std::string(cse.coloring)));
            AverageReport rep = amenable_average(G, c, coloring, eps);
            CHECK(rep.is_cycle);
            CHECK(rep.essential_norm == cse.ess);
            CHECK(rep.nonessential_norm == cse.noness);
            CHECK(rep.bound == cse.ess + eps * cse.noness);
            CHECK(rep.bound_holds);
            CHECK(rep.norm <= rep.bound);
        }
    }
}

TEST_CASE("closed-form slice averaging agrees with direct enumeration") {
    auto [G, c] = load_chain("z_cycle1.json");
    PartialColoring coloring =
        coloring_from_json_text(slurp(kData + "/chains/coloring_pair.json"));
    AverageReport direct = amenable_average(G, c, coloring, Rat(1, 10));
    AverageReport closed = amenable_average(G, c, coloring, Rat(1, 10), /*cap=*/10);
    CHECK(direct.norm == closed.norm);
    CHECK(direct.average.terms() == closed.average.terms());
}

TEST_CASE("finite-group averaging is exact with ratio-zero Folner sets") {
    auto [G, c] = load_chain("s3_cycle.json");
    PartialColoring coloring;
    coloring.color = {{0, 0}, {1, 0}, {2, 1}};
    AverageReport rep = amenable_average(G, c, coloring, Rat(1, 100));
    CHECK(rep.is_cycle);
    CHECK(rep.bound_holds);
    CHECK(rep.norm <= rep.essential_norm);  // ratio 0: epsilon term unnecessary
}

TEST_CASE("rational parsing round trips") {
    CHECK(parse_rational("3/4") == Rat(3, 4));
    CHECK(parse_rational("-7") == Rat(-7));
    CHECK_THROWS_AS(parse_rational("1/0"), std::exception);
}
