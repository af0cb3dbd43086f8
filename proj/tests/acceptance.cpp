// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "traverse/census.hpp"
#include "traverse/chain.hpp"
#include "traverse/norm.hpp"
#include "traverse/partition.hpp"

using namespace traverse;
namespace fs = std::filesystem;

namespace {

const std::string kData = TRAVERSE_DATA_DIR;
const std::string kCli = TRAVERSE_CLI_PATH;

int g_failures = 0;

void report(int n, const std::string& what, bool pass, const std::string& note = "") {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << n << ": " << what;
    if (!note.empty()) std::cout << " [" << note << "]";
    std::cout << "\n";
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Scene scene_of(const std::string& name) {
    return load_scene(kData + "/scenes/" + name + ".json");
}

// independent oracle: vertical-line sweep counting chord-count transitions
int sweep_oracle(const Scene& scene, int nx = 10000, int ny = 4096) {
    const auto& lo = scene.bbox_lo();
    const auto& hi = scene.bbox_hi();
    int prev = -1, transitions = 0;
    for (int i = 0; i < nx; ++i) {
        double x = lo[0] + (hi[0] - lo[0]) * (i + 0.5) / nx;
        int intervals = 0;
        bool in = false;
        for (int jy = 0; jy < ny; ++jy) {
            double y = lo[1] + (hi[1] - lo[1]) * (jy + 0.5) / ny;
            bool now = scene.inside({x, y});
            if (now && !in) ++intervals;
            in = now;
        }
        if (prev >= 0) transitions += std::abs(intervals - prev);
        prev = intervals;
    }
    return transitions;
}

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::vector<std::vector<int>> types = admissible_types(1);
    types.push_back({3, 1});
    types.push_back({1, 3});
    types.push_back({1, 2, 2, 1});
    for (const auto& type : types) {
        if (roundtrip_type(type) != type) ok = false;
        LocalModel model = make_local_model(type);
        Trajectory t = integrate_trajectory(model.scene, model.entry);
        if (t.events.size() != type.size()) ok = false;
        for (size_t i = 0; i < t.events.size() && i < type.size(); ++i)
            if (std::abs(t.events[i].location[0] - double(i + 1)) > 1e-6) ok = false;
    }
    double dt = seconds_since(t0);
    report(1, "local models reproduce their type with tangencies at u = i",
           ok && dt < 30.0, std::to_string(dt).substr(0, 4) + "s");
}

void criterion_2() {
    auto t1 = admissible_types(1);
    bool ok = t1.size() == 3 && t1[0] == std::vector<int>{1, 1} &&
              t1[1] == std::vector<int>{2} && t1[2] == std::vector<int>{1, 2, 1};
    auto t2 = admissible_types(2);
    ok = ok && t2.size() == 6;
    for (const auto& e : {std::vector<int>{1, 2, 2, 1}, std::vector<int>{3, 1},
                          std::vector<int>{1, 3}})
        ok = ok && std::find(t2.begin(), t2.end(), e) != t2.end();
    report(2, "admissible type censuses for n = 1 (3 types) and n = 2 (6 types)", ok);
}

void criterion_3() {
    struct Case {
        const char* name;
        int expect;
    } cases[] = {{"disk", 2}, {"annulus", 4}, {"slab", 0}};
    bool ok = true;
    std::string note;
    for (const auto& c : cases) {
        auto t0 = std::chrono::steady_clock::now();
        Scene scene = scene_of(c.name);
        int oracle = sweep_oracle(scene);
        MMCensus census = count_mm_2d(scene);
        double dt = seconds_since(t0);
        if (oracle != c.expect || census.count != c.expect || dt >= 60.0) ok = false;
        note += std::string(c.name) + "=" + std::to_string(census.count) + " ";
    }
    report(3, "2D max-multiplicity counts match the sweep oracle", ok, note);
}

void criterion_4() {
    bool ok = true;
    {
        Scene scene = scene_of("disk");
        TrajectoryGraph g = build_trajectory_graph_2d(scene, count_mm_2d(scene));
        ok = ok && g.vertices.size() == 2 && g.edges.size() == 1 && g.euler() == 1;
    }
    {
        Scene scene = scene_of("annulus");
        TrajectoryGraph g = build_trajectory_graph_2d(scene, count_mm_2d(scene));
        ok = ok && g.vertices.size() == 4 && g.edges.size() == 4 && g.euler() == 0;
        for (size_t i = 0; i < g.vertices.size(); ++i) {
            int want = g.vertices[i].type == std::vector<int>{2} ? 1 : 3;
            if (g.degree(static_cast<int>(i)) != want) ok = false;
        }
    }
    {
        Scene scene = scene_of("slab");
        TrajectoryGraph g = build_trajectory_graph_2d(scene, count_mm_2d(scene));
        ok = ok && g.vertices.empty() && g.edges.size() == 1 && g.open_ends() == 2 &&
             g.euler() == 1;
    }
    report(4, "trajectory-space graphs (vertices, edges, degrees, euler)", ok);
}

void criterion_5() {
    bool ok = true;
    std::string note;
    for (const char* name : {"disk", "annulus", "slab"}) {
        MMCensus c = count_mm_2d(scene_of(name));
        if (!c.counting_inequality()) ok = false;
        note += std::string(name) + ":" + std::to_string(c.boundary_points) + "<=" +
                std::to_string((c.n + 2) * c.count) + " ";
    }
    for (const char* name : {"ball", "shell"}) {
        MMCensus c = count_mm_3d(scene_of(name));
        if (!c.counting_inequality()) ok = false;
    }
    report(5, "counting inequality r <= (n+2) * count on every bundled census", ok,
           note);
}

void criterion_6() {
    bool ok = true;
    Group G = Group::free_abelian(2);
    LabeledSimplex s;
    s.verts = {0, 1, 2, 3};
    s.lifts = {{0, 0}, {1, -1}, {2, 3}, {-1, 0}};
    // cocycle identity on edge labels
    ok = ok && G.product(edge_label(G, s, 0, 1), edge_label(G, s, 1, 2)) ==
                   edge_label(G, s, 0, 2);
    LabeledChain c;
    c.add(s, Rat(1, 3));
    // boundary commutes with symmetrization, exactly
    LabeledChain lhs = straighten(G, boundary(G, symm(G, c)));
    LabeledChain rhs = straighten(G, symm(G, boundary(G, c)));
    ok = ok && lhs.terms() == rhs.terms();
    ok = ok && straighten(G, boundary(G, boundary(G, c))).empty();
    // symm is alternating under a transposition
    LabeledChain pc;
    pc.add(permute_simplex(s, {1, 0, 2, 3}), Rat(1, 3));
    ok = ok && symm(G, straighten(G, pc)).terms() ==
                   symm(G, straighten(G, c)).scaled(-1).terms();
    // pushing a vertex label and pushing it back is the identity
    LabeledChain back = push_vertex(G, push_vertex(G, c, 0, {3, -2}),
                                    0, G.inverse({3, -2}));
    ok = ok && straighten(G, back).terms() == straighten(G, c).terms();
    report(6, "chain operators: cocycle, symm sign, boundary commutation, push", ok);
}

void criterion_7() {
    bool ok = true;
    // Folner boxes: ratio matches the closed form 2|x|/N
    Group Z = Group::free_abelian(1);
    FolnerResult fz = folner_set(Z, {{1}, {-1}}, Rat(1, 10));
    ok = ok && fz.box_side == 20 && fz.worst_ratio == Rat(2, 20);
    // involution: the paired sum cancels identically on the common square
    InvolutionReport inv = involution_check(Z, {1}, fz.set, Rat(1, 10));
    ok = ok && inv.partial_sum.empty() && inv.square_bound;
    // averaging bound, exact, on the bundled cycles
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
    for (const auto& cse : cases)
        for (Rat eps : {Rat(1, 10), Rat(1, 100)}) {
            auto [G, chain] = chain_from_json_text(
                slurp(kData + "/chains/" + std::string(cse.chain)));
            PartialColoring coloring = coloring_from_json_text(
                slurp(kData + "/chains/" + std::string(cse.coloring)));
            AverageReport rep = amenable_average(G, chain, coloring, eps);
            if (!(rep.is_cycle && rep.essential_norm == cse.ess &&
                  rep.nonessential_norm == cse.noness &&
                  rep.bound == cse.ess + eps * cse.noness && rep.bound_holds &&
                  rep.norm <= rep.bound))
                ok = false;
        }
    report(7, "amenable reduction: norm of the average within ess + eps * noness", ok);
}

void criterion_8() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string note;
    // doubling halves nothing: chi(D) = 2 chi(X) on the bundled surfaces
    for (const char* name : {"disk", "annulus", "pants"}) {
        TriangulatedSurface X = load_surface(kData + "/complexes/" + name + ".off");
        TriangulatedSurface D = double_surface(X);
        if (!is_closed(D) || euler_characteristic(D) != 2 * euler_characteristic(X))
            ok = false;
    }
    // genus-2 lower bound: LP value at least 4 with an exact certificate
    TriangulatedSurface D = double_surface(load_surface(kData + "/complexes/pants.off"));
    if (genus(D) != 2) ok = false;
    NormResult g2 = norm_lp(D);
    if (!(g2.value >= Rat(4) && g2.certified)) ok = false;
    note += "genus2=" + g2.value.str() + " ";
    // LP value non-increasing under barycentric subdivision
    for (const char* name : {"sphere", "torus"}) {
        TriangulatedSurface X = load_surface(kData + "/complexes/" + name + ".off");
        Rat before = norm_lp(X).value;
        Rat after = norm_lp(barycentric_subdivide(X)).value;
        note += std::string(name) + ":" + before.str() + "->" +
                after.str() + " ";
        if (!(after <= before)) ok = false;
    }
    double dt = seconds_since(t0);
    report(8, "norm LP: doubling, genus-2 bound, subdivision monotonicity",
           ok && dt < 120.0, note);
}

void criterion_9() {
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
    bool ok = true;
    for (const auto& c : cases) {
        auto [poset, simplices] =
            load_stratified_cycle(kData + "/fig3/" + std::string(c.file));
        StratVerdict v = check_stratified_cycle(poset, simplices);
        if (v.cellular != c.cellular || v.ordered != c.ordered ||
            v.interior != c.interior || v.loops_ok != c.loops)
            ok = false;
    }
    report(9, "stratified-cycle checker reproduces the six encoding verdicts", ok);
}

void criterion_10() {
    auto t0 = std::chrono::steady_clock::now();
    DiscretizedStratifiedSpace sp = load_space(kData + "/spaces/fan.json");
    Partition part = build_partition(sp, 0.05);
    double dt = seconds_since(t0);
    bool mono = !part.eps.empty() && part.eps.front() <= 0.05;
    for (size_t k = 1; k < part.eps.size(); ++k)
        if (part.eps[k] > part.eps[k - 1]) mono = false;
    report(10, "fan-space partition: separation, proximity, retraction at eps = 0.05",
           part.all_ok() && mono && part.delta > 0 && dt < 60.0);
}

void criterion_11() {
    fs::path a = fs::temp_directory_path() / "traverse_accept_a";
    fs::path b = fs::temp_directory_path() / "traverse_accept_b";
    fs::remove_all(a);
    fs::remove_all(b);
    std::string base = kCli + " --analysis census --scene " + kData +
                       "/scenes/annulus.json --out ";
    bool ok = true;
    for (const fs::path& dir : {a, b}) {
        std::string cmd = base + dir.string() + " >/dev/null 2>&1";
        int status = std::system(cmd.c_str());
        if (status == -1 || WEXITSTATUS(status) != 0) ok = false;
    }
    if (ok) {
        ok = slurp((a / "census.csv").string()) == slurp((b / "census.csv").string()) &&
             slurp((a / "trajectories.jsonl").string()) ==
                 slurp((b / "trajectories.jsonl").string());
    }
    report(11, "repeated batch runs emit byte-identical reports", ok);
}

}  // namespace

int main() {
    using Fn = void (*)();
    Fn criteria[] = {criterion_1, criterion_2, criterion_3, criterion_4,
                     criterion_5, criterion_6, criterion_7, criterion_8,
                     criterion_9, criterion_10, criterion_11};
    int n = 0;
    for (Fn fn : criteria) {
        ++n;
        try {
            fn();
        } catch (const std::exception& e) {
            report(n, std::string("exception: ") + e.what(), false);
        }
    }
    std::cout << (g_failures == 0 ? "ALL CRITERIA PASS"
                                  : std::to_string(g_failures) + " CRITERIA FAILED")
              << "\n";
    return g_failures == 0 ? 0 : 1;
}
