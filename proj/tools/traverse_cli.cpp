// Batch front end: loads scenes / complexes / chains / spaces, runs one
// analysis, and writes deterministic report files into --out.
//
// Exit codes: 0 success, 2 input/validation error, 3 genericity violation
// (unless --allow-nongeneric).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "traverse/census.hpp"
#include "traverse/chain.hpp"
#include "traverse/norm.hpp"
#include "traverse/partition.hpp"

namespace {

using namespace traverse;

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/" + name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + dir + "/" + name);
    out << content;
}

std::string rat_str(const Rat& r) {
    std::ostringstream ss;
    ss << r;
    return ss.str();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Config {
    std::string scene_path, chain_path, coloring_path, complex_path, space_path;
    std::string analysis = "census";
    std::string out_dir = "out";
    double tol = 1e-7;
    int seeds = 400;
    int seed = 0;
    double eps = 0.05;
    bool allow_nongeneric = false;
};

CensusOptions census_options(const Config& cfg) {
    CensusOptions opts;
    opts.seed_count = cfg.seeds;
    opts.strata.tol = cfg.tol;
    opts.strata.seed_offset = cfg.seed;
    opts.flow.tol = cfg.tol;
    opts.check_genericity = !cfg.allow_nongeneric;
    return opts;
}

MMCensus run_census(const Scene& scene, const Config& cfg) {
    auto opts = census_options(cfg);
    return scene.dim() == 2 ? count_mm_2d(scene, opts) : count_mm_3d(scene, opts);
}

int run_strata(const Config& cfg) {
    Scene scene = load_scene(cfg.scene_path);
    scene.validate();
    StrataOptions opts;
    opts.tol = cfg.tol;
    opts.seed_offset = cfg.seed;
    std::ostringstream csv;
    csv << "depth,face,multiplicity";
    for (int i = 0; i < scene.dim(); ++i) csv << ",x" << i;
    csv << ",residual,leading,generic\n";
    bool all_generic = true;
    for (int k = 1; k <= scene.dim(); ++k) {
        StratumSample sample = find_strata(scene, k, cfg.seeds, opts);
        GenericityReport rep = check_boundary_generic(scene, sample, 1e-6);
        for (size_t i = 0; i < sample.points.size(); ++i) {
            const auto& p = sample.points[i];
            bool ok = i < rep.entries.size() ? rep.entries[i].pass : true;
            all_generic = all_generic && ok;
            csv << k << "," << p.face << "," << p.multiplicity;
            for (double c : p.location) csv << "," << fmt(c);
            csv << "," << fmt(p.residual) << "," << fmt(p.leading_coeff) << ","
                << (ok ? 1 : 0) << "\n";
        }
    }
    write_file(cfg.out_dir, "strata.csv", csv.str());
    if (!all_generic && !cfg.allow_nongeneric) {
        std::cerr << "boundary-genericity check failed (see strata.csv)\n";
        return 3;
    }
    return 0;
}

int run_census_analysis(const Config& cfg, bool with_graph) {
    Scene scene = load_scene(cfg.scene_path);
    scene.validate();
    MMCensus census = run_census(scene, cfg);
    write_file(cfg.out_dir, "census.csv", census_csv(census));
    write_file(cfg.out_dir, "trajectories.jsonl", trajectories_jsonl(census));
    if (with_graph) {
        if (scene.dim() != 2)
            throw SceneError("graph analysis requires a 2-dimensional scene");
        TrajectoryGraph graph =
            build_trajectory_graph_2d(scene, census, census_options(cfg));
        write_file(cfg.out_dir, "graph.dot", graph_dot(graph));
    }
    return 0;
}

int run_chains(const Config& cfg) {
    std::ifstream in(cfg.chain_path);
    if (!in) throw ChainError("cannot open chain file: " + cfg.chain_path);
    std::stringstream ss;
    ss << in.rdbuf();
    auto [group, chain] = chain_from_json_text(ss.str());
    PartialColoring coloring;
    if (!cfg.coloring_path.empty()) {
        std::ifstream cin_(cfg.coloring_path);
        if (!cin_) throw ChainError("cannot open coloring file: " + cfg.coloring_path);
        std::stringstream cs;
        cs << cin_.rdbuf();
        coloring = coloring_from_json_text(cs.str());
    }
    // represent the decimal epsilon exactly as a rational
    Rat eps = 0;
    {
        long long den = 1;
        double v = cfg.eps;
        while (v != std::floor(v) && den < 1000000000LL) {
            v *= 10;
            den *= 10;
        }
        eps = Rat(static_cast<long long>(std::llround(v))) / Rat(den);
        if (eps <= 0) throw ChainError("--eps must be positive");
    }
    AverageReport rep = amenable_average(group, chain, coloring, eps);
    std::ostringstream out;
    out << "{\n";
    out << "  \"eps\": \"" << rat_str(eps) << "\",\n";
    out << "  \"is_cycle\": " << (rep.is_cycle ? "true" : "false") << ",\n";
    out << "  \"norm\": \"" << rat_str(rep.norm) << "\",\n";
    out << "  \"essential_norm\": \"" << rat_str(rep.essential_norm) << "\",\n";
    out << "  \"nonessential_norm\": \"" << rat_str(rep.nonessential_norm) << "\",\n";
    out << "  \"bound\": \"" << rat_str(rep.bound) << "\",\n";
    out << "  \"bound_holds\": " << (rep.bound_holds ? "true" : "false") << ",\n";
    out << "  \"folner_sides\": {";
    bool first = true;
    for (const auto& [color, side] : rep.folner_sides) {
        out << (first ? "" : ", ") << "\"" << color << "\": " << side;
        first = false;
    }
    out << "},\n";
    out << "  \"terms\": " << rep.average.terms().size() << "\n";
    out << "}\n";
    write_file(cfg.out_dir, "chains.json", out.str());
    return 0;
}

int run_norm(const Config& cfg) {
    std::ifstream in(cfg.complex_path);
    if (!in) throw SurfaceError("cannot open complex file: " + cfg.complex_path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    std::ostringstream out;
    if (text.rfind("OFF", 0) == 0) {
        TriangulatedSurface T = surface_from_off_text(text);
        NormResult res = norm_lp(T);
        out << "{\n";
        out << "  \"triangles\": " << T.triangles.size() << ",\n";
        out << "  \"euler\": " << euler_characteristic(T) << ",\n";
        out << "  \"genus\": " << genus(T) << ",\n";
        out << "  \"value\": \"" << rat_str(res.value) << "\",\n";
        out << "  \"certified\": " << (res.certified ? "true" : "false") << "\n";
        out << "}\n";
    } else {
        auto [poset, simplices] = stratified_cycle_from_json_text(text);
        StratVerdict v = check_stratified_cycle(poset, simplices);
        out << "{\n";
        out << "  \"cellular\": " << (v.cellular ? "true" : "false") << ",\n";
        out << "  \"ordered\": " << (v.ordered ? "true" : "false") << ",\n";
        out << "  \"interior\": " << (v.interior ? "true" : "false") << ",\n";
        out << "  \"loops_ok\": " << (v.loops_ok ? "true" : "false") << ",\n";
        out << "  \"violations\": [";
        for (size_t i = 0; i < v.violations.size(); ++i)
            out << (i ? ", " : "") << "\"" << v.violations[i] << "\"";
        out << "]\n";
        out << "}\n";
    }
    write_file(cfg.out_dir, "norm.json", out.str());
    return 0;
}

int run_partition(const Config& cfg) {
    DiscretizedStratifiedSpace space = load_space(cfg.space_path);
    Partition part = build_partition(space, cfg.eps);
    std::vector<int> sizes(space.n_strata, 0);
    for (int s : part.patch) ++sizes[s];
    std::ostringstream out;
    out << "{\n";
    out << "  \"eps\": [";
    for (size_t i = 0; i < part.eps.size(); ++i)
        out << (i ? ", " : "") << fmt(part.eps[i]);
    out << "],\n";
    out << "  \"delta\": " << fmt(part.delta) << ",\n";
    out << "  \"patch_sizes\": {";
    for (int s = 0; s < space.n_strata; ++s)
        out << (s ? ", " : "") << "\"" << space.names[s] << "\": " << sizes[s];
    out << "},\n";
    out << "  \"separation_ok\": " << (part.separation_ok ? "true" : "false") << ",\n";
    out << "  \"proximity_ok\": " << (part.proximity_ok ? "true" : "false") << ",\n";
    out << "  \"retract_ok\": " << (part.retract_ok ? "true" : "false") << "\n";
    out << "}\n";
    write_file(cfg.out_dir, "partition.json", out.str());
    return part.all_ok() ? 0 : 2;
}

int run_theorem(const Config& cfg) {
    Scene scene = load_scene(cfg.scene_path);
    scene.validate();
    MMCensus census = run_census(scene, cfg);
    // lower-bound data: simplicial volume of the double, 4g - 4 = -2 chi(D)
    // with chi(D) = 2 chi(X); planar domains give spheres/tori, volume 0
    long long lower = 0;
    if (scene.euler) lower = std::max(0LL, -4LL * *scene.euler);
    std::ostringstream out;
    if (lower == 0) {
        out << census.count << " >= 0 * c: consistent\n";
    } else if (census.count > 0) {
        out << census.count << " >= " << lower
            << " * c: consistent (c unquantified)\n";
    } else {
        out << "0 mm trajectories against norm lower bound " << lower
            << ": INCONSISTENT\n";
    }
    out << "counting inequality r <= (n+2)*count: r = " << census.boundary_points
        << ", bound = " << (census.n + 2) * census.count << " -> "
        << (census.counting_inequality() ? "holds" : "VIOLATED") << "\n";
    write_file(cfg.out_dir, "theorem.txt", out.str());
    std::cout << out.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"traversing-vector-field analysis toolkit"};
    Config cfg;
    app.add_option("--scene", cfg.scene_path, "scene JSON file");
    app.add_option("--chain", cfg.chain_path, "labeled chain JSON file");
    app.add_option("--coloring", cfg.coloring_path, "partial coloring JSON file");
    app.add_option("--complex", cfg.complex_path,
                   "triangulated surface (OFF) or stratified cycle (JSON)");
    app.add_option("--space", cfg.space_path, "discretized stratified space JSON");
    app.add_option("--analysis", cfg.analysis,
                   "strata | census | graph | chains | norm | partition | theorem");
    app.add_option("--tol", cfg.tol, "numerical tolerance");
    app.add_option("--seeds", cfg.seeds, "Newton seed count");
    app.add_option("--seed", cfg.seed, "offset into the seed sequence");
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--eps", cfg.eps, "epsilon for chains / partition analyses");
    app.add_flag("--allow-nongeneric", cfg.allow_nongeneric,
                 "report genericity violations instead of failing");
    CLI11_PARSE(app, argc, argv);

    try {
        if (cfg.tol <= 0) throw std::runtime_error("--tol must be positive");
        if (cfg.seeds <= 0) throw std::runtime_error("--seeds must be positive");
        if (cfg.analysis == "strata") return run_strata(cfg);
        if (cfg.analysis == "census") return run_census_analysis(cfg, false);
        if (cfg.analysis == "graph") return run_census_analysis(cfg, true);
        if (cfg.analysis == "chains") return run_chains(cfg);
        if (cfg.analysis == "norm") return run_norm(cfg);
        if (cfg.analysis == "partition") return run_partition(cfg);
        if (cfg.analysis == "theorem") return run_theorem(cfg);
        throw std::runtime_error("unknown analysis '" + cfg.analysis + "'");
    } catch (const traverse::GenericityViolation& e) {
        if (cfg.allow_nongeneric) {
            std::cout << "genericity violation (allowed): " << e.what() << "\n";
            return 0;
        }
        std::cerr << "genericity violation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
