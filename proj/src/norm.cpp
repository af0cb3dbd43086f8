#include "traverse/norm.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace traverse {

namespace {

// +1/-1 incidence of triangle t on edge (a,b) with a < b
int incidence(const std::array<int, 3>& t, int a, int b) {
    for (int i = 0; i < 3; ++i) {
        if (t[i] == a && t[(i + 1) % 3] == b) return 1;
        if (t[i] == b && t[(i + 1) % 3] == a) return -1;
    }
    return 0;
}

}  // namespace

NormResult norm_lp(const TriangulatedSurface& T) {
    if (!is_closed(T)) throw SurfaceError("norm_lp: surface must be closed");
    if (!is_connected(T)) throw SurfaceError("norm_lp: surface must be connected");

    const int nt = static_cast<int>(T.triangles.size());
    const int ne = static_cast<int>(T.edges.size());
    // r_t = p_t - q_t with p, q >= 0; minimize sum (p + q)
    const int n = 2 * nt;
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> b;
    for (int ei = 0; ei < ne; ++ei) {
        const auto& e = T.edges[ei];
        std::vector<Rat> row(n, 0);
        for (int ti : e.tris) {
            int s = incidence(T.triangles[ti], e.a, e.b);
            row[ti] += s;
            row[nt + ti] -= s;
        }
        A.push_back(std::move(row));
        b.push_back(0);
    }
    // pairing with the orientation cocycle: the cycle represents the same
    // class as the sum of all triangles, whose pairing is the triangle count
    std::vector<Rat> deg(n, 0);
    for (int ti = 0; ti < nt; ++ti) {
        deg[ti] = 1;
        deg[nt + ti] = -1;
    }
    A.push_back(std::move(deg));
    b.push_back(nt);

    std::vector<Rat> c(n, 1);
    LPResult lp = solve_lp(A, b, c);
    if (lp.status == LPStatus::Infeasible)
        throw SurfaceError("norm_lp: cycle system infeasible");
    if (lp.status == LPStatus::Unbounded)
        throw SurfaceError("norm_lp: objective unbounded");

    NormResult res;
    res.value = lp.value;
    res.certified = lp.certified;
    res.coeffs.resize(nt);
    for (int ti = 0; ti < nt; ++ti) res.coeffs[ti] = lp.x[ti] - lp.x[nt + ti];
    return res;
}

// ---------------------------------------------------------------------------

StratPoset make_poset(int n_strata, std::vector<std::string> names, std::vector<int> dim,
                      const std::vector<std::pair<int, int>>& relations) {
    if (static_cast<int>(names.size()) != n_strata ||
        static_cast<int>(dim.size()) != n_strata)
        throw StratError("poset: names/dims size mismatch");
    StratPoset P;
    P.n_strata = n_strata;
    P.names = std::move(names);
    P.dim = std::move(dim);
    P.leq_.assign(n_strata, std::vector<bool>(n_strata, false));
    for (int i = 0; i < n_strata; ++i) P.leq_[i][i] = true;
    for (auto [a, bb] : relations) {
        if (a < 0 || a >= n_strata || bb < 0 || bb >= n_strata)
            throw StratError("poset: relation index out of range");
        P.leq_[a][bb] = true;
    }
    for (int k = 0; k < n_strata; ++k)
        for (int i = 0; i < n_strata; ++i)
            if (P.leq_[i][k])
                for (int j = 0; j < n_strata; ++j)
                    if (P.leq_[k][j]) P.leq_[i][j] = true;
    for (int i = 0; i < n_strata; ++i)
        for (int j = 0; j < n_strata; ++j)
            if (i != j && P.leq_[i][j] && P.leq_[j][i])
                throw StratError("poset: order relation is not antisymmetric");
    return P;
}

StratVerdict check_stratified_cycle(const StratPoset& P,
                                    const std::vector<StratSimplex>& simplices) {
    StratVerdict v;
    v.cellular = v.ordered = v.interior = v.loops_ok = true;
    auto note = [&](const std::string& msg) { v.violations.push_back(msg); };

    for (size_t si = 0; si < simplices.size(); ++si) {
        const auto& s = simplices[si];
        const std::string tag = "simplex " + std::to_string(si);
        for (const auto& f : s.faces) {
            if (f.strata.empty())
                throw StratError(tag + ": face without stratum labels");
            for (int st : f.strata)
                if (st < 0 || st >= P.n_strata)
                    throw StratError(tag + ": stratum index out of range");
            if (f.strata.size() != 1) {
                if (v.cellular) note(tag + ": face meets several strata");
                v.cellular = false;
            }
        }

        // order: all strata met by the simplex pairwise comparable
        std::set<int> met;
        for (const auto& f : s.faces) met.insert(f.strata.begin(), f.strata.end());
        for (int a : met)
            for (int bb : met)
                if (a < bb && !P.comparable(a, bb)) {
                    if (v.ordered)
                        note(tag + ": meets incomparable strata " + P.names[a] + ", " +
                             P.names[bb]);
                    v.ordered = false;
                }

        // interior locality: a face all of whose proper subfaces meet only S
        // must itself stay in S
        for (const auto& f : s.faces) {
            if (f.corners.size() < 2) continue;
            std::set<int> sub;
            bool have_sub = false;
            for (const auto& g : s.faces) {
                if (g.corners.size() >= f.corners.size()) continue;
                if (!std::includes(f.corners.begin(), f.corners.end(), g.corners.begin(),
                                   g.corners.end()))
                    continue;
                have_sub = true;
                sub.insert(g.strata.begin(), g.strata.end());
            }
            if (have_sub && sub.size() == 1 && f.strata != sub) {
                if (v.interior)
                    note(tag + ": face leaves the stratum of all its proper subfaces");
                v.interior = false;
            }
        }

        // loops: an edge whose endpoints map to the same point must be constant
        for (const auto& f : s.faces) {
            if (f.corners.size() != 2) continue;
            int p0 = s.vertex_points[f.corners[0]];
            int p1 = s.vertex_points[f.corners[1]];
            if (p0 == p1 && !f.constant) {
                if (v.loops_ok) note(tag + ": non-constant edge loop");
                v.loops_ok = false;
            }
        }
    }
    return v;
}

std::pair<StratPoset, std::vector<StratSimplex>> stratified_cycle_from_json_text(
    const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw StratError(std::string("stratified cycle: bad JSON: ") + e.what());
    }
    if (!j.contains("poset") || !j.contains("simplices"))
        throw StratError("stratified cycle: need poset and simplices");
    const auto& jp = j["poset"];
    std::vector<std::string> names = jp.at("names").get<std::vector<std::string>>();
    std::vector<int> dims = jp.at("dims").get<std::vector<int>>();
    std::vector<std::pair<int, int>> rels;
    for (const auto& r : jp.at("relations"))
        rels.emplace_back(r.at(0).get<int>(), r.at(1).get<int>());
    StratPoset P = make_poset(static_cast<int>(names.size()), names, dims, rels);

    std::vector<StratSimplex> simplices;
    for (const auto& js : j["simplices"]) {
        StratSimplex s;
        s.dim = js.at("dim").get<int>();
        s.vertex_points = js.at("vertex_points").get<std::vector<int>>();
        if (static_cast<int>(s.vertex_points.size()) != s.dim + 1)
            throw StratError("stratified cycle: vertex_points size must be dim + 1");
        for (const auto& jf : js.at("faces")) {
            StratFace f;
            f.corners = jf.at("corners").get<std::vector<int>>();
            std::sort(f.corners.begin(), f.corners.end());
            for (int c : f.corners)
                if (c < 0 || c > s.dim)
                    throw StratError("stratified cycle: corner out of range");
            for (int st : jf.at("strata").get<std::vector<int>>()) f.strata.insert(st);
            f.constant = jf.value("constant", false);
            s.faces.push_back(std::move(f));
        }
        simplices.push_back(std::move(s));
    }
    return {std::move(P), std::move(simplices)};
}

std::pair<StratPoset, std::vector<StratSimplex>> load_stratified_cycle(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StratError("cannot open stratified cycle file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return stratified_cycle_from_json_text(ss.str());
}

}  // namespace traverse
