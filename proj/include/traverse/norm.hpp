// The l1 seminorm of the fundamental class of a closed oriented surface,
// computed over its own triangulation: minimize sum |r_t| over real 2-cycles
// sum r_t t whose pairing with the orientation cocycle equals the triangle
// count of the representative (so the cycle stays in the fundamental class).
// Solved exactly over the rationals.
//
// Also: a checker for simplicial cycles mapped into a stratified space.
// Each simplex carries, per face, the set of strata its interior meets; the
// checker reports which of the cellularity / order / interior-locality /
// loop conditions hold.

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "traverse/lp.hpp"
#include "traverse/surface.hpp"

namespace traverse {

struct NormResult {
    Rat value = 0;               // minimal sum |r_t|
    std::vector<Rat> coeffs;     // optimal cycle coefficients per triangle
    bool certified = false;
};

// T must be closed and connected; throws SurfaceError otherwise or when the
// cycle system is infeasible.
NormResult norm_lp(const TriangulatedSurface& T);

// ---------------------------------------------------------------------------

struct StratPoset {
    int n_strata = 0;
    std::vector<std::string> names;
    std::vector<int> dim;                    // dimension of each stratum
    std::vector<std::vector<bool>> leq_;     // reflexive-transitive closure

    bool leq(int a, int b) const { return leq_[a][b]; }
    bool comparable(int a, int b) const { return leq_[a][b] || leq_[b][a]; }
};

// relations: pairs (a, b) meaning a < b (a in the closure of b); the closure
// is computed, reflexivity added, antisymmetry checked.
StratPoset make_poset(int n_strata, std::vector<std::string> names, std::vector<int> dim,
                      const std::vector<std::pair<int, int>>& relations);

struct StratError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StratFace {
    std::vector<int> corners;   // vertex positions of the simplex spanning it
    std::set<int> strata;       // strata met by the open face
    bool constant = false;      // the map is constant on this face
};

struct StratSimplex {
    int dim = 0;
    std::vector<int> vertex_points;  // ids of the mapped vertex images
    std::vector<StratFace> faces;    // all faces, every dimension incl. top
};

struct StratVerdict {
    bool cellular = false;   // every open face sits in a single stratum
    bool ordered = false;    // strata met by each simplex pairwise comparable
    bool interior = false;   // face whose proper subfaces all meet S stays in S
    bool loops_ok = false;   // edges with equal endpoint images are constant
    std::vector<std::string> violations;
};

StratVerdict check_stratified_cycle(const StratPoset& P,
                                    const std::vector<StratSimplex>& simplices);

// JSON: {"poset": {"names": [...], "dims": [...], "relations": [[a,b],...]},
//        "simplices": [{"dim": d, "vertex_points": [...],
//                       "faces": [{"corners": [...], "strata": [...],
//                                  "constant": bool}, ...]}]}
std::pair<StratPoset, std::vector<StratSimplex>> stratified_cycle_from_json_text(
    const std::string& text);
std::pair<StratPoset, std::vector<StratSimplex>> load_stratified_cycle(
    const std::string& path);

}  // namespace traverse
