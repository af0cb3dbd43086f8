// Epsilon-partitions of discretized stratified metric spaces: carve the
// space into patches P_S, one per stratum, processed in order of stratum
// dimension. At each step the patch is an eps_k-neighborhood of what is
// left of the stratum, with eps_k chosen maximal under the containment
// N_{3 eps_k}(core) inside the stratum's tube U_S, then halved. The
// realized sequence eps_0 > eps_1 > ... and the separation constant
// delta = eps_last / 2 are returned together with exhaustively verified
// distance properties.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace traverse {

struct PartitionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DiscretizedStratifiedSpace {
    int dim = 2;                      // ambient coordinate dimension
    int n_points = 0;
    std::vector<double> coords;       // n_points * dim, row-major
    std::vector<int> stratum;         // stratum label per point

    int n_strata = 0;
    std::vector<std::string> names;
    std::vector<int> strat_dim;
    std::vector<std::vector<bool>> leq;   // closure order, reflexive-transitive
    std::vector<std::vector<char>> in_u;  // [stratum][point]: tube membership

    const double* point(int i) const { return coords.data() + static_cast<size_t>(i) * dim; }
    double dist(int i, int j) const;
    bool comparable(int a, int b) const { return leq[a][b] || leq[b][a]; }
};

// Checks: labels in range, S inside U_S, U_S disjoint from the closure of
// any stratum S' with not(S <= S'), and incomparable strata separated by
// more than 1.5x the grid spacing (minimum nearest-neighbor distance).
// The separation precheck skips pairs of top-dimensional strata: those may
// abut across a lower stratum one diagonal step apart, which is legitimate.
void validate_space(const DiscretizedStratifiedSpace& space);

struct Partition {
    std::vector<int> patch;           // owning stratum per point
    std::vector<int> step_stratum;    // strata in processing order
    std::vector<double> eps;          // realized eps_k per step
    double delta = 0;

    bool separation_ok = false;   // incomparable patches/strata > delta apart
    bool proximity_ok = false;    // every x in P_S has dist(x, S) < eps
    bool retract_ok = false;      // N_delta(P_S) inside U_S
    std::vector<std::string> violations;
    bool all_ok() const { return separation_ok && proximity_ok && retract_ok; }
};

// eps bounds every realized eps_k; throws PartitionError on invalid input or
// when no admissible eps_k exists at some step (resolution too coarse).
Partition build_partition(const DiscretizedStratifiedSpace& space, double eps);

// Plane fan on a grid x grid lattice over [-1,1]^2: one 0-stratum (center
// point), three 1-strata (ray up, ray down-left, ray down-right), three
// 2-strata (sectors between consecutive rays). Tube widths 0.3 / 0.1 for
// dimensions 0 / 1; top-dimensional tubes equal the strata.
DiscretizedStratifiedSpace fan_space(int grid);

// Two axis-aligned lines through the center of the grid with the crossing
// point itself labeled as the ambient 2-stratum; the two 1-strata are
// incomparable at one diagonal spacing, so validation rejects the space.
DiscretizedStratifiedSpace crossing_space(int grid);

// JSON: either {"builtin": "fan" | "crossing", "grid": n} or an explicit
// {"dim", "points": [[...], ...], "stratum": [...], "names": [...],
//  "strat_dims": [...], "relations": [[a,b], ...], "U": [[point ids], ...]}
DiscretizedStratifiedSpace space_from_json_text(const std::string& text);
DiscretizedStratifiedSpace load_space(const std::string& path);

}  // namespace traverse
