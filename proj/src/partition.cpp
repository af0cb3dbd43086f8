#include "traverse/partition.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "traverse/parallel.hpp"

namespace traverse {

double DiscretizedStratifiedSpace::dist(int i, int j) const {
    const double* a = point(i);
    const double* b = point(j);
    double s = 0;
    for (int k = 0; k < dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// grid hash over cells of fixed size; coordinates are desk-scale, so cell
// indices fit comfortably in 21 bits per axis
class SpatialHash {
  public:
    SpatialHash(const DiscretizedStratifiedSpace& sp, const std::vector<int>& ids,
                double cell)
        : sp_(sp), cell_(cell) {
        for (int id : ids) cells_[key_of(sp_.point(id))].push_back(id);
    }

    // nearest member distance from point p, or +inf if beyond `limit`;
    // `exclude` skips one member id (for self-queries)
    double nearest(const double* p, double limit, int exclude = -1) const {
        double best = kInf;
        int max_ring = static_cast<int>(std::ceil(limit / cell_)) + 1;
        std::vector<int> base(sp_.dim);
        for (int k = 0; k < sp_.dim; ++k)
            base[k] = static_cast<int>(std::floor(p[k] / cell_));
        for (int ring = 0; ring <= max_ring; ++ring) {
            if (best < (ring - 1) * cell_) break;  // no closer cell remains
            scan_ring(p, base, ring, exclude, best);
        }
        return best <= limit ? best : kInf;
    }

  private:
    long long key_of(const double* p) const {
        long long key = 0;
        for (int k = 0; k < sp_.dim; ++k) {
            long long c = static_cast<long long>(std::floor(p[k] / cell_)) + (1 << 20);
            key = key * (1LL << 21) + c;
        }
        return key;
    }

    void scan_cell(const double* p, const std::vector<int>& idx, int exclude,
                   double& best) const {
        long long key = 0;
        for (int k = 0; k < sp_.dim; ++k)
            key = key * (1LL << 21) + (idx[k] + (1 << 20));
        auto it = cells_.find(key);
        if (it == cells_.end()) return;
        for (int id : it->second) {
            if (id == exclude) continue;
            const double* q = sp_.point(id);
            double s = 0;
            for (int k = 0; k < sp_.dim; ++k) s += (p[k] - q[k]) * (p[k] - q[k]);
            best = std::min(best, std::sqrt(s));
        }
    }

    void scan_ring(const double* p, const std::vector<int>& base, int ring, int exclude,
                   double& best) const {
        std::vector<int> idx(sp_.dim);
        std::function<void(int, bool)> rec = [&](int k, bool on_shell) {
            if (k == sp_.dim) {
                if (on_shell || ring == 0) scan_cell(p, idx, exclude, best);
                return;
            }
            for (int d = -ring; d <= ring; ++d) {
                idx[k] = base[k] + d;
                rec(k + 1, on_shell || std::abs(d) == ring);
            }
        };
        rec(0, false);
    }

    const DiscretizedStratifiedSpace& sp_;
    double cell_;
    std::unordered_map<long long, std::vector<int>> cells_;
};

// exact minimum distance between two point sets (indices into the space)
double min_set_dist(const DiscretizedStratifiedSpace& sp, const std::vector<int>& A,
                    const std::vector<int>& B, double cell_hint) {
    if (A.empty() || B.empty()) return kInf;
    SpatialHash hash(sp, B, cell_hint);
    std::vector<double> d(A.size(), kInf);
    double cap = cell_hint;
    for (;;) {
        parallel_for(static_cast<int>(A.size()), [&](int i) {
            d[i] = hash.nearest(sp.point(A[i]), cap);
        });
        double best = *std::min_element(d.begin(), d.end());
        if (best < kInf) return best;
        cap *= 4;
        if (cap > 1e9) return kInf;
    }
}

double min_spacing(const DiscretizedStratifiedSpace& sp) {
    if (sp.n_points < 2) throw PartitionError("space needs at least 2 points");
    // nearest-neighbor distance, excluding the point itself
    double cell = 1e-3;
    {
        double lo = kInf, hi = -kInf;
        for (int i = 0; i < sp.n_points * sp.dim; ++i) {
            lo = std::min(lo, sp.coords[i]);
            hi = std::max(hi, sp.coords[i]);
        }
        double diam = std::max(hi - lo, 1e-12) * std::sqrt(static_cast<double>(sp.dim));
        cell = diam / std::max(1.0, std::pow(static_cast<double>(sp.n_points),
                                             1.0 / sp.dim));
    }
    std::vector<int> all(sp.n_points);
    std::iota(all.begin(), all.end(), 0);
    std::vector<double> d(sp.n_points, kInf);
    for (;;) {
        SpatialHash hash(sp, all, cell);
        parallel_for(sp.n_points, [&](int i) {
            d[i] = hash.nearest(sp.point(i), cell, /*exclude=*/i);
        });
        double best = *std::min_element(d.begin(), d.end());
        if (best < kInf) return best;
        cell *= 4;  // unusually sparse spacing: widen the search window
    }
}

}  // namespace

void validate_space(const DiscretizedStratifiedSpace& space) {
    if (space.n_points <= 0 || space.dim <= 0)
        throw PartitionError("space: empty point set");
    if (static_cast<int>(space.coords.size()) != space.n_points * space.dim ||
        static_cast<int>(space.stratum.size()) != space.n_points)
        throw PartitionError("space: coordinate/label array size mismatch");
    const int ns = space.n_strata;
    if (ns <= 0 || static_cast<int>(space.names.size()) != ns ||
        static_cast<int>(space.strat_dim.size()) != ns ||
        static_cast<int>(space.leq.size()) != ns ||
        static_cast<int>(space.in_u.size()) != ns)
        throw PartitionError("space: strata table size mismatch");
    for (int s : space.stratum)
        if (s < 0 || s >= ns) throw PartitionError("space: stratum label out of range");
    for (int s = 0; s < ns; ++s) {
        if (!space.leq[s][s]) throw PartitionError("space: order must be reflexive");
        if (static_cast<int>(space.in_u[s].size()) != space.n_points)
            throw PartitionError("space: U_S indicator size mismatch");
    }

    std::vector<std::vector<int>> strat_pts(ns);
    for (int i = 0; i < space.n_points; ++i) strat_pts[space.stratum[i]].push_back(i);

    // S inside U_S
    for (int s = 0; s < ns; ++s)
        for (int i : strat_pts[s])
            if (!space.in_u[s][i])
                throw PartitionError("space: stratum " + space.names[s] +
                                     " is not contained in its tube U_S");

    // not(S <= S') forces U_S to avoid closure(S') = union of strata <= S'
    for (int s = 0; s < ns; ++s)
        for (int t = 0; t < ns; ++t) {
            if (space.leq[s][t]) continue;
            for (int u = 0; u < ns; ++u) {
                if (!space.leq[u][t]) continue;
                for (int i : strat_pts[u])
                    if (space.in_u[s][i])
                        throw PartitionError("space: tube of " + space.names[s] +
                                             " meets the closure of " + space.names[t]);
            }
        }

    // incomparable strata of positive codimension must be separated beyond
    // what the grid resolves; two top-dimensional strata may abut across a
    // lower stratum, which keeps them one diagonal step apart by design
    int top_dim = *std::max_element(space.strat_dim.begin(), space.strat_dim.end());
    double h = min_spacing(space);
    for (int s = 0; s < ns; ++s)
        for (int t = s + 1; t < ns; ++t) {
            if (space.comparable(s, t)) continue;
            if (space.strat_dim[s] == top_dim && space.strat_dim[t] == top_dim) continue;
            double d = min_set_dist(space, strat_pts[s], strat_pts[t], 4 * h);
            if (d <= 1.5 * h)
                throw PartitionError(
                    "space: incomparable strata " + space.names[s] + " and " +
                    space.names[t] + " are closer than the grid can separate");
        }
}

Partition build_partition(const DiscretizedStratifiedSpace& space, double eps) {
    if (!(eps > 0)) throw PartitionError("build_partition: eps must be positive");
    validate_space(space);
    const int ns = space.n_strata;
    const int np = space.n_points;

    std::vector<std::vector<int>> strat_pts(ns);
    for (int i = 0; i < np; ++i) strat_pts[space.stratum[i]].push_back(i);

    double h = min_spacing(space);

    // strata in order of dimension, then index
    std::vector<int> order(ns);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return space.strat_dim[a] < space.strat_dim[b];
    });

    Partition part;
    part.patch.assign(np, -1);
    double eps_prev = eps;
    for (int s : order) {
        std::vector<int> core;
        for (int i : strat_pts[s])
            if (part.patch[i] < 0) core.push_back(i);
        if (core.empty()) continue;

        std::vector<int> outside;  // complement of the tube U_S
        for (int i = 0; i < np; ++i)
            if (!space.in_u[s][i]) outside.push_back(i);
        double d_star = min_set_dist(space, core, outside, 4 * h);
        if (!(d_star > 0))
            throw PartitionError("build_partition: resolution too coarse at stratum " +
                                 space.names[s]);
        double eps_k = std::min(d_star / 3.0, eps_prev) / 2.0;
        if (!(eps_k > 0))
            throw PartitionError("build_partition: resolution too coarse at stratum " +
                                 space.names[s]);

        // P_S = N_{eps_k}(core) minus everything already taken
        SpatialHash core_hash(space, core, std::max(eps_k, h));
        std::vector<char> take(np, 0);
        parallel_for(np, [&](int i) {
            if (part.patch[i] >= 0) return;
            take[i] = core_hash.nearest(space.point(i), eps_k) <= eps_k;
        });
        for (int i = 0; i < np; ++i)
            if (take[i]) part.patch[i] = s;

        part.step_stratum.push_back(s);
        part.eps.push_back(eps_k);
        eps_prev = eps_k;
    }
    part.delta = eps_prev / 2.0;

    // every point must be owned (each point lies in its own stratum's core
    // when reached, so this only fails on construction bugs)
    for (int i = 0; i < np; ++i)
        if (part.patch[i] < 0)
            throw PartitionError("build_partition: point left uncovered");

    std::vector<std::vector<int>> patch_pts(ns);
    for (int i = 0; i < np; ++i) patch_pts[part.patch[i]].push_back(i);
    auto note = [&](const std::string& m) { part.violations.push_back(m); };

    // separation: incomparable S, S' keep P_S, P_S' and the strata themselves
    // more than delta apart
    part.separation_ok = true;
    for (int s = 0; s < ns; ++s)
        for (int t = 0; t < ns; ++t) {
            if (s == t || space.comparable(s, t)) continue;
            double d1 = min_set_dist(space, patch_pts[s], patch_pts[t], 4 * h);
            double d2 = min_set_dist(space, patch_pts[s], strat_pts[t], 4 * h);
            if (d1 <= part.delta) {
                part.separation_ok = false;
                note("patches " + space.names[s] + "/" + space.names[t] +
                     " within delta");
            }
            if (d2 <= part.delta) {
                part.separation_ok = false;
                note("patch " + space.names[s] + " within delta of stratum " +
                     space.names[t]);
            }
        }

    // proximity: every x in P_S lies within eps of S
    part.proximity_ok = true;
    for (int s = 0; s < ns; ++s) {
        if (patch_pts[s].empty()) continue;
        SpatialHash strat_hash(space, strat_pts[s], std::max(eps, h));
        std::vector<char> bad(patch_pts[s].size(), 0);
        parallel_for(static_cast<int>(patch_pts[s].size()), [&](int i) {
            bad[i] = !(strat_hash.nearest(space.point(patch_pts[s][i]), eps) < eps);
        });
        for (size_t i = 0; i < bad.size(); ++i)
            if (bad[i]) {
                part.proximity_ok = false;
                note("patch " + space.names[s] + " reaches eps away from its stratum");
                break;
            }
    }

    // retraction surrogate: N_delta(P_S) stays inside the tube U_S
    part.retract_ok = true;
    for (int s = 0; s < ns; ++s) {
        if (patch_pts[s].empty()) continue;
        SpatialHash patch_hash(space, patch_pts[s], std::max(part.delta, h));
        std::vector<char> bad(static_cast<size_t>(np), 0);
        parallel_for(np, [&](int i) {
            if (space.in_u[s][i]) return;
            bad[i] = patch_hash.nearest(space.point(i), part.delta) <= part.delta;
        });
        for (int i = 0; i < np; ++i)
            if (bad[i]) {
                part.retract_ok = false;
                note("delta-neighborhood of patch " + space.names[s] +
                     " leaves its tube");
                break;
            }
    }
    return part;
}

DiscretizedStratifiedSpace fan_space(int grid) {
    if (grid < 9) throw PartitionError("fan_space: grid too small");
    DiscretizedStratifiedSpace sp;
    sp.dim = 2;
    sp.n_points = grid * grid;
    sp.coords.resize(static_cast<size_t>(sp.n_points) * 2);
    sp.stratum.resize(sp.n_points);
    const int c = grid / 2;
    auto coord = [&](int idx) { return -1.0 + 2.0 * idx / (grid - 1); };

    // 0: center; 1,2,3: rays up / down-left / down-right; 4,5,6: sectors
    // A (upper-left), B (bottom), C (upper-right)
    sp.n_strata = 7;
    sp.names = {"center", "ray-up", "ray-down-left", "ray-down-right",
                "sector-a", "sector-b", "sector-c"};
    sp.strat_dim = {0, 1, 1, 1, 2, 2, 2};

    const double cx = coord(c), cy = coord(c);
    for (int iy = 0; iy < grid; ++iy)
        for (int ix = 0; ix < grid; ++ix) {
            int p = iy * grid + ix;
            double x = coord(ix), y = coord(iy);
            sp.coords[2 * p] = x;
            sp.coords[2 * p + 1] = y;
            int s;
            int dxi = ix - c, dyi = iy - c;
            if (dxi == 0 && dyi == 0)
                s = 0;
            else if (dxi == 0 && dyi > 0)
                s = 1;
            else if (dxi < 0 && dyi == dxi)
                s = 2;
            else if (dxi > 0 && dyi == -dxi)
                s = 3;
            else {
                double ang = std::atan2(y - cy, x - cx) * 180.0 / M_PI;  // (-180, 180]
                if (ang > 90.0 || ang <= -135.0)
                    s = 4;
                else if (ang > -135.0 && ang <= -45.0)
                    s = 5;
                else
                    s = 6;
            }
            sp.stratum[p] = s;
        }

    sp.leq.assign(7, std::vector<bool>(7, false));
    for (int i = 0; i < 7; ++i) sp.leq[i][i] = true;
    auto rel = [&](int a, int b) { sp.leq[a][b] = true; };
    for (int s = 1; s < 7; ++s) rel(0, s);
    rel(1, 4); rel(1, 6);   // ray up borders sectors A and C
    rel(2, 4); rel(2, 5);   // ray down-left borders A and B
    rel(3, 5); rel(3, 6);   // ray down-right borders B and C

    // tubes: distance threshold minus closures of strata not above S
    const double w[7] = {0.3, 0.1, 0.1, 0.1, 0, 0, 0};
    sp.in_u.assign(7, std::vector<char>(sp.n_points, 0));
    std::vector<std::vector<int>> strat_pts(7);
    for (int i = 0; i < sp.n_points; ++i) strat_pts[sp.stratum[i]].push_back(i);
    for (int s = 0; s < 7; ++s) {
        // a point of stratum u is forbidden when u lies in the closure of
        // some t with not(s <= t)
        std::vector<char> allowed(7, 1);
        for (int t = 0; t < 7; ++t)
            if (!sp.leq[s][t])
                for (int u = 0; u < 7; ++u)
                    if (sp.leq[u][t]) allowed[u] = 0;
        for (int i = 0; i < sp.n_points; ++i) {
            if (!allowed[sp.stratum[i]]) continue;
            if (sp.strat_dim[s] == 2) {
                sp.in_u[s][i] = sp.stratum[i] == s;
                continue;
            }
            double best = kInf;
            for (int j : strat_pts[s]) best = std::min(best, sp.dist(i, j));
            sp.in_u[s][i] = best <= w[s];
        }
    }
    return sp;
}

DiscretizedStratifiedSpace crossing_space(int grid) {
    if (grid < 5) throw PartitionError("crossing_space: grid too small");
    DiscretizedStratifiedSpace sp;
    sp.dim = 2;
    sp.n_points = grid * grid;
    sp.coords.resize(static_cast<size_t>(sp.n_points) * 2);
    sp.stratum.resize(sp.n_points);
    const int c = grid / 2;
    auto coord = [&](int idx) { return -1.0 + 2.0 * idx / (grid - 1); };

    // 0: vertical line, 1: horizontal line, 2: plane; the crossing point is
    // deliberately labeled as plane, leaving two incomparable 1-strata that
    // nearly touch
    sp.n_strata = 3;
    sp.names = {"line-vertical", "line-horizontal", "plane"};
    sp.strat_dim = {1, 1, 2};
    for (int iy = 0; iy < grid; ++iy)
        for (int ix = 0; ix < grid; ++ix) {
            int p = iy * grid + ix;
            sp.coords[2 * p] = coord(ix);
            sp.coords[2 * p + 1] = coord(iy);
            if (ix == c && iy == c)
                sp.stratum[p] = 2;
            else if (ix == c)
                sp.stratum[p] = 0;
            else if (iy == c)
                sp.stratum[p] = 1;
            else
                sp.stratum[p] = 2;
        }
    sp.leq.assign(3, std::vector<bool>(3, false));
    for (int i = 0; i < 3; ++i) sp.leq[i][i] = true;
    sp.leq[0][2] = sp.leq[1][2] = true;

    sp.in_u.assign(3, std::vector<char>(sp.n_points, 0));
    std::vector<std::vector<int>> strat_pts(3);
    for (int i = 0; i < sp.n_points; ++i) strat_pts[sp.stratum[i]].push_back(i);
    for (int s = 0; s < 2; ++s)
        for (int i = 0; i < sp.n_points; ++i) {
            if (sp.stratum[i] == 1 - s) continue;  // avoid the other closure
            double best = kInf;
            for (int j : strat_pts[s]) best = std::min(best, sp.dist(i, j));
            sp.in_u[s][i] = best <= 0.1;
        }
    for (int i = 0; i < sp.n_points; ++i) sp.in_u[2][i] = sp.stratum[i] == 2;
    return sp;
}

DiscretizedStratifiedSpace space_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw PartitionError(std::string("space: bad JSON: ") + e.what());
    }
    if (j.contains("builtin")) {
        std::string which = j["builtin"].get<std::string>();
        int grid = j.value("grid", 200);
        if (which == "fan") return fan_space(grid);
        if (which == "crossing") return crossing_space(grid);
        throw PartitionError("space: unknown builtin '" + which + "'");
    }
    DiscretizedStratifiedSpace sp;
    sp.dim = j.value("dim", 2);
    for (const auto& pt : j.at("points")) {
        if (static_cast<int>(pt.size()) != sp.dim)
            throw PartitionError("space: point dimension mismatch");
        for (const auto& v : pt) sp.coords.push_back(v.get<double>());
    }
    sp.n_points = static_cast<int>(sp.coords.size()) / sp.dim;
    sp.stratum = j.at("stratum").get<std::vector<int>>();
    sp.names = j.at("names").get<std::vector<std::string>>();
    sp.strat_dim = j.at("strat_dims").get<std::vector<int>>();
    sp.n_strata = static_cast<int>(sp.names.size());
    sp.leq.assign(sp.n_strata, std::vector<bool>(sp.n_strata, false));
    for (int i = 0; i < sp.n_strata; ++i) sp.leq[i][i] = true;
    for (const auto& r : j.at("relations")) {
        int a = r.at(0).get<int>(), b = r.at(1).get<int>();
        if (a < 0 || a >= sp.n_strata || b < 0 || b >= sp.n_strata)
            throw PartitionError("space: relation index out of range");
        sp.leq[a][b] = true;
    }
    for (int k = 0; k < sp.n_strata; ++k)
        for (int i = 0; i < sp.n_strata; ++i)
            if (sp.leq[i][k])
                for (int l = 0; l < sp.n_strata; ++l)
                    if (sp.leq[k][l]) sp.leq[i][l] = true;
    sp.in_u.assign(sp.n_strata, std::vector<char>(sp.n_points, 0));
    const auto& ju = j.at("U");
    if (static_cast<int>(ju.size()) != sp.n_strata)
        throw PartitionError("space: U list size mismatch");
    for (int s = 0; s < sp.n_strata; ++s)
        for (const auto& idx : ju[s]) {
            int i = idx.get<int>();
            if (i < 0 || i >= sp.n_points)
                throw PartitionError("space: U point index out of range");
            sp.in_u[s][i] = 1;
        }
    return sp;
}

DiscretizedStratifiedSpace load_space(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PartitionError("cannot open space file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return space_from_json_text(ss.str());
}

}  // namespace traverse
