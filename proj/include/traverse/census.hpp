// Maximum-multiplicity trajectory censuses and the 2D trajectory-space
// graph, plus the versal local-model scene generator.
//
// A trajectory is "mm" when its reduced multiplicity equals n = dim - 1.
// In 2D those are the types (2) and (121); the census flows through each
// depth-2 tangency point. In 3D they are (31), (13) (through depth-3
// points) and (1221), found by sweeping the depth-2 curves for parameter
// values where a second tangency appears.

#pragma once

#include <string>
#include <vector>

#include "traverse/flow.hpp"

namespace traverse {

// Versal model of a type sequence (m_1, ..., m_p): coordinates
// (u, transverse vars), v = d/du, face i cut by
// P_{m_i}(u - i, x_i) = (u-i)^{m_i} + sum_l x_{i,l} (u-i)^l  (l <= m_i - 2),
// nonnegative for i < p and nonpositive for i = p. The designated
// trajectory is the u-axis with tangency points at u = 1..p.
struct LocalModel {
    std::vector<int> type;
    Scene scene;
    Point entry;                      // designated start: u = 1, x = 0
    std::vector<Point> tangencies;    // u = i on the u-axis, i = 1..p
};

LocalModel make_local_model(const std::vector<int>& type);

// End-to-end identity check: integrate the designated trajectory of the
// model and return the detected type (must equal the input).
std::vector<int> roundtrip_type(const std::vector<int>& type,
                                const FlowOptions& opts = {});

struct CensusOptions {
    int seed_count = 400;        // Newton seeds for strata search
    int sweep_samples = 1000;    // 3D depth-2 curve sweep resolution
    StrataOptions strata;
    FlowOptions flow;
    bool check_genericity = true;
    double dedup = 1e-4;         // trajectory dedup by event positions
};

struct MMCensus {
    std::vector<Trajectory> trajectories;
    int count = 0;             // number of mm trajectories
    int boundary_points = 0;   // r: total boundary events on mm trajectories
    bool complete = true;      // false when 3D curve continuation failed
    int n = 1;

    // r <= (n+2) * count, with the convention 0 <= 0 for empty censuses
    bool counting_inequality() const { return boundary_points <= (n + 2) * count; }
};

MMCensus count_mm_2d(const Scene& scene, const CensusOptions& opts = {});
MMCensus count_mm_3d(const Scene& scene, const CensusOptions& opts = {});

// The trajectory space of a 2D scene: vertices are mm trajectories,
// edges are connected 1-parameter families of (11)-type trajectories,
// delimited on each entry arc by tangency parameters and by the shadows
// of (121) entries. Edge ends clipped by the bounding box stay open
// (endpoint index -1) and count as compactification vertices in euler().
struct TrajectoryGraph {
    struct Vertex {
        int census_index;
        std::vector<int> type;
        Point anchor;  // tangency location (m >= 2 event / singleton point)
    };
    struct Edge {
        int a = -1, b = -1;  // vertex indices; -1 = open end
        int face = 0;        // entry face carrying the family
        Point rep_entry;     // a representative interior entry point
    };
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;

    int degree(int vertex) const;
    int open_ends() const;
    int euler() const;  // (V + open ends) - E
};

TrajectoryGraph build_trajectory_graph_2d(const Scene& scene, const MMCensus& census,
                                          const CensusOptions& opts = {});

std::string census_csv(const MMCensus& census);
std::string graph_dot(const TrajectoryGraph& graph);
std::string trajectories_jsonl(const MMCensus& census);

}  // namespace traverse
