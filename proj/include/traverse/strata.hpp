// Iterated tangency loci d_k X, point multiplicities, and the
// boundary-generic / traversally generic certificates.
//
// d_k X is computed as the zero set of the stacked system
// F = vF = ... = v^{k-1}F = 0 on each face, solved by Newton iteration
// from low-discrepancy seeds; in 3D the k = 2 locus is a curve and is
// traced by pseudo-arclength continuation.

#pragma once

#include <vector>

#include "traverse/scene.hpp"

namespace traverse {

struct DegenerateTangency : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TangencyPoint {
    Point location;
    int face = 0;
    int multiplicity = 0;
    double residual = 0;       // max |c_j| for j < m
    double leading_coeff = 0;  // c_m
};

struct StratumSample {
    int depth = 0;  // k: points satisfy F = vF = ... = v^{k-1}F = 0
    std::vector<TangencyPoint> points;
    // 3D, k = 2: polyline chains from continuation, one per curve component
    struct Curve {
        int face;
        std::vector<Point> polyline;
        bool closed = false;
    };
    std::vector<Curve> curves;
};

struct StrataOptions {
    double tol = 1e-7;
    double dedup_radius = 1e-4;
    double continuation_step = 1e-2;
    bool trace_curves = true;  // 3D k=2 continuation
    int seed_offset = 0;       // skip count into the low-discrepancy sequence
};

// Multiplicity of a at the boundary: 0 if a is not on any face within tol,
// otherwise the vanishing order of the flow jet on the nearest face.
// Throws DegenerateTangency when the jet vanishes beyond order n+1.
int point_multiplicity(const Scene& scene, const Point& a, double tol);

// Jet-based multiplicity on a specific face (no boundary-proximity check).
int jet_multiplicity(const Scene& scene, const Point& a, int face, double tol);

StratumSample find_strata(const Scene& scene, int k, int seed_count,
                          const StrataOptions& opts = {});

struct GenericityReport {
    struct Entry {
        Point location;
        int face;
        double min_singular_value;
        bool pass;
    };
    std::vector<Entry> entries;
    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
};

// Full-rank check of the Jacobian of (F, vF, ..., v^{k-1}F) at each sample
// point: smallest singular value >= tol.
GenericityReport check_boundary_generic(const Scene& scene, const StratumSample& sample,
                                        double tol);

// Newton refinement of the depth-k system from an initial guess; returns
// true on convergence. Used by find_strata and by event polishing.
bool newton_stratum_point(const Scene& scene, int face, int k, Point& x,
                          double tol = 1e-12, int max_iter = 60);

}  // namespace traverse
