#include "traverse/strata.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace traverse {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd system_values(const Scene& scene, int face, int k, const Point& x) {
    VectorXd f(k);
    for (int j = 0; j < k; ++j) f[j] = scene.face(face).lie[j]->eval(x);
    return f;
}

MatrixXd system_jacobian(const Scene& scene, int face, int k, const Point& x) {
    MatrixXd J(k, scene.dim());
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < scene.dim(); ++i)
            J(j, i) = scene.face(face).lie_grad[j][i]->eval(x);
    return J;
}

double dist2(const Point& a, const Point& b) {
    double d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
    return d;
}

}  // namespace

int jet_multiplicity(const Scene& scene, const Point& a, int face, double tol) {
    const int cap = scene.n() + 2;
    FlowJet jet = scene.flow_jet(a, cap, face);
    double scale = std::max(1.0, jet.sup_norm());
    for (int m = 0; m <= cap; ++m) {
        if (std::abs(jet.coeff[m]) >= tol * scale) {
            if (m > scene.n() + 1)
                throw DegenerateTangency("jet vanishes to order " + std::to_string(m) +
                                         " > n+1: non-boundary-generic scene");
            return m;
        }
    }
    throw DegenerateTangency("all jet coefficients below tolerance up to order n+2");
}

int point_multiplicity(const Scene& scene, const Point& a, double tol) {
    auto [face, fval] = scene.nearest_face(a);
    double scale = std::max(1.0, std::abs(scene.flow_jet(a, scene.n() + 2, face).sup_norm()));
    if (fval >= tol * scale) return 0;
    return jet_multiplicity(scene, a, face, tol);
}

bool newton_stratum_point(const Scene& scene, int face, int k, Point& x, double tol,
                          int max_iter) {
    const int dim = scene.dim();
    for (int it = 0; it < max_iter; ++it) {
        VectorXd f = system_values(scene, face, k, x);
        if (f.lpNorm<Eigen::Infinity>() < tol) return true;
        MatrixXd J = system_jacobian(scene, face, k, x);
        VectorXd dx;
        if (k == dim) {
            Eigen::ColPivHouseholderQR<MatrixXd> qr(J);
            if (qr.rank() < k) return false;
            dx = qr.solve(-f);
        } else {
            // under-determined: minimal-norm Gauss-Newton step
            dx = J.completeOrthogonalDecomposition().solve(-f);
        }
        if (!dx.allFinite()) return false;
        double step = dx.norm();
        if (step > 0.5 * scene.diameter()) dx *= 0.5 * scene.diameter() / step;
        for (int i = 0; i < dim; ++i) x[i] += dx[i];
        if (!scene.in_bbox(x, 1.0)) return false;
    }
    return system_values(scene, face, k, x).lpNorm<Eigen::Infinity>() < tol;
}

namespace {

// tangent of the depth-2 curve in 3D: null vector of the 2x3 Jacobian
VectorXd curve_tangent(const Scene& scene, int face, const Point& x) {
    MatrixXd J = system_jacobian(scene, face, 2, x);
    Eigen::JacobiSVD<MatrixXd> svd(J, Eigen::ComputeFullV);
    return svd.matrixV().col(2);
}

// corrector: solve {F=0, vF=0, (x - pred) . t = 0}
bool corrector(const Scene& scene, int face, const Point& pred, const VectorXd& t, Point& x) {
    for (int it = 0; it < 40; ++it) {
        VectorXd f(3);
        f.head(2) = system_values(scene, face, 2, x);
        f[2] = 0;
        for (int i = 0; i < 3; ++i) f[2] += (x[i] - pred[i]) * t[i];
        if (f.lpNorm<Eigen::Infinity>() < 1e-12) return true;
        MatrixXd J(3, 3);
        J.topRows(2) = system_jacobian(scene, face, 2, x);
        for (int i = 0; i < 3; ++i) J(2, i) = t[i];
        Eigen::FullPivLU<MatrixXd> lu(J);
        if (!lu.isInvertible()) return false;
        VectorXd dx = lu.solve(-f);
        for (int i = 0; i < 3; ++i) x[i] += dx[i];
    }
    return false;
}

// march from `start` in the direction of `t0`; appends points (not `start`)
bool march(const Scene& scene, int face, const Point& start, VectorXd t,
           double step, std::vector<Point>& out) {
    Point x = start;
    const int max_steps = static_cast<int>(20 * scene.diameter() / step);
    for (int s = 0; s < max_steps; ++s) {
        Point pred(3);
        for (int i = 0; i < 3; ++i) pred[i] = x[i] + step * t[i];
        Point next = pred;
        if (!corrector(scene, face, pred, t, next)) return false;
        if (!scene.in_bbox(next, 0.1)) return false;
        VectorXd tn = curve_tangent(scene, face, next);
        double dot = 0;
        for (int i = 0; i < 3; ++i) dot += t[i] * tn[i];
        if (dot < 0) tn = -tn;
        out.push_back(next);
        x = next;
        t = tn;
        if (s > 3 && dist2(next, start) < 0.25 * step * step) return true;  // closed loop
    }
    return false;
}

StratumSample::Curve trace_curve(const Scene& scene, int face, const Point& start,
                                 double step) {
    StratumSample::Curve c;
    c.face = face;
    VectorXd t = curve_tangent(scene, face, start);
    std::vector<Point> fwd;
    bool closed = march(scene, face, start, t, step, fwd);
    if (closed) {
        c.closed = true;
        c.polyline.push_back(start);
        c.polyline.insert(c.polyline.end(), fwd.begin(), fwd.end());
        c.polyline.push_back(start);
        return c;
    }
    std::vector<Point> bwd;
    march(scene, face, start, -t, step, bwd);
    c.polyline.assign(bwd.rbegin(), bwd.rend());
    c.polyline.push_back(start);
    c.polyline.insert(c.polyline.end(), fwd.begin(), fwd.end());
    return c;
}

}  // namespace

StratumSample find_strata(const Scene& scene, int k, int seed_count,
                          const StrataOptions& opts) {
    if (k < 1 || k > scene.dim())
        throw SceneError("find_strata: depth k must be in [1, n+1]");
    StratumSample sample;
    sample.depth = k;
    auto seeds =
        halton_points(seed_count, scene.bbox_lo(), scene.bbox_hi(), opts.seed_offset);
    for (int face = 0; face < static_cast<int>(scene.faces().size()); ++face) {
        std::vector<TangencyPoint> found;
        for (const auto& seed : seeds) {
            Point x = seed;
            // stage 1: land on the face, stage 2: full stacked system
            if (!newton_stratum_point(scene, face, 1, x)) continue;
            if (k > 1 && !newton_stratum_point(scene, face, k, x)) continue;
            if (!scene.in_bbox(x, 1e-9)) continue;
            // must lie on the actual domain boundary: other faces nonnegative
            bool on_boundary = true;
            for (int of = 0; of < static_cast<int>(scene.faces().size()); ++of)
                if (of != face && scene.face(of).value(x) < -1e-9) on_boundary = false;
            if (!on_boundary) continue;

            TangencyPoint tp;
            tp.location = x;
            tp.face = face;
            try {
                tp.multiplicity = jet_multiplicity(scene, x, face, opts.tol);
            } catch (const DegenerateTangency&) {
                continue;  // reported by explicit multiplicity queries, not sampling
            }
            if (tp.multiplicity < k) continue;
            FlowJet jet = scene.flow_jet(x, scene.n() + 2, face);
            for (int j = 0; j < tp.multiplicity; ++j)
                tp.residual = std::max(tp.residual, std::abs(jet.coeff[j]));
            tp.leading_coeff = jet.coeff[tp.multiplicity];

            bool dup = false;
            for (auto& other : found) {
                if (dist2(other.location, x) < opts.dedup_radius * opts.dedup_radius) {
                    dup = true;
                    if (tp.residual < other.residual) other = tp;  // keep smallest residual
                    break;
                }
            }
            if (!dup) found.push_back(std::move(tp));
        }
        for (auto& tp : found) sample.points.push_back(tp);
    }
    if (scene.dim() == 3 && k == 2 && opts.trace_curves) {
        for (const auto& tp : sample.points) {
            bool covered = false;
            for (const auto& c : sample.curves) {
                if (c.face != tp.face) continue;
                for (const auto& p : c.polyline)
                    if (dist2(p, tp.location) < 4 * opts.continuation_step * opts.continuation_step)
                        covered = true;
            }
            if (covered) continue;
            sample.curves.push_back(
                trace_curve(scene, tp.face, tp.location, opts.continuation_step));
        }
    }
    return sample;
}

GenericityReport check_boundary_generic(const Scene& scene, const StratumSample& sample,
                                        double tol) {
    GenericityReport report;
    for (const auto& tp : sample.points) {
        MatrixXd J = system_jacobian(scene, tp.face, sample.depth, tp.location);
        Eigen::JacobiSVD<MatrixXd> svd(J);
        double smin = svd.singularValues()(svd.singularValues().size() - 1);
        report.entries.push_back({tp.location, tp.face, smin, smin >= tol});
    }
    return report;
}

}  // namespace traverse
