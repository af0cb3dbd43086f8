#include "traverse/census.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "traverse/parallel.hpp"

namespace traverse {

namespace {

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

bool type_admissible(const std::vector<int>& t) {
    if (t.empty()) return false;
    if (t.size() == 1) return t[0] >= 2 && t[0] % 2 == 0;
    if (t.front() % 2 == 0 || t.back() % 2 == 0) return false;
    for (size_t i = 1; i + 1 < t.size(); ++i)
        if (t[i] % 2 != 0) return false;
    return true;
}

double dist2(const Point& a, const Point& b) {
    double d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
    return d;
}

bool same_trajectory(const Trajectory& a, const Trajectory& b, double tol) {
    if (a.events.size() != b.events.size()) return false;
    for (size_t i = 0; i < a.events.size(); ++i) {
        if (a.events[i].face != b.events[i].face) return false;
        if (a.events[i].multiplicity != b.events[i].multiplicity) return false;
        if (dist2(a.events[i].location, b.events[i].location) > tol * tol) return false;
    }
    return true;
}

void add_trajectory(MMCensus& census, Trajectory traj, double dedup) {
    for (const auto& existing : census.trajectories)
        if (same_trajectory(existing, traj, dedup)) return;
    census.trajectories.push_back(std::move(traj));
}

void enforce_generic(const Scene& scene, const Trajectory& traj, bool enabled) {
    if (!enabled) return;
    TraversalityReport rep = check_traversally_generic(scene, traj, 1e-6);
    if (!rep.pass)
        throw GenericityViolation("trajectory of type " + format_type(traj.type()) +
                                  ": " + rep.reason);
}

}  // namespace

LocalModel make_local_model(const std::vector<int>& type) {
    if (!type_admissible(type))
        throw std::invalid_argument("make_local_model: inadmissible type " +
                                    format_type(type));
    const int p = static_cast<int>(type.size());
    int transverse = 0;
    for (int m : type) transverse += m - 1;
    const int dim = std::max(2, 1 + transverse);

    ExprPtr u = variable(0);
    std::vector<ExprPtr> faces;
    int next_var = 1;
    for (int i = 1; i <= p; ++i) {
        const int m = type[i - 1];
        ExprPtr shifted = sub(u, constant(i));
        ExprPtr P = pow_int(shifted, m);
        for (int l = 0; l <= m - 2; ++l)
            P = add(P, mul(variable(next_var++), pow_int(shifted, l)));
        faces.push_back(i < p ? P : neg(P));
    }
    std::vector<ExprPtr> v;
    v.push_back(constant(1));
    for (int i = 1; i < dim; ++i) v.push_back(constant(0));

    Point lo(dim, -3.0), hi(dim, 3.0);
    lo[0] = -1.0;
    hi[0] = p + 2.0;
    LocalModel model{type, Scene(dim, std::move(faces), std::move(v), lo, hi), {}, {}};
    model.scene.name = "local" + format_type(type);
    model.entry.assign(dim, 0.0);
    model.entry[0] = 1.0;
    for (int i = 1; i <= p; ++i) {
        Point a(dim, 0.0);
        a[0] = i;
        model.tangencies.push_back(a);
    }
    return model;
}

std::vector<int> roundtrip_type(const std::vector<int>& type, const FlowOptions& opts) {
    LocalModel model = make_local_model(type);
    Trajectory traj = integrate_trajectory(model.scene, model.entry, opts);
    return traj.type();
}

MMCensus count_mm_2d(const Scene& scene, const CensusOptions& opts) {
    if (scene.dim() != 2) throw std::invalid_argument("count_mm_2d: scene must be 2D");
    MMCensus census;
    census.n = 1;
    StratumSample sample = find_strata(scene, 2, opts.seed_count, opts.strata);
    for (const auto& tp : sample.points) {
        Trajectory traj = integrate_through(scene, tp.location, opts.flow);
        enforce_generic(scene, traj, opts.check_genericity);
        if (traj.reduced_multiplicity() != 1) continue;
        add_trajectory(census, std::move(traj), opts.dedup);
    }
    census.count = static_cast<int>(census.trajectories.size());
    for (const auto& t : census.trajectories)
        census.boundary_points += static_cast<int>(t.events.size());
    return census;
}

namespace {

// Second-tangency probe for the 3D census: walk the ambient flow line
// through a depth-2 point q (both directions) and report the smallest
// locally-minimal face value encountered, excluding q's own tangency.
// Sign changes of this value along the depth-2 curve locate (1221)
// trajectories.
struct Graze {
    bool found = false;
    double value = 0;
    Point argmin;
    int argface = -1;
};

Graze graze_probe(const Scene& scene, const Point& q, int qface) {
    Graze best;
    const int nf = static_cast<int>(scene.faces().size());
    const double h = scene.diameter() / 2000.0;
    const double floor_cut = -0.05 * scene.diameter();
    for (double dir : {+1.0, -1.0}) {
        Point x = q;
        std::vector<double> fv(nf), dv(nf);
        auto eval_faces = [&](const Point& p) {
            for (int f = 0; f < nf; ++f) {
                fv[f] = scene.face(f).value(p);
                dv[f] = dir * scene.face(f).lie_value(1, p);
            }
        };
        eval_faces(x);
        std::vector<double> fprev = fv, dprev = dv;
        Point xprev = x;
        for (int s = 0; s < 8000; ++s) {
            // RK4 step along dir * v
            auto vel = [&](const Point& p) {
                auto vv = scene.v_at(p);
                for (auto& c : vv) c *= dir;
                return vv;
            };
            auto axpy = [&](const Point& p, double a, const std::vector<double>& k) {
                Point r = p;
                for (size_t i = 0; i < r.size(); ++i) r[i] += a * k[i];
                return r;
            };
            auto k1 = vel(x);
            auto k2 = vel(axpy(x, 0.5 * h, k1));
            auto k3 = vel(axpy(x, 0.5 * h, k2));
            auto k4 = vel(axpy(x, h, k3));
            Point xn = x;
            for (size_t i = 0; i < xn.size(); ++i)
                xn[i] += (h / 6.0) * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);

            std::vector<double> f2 = fprev, d2 = dprev;  // two steps back
            fprev = fv;
            dprev = dv;
            Point xmid = x;
            x = xn;
            eval_faces(x);

            bool stop = false;
            for (int f = 0; f < nf; ++f) {
                if (fv[f] < floor_cut) stop = true;
                // local minimum of face f between the last two samples
                if (dprev[f] < 0 && dv[f] > 0) {
                    if (f == qface && s < 5) continue;  // q's own tangency
                    double fm = f2[f], f0 = fprev[f], fp = fv[f];
                    double denom = fp - 2 * f0 + fm;
                    double vmin = f0;
                    double delta = 0;
                    if (denom > 1e-300) {
                        vmin = f0 - (fp - fm) * (fp - fm) / (8 * denom);
                        delta = 0.5 * h * (fm - fp) / denom;
                    }
                    if (!best.found || vmin < best.value) {
                        best.found = true;
                        best.value = vmin;
                        best.argface = f;
                        auto vv = vel(xmid);
                        best.argmin = xmid;
                        for (size_t i = 0; i < best.argmin.size(); ++i)
                            best.argmin[i] += delta * vv[i];
                    }
                }
            }
            if (stop || !scene.in_bbox(x, 0.0)) break;
        }
    }
    return best;
}

// resample a polyline to roughly uniform arc length
std::vector<Point> resample_polyline(const std::vector<Point>& poly, int samples) {
    if (poly.size() < 2 || samples < 2) return poly;
    std::vector<double> cum(poly.size(), 0.0);
    for (size_t i = 1; i < poly.size(); ++i)
        cum[i] = cum[i - 1] + std::sqrt(dist2(poly[i - 1], poly[i]));
    double total = cum.back();
    if (total <= 0) return poly;
    std::vector<Point> out;
    size_t seg = 0;
    for (int s = 0; s < samples; ++s) {
        double target = total * s / (samples - 1);
        while (seg + 2 < poly.size() && cum[seg + 1] < target) ++seg;
        double span = cum[seg + 1] - cum[seg];
        double f = span > 0 ? (target - cum[seg]) / span : 0.0;
        Point p(poly[seg].size());
        for (size_t i = 0; i < p.size(); ++i)
            p[i] = poly[seg][i] + f * (poly[seg + 1][i] - poly[seg][i]);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

MMCensus count_mm_3d(const Scene& scene, const CensusOptions& opts) {
    if (scene.dim() != 3) throw std::invalid_argument("count_mm_3d: scene must be 3D");
    MMCensus census;
    census.n = 2;

    // (a) depth-3 points carry (31)/(13) trajectories
    StratumSample s3 = find_strata(scene, 3, opts.seed_count, opts.strata);
    for (const auto& tp : s3.points) {
        Trajectory traj = integrate_through(scene, tp.location, opts.flow);
        enforce_generic(scene, traj, opts.check_genericity);
        if (traj.reduced_multiplicity() != 2) continue;
        add_trajectory(census, std::move(traj), opts.dedup);
    }

    // (b) sweep the depth-2 curves for (1221) trajectories
    StratumSample s2 = find_strata(scene, 2, opts.seed_count, opts.strata);
    if (!s2.points.empty() && s2.curves.empty()) census.complete = false;
    for (const auto& curve : s2.curves) {
        if (curve.polyline.size() < 3) {
            census.complete = false;
            continue;
        }
        std::vector<Point> samples = resample_polyline(curve.polyline, opts.sweep_samples);
        const int ns = static_cast<int>(samples.size());
        std::vector<double> g(ns, std::numeric_limits<double>::quiet_NaN());
        std::vector<Point> pts(ns);
        parallel_for(ns, [&](int i) {
            Point q = samples[i];
            if (!newton_stratum_point(scene, curve.face, 2, q)) return;
            pts[i] = q;
            // only proper interior tangencies (domain on both flow sides)
            FlowJet jet = scene.flow_jet(q, 3, curve.face);
            if (!(jet.coeff[2] > 1e-4)) return;
            // avoid degenerate jets near depth-3 points
            for (const auto& tp : s3.points)
                if (dist2(tp.location, q) < 1e-4) return;
            Graze gr = graze_probe(scene, q, curve.face);
            if (gr.found) g[i] = gr.value;
        });
        for (int i = 0; i + 1 < ns; ++i) {
            if (std::isnan(g[i]) || std::isnan(g[i + 1])) continue;
            if (g[i] == 0 || g[i] * g[i + 1] >= 0) continue;
            // bisect along the curve for the graze root
            Point qa = pts[i], qb = pts[i + 1];
            double ga = g[i];
            Point qm;
            for (int it = 0; it < 60; ++it) {
                qm.resize(qa.size());
                for (size_t c = 0; c < qa.size(); ++c) qm[c] = 0.5 * (qa[c] + qb[c]);
                if (!newton_stratum_point(scene, curve.face, 2, qm)) break;
                Graze gr = graze_probe(scene, qm, curve.face);
                if (!gr.found) break;
                if (std::abs(gr.value) < 1e-10 || dist2(qa, qb) < 1e-24) break;
                if (gr.value * ga > 0) {
                    qa = qm;
                    ga = gr.value;
                } else {
                    qb = qm;
                }
            }
            if (qm.empty()) continue;
            try {
                Trajectory traj = integrate_through(scene, qm, opts.flow);
                if (traj.reduced_multiplicity() != 2) continue;
                enforce_generic(scene, traj, opts.check_genericity);
                add_trajectory(census, std::move(traj), opts.dedup);
            } catch (const IntegrationStalled&) {
                census.complete = false;
            } catch (const DegenerateTangency&) {
                continue;
            }
        }
    }

    census.count = static_cast<int>(census.trajectories.size());
    for (const auto& t : census.trajectories)
        census.boundary_points += static_cast<int>(t.events.size());
    return census;
}

// ---------------------------------------------------------------------------
// 2D trajectory-space graph
// ---------------------------------------------------------------------------

namespace {

Vector2d grad_face(const Scene& scene, int face, const Point& x) {
    Vector2d g;
    for (int i = 0; i < 2; ++i) g[i] = scene.face(face).lie_grad[0][i]->eval(x);
    return g;
}

// predictor-corrector tracing of {F = 0} in the plane
struct BoundaryCurve {
    int face = 0;
    std::vector<Point> polyline;
    bool closed = false;
};

bool boundary_corrector(const Scene& scene, int face, const Point& pred, const Vector2d& t,
                        Point& x) {
    for (int it = 0; it < 40; ++it) {
        double F = scene.face(face).value(x);
        double c = (x[0] - pred[0]) * t[0] + (x[1] - pred[1]) * t[1];
        if (std::abs(F) < 1e-12 && std::abs(c) < 1e-12) return true;
        Vector2d g = grad_face(scene, face, x);
        Eigen::Matrix2d J;
        J << g[0], g[1], t[0], t[1];
        if (std::abs(J.determinant()) < 1e-14) return false;
        Vector2d dx = J.inverse() * Vector2d(-F, -c);
        x[0] += dx[0];
        x[1] += dx[1];
    }
    return false;
}

bool boundary_march(const Scene& scene, int face, const Point& start, Vector2d t, double step,
                    std::vector<Point>& out) {
    Point x = start;
    const int max_steps = static_cast<int>(40 * scene.diameter() / step);
    for (int s = 0; s < max_steps; ++s) {
        Point pred{x[0] + step * t[0], x[1] + step * t[1]};
        Point next = pred;
        if (!boundary_corrector(scene, face, pred, t, next)) return false;
        if (!scene.in_bbox(next, 0.0)) return false;
        Vector2d g = grad_face(scene, face, next);
        Vector2d tn(-g[1], g[0]);
        if (tn.norm() < 1e-14) return false;
        tn.normalize();
        if (tn.dot(t) < 0) tn = -tn;
        out.push_back(next);
        x = next;
        t = tn;
        if (s > 3 && dist2(next, start) < 0.25 * step * step) return true;
    }
    return false;
}

BoundaryCurve trace_boundary_2d(const Scene& scene, int face, const Point& start,
                                double step) {
    BoundaryCurve c;
    c.face = face;
    Vector2d g = grad_face(scene, face, start);
    Vector2d t(-g[1], g[0]);
    t.normalize();
    std::vector<Point> fwd;
    bool closed = boundary_march(scene, face, start, t, step, fwd);
    if (closed) {
        c.closed = true;
        c.polyline.push_back(start);
        c.polyline.insert(c.polyline.end(), fwd.begin(), fwd.end());
        c.polyline.push_back(start);
        return c;
    }
    std::vector<Point> bwd;
    boundary_march(scene, face, start, -t, step, bwd);
    c.polyline.assign(bwd.rbegin(), bwd.rend());
    c.polyline.push_back(start);
    c.polyline.insert(c.polyline.end(), fwd.begin(), fwd.end());
    return c;
}

std::vector<BoundaryCurve> boundary_components_2d(const Scene& scene, double step,
                                                  int seed_count) {
    std::vector<BoundaryCurve> curves;
    auto seeds = halton_points(seed_count, scene.bbox_lo(), scene.bbox_hi());
    for (int face = 0; face < static_cast<int>(scene.faces().size()); ++face) {
        for (const auto& seed : seeds) {
            Point x = seed;
            if (!newton_stratum_point(scene, face, 1, x)) continue;
            if (!scene.in_bbox(x, 0.0)) continue;
            bool covered = false;
            for (const auto& c : curves) {
                if (c.face != face) continue;
                for (const auto& p : c.polyline)
                    if (dist2(p, x) < 9 * step * step) {
                        covered = true;
                        break;
                    }
                if (covered) break;
            }
            if (covered) continue;
            BoundaryCurve c = trace_boundary_2d(scene, face, x, step);
            if (c.polyline.size() >= 3) curves.push_back(std::move(c));
        }
    }
    return curves;
}

// a breakpoint along a traced boundary curve: fractional polyline parameter
struct Breakpoint {
    double param;    // segment index + fraction
    Point location;
    int vertex = -1; // resolved census vertex, -1 if unresolved
    bool open = false;
};

Point at_param(const std::vector<Point>& poly, double param) {
    int i = std::min(static_cast<int>(param), static_cast<int>(poly.size()) - 2);
    double f = param - i;
    Point p(poly[i].size());
    for (size_t c = 0; c < p.size(); ++c)
        p[c] = poly[i][c] + f * (poly[i + 1][c] - poly[i][c]);
    return p;
}

double closest_param(const std::vector<Point>& poly, const Point& q, double* dist_out) {
    double best = 0, bestd = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < poly.size(); ++i) {
        double ax = q[0] - poly[i][0], ay = q[1] - poly[i][1];
        double bx = poly[i + 1][0] - poly[i][0], by = poly[i + 1][1] - poly[i][1];
        double len2 = bx * bx + by * by;
        double f = len2 > 0 ? std::clamp((ax * bx + ay * by) / len2, 0.0, 1.0) : 0.0;
        double dx = ax - f * bx, dy = ay - f * by;
        double d = dx * dx + dy * dy;
        if (d < bestd) {
            bestd = d;
            best = i + f;
        }
    }
    if (dist_out) *dist_out = std::sqrt(bestd);
    return best;
}

}  // namespace

int TrajectoryGraph::degree(int vertex) const {
    int d = 0;
    for (const auto& e : edges) {
        if (e.a == vertex) ++d;
        if (e.b == vertex) ++d;
    }
    return d;
}

int TrajectoryGraph::open_ends() const {
    int d = 0;
    for (const auto& e : edges) {
        if (e.a < 0) ++d;
        if (e.b < 0) ++d;
    }
    return d;
}

int TrajectoryGraph::euler() const {
    return static_cast<int>(vertices.size()) + open_ends() - static_cast<int>(edges.size());
}

TrajectoryGraph build_trajectory_graph_2d(const Scene& scene, const MMCensus& census,
                                          const CensusOptions& opts) {
    if (scene.dim() != 2)
        throw std::invalid_argument("build_trajectory_graph_2d: scene must be 2D");
    TrajectoryGraph graph;
    for (size_t i = 0; i < census.trajectories.size(); ++i) {
        const Trajectory& t = census.trajectories[i];
        TrajectoryGraph::Vertex v;
        v.census_index = static_cast<int>(i);
        v.type = t.type();
        for (const auto& e : t.events)
            if (e.multiplicity >= 2) v.anchor = e.location;
        if (v.anchor.empty()) v.anchor = t.events.front().location;
        graph.vertices.push_back(std::move(v));
    }

    const double step = opts.strata.continuation_step;
    auto curves = boundary_components_2d(scene, step, opts.seed_count);
    const int nf = static_cast<int>(scene.faces().size());

    for (const auto& curve : curves) {
        const auto& poly = curve.polyline;
        const int nseg = static_cast<int>(poly.size()) - 1;
        if (nseg < 2) continue;
        auto vF = [&](const Point& p) { return scene.face(curve.face).lie_value(1, p); };
        auto in_domain = [&](const Point& p) {
            for (int f = 0; f < nf; ++f)
                if (f != curve.face && scene.face(f).value(p) < -1e-9) return false;
            return true;
        };

        std::vector<Breakpoint> breaks;
        // tangency breakpoints: sign changes of vF along the curve
        for (int i = 0; i < nseg; ++i) {
            double a = vF(poly[i]), b = vF(poly[i + 1]);
            if (a == 0 || a * b >= 0) continue;
            double lo = 0, hi = 1;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                double vm = vF(at_param(poly, i + mid));
                if (vm * a > 0) lo = mid;
                else hi = mid;
            }
            Breakpoint bp;
            bp.param = i + 0.5 * (lo + hi);
            bp.location = at_param(poly, bp.param);
            newton_stratum_point(scene, curve.face, 2, bp.location);
            // match a census vertex by an event at this tangency
            for (size_t vi = 0; vi < graph.vertices.size(); ++vi)
                if (dist2(graph.vertices[vi].anchor, bp.location) < 1e-6) bp.vertex = (int)vi;
            breaks.push_back(std::move(bp));
        }
        // domain-membership transitions (curve leaving X through another face)
        for (int i = 0; i < nseg; ++i) {
            bool a = in_domain(poly[i]), b = in_domain(poly[i + 1]);
            if (a == b) continue;
            Breakpoint bp;
            bp.param = i + 0.5;
            bp.location = at_param(poly, bp.param);
            bp.open = true;
            breaks.push_back(std::move(bp));
        }
        // shadows: entries of non-singleton mm trajectories on this curve
        for (size_t vi = 0; vi < graph.vertices.size(); ++vi) {
            const Trajectory& t = census.trajectories[graph.vertices[vi].census_index];
            if (t.singleton) continue;
            const Point& entry = t.events.front().location;
            if (std::abs(scene.face(curve.face).value(entry)) > 1e-6) continue;
            double d;
            double param = closest_param(poly, entry, &d);
            if (d > 2 * step) continue;
            bool dup = false;
            for (const auto& bp : breaks)
                if (std::abs(bp.param - param) < 0.5) dup = true;
            if (dup) continue;
            Breakpoint bp;
            bp.param = param;
            bp.location = entry;
            bp.vertex = static_cast<int>(vi);
            breaks.push_back(std::move(bp));
        }

        std::sort(breaks.begin(), breaks.end(),
                  [](const Breakpoint& a, const Breakpoint& b) { return a.param < b.param; });

        // assemble arcs between consecutive breakpoints
        struct Arc {
            double lo, hi;
            const Breakpoint* from;
            const Breakpoint* to;
        };
        std::vector<Arc> arcs;
        if (breaks.empty()) {
            arcs.push_back({0.0, static_cast<double>(nseg),
                            nullptr, nullptr});  // whole curve, open both ends if open
        } else if (curve.closed) {
            for (size_t i = 0; i < breaks.size(); ++i) {
                const Breakpoint& a = breaks[i];
                const Breakpoint& b = breaks[(i + 1) % breaks.size()];
                double hi = b.param + (i + 1 == breaks.size() ? nseg : 0.0);
                arcs.push_back({a.param, hi, &a, &b});
            }
        } else {
            arcs.push_back({0.0, breaks.front().param, nullptr, &breaks.front()});
            for (size_t i = 0; i + 1 < breaks.size(); ++i)
                arcs.push_back({breaks[i].param, breaks[i + 1].param, &breaks[i],
                                &breaks[i + 1]});
            arcs.push_back({breaks.back().param, static_cast<double>(nseg), &breaks.back(),
                            nullptr});
        }

        for (const auto& arc : arcs) {
            if (arc.hi - arc.lo < 1e-6) continue;
            double midparam = 0.5 * (arc.lo + arc.hi);
            if (midparam >= nseg) midparam -= nseg;
            Point mid = at_param(poly, midparam);
            if (vF(mid) <= 0 || !in_domain(mid)) continue;  // not an entry family
            TrajectoryGraph::Edge e;
            e.face = curve.face;
            e.rep_entry = mid;
            e.a = arc.from ? arc.from->vertex : -1;
            e.b = arc.to ? arc.to->vertex : -1;
            graph.edges.push_back(std::move(e));
        }
    }
    return graph;
}

// ---------------------------------------------------------------------------
// exports
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace

std::string census_csv(const MMCensus& census) {
    std::ostringstream out;
    out << "trajectory,type,mprime,event,face,m,t";
    int dim = census.trajectories.empty() ? 2
              : static_cast<int>(census.trajectories[0].events[0].location.size());
    for (int i = 0; i < dim; ++i) out << ",x" << i;
    out << "\n";
    for (size_t ti = 0; ti < census.trajectories.size(); ++ti) {
        const Trajectory& t = census.trajectories[ti];
        for (size_t ei = 0; ei < t.events.size(); ++ei) {
            const auto& e = t.events[ei];
            out << ti << "," << format_type(t.type()) << "," << t.reduced_multiplicity()
                << "," << ei << "," << e.face << "," << e.multiplicity << "," << fmt(e.t);
            for (double c : e.location) out << "," << fmt(c);
            out << "\n";
        }
    }
    return out.str();
}

std::string graph_dot(const TrajectoryGraph& graph) {
    std::ostringstream out;
    out << "graph trajectory_space {\n";
    for (size_t i = 0; i < graph.vertices.size(); ++i)
        out << "  v" << i << " [label=\"" << format_type(graph.vertices[i].type) << "\"];\n";
    int open_id = 0;
    for (const auto& e : graph.edges) {
        std::string a = e.a >= 0 ? "v" + std::to_string(e.a)
                                 : "open" + std::to_string(open_id++);
        std::string b = e.b >= 0 ? "v" + std::to_string(e.b)
                                 : "open" + std::to_string(open_id++);
        if (e.a < 0) out << "  " << a << " [shape=point, style=invis, label=\"\"];\n";
        if (e.b < 0) out << "  " << b << " [shape=point, style=invis, label=\"\"];\n";
        out << "  " << a << " -- " << b << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string trajectories_jsonl(const MMCensus& census) {
    std::ostringstream out;
    for (const auto& t : census.trajectories) {
        nlohmann::json j;
        j["type"] = format_type(t.type());
        j["mprime"] = t.reduced_multiplicity();
        j["singleton"] = t.singleton;
        nlohmann::json evs = nlohmann::json::array();
        for (const auto& e : t.events) {
            nlohmann::json je;
            je["t"] = e.t;
            je["face"] = e.face;
            je["m"] = e.multiplicity;
            je["x"] = e.location;
            evs.push_back(je);
        }
        j["events"] = evs;
        out << j.dump() << "\n";
    }
    return out.str();
}

}  // namespace traverse
