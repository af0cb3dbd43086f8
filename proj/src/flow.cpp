#include "traverse/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace traverse {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd to_vec(const Point& p) {
    VectorXd v(p.size());
    for (size_t i = 0; i < p.size(); ++i) v[i] = p[i];
    return v;
}

Point to_point(const VectorXd& v) { return Point(v.data(), v.data() + v.size()); }

VectorXd field_at(const Scene& s, double dir, const VectorXd& x) {
    Point p = to_point(x);
    auto vv = s.v_at(p);
    VectorXd out(vv.size());
    for (size_t i = 0; i < vv.size(); ++i) out[i] = dir * vv[i];
    return out;
}

// Dormand-Prince 5(4) embedded pair.
struct DP45 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    // clang-format off
    static constexpr double a21 = 1.0/5;
    static constexpr double a31 = 3.0/40,       a32 = 9.0/40;
    static constexpr double a41 = 44.0/45,      a42 = -56.0/15,      a43 = 32.0/9;
    static constexpr double a51 = 19372.0/6561, a52 = -25360.0/2187, a53 = 64448.0/6561, a54 = -212.0/729;
    static constexpr double a61 = 9017.0/3168,  a62 = -355.0/33,     a63 = 46732.0/5247, a64 = 49.0/176,   a65 = -5103.0/18656;
    static constexpr double b1 = 35.0/384,      b3 = 500.0/1113,     b4 = 125.0/192,     b5 = -2187.0/6784, b6 = 11.0/84;
    static constexpr double e1 = 71.0/57600,    e3 = -71.0/16695,    e4 = 71.0/1920,     e5 = -17253.0/339200, e6 = 22.0/525, e7 = -1.0/40;
    // clang-format on
};

// one DP45 step; returns 5th-order solution and error estimate
void dp45_step(const Scene& s, double dir, const VectorXd& x, double h, VectorXd& out,
               double& err) {
    using D = DP45;
    VectorXd k1 = field_at(s, dir, x);
    VectorXd k2 = field_at(s, dir, x + h * (D::a21 * k1));
    VectorXd k3 = field_at(s, dir, x + h * (D::a31 * k1 + D::a32 * k2));
    VectorXd k4 = field_at(s, dir, x + h * (D::a41 * k1 + D::a42 * k2 + D::a43 * k3));
    VectorXd k5 =
        field_at(s, dir, x + h * (D::a51 * k1 + D::a52 * k2 + D::a53 * k3 + D::a54 * k4));
    VectorXd k6 = field_at(
        s, dir, x + h * (D::a61 * k1 + D::a62 * k2 + D::a63 * k3 + D::a64 * k4 + D::a65 * k5));
    out = x + h * (D::b1 * k1 + D::b3 * k3 + D::b4 * k4 + D::b5 * k5 + D::b6 * k6);
    VectorXd k7 = field_at(s, dir, out);
    VectorXd e = h * (D::e1 * k1 + D::e3 * k3 + D::e4 * k4 + D::e5 * k5 + D::e6 * k6 +
                      D::e7 * k7);
    err = e.lpNorm<Eigen::Infinity>();
}

// position within an accepted step by fixed-step RK4 sub-integration
VectorXd sub_position(const Scene& s, double dir, const VectorXd& x0, double dt,
                      int substeps = 64) {
    VectorXd x = x0;
    double h = dt / substeps;
    for (int i = 0; i < substeps; ++i) {
        VectorXd k1 = field_at(s, dir, x);
        VectorXd k2 = field_at(s, dir, x + 0.5 * h * k1);
        VectorXd k3 = field_at(s, dir, x + 0.5 * h * k2);
        VectorXd k4 = field_at(s, dir, x + h * k3);
        x += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return x;
}

double face_val(const Scene& s, int face, const VectorXd& x) {
    return s.face(face).value(to_point(x));
}

// directed time-derivative of F along the flow
double face_deriv(const Scene& s, double dir, int face, const VectorXd& x) {
    return dir * s.face(face).lie_value(1, to_point(x));
}

// jet of t -> F(phi_{dir * t}(a)): coefficient j picks up dir^j
std::vector<double> directed_jet(const Scene& s, double dir, int face, const Point& a) {
    FlowJet jet = s.flow_jet(a, s.n() + 2, face);
    std::vector<double> c = jet.coeff;
    if (dir < 0)
        for (size_t j = 1; j < c.size(); j += 2) c[j] = -c[j];
    return c;
}

int jet_order(const std::vector<double>& c, double tol, int n) {
    double scale = 1.0;
    for (double x : c) scale = std::max(scale, std::abs(x));
    for (int m = 0; m < static_cast<int>(c.size()); ++m) {
        if (std::abs(c[m]) >= tol * scale) {
            if (m > n + 1)
                throw DegenerateTangency("jet vanishes to order " + std::to_string(m) +
                                         " > n+1 along a trajectory");
            return m;
        }
    }
    throw DegenerateTangency("flow jet vanishes to all computed orders");
}

struct RawEvent {
    double t;
    Point x;
    int face;
    int mult;
    bool crossing;
};

double min_speed(const Scene& s) {
    auto pts = halton_points(200, s.bbox_lo(), s.bbox_hi());
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
        if (!s.inside(p, 0)) continue;
        auto vv = s.v_at(p);
        double n2 = 0;
        for (double c : vv) n2 += c * c;
        m = std::min(m, std::sqrt(n2));
    }
    if (!std::isfinite(m) || m <= 0) m = 1.0;
    return m;
}

// Integrate from `start` (time 0) until a terminating face crossing.
// Interior tangencies are appended along the way; the final element of
// `evs` is the crossing. Appends (t, x) samples to times/path.
void integrate_core(const Scene& s, double dir, const Point& start, const FlowOptions& opts,
                    std::vector<RawEvent>& evs, std::vector<double>& times,
                    std::vector<Point>& path) {
    const int nf = static_cast<int>(s.faces().size());
    const double t_cap = opts.time_cap_factor * s.diameter() / min_speed(s);
    const double h_max = 0.05 * s.diameter();
    const double h_min = 1e-14 * s.diameter();

    VectorXd x = to_vec(start);
    double t = 0;
    double h = 1e-3 * s.diameter();
    std::vector<bool> armed(nf, false);
    std::vector<double> f0(nf), d0(nf);
    for (int f = 0; f < nf; ++f) {
        f0[f] = face_val(s, f, x);
        d0[f] = face_deriv(s, dir, f, x);
        if (f0[f] > opts.arm_threshold) armed[f] = true;
    }
    times.push_back(0);
    path.push_back(start);

    while (t < t_cap) {
        if (h < h_min) throw IntegrationStalled("integration stalled at t = " + std::to_string(t));
        VectorXd x1;
        double err;
        dp45_step(s, dir, x, h, x1, err);
        double tol_step = opts.rk_tol * (1.0 + x.lpNorm<Eigen::Infinity>());
        if (err > tol_step) {
            h *= std::clamp(0.9 * std::pow(tol_step / err, 0.2), 0.1, 1.0);
            continue;
        }

        std::vector<RawEvent> step_events;
        for (int f = 0; f < nf; ++f) {
            double f1 = face_val(s, f, x1);
            double d1 = face_deriv(s, dir, f, x1);
            if (!armed[f]) {
                if (f1 > opts.arm_threshold) armed[f] = true;
                f0[f] = f1;
                d0[f] = d1;
                continue;
            }
            if (f1 < 0) {
                // bracket the first root of F on [0, h]
                double ta = 0, tb = h;
                for (int it = 0; it < 80 && tb - ta > 1e-13 * std::max(1.0, h); ++it) {
                    double tm = 0.5 * (ta + tb);
                    double fm = face_val(s, f, sub_position(s, dir, x, tm));
                    (fm > 0 ? ta : tb) = tm;
                }
                double tc = 0.5 * (ta + tb);
                Point xc = to_point(sub_position(s, dir, x, tc));
                std::vector<double> jet = directed_jet(s, dir, f, xc);
                int m = jet_order(jet, opts.tol, s.n());
                if (m == 0) m = 1;  // crossing with F slightly off zero: transversal
                RawEvent ev{t + tc, xc, f, m, true};
                step_events.push_back(ev);
            } else if (d0[f] < 0 && d1 > 0) {
                // refine the local minimum of F by bisection on dF/dt
                double ta = 0, tb = h;
                for (int it = 0; it < 80 && tb - ta > 1e-13 * std::max(1.0, h); ++it) {
                    double tm = 0.5 * (ta + tb);
                    double dm = face_deriv(s, dir, f, sub_position(s, dir, x, tm));
                    (dm < 0 ? ta : tb) = tm;
                }
                double tm = 0.5 * (ta + tb);
                VectorXd xm = sub_position(s, dir, x, tm);
                double fmin = face_val(s, f, xm);
                std::vector<double> jet = directed_jet(s, dir, f, to_point(xm));
                double scale = 1.0;
                for (double c : jet) scale = std::max(scale, std::abs(c));
                if (fmin < -opts.tol * scale) {
                    // dipped through the face: terminate at the first root
                    double ra = 0, rb = tm;
                    for (int it = 0; it < 80 && rb - ra > 1e-13 * std::max(1.0, h); ++it) {
                        double tq = 0.5 * (ra + rb);
                        double fq = face_val(s, f, sub_position(s, dir, x, tq));
                        (fq > 0 ? ra : rb) = tq;
                    }
                    double tc = 0.5 * (ra + rb);
                    Point xc = to_point(sub_position(s, dir, x, tc));
                    std::vector<double> cjet = directed_jet(s, dir, f, xc);
                    int m = jet_order(cjet, opts.tol, s.n());
                    if (m == 0) m = 1;
                    step_events.push_back({t + tc, xc, f, m, true});
                } else if (fmin <= opts.tol * scale) {
                    int m = jet_order(jet, opts.tol, s.n());
                    if (m >= 2) step_events.push_back({t + tm, to_point(xm), f, m, false});
                }
            }
            f0[f] = f1;
            d0[f] = d1;
        }

        std::sort(step_events.begin(), step_events.end(),
                  [](const RawEvent& a, const RawEvent& b) { return a.t < b.t; });
        for (auto& ev : step_events) {
            // polish onto the stratum of matching depth
            int depth = std::min(ev.mult, s.dim());
            Point polished = ev.x;
            if (newton_stratum_point(s, ev.face, ev.crossing ? std::min(depth, 1) : depth,
                                     polished, 1e-12, 40))
                ev.x = polished;
            times.push_back(ev.t);
            path.push_back(ev.x);
            evs.push_back(ev);
            if (ev.crossing) return;
        }

        t += h;
        x = x1;
        times.push_back(t);
        path.push_back(to_point(x));
        if (err > 0) h = std::min(h_max, h * std::clamp(0.9 * std::pow(tol_step / err, 0.2), 0.2, 5.0));
        else h = std::min(h_max, h * 5.0);
    }
    throw NotTraversing("trajectory exceeded time cap: field is not traversing on this scene");
}

}  // namespace

std::vector<int> Trajectory::type() const {
    std::vector<int> out;
    out.reserve(events.size());
    for (const auto& e : events) out.push_back(e.multiplicity);
    return out;
}

int Trajectory::reduced_multiplicity() const {
    int m = 0;
    for (const auto& e : events) m += e.multiplicity - 1;
    return m;
}

int reduced_multiplicity(const Trajectory& traj) { return traj.reduced_multiplicity(); }

Trajectory integrate_trajectory(const Scene& scene, const Point& entry,
                                const FlowOptions& opts) {
    auto [face, fval] = scene.nearest_face(entry);
    if (fval > 1e-5)
        throw std::invalid_argument("integrate_trajectory: point is not on the boundary");
    std::vector<double> jet = directed_jet(scene, +1, face, entry);
    int m = jet_order(jet, opts.tol, scene.n());
    if (m == 0) m = 1;

    Trajectory traj;
    if (m % 2 == 0) {
        if (jet[m] < 0) {
            traj.singleton = true;
            traj.events.push_back({0.0, entry, face, m, EventKind::InteriorTangency});
            traj.times.push_back(0);
            traj.path.push_back(entry);
            return traj;
        }
        throw std::invalid_argument(
            "integrate_trajectory: interior tangency start; use integrate_through");
    }
    if (jet[m] < 0)
        throw std::invalid_argument(
            "integrate_trajectory: point is an exit; use integrate_through");

    traj.events.push_back({0.0, entry, face, m, EventKind::TransversalIn});
    std::vector<RawEvent> evs;
    integrate_core(scene, +1, entry, opts, evs, traj.times, traj.path);
    for (const auto& ev : evs) {
        BoundaryEvent be;
        be.t = ev.t;
        be.location = ev.x;
        be.face = ev.face;
        be.multiplicity = ev.mult;
        be.kind = ev.crossing ? EventKind::TransversalOut : EventKind::InteriorTangency;
        traj.events.push_back(be);
    }
    return traj;
}

Trajectory integrate_through(const Scene& scene, const Point& a, const FlowOptions& opts) {
    auto [face, fval] = scene.nearest_face(a);
    if (fval > 1e-5)
        throw std::invalid_argument("integrate_through: point is not on the boundary");
    std::vector<double> jet = directed_jet(scene, +1, face, a);
    int m = jet_order(jet, opts.tol, scene.n());
    if (m == 0) m = 1;

    if (m % 2 == 1 && jet[m] > 0) return integrate_trajectory(scene, a, opts);
    if (m % 2 == 0 && jet[m] < 0) return integrate_trajectory(scene, a, opts);  // singleton

    // exit point or interior tangency: walk backward to the entry first
    std::vector<RawEvent> evs;
    std::vector<double> ts;
    std::vector<Point> ps;
    integrate_core(scene, -1, a, opts, evs, ts, ps);
    return integrate_trajectory(scene, evs.back().x, opts);
}

std::vector<std::vector<int>> admissible_types(int n) {
    if (n < 0) throw std::invalid_argument("admissible_types: n must be >= 0");
    std::vector<std::vector<int>> out;
    // p = 1: single even tangency
    for (int m = 2; m - 1 <= n; m += 2) out.push_back({m});
    // p >= 2: odd ends, even interior
    std::vector<int> seq;
    auto extend = [&](auto&& self, int budget) -> void {
        // close with an odd tail
        for (int m = 1; m - 1 <= budget; m += 2) {
            seq.push_back(m);
            out.push_back(seq);
            seq.pop_back();
        }
        // or insert an even middle entry and keep going
        for (int m = 2; m - 1 <= budget; m += 2) {
            seq.push_back(m);
            self(self, budget - (m - 1));
            seq.pop_back();
        }
    };
    for (int m1 = 1; m1 - 1 <= n; m1 += 2) {
        seq.assign(1, m1);
        extend(extend, n - (m1 - 1));
    }
    auto reduced = [](const std::vector<int>& t) {
        int r = 0;
        for (int m : t) r += m - 1;
        return r;
    };
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        int ra = reduced(a), rb = reduced(b);
        if (ra != rb) return ra < rb;
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

std::string format_type(const std::vector<int>& type) {
    std::ostringstream ss;
    ss << '(';
    bool wide = false;
    for (int m : type)
        if (m > 9) wide = true;
    for (size_t i = 0; i < type.size(); ++i) {
        if (wide && i) ss << ',';
        ss << type[i];
    }
    ss << ')';
    return ss.str();
}

TransportMaps linearized_transport(const Scene& scene, const Trajectory& traj) {
    const int d = scene.dim();
    TransportMaps maps;
    if (traj.events.size() <= 1) {
        maps.to_exit.assign(traj.events.size(), MatrixXd::Identity(d, d));
        return maps;
    }
    auto jac = [&](const VectorXd& x) {
        Point p = to_point(x);
        MatrixXd J(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) J(i, j) = scene.v_jacobian()[i][j]->eval(p);
        return J;
    };
    // joint RK4 on (x, M): x' = v(x), M' = Dv(x) M
    VectorXd x = to_vec(traj.events.front().location);
    MatrixXd M = MatrixXd::Identity(d, d);
    std::vector<MatrixXd> at_event;
    at_event.push_back(M);
    const double T = traj.events.back().t;
    for (size_t e = 0; e + 1 < traj.events.size(); ++e) {
        double t0 = traj.events[e].t, t1 = traj.events[e + 1].t;
        int steps = std::max(16, static_cast<int>(std::ceil(4000.0 * (t1 - t0) / std::max(T, 1e-300))));
        double h = (t1 - t0) / steps;
        for (int s = 0; s < steps; ++s) {
            auto rhs = [&](const VectorXd& xx, const MatrixXd& MM, VectorXd& dx, MatrixXd& dM) {
                dx = field_at(scene, +1, xx);
                dM = jac(xx) * MM;
            };
            VectorXd k1x, k2x, k3x, k4x;
            MatrixXd k1m, k2m, k3m, k4m;
            rhs(x, M, k1x, k1m);
            rhs(x + 0.5 * h * k1x, M + 0.5 * h * k1m, k2x, k2m);
            rhs(x + 0.5 * h * k2x, M + 0.5 * h * k2m, k3x, k3m);
            rhs(x + h * k3x, M + h * k3m, k4x, k4m);
            x += (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x);
            M += (h / 6.0) * (k1m + 2 * k2m + 2 * k3m + k4m);
        }
        at_event.push_back(M);
    }
    MatrixXd Mexit = at_event.back();
    for (const auto& Mi : at_event) maps.to_exit.push_back(Mexit * Mi.inverse());
    return maps;
}

TraversalityReport check_traversally_generic(const Scene& scene, const Trajectory& traj,
                                             double tol) {
    TraversalityReport rep;
    const int d = scene.dim();
    const int n = scene.n();
    rep.expected_rank = traj.reduced_multiplicity();
    if (rep.expected_rank > n)
        throw GenericityViolation("trajectory of type " + format_type(traj.type()) +
                                  " has reduced multiplicity " +
                                  std::to_string(rep.expected_rank) + " > n = " +
                                  std::to_string(n));
    if (rep.expected_rank == 0) {
        rep.pass = true;
        rep.reason = "no tangency constraints";
        return rep;
    }
    TransportMaps maps = linearized_transport(scene, traj);
    const Point& exit_pt = traj.events.back().location;
    VectorXd v_exit = to_vec(scene.v_at(exit_pt));
    VectorXd vhat = v_exit.normalized();

    std::vector<VectorXd> rows;
    for (size_t e = 0; e < traj.events.size(); ++e) {
        const auto& ev = traj.events[e];
        if (ev.multiplicity < 2) continue;
        MatrixXd Tinv = maps.to_exit[e].inverse();
        for (int j = 0; j <= ev.multiplicity - 2; ++j) {
            VectorXd g(d);
            for (int i = 0; i < d; ++i)
                g[i] = scene.face(ev.face).lie_grad[j][i]->eval(ev.location);
            VectorXd h = Tinv.transpose() * g;  // covector pullback to the exit fiber
            h -= h.dot(vhat) * vhat;            // restrict to the transverse fiber
            if (h.norm() > 0) h.normalize();
            rows.push_back(h);
        }
    }
    MatrixXd S(rows.size(), d);
    for (size_t r = 0; r < rows.size(); ++r) S.row(r) = rows[r];
    Eigen::JacobiSVD<MatrixXd> svd(S);
    VectorXd sv = svd.singularValues();
    rep.min_singular_value = sv(sv.size() - 1);
    rep.stacked_rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rep.stacked_rank;
    rep.pass = rep.stacked_rank == rep.expected_rank;
    rep.reason = rep.pass ? "stacked tangency covectors have full rank"
                          : "stacked tangency covectors are rank-deficient";
    return rep;
}

}  // namespace traverse
