#include "traverse/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace traverse {

using nlohmann::json;

ExprPtr lie_derivative(const ExprPtr& F, const std::vector<ExprPtr>& v, int k) {
    if (k < 1) throw SceneError("lie_derivative: order must be >= 1");
    ExprPtr cur = F;
    for (int j = 0; j < k; ++j) {
        ExprPtr next = constant(0);
        for (size_t i = 0; i < v.size(); ++i)
            next = add(next, mul(v[i], cur->diff(static_cast<int>(i))));
        cur = next;
    }
    return cur;
}

double FlowJet::sup_norm() const {
    double m = 0;
    for (double c : coeff) m = std::max(m, std::abs(c));
    return m;
}

Scene::Scene(int dim, std::vector<ExprPtr> faces, std::vector<ExprPtr> v,
             Point bbox_lo, Point bbox_hi)
    : dim_(dim), v_(std::move(v)), bbox_lo_(std::move(bbox_lo)), bbox_hi_(std::move(bbox_hi)) {
    if (dim < 2) throw SceneError("scene dimension must be at least 2");
    if (static_cast<int>(v_.size()) != dim)
        throw SceneError("vector field component count must equal dim");
    if (faces.empty()) throw SceneError("scene needs at least one face");
    if (bbox_lo_.empty()) bbox_lo_.assign(dim, -3.0);
    if (bbox_hi_.empty()) bbox_hi_.assign(dim, 3.0);
    if (static_cast<int>(bbox_lo_.size()) != dim || static_cast<int>(bbox_hi_.size()) != dim)
        throw SceneError("bbox size must equal dim");

    const int max_order = dim + 2;  // jets up to order n+3 inclusive of c_0
    for (auto& F : faces) {
        Face f;
        f.F = F;
        f.lie.push_back(F);
        for (int j = 1; j <= max_order; ++j)
            f.lie.push_back(lie_derivative(f.lie.back(), v_, 1));
        for (const auto& g : f.lie) {
            std::vector<ExprPtr> grad;
            for (int i = 0; i < dim; ++i) grad.push_back(g->diff(i));
            f.lie_grad.push_back(std::move(grad));
        }
        faces_.push_back(std::move(f));
    }
    for (const auto& comp : v_) {
        std::vector<ExprPtr> row;
        for (int i = 0; i < dim; ++i) row.push_back(comp->diff(i));
        v_jac_.push_back(std::move(row));
    }
}

double Scene::diameter() const {
    double d2 = 0;
    for (int i = 0; i < dim_; ++i) d2 += (bbox_hi_[i] - bbox_lo_[i]) * (bbox_hi_[i] - bbox_lo_[i]);
    return std::sqrt(d2);
}

bool Scene::in_bbox(const Point& x, double margin) const {
    for (int i = 0; i < dim_; ++i)
        if (x[i] < bbox_lo_[i] - margin || x[i] > bbox_hi_[i] + margin) return false;
    return true;
}

std::vector<double> Scene::v_at(const Point& x) const {
    std::vector<double> out(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = v_[i]->eval(x);
    return out;
}

double Scene::min_face_value(const Point& x) const {
    double m = faces_[0].value(x);
    for (size_t i = 1; i < faces_.size(); ++i) m = std::min(m, faces_[i].value(x));
    return m;
}

bool Scene::inside(const Point& x, double tol) const { return min_face_value(x) >= -tol; }

std::pair<int, double> Scene::nearest_face(const Point& x) const {
    int best = 0;
    double bestv = std::abs(faces_[0].value(x));
    for (size_t i = 1; i < faces_.size(); ++i) {
        double v = std::abs(faces_[i].value(x));
        if (v < bestv) {
            bestv = v;
            best = static_cast<int>(i);
        }
    }
    return {best, bestv};
}

FlowJet Scene::flow_jet(const Point& a, int k, int face) const {
    const Face& f = faces_.at(face);
    if (k >= static_cast<int>(f.lie.size()))
        throw SceneError("flow_jet order exceeds precomputed Lie chain");
    FlowJet jet;
    jet.point = a;
    jet.face = face;
    double fact = 1.0;
    for (int j = 0; j <= k; ++j) {
        if (j > 0) fact *= j;
        jet.coeff.push_back(f.lie[j]->eval(a) / fact);
    }
    return jet;
}

void Scene::validate(int samples, double tol) const {
    auto pts = halton_points(samples, bbox_lo_, bbox_hi_);
    double minv = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
        if (!inside(p, 0)) continue;
        auto vv = v_at(p);
        double nrm = 0;
        for (double c : vv) nrm += c * c;
        minv = std::min(minv, std::sqrt(nrm));
    }
    if (minv < tol)
        throw SceneError("vector field vanishes (or nearly) on X: sampled min |v| = " +
                         std::to_string(minv));
    // regular-value check: near each face's zero set, grad F must not vanish
    for (size_t fi = 0; fi < faces_.size(); ++fi) {
        const Face& f = faces_[fi];
        for (const auto& p : pts) {
            if (std::abs(f.value(p)) > 0.05) continue;
            double g2 = 0;
            for (int i = 0; i < dim_; ++i) {
                double gi = f.lie_grad[0][i]->eval(p);
                g2 += gi * gi;
            }
            if (std::sqrt(g2) < tol)
                throw SceneError("0 is not a regular value of face " + std::to_string(fi) +
                                 " near a sampled point");
        }
    }
}

std::vector<Point> halton_points(int count, const Point& lo, const Point& hi, int skip) {
    static const int primes[] = {2, 3, 5, 7, 11, 13};
    const int dim = static_cast<int>(lo.size());
    std::vector<Point> out;
    out.reserve(count);
    for (int n = 0; n < count; ++n) {
        Point p(dim);
        for (int i = 0; i < dim; ++i) {
            int base = primes[i % 6];
            double f = 1.0, r = 0.0;
            int idx = n + skip + 1;
            while (idx > 0) {
                f /= base;
                r += f * (idx % base);
                idx /= base;
            }
            p[i] = lo[i] + r * (hi[i] - lo[i]);
        }
        out.push_back(std::move(p));
    }
    return out;
}

Scene scene_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw SceneError(std::string("scene JSON parse failure: ") + e.what());
    }
    if (!j.contains("dim") || !j.contains("F") || !j.contains("v"))
        throw SceneError("scene JSON must contain dim, F, v");
    int dim = j.at("dim").get<int>();

    std::vector<std::string> vars;
    if (j.contains("vars")) {
        vars = j.at("vars").get<std::vector<std::string>>();
    } else {
        static const std::vector<std::string> def = {"x", "y", "z", "w"};
        vars.assign(def.begin(), def.begin() + std::min<size_t>(dim, def.size()));
    }
    if (static_cast<int>(vars.size()) != dim)
        throw SceneError("vars list length must equal dim");

    std::vector<ExprPtr> faces;
    if (j.at("F").is_string()) {
        faces.push_back(parse_expr(j.at("F").get<std::string>(), vars));
    } else {
        for (const auto& s : j.at("F")) faces.push_back(parse_expr(s.get<std::string>(), vars));
    }
    std::vector<ExprPtr> v;
    for (const auto& s : j.at("v")) v.push_back(parse_expr(s.get<std::string>(), vars));

    Point lo, hi;
    if (j.contains("bbox")) {
        lo = j.at("bbox").at(0).get<Point>();
        hi = j.at("bbox").at(1).get<Point>();
    }
    Scene scene(dim, std::move(faces), std::move(v), std::move(lo), std::move(hi));
    if (j.contains("name")) scene.name = j.at("name").get<std::string>();
    if (j.contains("euler")) scene.euler = j.at("euler").get<int>();
    return scene;
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SceneError("cannot open scene file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return scene_from_json_text(ss.str());
}

}  // namespace traverse
