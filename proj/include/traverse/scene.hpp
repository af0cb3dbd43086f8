// Scenes: a compact domain X = {F_i >= 0 for all faces i} in R^{n+1}
// together with a non-vanishing vector field v, both symbolic.
//
// Each face carries the chain of iterated Lie derivatives v^j F and their
// gradients, precomputed to order n+3 so that multiplicity jets are exact
// up to evaluation rounding.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "traverse/expr.hpp"

namespace traverse {

using Point = std::vector<double>;

struct SceneError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// v^k F as an expression: v^k F = v . grad(v^{k-1} F)
ExprPtr lie_derivative(const ExprPtr& F, const std::vector<ExprPtr>& v, int k);

struct Face {
    ExprPtr F;
    // lie[j] = v^j F (lie[0] = F), gradients lie_grad[j][i] = d(v^j F)/dx_i
    std::vector<ExprPtr> lie;
    std::vector<std::vector<ExprPtr>> lie_grad;

    double value(const Point& x) const { return F->eval(x); }
    double lie_value(int j, const Point& x) const { return lie[j]->eval(x); }
};

// Taylor coefficients of t -> F(phi_t(a)) at t = 0: c_j = (v^j F)(a) / j!
struct FlowJet {
    Point point;
    int face = 0;
    std::vector<double> coeff;  // c_0 .. c_k

    double sup_norm() const;
};

class Scene {
  public:
    // dim = n+1; faces all with the F >= 0 convention
    Scene(int dim, std::vector<ExprPtr> faces, std::vector<ExprPtr> v,
          Point bbox_lo = {}, Point bbox_hi = {});

    int dim() const { return dim_; }
    int n() const { return dim_ - 1; }
    const std::vector<Face>& faces() const { return faces_; }
    const Face& face(int i) const { return faces_.at(i); }
    const std::vector<ExprPtr>& v() const { return v_; }
    const std::vector<std::vector<ExprPtr>>& v_jacobian() const { return v_jac_; }

    const Point& bbox_lo() const { return bbox_lo_; }
    const Point& bbox_hi() const { return bbox_hi_; }
    double diameter() const;
    bool in_bbox(const Point& x, double margin = 0.0) const;

    std::vector<double> v_at(const Point& x) const;
    // min over faces of F_i(x); >= 0 means inside X
    double min_face_value(const Point& x) const;
    bool inside(const Point& x, double tol = 0.0) const;
    // index of the face with smallest |F|, and that value
    std::pair<int, double> nearest_face(const Point& x) const;

    FlowJet flow_jet(const Point& a, int k, int face) const;

    // Sampled validation: 0 is a regular value of each face on {F=0},
    // v does not vanish on X. Throws SceneError on failure.
    void validate(int samples = 10000, double tol = 1e-7) const;

    std::string name;                 // optional, from JSON
    std::optional<int> euler;         // known Euler characteristic, from JSON

  private:
    int dim_;
    std::vector<Face> faces_;
    std::vector<ExprPtr> v_;
    std::vector<std::vector<ExprPtr>> v_jac_;
    Point bbox_lo_, bbox_hi_;
};

// Scene files: JSON {"dim": int, "F": expr-string or [expr-string,...],
// "v": [expr-string,...]} with optional "vars", "bbox", "name", "euler".
Scene load_scene(const std::string& path);
Scene scene_from_json_text(const std::string& text);

// Low-discrepancy points: Halton sequence scaled to [lo, hi]^dim.
std::vector<Point> halton_points(int count, const Point& lo, const Point& hi,
                                 int skip = 0);

}  // namespace traverse
