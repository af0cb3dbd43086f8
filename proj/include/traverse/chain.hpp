// Group-labeled simplicial chains with exact rational coefficients:
// straightening (lift canonicalization), signed symmetrization, partial
// colorings with essential-simplex classification, and Folner averaging.
//
// A labeled j-simplex stores vertex ids v_0..v_j and lifts h_0..h_j; the
// edge label between positions a and b is g_ab = h_a^{-1} h_b, so the
// cocycle condition g_ab g_bc = g_ac holds by construction.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "traverse/group.hpp"

namespace traverse {

struct ChainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LabeledSimplex {
    std::vector<int> verts;
    std::vector<Group::Elem> lifts;

    int dim() const { return static_cast<int>(verts.size()) - 1; }
    bool operator<(const LabeledSimplex& o) const {
        if (verts != o.verts) return verts < o.verts;
        return lifts < o.lifts;
    }
    bool operator==(const LabeledSimplex& o) const {
        return verts == o.verts && lifts == o.lifts;
    }
};

Group::Elem edge_label(const Group& G, const LabeledSimplex& s, int a, int b);

class LabeledChain {
  public:
    void add(const LabeledSimplex& s, const Rat& r);
    const std::map<LabeledSimplex, Rat>& terms() const { return terms_; }
    Rat norm() const;  // sum of |coefficients|
    bool empty() const { return terms_.empty(); }
    LabeledChain& operator+=(const LabeledChain& o);
    LabeledChain scaled(const Rat& r) const;

  private:
    std::map<LabeledSimplex, Rat> terms_;
};

// canonical representative: lifts left-translated so h_0 = identity
LabeledSimplex straighten_simplex(const Group& G, const LabeledSimplex& s);
LabeledChain straighten(const Group& G, const LabeledChain& c);

// position i of the result holds the pair at position q[i] of the input
LabeledSimplex permute_simplex(const LabeledSimplex& s, const std::vector<int>& q);
int permutation_sign(std::vector<int> q);

// (1/(j+1)!) sum over q of sign(q) q(sigma)
LabeledChain symm(const Group& G, const LabeledChain& c);

LabeledChain boundary(const Group& G, const LabeledChain& c);

// right-multiplies the lift at every position holding vertex v by g, so
// an edge (v, w) with label x becomes g^{-1} x and (w, v) becomes x g
LabeledChain push_vertex(const Group& G, const LabeledChain& c, int v,
                         const Group::Elem& g);

struct PartialColoring {
    std::map<int, int> color;  // vertex id -> color index
    std::optional<int> color_of(int v) const {
        auto it = color.find(v);
        if (it == color.end()) return std::nullopt;
        return it->second;
    }
};

struct EssentialReport {
    struct Entry {
        LabeledSimplex simplex;
        Rat coeff;
        bool essential;
        std::string reason;  // "", "same-color pair", "identity loop edge"
    };
    std::vector<Entry> entries;
    Rat essential_norm = 0;
    Rat nonessential_norm = 0;
};

// essential = no two distinct same-colored vertices and no identity-labeled
// edge between equal vertex ids
EssentialReport classify_essential(const Group& G, const LabeledChain& c,
                                   const PartialColoring& coloring);

struct AverageReport {
    LabeledChain average;
    Rat norm = 0;
    Rat essential_norm = 0;
    Rat nonessential_norm = 0;
    Rat bound = 0;  // essential_norm + eps * nonessential_norm
    bool bound_holds = false;
    bool is_cycle = false;
    std::map<int, int> folner_sides;  // color -> box side (Z^d backends)
};

// Averages symm(straighten(.)) of the vertex-collapsed pushed chain over
// independent Folner elements per colored vertex. Colored vertices are
// collapsed to one basepoint id per color (id = -1 - color) before
// symmetrization; this is what makes same-color pairs cancel under the
// involution (g_a, g_b) -> (x g_b, x^-1 g_a). Per-simplex slices are
// enumerated directly when small, and by translation-difference counting
// (box overlap weights) for fully colored simplices over Z^d; anything
// larger raises a size error.
AverageReport amenable_average(const Group& G, const LabeledChain& c,
                               const PartialColoring& coloring, const Rat& eps,
                               long long size_cap = 2000000);

struct InvolutionReport {
    LabeledChain partial_sum;  // exactly zero when the cancellation works
    long long subset_pairs = 0;
    long long total_pairs = 0;
    bool square_bound = false;  // subset > (1 - eps) * total
};

// Partial sum of symm(straighten(.)) of the collapsed edge with label
// g_a^{-1} x g_b over (g_a, g_b) in (xA n A) x (x^-1 A n A).
InvolutionReport involution_check(const Group& G, const Group::Elem& x,
                                  const std::vector<Group::Elem>& A, const Rat& eps);

// JSON: {"group": {"type": "Z", "d": 1} | {"type": "finite", "table": [[...]]},
//        "simplices": [{"verts": [...], "labels": [[g_01], [g_02], ...],
//                       "coeff": "3/4"}]}
// labels lists g_{0b} for b = 1..j (the lifts with h_0 = identity).
std::pair<Group, LabeledChain> chain_from_json_text(const std::string& text);
// {"colors": {"vertex-id": color, ...}}
PartialColoring coloring_from_json_text(const std::string& text);

Rat parse_rational(const std::string& text);

}  // namespace traverse
