#include "traverse/chain.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <nlohmann/json.hpp>

namespace traverse {

Group::Elem edge_label(const Group& G, const LabeledSimplex& s, int a, int b) {
    return G.product(G.inverse(s.lifts.at(a)), s.lifts.at(b));
}

void LabeledChain::add(const LabeledSimplex& s, const Rat& r) {
    if (r == 0) return;
    auto it = terms_.find(s);
    if (it == terms_.end()) {
        terms_.emplace(s, r);
        return;
    }
    it->second += r;
    if (it->second == 0) terms_.erase(it);
}

Rat LabeledChain::norm() const {
    Rat n = 0;
    for (const auto& [s, r] : terms_) n += abs(r);
    return n;
}

LabeledChain& LabeledChain::operator+=(const LabeledChain& o) {
    for (const auto& [s, r] : o.terms_) add(s, r);
    return *this;
}

LabeledChain LabeledChain::scaled(const Rat& r) const {
    LabeledChain out;
    if (r == 0) return out;
    for (const auto& [s, c] : terms_) out.add(s, c * r);
    return out;
}

LabeledSimplex straighten_simplex(const Group& G, const LabeledSimplex& s) {
    if (s.verts.size() != s.lifts.size())
        throw ChainError("malformed simplex: vertex/lift count mismatch");
    LabeledSimplex r = s;
    Group::Elem h0inv = G.inverse(s.lifts[0]);
    for (auto& h : r.lifts) h = G.product(h0inv, h);
    return r;
}

LabeledChain straighten(const Group& G, const LabeledChain& c) {
    LabeledChain out;
    for (const auto& [s, r] : c.terms()) out.add(straighten_simplex(G, s), r);
    return out;
}

LabeledSimplex permute_simplex(const LabeledSimplex& s, const std::vector<int>& q) {
    LabeledSimplex r;
    r.verts.resize(s.verts.size());
    r.lifts.resize(s.lifts.size());
    for (size_t i = 0; i < q.size(); ++i) {
        r.verts[i] = s.verts[q[i]];
        r.lifts[i] = s.lifts[q[i]];
    }
    return r;
}

int permutation_sign(std::vector<int> q) {
    int sign = 1;
    for (size_t i = 0; i < q.size(); ++i) {
        while (q[i] != static_cast<int>(i)) {
            std::swap(q[i], q[q[i]]);
            sign = -sign;
        }
    }
    return sign;
}

namespace {

Rat factorial(int n) {
    Rat f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// adds w * symm(sigma) to out, with every term straightened
void add_symm(const Group& G, LabeledChain& out, const LabeledSimplex& s, const Rat& w) {
    const int k = static_cast<int>(s.verts.size());
    std::vector<int> q(k);
    for (int i = 0; i < k; ++i) q[i] = i;
    Rat scale = w / factorial(k);
    do {
        int sign = permutation_sign(q);
        out.add(straighten_simplex(G, permute_simplex(s, q)), sign * scale);
    } while (std::next_permutation(q.begin(), q.end()));
}

}  // namespace

LabeledChain symm(const Group& G, const LabeledChain& c) {
    LabeledChain out;
    for (const auto& [s, r] : c.terms()) add_symm(G, out, s, r);
    return out;
}

LabeledChain boundary(const Group& G, const LabeledChain& c) {
    LabeledChain out;
    for (const auto& [s, r] : c.terms()) {
        const int k = static_cast<int>(s.verts.size());
        if (k <= 1) continue;
        for (int i = 0; i < k; ++i) {
            LabeledSimplex f;
            for (int j = 0; j < k; ++j) {
                if (j == i) continue;
                f.verts.push_back(s.verts[j]);
                f.lifts.push_back(s.lifts[j]);
            }
            out.add(f, (i % 2 == 0) ? r : -r);
        }
    }
    return out;
}

LabeledChain push_vertex(const Group& G, const LabeledChain& c, int v,
                         const Group::Elem& g) {
    LabeledChain out;
    for (const auto& [s, r] : c.terms()) {
        LabeledSimplex t = s;
        for (size_t i = 0; i < t.verts.size(); ++i)
            if (t.verts[i] == v) t.lifts[i] = G.product(t.lifts[i], g);
        out.add(t, r);
    }
    return out;
}

EssentialReport classify_essential(const Group& G, const LabeledChain& c,
                                   const PartialColoring& coloring) {
    EssentialReport rep;
    for (const auto& [s, r] : c.terms()) {
        EssentialReport::Entry e{s, r, true, ""};
        const int k = static_cast<int>(s.verts.size());
        for (int a = 0; a < k && e.essential; ++a) {
            for (int b = a + 1; b < k && e.essential; ++b) {
                if (s.verts[a] != s.verts[b]) {
                    auto ca = coloring.color_of(s.verts[a]);
                    auto cb = coloring.color_of(s.verts[b]);
                    if (ca && cb && *ca == *cb) {
                        e.essential = false;
                        e.reason = "same-color pair";
                    }
                } else if (G.is_identity(edge_label(G, s, a, b))) {
                    e.essential = false;
                    e.reason = "identity loop edge";
                }
            }
        }
        (e.essential ? rep.essential_norm : rep.nonessential_norm) += abs(r);
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

namespace {

LabeledSimplex collapse_colored(const LabeledSimplex& s, const PartialColoring& coloring) {
    LabeledSimplex r = s;
    for (auto& v : r.verts)
        if (auto c = coloring.color_of(v)) v = -1 - *c;
    return r;
}

}  // namespace

AverageReport amenable_average(const Group& G, const LabeledChain& c,
                               const PartialColoring& coloring, const Rat& eps,
                               long long size_cap) {
    AverageReport rep;
    if (!straighten(G, boundary(G, straighten(G, c))).empty())
        throw ChainError("amenable_average: input chain is not a cycle");

    EssentialReport cls = classify_essential(G, c, coloring);
    rep.essential_norm = cls.essential_norm;
    rep.nonessential_norm = cls.nonessential_norm;

    // Folner set per color, over the labels of same-color edges
    std::map<int, std::vector<Group::Elem>> color_labels;
    for (const auto& [s, r] : c.terms()) {
        const int k = static_cast<int>(s.verts.size());
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b) {
                auto ca = coloring.color_of(s.verts[a]);
                auto cb = coloring.color_of(s.verts[b]);
                if (ca && cb && *ca == *cb) color_labels[*ca].push_back(edge_label(G, s, a, b));
            }
    }
    std::set<int> colors;
    for (const auto& [v, col] : coloring.color) colors.insert(col);
    std::map<int, FolnerResult> folner;
    for (int col : colors) {
        folner[col] = folner_set(G, color_labels[col], eps);
        rep.folner_sides[col] = folner[col].box_side;
    }

    for (const auto& [s, r] : c.terms()) {
        // distinct colored vertex ids of this simplex, in order of appearance
        std::vector<int> ids;
        std::vector<int> id_color;
        std::vector<int> pos_var(s.verts.size(), -1);
        for (size_t p = 0; p < s.verts.size(); ++p) {
            auto col = coloring.color_of(s.verts[p]);
            if (!col) continue;
            int var = -1;
            for (size_t i = 0; i < ids.size(); ++i)
                if (ids[i] == s.verts[p]) var = static_cast<int>(i);
            if (var < 0) {
                var = static_cast<int>(ids.size());
                ids.push_back(s.verts[p]);
                id_color.push_back(*col);
            }
            pos_var[p] = var;
        }
        const int k = static_cast<int>(ids.size());
        LabeledSimplex base = collapse_colored(s, coloring);

        if (k == 0) {
            add_symm(G, rep.average, base, r);
            continue;
        }

        // direct product enumeration when small enough
        double direct = 1;
        bool direct_ok = true;
        for (int i = 0; i < k; ++i) {
            const auto& A = folner[id_color[i]].set;
            if (A.empty()) direct_ok = false;
            direct *= static_cast<double>(A.size());
        }
        if (direct_ok && direct <= static_cast<double>(size_cap)) {
            Rat total = 1;
            for (int i = 0; i < k; ++i) total *= static_cast<long long>(folner[id_color[i]].set.size());
            std::vector<const Group::Elem*> gamma(k, nullptr);
            std::function<void(int)> rec = [&](int i) {
                if (i == k) {
                    LabeledSimplex t = base;
                    for (size_t p = 0; p < t.verts.size(); ++p)
                        if (pos_var[p] >= 0)
                            t.lifts[p] = G.product(t.lifts[p], *gamma[pos_var[p]]);
                    add_symm(G, rep.average, t, r / total);
                    return;
                }
                for (const auto& g : folner[id_color[i]].set) {
                    gamma[i] = &g;
                    rec(i + 1);
                }
            };
            rec(0);
            continue;
        }

        // translation-difference counting: Z^d, every vertex colored, with the
        // reference variable at position 0 (abelian straightening depends
        // only on gamma differences to position 0's variable)
        bool all_colored = true;
        for (int pv : pos_var)
            if (pv < 0) all_colored = false;
        if (G.is_finite() || !all_colored)
            throw ChainError("amenable_average: slice too large for enumeration");
        const int d = G.rank();
        const int ref = pos_var[0];
        std::vector<long long> N(k);
        for (int i = 0; i < k; ++i) N[i] = folner[id_color[i]].box_side;
        double support = 1;
        for (int i = 0; i < k; ++i)
            if (i != ref)
                for (int j = 0; j < d; ++j)
                    support *= static_cast<double>(N[ref] + N[i] - 1);
        // the difference enumeration is the cheap fallback; its own budget is
        // independent of the direct-product cap
        if (support > 5e7)
            throw ChainError("amenable_average: slice too large for enumeration");

        Rat total = 1;
        for (int i = 0; i < k; ++i) {
            Rat box = 1;
            for (int j = 0; j < d; ++j) box *= N[i];
            total *= box;
        }
        std::vector<int> others;
        for (int i = 0; i < k; ++i)
            if (i != ref) others.push_back(i);
        std::vector<Group::Elem> delta(k, Group::Elem(d, 0));
        std::function<void(size_t, int)> rec = [&](size_t oi, int dim) {
            if (oi == others.size()) {
                // weight = #choices of gamma_ref per dimension
                Rat weight = 1;
                for (int j = 0; j < d; ++j) {
                    long long lo = 0, hi = N[ref];
                    for (int i : others) {
                        lo = std::max(lo, -static_cast<long long>(delta[i][j]));
                        hi = std::min(hi, N[i] - static_cast<long long>(delta[i][j]));
                    }
                    if (hi <= lo) return;
                    weight *= (hi - lo);
                }
                LabeledSimplex t = base;
                for (size_t p = 0; p < t.verts.size(); ++p)
                    t.lifts[p] = G.product(t.lifts[p], delta[pos_var[p]]);
                add_symm(G, rep.average, t, r * weight / total);
                return;
            }
            int i = others[oi];
            if (dim == d) {
                rec(oi + 1, 0);
                return;
            }
            for (long long v = -(N[ref] - 1); v <= N[i] - 1; ++v) {
                delta[i][dim] = static_cast<int>(v);
                rec(oi, dim + 1);
            }
        };
        rec(0, 0);
    }

    rep.norm = rep.average.norm();
    rep.bound = rep.essential_norm + eps * rep.nonessential_norm;
    rep.bound_holds = rep.norm <= rep.bound;
    rep.is_cycle = straighten(G, boundary(G, rep.average)).empty();
    return rep;
}

InvolutionReport involution_check(const Group& G, const Group::Elem& x,
                                  const std::vector<Group::Elem>& A, const Rat& eps) {
    InvolutionReport rep;
    std::set<Group::Elem> aset(A.begin(), A.end());
    std::vector<Group::Elem> left, right;  // xA n A and x^-1 A n A
    Group::Elem xinv = G.inverse(x);
    for (const auto& g : A) {
        if (aset.count(G.product(x, g))) right.push_back(g);    // g with xg in A
        if (aset.count(G.product(xinv, g))) left.push_back(g);  // g in xA n A
    }
    // left = xA n A (elements g of A with x^-1 g in A); right = x^-1 A n A
    rep.subset_pairs = static_cast<long long>(left.size()) * right.size();
    rep.total_pairs = static_cast<long long>(A.size()) * A.size();
    rep.square_bound = Rat(rep.subset_pairs) > (Rat(1) - eps) * Rat(rep.total_pairs);

    // collapsed edge with both endpoints at a basepoint; lifts (g_a, x g_b)
    for (const auto& ga : left) {
        for (const auto& gb : right) {
            LabeledSimplex e;
            e.verts = {-1, -1};
            e.lifts = {ga, G.product(x, gb)};
            add_symm(G, rep.partial_sum, e, 1);
        }
    }
    return rep;
}

std::pair<Group, LabeledChain> chain_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ChainError(std::string("chain JSON parse failure: ") + e.what());
    }
    if (!j.contains("group") || !j.contains("simplices"))
        throw ChainError("chain JSON must contain group and simplices");
    const auto& gj = j.at("group");
    std::string type = gj.at("type").get<std::string>();
    Group G = [&] {
        if (type == "Z") return Group::free_abelian(gj.value("d", 1));
        if (type == "finite")
            return Group::finite(gj.at("table").get<std::vector<std::vector<int>>>());
        throw ChainError("unknown group type: " + type);
    }();

    auto parse_elem = [&](const nlohmann::json& e) -> Group::Elem {
        if (e.is_number_integer()) return Group::Elem{e.get<int>()};
        return e.get<Group::Elem>();
    };

    LabeledChain c;
    for (const auto& sj : j.at("simplices")) {
        LabeledSimplex s;
        s.verts = sj.at("verts").get<std::vector<int>>();
        s.lifts.push_back(G.identity());
        if (sj.contains("labels"))
            for (const auto& lj : sj.at("labels")) s.lifts.push_back(parse_elem(lj));
        while (s.lifts.size() < s.verts.size()) s.lifts.push_back(G.identity());
        if (s.lifts.size() != s.verts.size())
            throw ChainError("simplex has more labels than edges from vertex 0");
        Rat coeff = 1;
        if (sj.contains("coeff")) {
            const auto& cj = sj.at("coeff");
            coeff = cj.is_string() ? parse_rational(cj.get<std::string>())
                                   : Rat(cj.get<long long>());
        }
        c.add(s, coeff);
    }
    return {std::move(G), std::move(c)};
}

PartialColoring coloring_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ChainError(std::string("coloring JSON parse failure: ") + e.what());
    }
    PartialColoring col;
    for (const auto& [key, val] : j.at("colors").items())
        col.color[std::stoi(key)] = val.get<int>();
    return col;
}

Rat parse_rational(const std::string& text) {
    try {
        return Rat(text);
    } catch (const std::exception&) {
        throw ChainError("cannot parse rational: " + text);
    }
}

}  // namespace traverse
