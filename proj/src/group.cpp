#include "traverse/group.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace traverse {

Group Group::free_abelian(int d) {
    if (d < 1) throw GroupError("free_abelian: rank must be >= 1");
    Group g;
    g.finite_ = false;
    g.rank_ = d;
    return g;
}

Group Group::finite(std::vector<std::vector<int>> table) {
    const int n = static_cast<int>(table.size());
    if (n < 1) throw GroupError("finite: empty multiplication table");
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != n)
            throw GroupError("finite: multiplication table is not square");
        for (int v : row)
            if (v < 0 || v >= n) throw GroupError("finite: table entry out of range");
    }
    // identity: a row and column acting trivially
    int id = -1;
    for (int e = 0; e < n; ++e) {
        bool ok = true;
        for (int a = 0; a < n; ++a)
            if (table[e][a] != a || table[a][e] != a) ok = false;
        if (ok) {
            id = e;
            break;
        }
    }
    if (id < 0) throw GroupError("finite: no identity element");
    std::vector<int> inv(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (table[a][b] == id && table[b][a] == id) inv[a] = b;
        if (inv[a] < 0) throw GroupError("finite: element without inverse");
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (table[table[a][b]][c] != table[a][table[b][c]])
                    throw GroupError("finite: multiplication is not associative");
    Group g;
    g.finite_ = true;
    g.rank_ = 1;
    g.table_ = std::move(table);
    g.inverse_ = std::move(inv);
    g.id_ = id;
    return g;
}

int Group::order() const {
    if (!finite_) throw GroupError("order: infinite group");
    return static_cast<int>(table_.size());
}

void Group::check_elem(const Elem& a) const {
    if (finite_) {
        if (a.size() != 1 || a[0] < 0 || a[0] >= static_cast<int>(table_.size()))
            throw GroupError("element out of range for finite backend");
    } else if (static_cast<int>(a.size()) != rank_) {
        throw GroupError("element rank mismatch for Z^d backend");
    }
}

Group::Elem Group::identity() const {
    if (finite_) return {id_};
    return Elem(rank_, 0);
}

Group::Elem Group::inverse(const Elem& a) const {
    check_elem(a);
    if (finite_) return {inverse_[a[0]]};
    Elem r(a);
    for (int& v : r) v = -v;
    return r;
}

Group::Elem Group::product(const Elem& a, const Elem& b) const {
    check_elem(a);
    check_elem(b);
    if (finite_) return {table_[a[0]][b[0]]};
    Elem r(a);
    for (int i = 0; i < rank_; ++i) r[i] += b[i];
    return r;
}

bool Group::is_identity(const Elem& a) const { return a == identity(); }

std::vector<Group::Elem> Group::elements() const {
    if (!finite_) throw GroupError("elements: infinite group");
    std::vector<Elem> out;
    for (int i = 0; i < order(); ++i) out.push_back({i});
    return out;
}

Rat folner_ratio(const Group& G, const Group::Elem& x, const std::vector<Group::Elem>& A) {
    std::set<Group::Elem> a(A.begin(), A.end());
    std::set<Group::Elem> xa;
    for (const auto& g : A) xa.insert(G.product(x, g));
    long long diff = 0;
    for (const auto& g : a)
        if (!xa.count(g)) ++diff;
    for (const auto& g : xa)
        if (!a.count(g)) ++diff;
    return Rat(diff) / Rat(static_cast<long long>(a.size()));
}

FolnerResult folner_set(const Group& G, const std::vector<Group::Elem>& S, const Rat& eps) {
    if (eps <= 0) throw GroupError("folner_set: eps must be positive");
    FolnerResult res;
    if (G.is_finite()) {
        res.set = G.elements();
        res.worst_ratio = 0;
        return res;
    }
    const int d = G.rank();
    // cube [0,N)^d: |xA delta A| = 2 (N^d - prod_i max(0, N - |x_i|))
    using Int = boost::multiprecision::cpp_int;
    auto worst = [&](long long N) {
        Rat w = 0;
        Int Nd = 1;
        for (int i = 0; i < d; ++i) Nd *= N;
        for (const auto& x : S) {
            Int inter = 1;
            for (int i = 0; i < d; ++i) {
                long long keep = N - std::abs(static_cast<long long>(x[i]));
                if (keep <= 0) {
                    inter = 0;
                    break;
                }
                inter *= keep;
            }
            Rat r = Rat(2 * (Nd - inter)) / Rat(Nd);
            if (r > w) w = r;
        }
        return w;
    };
    long long N = 1;
    while (worst(N) > eps) {
        ++N;
        if (N > 100000000) throw GroupError("folner_set: box size exploded");
    }
    res.box_side = static_cast<int>(N);
    res.worst_ratio = worst(N);
    // enumerate the cube only when it is small enough to materialize
    double size = 1;
    for (int i = 0; i < d; ++i) size *= static_cast<double>(N);
    if (size <= 4e6) {
        Group::Elem e(d, 0);
        std::function<void(int)> rec = [&](int i) {
            if (i == d) {
                res.set.push_back(e);
                return;
            }
            for (int v = 0; v < N; ++v) {
                e[i] = v;
                rec(i + 1);
            }
        };
        rec(0);
    }
    return res;
}

}  // namespace traverse
