#include "traverse/lp.hpp"

#include <algorithm>

namespace traverse {

namespace {

// Dense simplex tableau over the rationals. Columns 0..n-1 are structural,
// n..n+m-1 artificial in phase 1. Bland's rule guarantees termination.
struct Tableau {
    int m, n;                           // rows, structural columns
    std::vector<std::vector<Rat>> T;    // m rows of n_total coefficients
    std::vector<Rat> rhs;               // >= 0 invariant
    std::vector<int> basis;             // column basic in each row

    int cols() const { return static_cast<int>(T[0].size()); }

    void pivot(int r, int col) {
        Rat p = T[r][col];
        for (Rat& v : T[r]) v /= p;
        rhs[r] /= p;
        for (int i = 0; i < m; ++i) {
            if (i == r) continue;
            Rat f = T[i][col];
            if (f == 0) continue;
            for (int j = 0; j < cols(); ++j) T[i][j] -= f * T[r][j];
            rhs[i] -= f * rhs[r];
        }
        basis[r] = col;
    }

    // minimize obj over allowed columns; returns false on unboundedness
    bool run(const std::vector<Rat>& obj, int allowed_cols) {
        for (;;) {
            // reduced costs: z_j = obj_j - sum_i obj_basis[i] * T[i][j]
            int enter = -1;
            for (int j = 0; j < allowed_cols; ++j) {
                Rat z = obj[j];
                for (int i = 0; i < m; ++i)
                    if (obj[basis[i]] != 0) z -= obj[basis[i]] * T[i][j];
                if (z < 0) {
                    enter = j;  // Bland: smallest index
                    break;
                }
            }
            if (enter < 0) return true;
            int leave = -1;
            Rat best = 0;
            for (int i = 0; i < m; ++i) {
                if (T[i][enter] <= 0) continue;
                Rat ratio = rhs[i] / T[i][enter];
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LPResult solve_lp(const std::vector<std::vector<Rat>>& A, const std::vector<Rat>& b,
                  const std::vector<Rat>& c) {
    const int m = static_cast<int>(A.size());
    const int n = static_cast<int>(c.size());
    if (static_cast<int>(b.size()) != m) throw LPError("b size does not match row count");
    for (const auto& row : A)
        if (static_cast<int>(row.size()) != n)
            throw LPError("A row size does not match c size");

    Tableau tab;
    tab.m = m;
    tab.n = n;
    tab.T.assign(m, std::vector<Rat>(n + m, 0));
    tab.rhs = b;
    tab.basis.resize(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) tab.T[i][j] = A[i][j];
        if (tab.rhs[i] < 0) {
            for (Rat& v : tab.T[i]) v = -v;
            tab.rhs[i] = -tab.rhs[i];
        }
        tab.T[i][n + i] = 1;
        tab.basis[i] = n + i;
    }

    // phase 1: minimize sum of artificials
    std::vector<Rat> obj1(n + m, 0);
    for (int i = 0; i < m; ++i) obj1[n + i] = 1;
    if (!tab.run(obj1, n + m)) throw LPError("phase-1 objective unbounded");
    Rat art_sum = 0;
    for (int i = 0; i < m; ++i)
        if (tab.basis[i] >= n) art_sum += tab.rhs[i];
    LPResult res;
    if (art_sum != 0) {
        res.status = LPStatus::Infeasible;
        return res;
    }
    // drive remaining artificials out of the basis (degenerate rows)
    for (int i = 0; i < m; ++i) {
        if (tab.basis[i] < n) continue;
        int col = -1;
        for (int j = 0; j < n; ++j)
            if (tab.T[i][j] != 0) {
                col = j;
                break;
            }
        if (col >= 0) tab.pivot(i, col);
        // otherwise the row is redundant: its artificial stays basic at 0
        // and the zero row cannot affect further pivots
    }

    // phase 2
    std::vector<Rat> obj2(n + m, 0);
    for (int j = 0; j < n; ++j) obj2[j] = c[j];
    if (!tab.run(obj2, n)) {
        res.status = LPStatus::Unbounded;
        return res;
    }

    res.status = LPStatus::Optimal;
    res.x.assign(n, 0);
    for (int i = 0; i < m; ++i)
        if (tab.basis[i] < n) res.x[tab.basis[i]] = tab.rhs[i];
    res.value = 0;
    for (int j = 0; j < n; ++j) res.value += c[j] * res.x[j];

    // exact certificate: primal feasibility and nonnegative reduced costs
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) {
        Rat lhs = 0;
        for (int j = 0; j < n; ++j) lhs += A[i][j] * res.x[j];
        if (lhs != b[i]) ok = false;
    }
    for (int j = 0; j < n && ok; ++j) {
        if (res.x[j] < 0) ok = false;
        Rat z = obj2[j];
        for (int i = 0; i < m; ++i)
            if (obj2[tab.basis[i]] != 0) z -= obj2[tab.basis[i]] * tab.T[i][j];
        if (z < 0) ok = false;
    }
    res.certified = ok;
    if (!ok) throw LPError("optimality certificate failed exact verification");
    return res;
}

}  // namespace traverse
