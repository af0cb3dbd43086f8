// Group backends for edge labels: free abelian Z^d and finite groups
// given by multiplication table. Elements are int vectors (a finite-group
// element is the single-entry vector {index}).

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace traverse {

using Rat = boost::multiprecision::cpp_rational;

struct GroupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Group {
  public:
    using Elem = std::vector<int>;

    static Group free_abelian(int d);
    // table[a][b] = index of a*b; validated exactly (associativity,
    // identity, inverses)
    static Group finite(std::vector<std::vector<int>> table);

    bool is_finite() const { return finite_; }
    int rank() const { return rank_; }         // d for Z^d
    int order() const;                         // finite backend only

    Elem identity() const;
    Elem inverse(const Elem& a) const;
    Elem product(const Elem& a, const Elem& b) const;
    bool is_identity(const Elem& a) const;
    std::vector<Elem> elements() const;        // finite backend only

  private:
    Group() = default;
    void check_elem(const Elem& a) const;
    bool finite_ = false;
    int rank_ = 0;
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
    int id_ = 0;
};

// A finite subset A with |xA delta A| / |A| <= eps for every x in S.
// For Z^d: the cube [0,N)^d with minimal N found by exact rational scan
// (|xA delta A| = 2(N^d - prod_i max(0, N - |x_i|))). For finite groups:
// A = G with ratio 0.
struct FolnerResult {
    std::vector<Group::Elem> set;
    Rat worst_ratio;
    int box_side = 0;  // N for Z^d, 0 for finite backend
};

FolnerResult folner_set(const Group& G, const std::vector<Group::Elem>& S, const Rat& eps);

// exact ratio |xA delta A| / |A| for an arbitrary finite subset
Rat folner_ratio(const Group& G, const Group::Elem& x, const std::vector<Group::Elem>& A);

}  // namespace traverse
