#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "tv/scalar.hpp"

namespace tv {

// Finite group given by its multiplication table.
class Group {
public:
    Group() = default;
    // table[a][b] = a*b; validated exhaustively (NotAGroup).
    static Group from_table(const std::vector<std::vector<int>> &table);
    static Group cyclic(int n);

    int order() const { return n_; }
    int identity() const { return e_; }
    int mul(int a, int b) const { return mul_[a * n_ + b]; }
    int inv(int a) const { return inv_[a]; }
    int pow(int a, long k) const;
    int element_order(int a) const;
    int exponent() const;
    bool abelian() const;
    // multiplication tables agree after relabelling by phi (phi[a] in other)
    bool isomorphic_via(const Group &other, const std::vector<int> &phi) const;

private:
    int n_ = 0, e_ = 0;
    std::vector<int> mul_, inv_;
};

// Brute-force search for an isomorphism; empty result when none exists.
std::vector<int> find_isomorphism(const Group &a, const Group &b);

// Homomorphism to the roots of unity: value(g) = zeta_order^exps[g].
struct Character {
    int order = 1;
    std::vector<long> exps;
    Cyclotomic value(int g) const { return Cyclotomic::root_of_unity(order, exps[g]); }
};

std::vector<Character> characters(const Group &g);  // NonAbelian

// Normalized 3-cochain with values zeta_order^exps[(g*n + h)*n + k].
struct Cocycle {
    int order = 1;
    std::vector<long> exps;
    long exp(int n, int g, int h, int k) const { return exps[(static_cast<size_t>(g) * n + h) * n + k]; }
};

Cocycle trivial_cocycle(const Group &g);
Cocycle zn_cocycle(int N, long t);
bool cocycle_check(const Group &g, const Cocycle &a);

// Multiplicity-free spherical fusion data.
//
// Tetrahedra are evaluated from the colours of a branched tetrahedron with
// corners v0 < v1 < v2 < v3: c = (c01, c02, c03, c12, c13, c23), each
// colour read along the edge from the smaller to the larger corner.
class FusionData {
public:
    virtual ~FusionData() = default;

    virtual std::string name() const = 0;
    virtual Cyclotomic tet(const std::array<int, 6> &c, int orientation) const = 0;
    // true when tet depends on the branching (group categories)
    virtual bool needs_branching() const { return false; }
    // true when dims and thetas are 1 and tet = zeta_{field_order}^tet_exponent
    virtual bool phase_only() const { return false; }
    virtual long tet_exponent(const std::array<int, 6> &c, int orientation) const;

    int label_count() const { return n_; }
    int dual(int x) const { return dual_[x]; }
    int unit() const { return 0; }
    const Cyclotomic &dim(int x) const { return dim_[x]; }
    bool admissible(int x, int y, int z) const { return adm_[(x * n_ + y) * n_ + z] != 0; }
    Cyclotomic theta(int x, int y, int z) const { return theta_inv(x, y, z).inverse(); }
    const Cyclotomic &theta_inv(int x, int y, int z) const { return theta_inv_[(x * n_ + y) * n_ + z]; }
    const Cyclotomic &global_dim() const { return global_dim_; }
    int field_order() const { return order_; }

protected:
    void init_tables(int n);
    void finish();  // computes global_dim, checks dual/dim invariants

    int n_ = 0;
    int order_ = 1;
    std::vector<int> dual_;
    std::vector<Cyclotomic> dim_;
    std::vector<char> adm_;
    std::vector<Cyclotomic> theta_inv_;
    Cyclotomic global_dim_;
};

class GroupCategory : public FusionData {
public:
    GroupCategory(Group g, Cocycle a, std::string name);

    std::string name() const override { return name_; }
    Cyclotomic tet(const std::array<int, 6> &c, int orientation) const override;
    bool needs_branching() const override { return true; }
    bool phase_only() const override { return true; }
    long tet_exponent(const std::array<int, 6> &c, int orientation) const override;

    const Group &group() const { return g_; }
    const Cocycle &cocycle() const { return a_; }

private:
    Group g_;
    Cocycle a_;
    std::string name_;
};

class UqSl2 : public FusionData {
public:
    UqSl2(int r, int s);

    std::string name() const override;
    Cyclotomic tet(const std::array<int, 6> &c, int orientation) const override;

    int r() const { return r_; }
    int s() const { return s_; }
    const Cyclotomic &A() const { return A_; }
    Cyclotomic qint(int n) const;  // (A^n - A^-n)/(A - A^-1)
    // Kauffman-Lins evaluations
    Cyclotomic theta_net(int a, int b, int c) const;
    Cyclotomic tet_net(int a, int b, int e, int c, int d, int f) const;

private:
    int r_, s_;
    Cyclotomic A_;
    std::vector<Cyclotomic> qfact_;  // [n]! for n < r
    mutable std::once_flag tet_once_;
    mutable std::vector<int> tet_index_;
    mutable std::vector<Cyclotomic> tet_values_;
    void build_tet_table() const;
};

std::shared_ptr<GroupCategory> group_category(const Group &g, const Cocycle &a, const std::string &name = "");
std::shared_ptr<UqSl2> uq_sl2(int r, int s = 1);
// JSON {"mul": [[...]], "cocycle": {"order": m, "exps": [[[...]]]}}; cocycle optional
std::shared_ptr<GroupCategory> load_group_category(const std::string &json_text, const std::string &name);
// "zn:N[,t=T]", "uqsl2:r[,s=S]", "group:<file>"
std::shared_ptr<FusionData> parse_category(const std::string &selector);

struct Graduator {
    Group group;
    std::vector<int> projection;  // label -> group element
};

Graduator compute_graduator(const FusionData &f);

} // namespace tv
