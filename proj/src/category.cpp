#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "tv/category.hpp"
#include "tv/error.hpp"

namespace tv {

// ---------------------------------------------------------------- groups

Group Group::from_table(const std::vector<std::vector<int>> &table)
{
    Group g;
    g.n_ = static_cast<int>(table.size());
    if (g.n_ == 0)
        throw Error(Errc::NotAGroup, "empty multiplication table");
    g.mul_.resize(static_cast<size_t>(g.n_) * g.n_);
    for (int a = 0; a < g.n_; ++a) {
        if (static_cast<int>(table[a].size()) != g.n_)
            throw Error(Errc::NotAGroup, "multiplication table is not square");
        for (int b = 0; b < g.n_; ++b) {
            int c = table[a][b];
            if (c < 0 || c >= g.n_)
                throw Error(Errc::NotAGroup, "product out of range");
            g.mul_[a * g.n_ + b] = c;
        }
    }
    g.e_ = -1;
    for (int e = 0; e < g.n_ && g.e_ < 0; ++e) {
        bool ok = true;
        for (int a = 0; a < g.n_ && ok; ++a)
            ok = g.mul(e, a) == a && g.mul(a, e) == a;
        if (ok)
            g.e_ = e;
    }
    if (g.e_ < 0)
        throw Error(Errc::NotAGroup, "no identity element");
    g.inv_.assign(g.n_, -1);
    for (int a = 0; a < g.n_; ++a) {
        for (int b = 0; b < g.n_; ++b)
            if (g.mul(a, b) == g.e_ && g.mul(b, a) == g.e_)
                g.inv_[a] = b;
        if (g.inv_[a] < 0)
            throw Error(Errc::NotAGroup, "element without inverse");
    }
    for (int a = 0; a < g.n_; ++a)
        for (int b = 0; b < g.n_; ++b)
            for (int c = 0; c < g.n_; ++c)
                if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
                    throw Error(Errc::NotAGroup, "multiplication is not associative");
    return g;
}

Group Group::cyclic(int n)
{
    if (n < 1)
        throw Error(Errc::BadSelector, "cyclic group order must be positive");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            t[a][b] = (a + b) % n;
    return from_table(t);
}

int Group::pow(int a, long k) const
{
    int ord = element_order(a);
    k %= ord;
    if (k < 0)
        k += ord;
    int r = e_;
    for (long i = 0; i < k; ++i)
        r = mul(r, a);
    return r;
}

int Group::element_order(int a) const
{
    int k = 1;
    for (int x = a; x != e_; x = mul(x, a))
        ++k;
    return k;
}

int Group::exponent() const
{
    int e = 1;
    for (int a = 0; a < n_; ++a)
        e = std::lcm(e, element_order(a));
    return e;
}

bool Group::abelian() const
{
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            if (mul(a, b) != mul(b, a))
                return false;
    return true;
}

bool Group::isomorphic_via(const Group &other, const std::vector<int> &phi) const
{
    if (other.order() != n_ || static_cast<int>(phi.size()) != n_)
        return false;
    std::vector<char> hit(n_, 0);
    for (int a = 0; a < n_; ++a) {
        if (phi[a] < 0 || phi[a] >= n_ || hit[phi[a]])
            return false;
        hit[phi[a]] = 1;
    }
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            if (phi[mul(a, b)] != other.mul(phi[a], phi[b]))
                return false;
    return true;
}

std::vector<int> find_isomorphism(const Group &a, const Group &b)
{
    int n = a.order();
    if (b.order() != n)
        return {};
    std::vector<int> phi(n, -1);
    std::vector<char> used(n, 0);
    // backtracking over images, checking products among assigned elements
    std::function<bool(int)> go = [&](int x) -> bool {
        if (x == n)
            return a.isomorphic_via(b, phi);
        for (int y = 0; y < n; ++y) {
            if (used[y] || a.element_order(x) != b.element_order(y))
                continue;
            phi[x] = y;
            used[y] = 1;
            bool ok = true;
            for (int u = 0; u <= x && ok; ++u)
                for (int v = 0; v <= x && ok; ++v) {
                    int w = a.mul(u, v);
                    if (w <= x && phi[w] != b.mul(phi[u], phi[v]))
                        ok = false;
                }
            if (ok && go(x + 1))
                return true;
            used[y] = 0;
            phi[x] = -1;
        }
        return false;
    };
    if (!go(0))
        return {};
    return phi;
}

std::vector<Character> characters(const Group &g)
{
    if (!g.abelian())
        throw Error(Errc::NonAbelian, "characters are only computed for abelian groups");
    const int n = g.order(), e = g.exponent();
    // greedy generating set
    std::vector<int> gens;
    std::vector<char> in_sub(n, 0);
    in_sub[g.identity()] = 1;
    auto close = [&]() {
        bool grew = true;
        while (grew) {
            grew = false;
            for (int x = 0; x < n; ++x)
                if (in_sub[x])
                    for (int s : gens)
                        if (!in_sub[g.mul(x, s)]) {
                            in_sub[g.mul(x, s)] = 1;
                            grew = true;
                        }
        }
    };
    for (int x = 0; x < n; ++x)
        if (!in_sub[x]) {
            gens.push_back(x);
            close();
        }
    std::vector<Character> out;
    std::vector<long> val(gens.size(), 0);
    std::function<void(size_t)> go = [&](size_t i) {
        if (i == gens.size()) {
            Character ch;
            ch.order = e;
            ch.exps.assign(n, -1);
            ch.exps[g.identity()] = 0;
            std::vector<int> queue{g.identity()};
            bool ok = true;
            while (!queue.empty() && ok) {
                int x = queue.back();
                queue.pop_back();
                for (size_t k = 0; k < gens.size() && ok; ++k) {
                    int y = g.mul(x, gens[k]);
                    long v = (ch.exps[x] + val[k]) % e;
                    if (ch.exps[y] < 0) {
                        ch.exps[y] = v;
                        queue.push_back(y);
                    } else if (ch.exps[y] != v) {
                        ok = false;
                    }
                }
            }
            if (ok)
                out.push_back(ch);
            return;
        }
        for (long v = 0; v < e; ++v) {
            val[i] = v;
            go(i + 1);
        }
    };
    go(0);
    std::sort(out.begin(), out.end(), [](const Character &a, const Character &b) { return a.exps < b.exps; });
    if (static_cast<int>(out.size()) != n)
        throw Error(Errc::Internal, "character count differs from group order");
    return out;
}

// --------------------------------------------------------------- cocycles

Cocycle trivial_cocycle(const Group &g)
{
    Cocycle c;
    c.order = 1;
    c.exps.assign(static_cast<size_t>(g.order()) * g.order() * g.order(), 0);
    return c;
}

Cocycle zn_cocycle(int N, long t)
{
    if (N < 1)
        throw Error(Errc::BadSelector, "N must be positive");
    Cocycle c;
    c.order = N * N;
    c.exps.resize(static_cast<size_t>(N) * N * N);
    for (int x = 0; x < N; ++x)
        for (int y = 0; y < N; ++y)
            for (int z = 0; z < N; ++z) {
                long carry = x + y - (x + y) % N;
                long v = (t % c.order) * z % c.order * carry % c.order;
                c.exps[(static_cast<size_t>(x) * N + y) * N + z] = (v + c.order) % c.order;
            }
    return c;
}

bool cocycle_check(const Group &g, const Cocycle &a)
{
    const int n = g.order();
    if (a.exps.size() != static_cast<size_t>(n) * n * n || a.order < 1)
        return false;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int w = 0; w < n; ++w) {
                    long s = a.exp(n, y, z, w) - a.exp(n, g.mul(x, y), z, w) + a.exp(n, x, g.mul(y, z), w) -
                             a.exp(n, x, y, g.mul(z, w)) + a.exp(n, x, y, z);
                    if (((s % a.order) + a.order) % a.order != 0)
                        return false;
                }
    return true;
}

// ------------------------------------------------------------ fusion data

long FusionData::tet_exponent(const std::array<int, 6> &, int) const
{
    throw Error(Errc::Internal, name() + " is not a phase-only category");
}

void FusionData::init_tables(int n)
{
    n_ = n;
    dual_.assign(n, 0);
    dim_.assign(n, Cyclotomic(1));
    adm_.assign(static_cast<size_t>(n) * n * n, 0);
    theta_inv_.assign(static_cast<size_t>(n) * n * n, Cyclotomic(0));
}

void FusionData::finish()
{
    global_dim_ = Cyclotomic(0);
    for (int x = 0; x < n_; ++x) {
        global_dim_ += dim_[x] * dim_[x];
        if (dual_[dual_[x]] != x || dim_[x] != dim_[dual_[x]])
            throw Error(Errc::Internal, "dual is not a dimension-preserving involution");
    }
    if (global_dim_.is_zero())
        throw Error(Errc::Internal, "global dimension vanishes");
    for (int x = 0; x < n_; ++x)
        for (int y = 0; y < n_; ++y)
            for (int z = 0; z < n_; ++z)
                if (admissible(x, y, z) != admissible(y, z, x) ||
                    admissible(x, y, z) != admissible(dual_[z], dual_[y], dual_[x]))
                    throw Error(Errc::Internal, "admissibility lacks the required symmetries");
}

GroupCategory::GroupCategory(Group g, Cocycle a, std::string name)
    : g_(std::move(g)), a_(std::move(a)), name_(std::move(name))
{
    if (!cocycle_check(g_, a_))
        throw Error(Errc::CocycleInvalid, "cochain does not satisfy the 3-cocycle identity");
    const int n = g_.order();
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (a_.exp(n, g_.identity(), x, y) % a_.order || a_.exp(n, x, g_.identity(), y) % a_.order ||
                a_.exp(n, x, y, g_.identity()) % a_.order)
                throw Error(Errc::CocycleInvalid, "cocycle is not normalized");
    if (g_.identity() != 0)
        throw Error(Errc::NotAGroup, "the identity must be element 0");
    init_tables(n);
    order_ = a_.order;
    for (int x = 0; x < n; ++x)
        dual_[x] = g_.inv(x);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            int z = g_.inv(g_.mul(x, y));
            adm_[(x * n + y) * n + z] = 1;
            theta_inv_[(x * n + y) * n + z] = Cyclotomic(1);
        }
    finish();
}

long GroupCategory::tet_exponent(const std::array<int, 6> &c, int orientation) const
{
    long e = a_.exp(g_.order(), c[0], c[3], c[5]);
    return orientation > 0 ? e : (a_.order - e) % a_.order;
}

Cyclotomic GroupCategory::tet(const std::array<int, 6> &c, int orientation) const
{
    return Cyclotomic::root_of_unity(a_.order, tet_exponent(c, orientation));
}

UqSl2::UqSl2(int r, int s) : r_(r), s_(s)
{
    if (r < 3)
        throw Error(Errc::BadRoot, "r must be at least 3");
    // q = A^2 must be a primitive r-th root; for odd r this admits A of order r
    if (s <= 0 || s >= 2 * r || std::gcd(s, r) != 1)
        throw Error(Errc::BadRoot, "need 0 < s < 2r with A^2 a primitive r-th root of unity");
    order_ = 2 * r;
    A_ = Cyclotomic::root_of_unity(2 * r, s);
    qfact_.assign(r, Cyclotomic(1));
    for (int n = 1; n < r; ++n)
        qfact_[n] = qfact_[n - 1] * qint(n);
    const int L = r - 1;
    init_tables(L);
    for (int i = 0; i < L; ++i) {
        dual_[i] = i;
        dim_[i] = (i % 2 ? Cyclotomic(-1) : Cyclotomic(1)) * qint(i + 1);
    }
    for (int a = 0; a < L; ++a)
        for (int b = 0; b < L; ++b)
            for (int c = 0; c < L; ++c) {
                bool ok = (a + b + c) % 2 == 0 && a <= b + c && b <= a + c && c <= a + b && a + b + c <= 2 * (r - 2);
                if (!ok)
                    continue;
                adm_[(a * L + b) * L + c] = 1;
                theta_inv_[(a * L + b) * L + c] = theta_net(a, b, c).inverse();
            }
    finish();
}

std::string UqSl2::name() const
{
    return "uqsl2:" + std::to_string(r_) + (s_ == 1 ? "" : ",s=" + std::to_string(s_));
}

Cyclotomic UqSl2::qint(int n) const
{
    Cyclotomic num = A_.pow(n) - A_.pow(-n);
    Cyclotomic den = A_ - A_.pow(-1);
    return num / den;
}

Cyclotomic UqSl2::theta_net(int a, int b, int c) const
{
    int m = (a + b - c) / 2, n = (b + c - a) / 2, p = (a + c - b) / 2;
    Cyclotomic v = qfact_[m + n + p + 1] * qfact_[m] * qfact_[n] * qfact_[p] /
                   (qfact_[m + n] * qfact_[n + p] * qfact_[m + p]);
    return (m + n + p) % 2 ? -v : v;
}

Cyclotomic UqSl2::tet_net(int a, int b, int e, int c, int d, int f) const
{
    const std::array<int, 4> ai{(a + d + e) / 2, (b + c + e) / 2, (a + b + f) / 2, (c + d + f) / 2};
    const std::array<int, 3> bj{(b + d + e + f) / 2, (a + c + e + f) / 2, (a + b + c + d) / 2};
    Cyclotomic I(1), E(1);
    for (int i : ai)
        for (int j : bj)
            I *= qfact_[j - i];
    for (int x : {a, b, c, d, e, f})
        E *= qfact_[x];
    int lo = *std::max_element(ai.begin(), ai.end());
    int hi = *std::min_element(bj.begin(), bj.end());
    Cyclotomic sum(0);
    for (int s = lo; s <= hi && s + 1 < r_; ++s) {
        Cyclotomic den(1);
        for (int i : ai)
            den *= qfact_[s - i];
        for (int j : bj)
            den *= qfact_[j - s];
        Cyclotomic term = qfact_[s + 1] / den;
        sum += s % 2 ? -term : term;
    }
    return I / E * sum;
}

void UqSl2::build_tet_table() const
{
    const int L = n_;
    size_t total = 1;
    for (int k = 0; k < 6; ++k)
        total *= L;
    tet_index_.assign(total, -1);
    for (size_t idx = 0; idx < total; ++idx) {
        std::array<int, 6> c;
        size_t x = idx;
        for (int k = 5; k >= 0; --k) {
            c[k] = static_cast<int>(x % L);
            x /= L;
        }
        // c = (01, 02, 03, 12, 13, 23)
        if (!admissible(c[0], c[3], c[1]) || !admissible(c[3], c[5], c[4]) || !admissible(c[0], c[4], c[2]) ||
            !admissible(c[1], c[5], c[2]))
            continue;
        tet_index_[idx] = static_cast<int>(tet_values_.size());
        tet_values_.push_back(tet_net(c[0], c[4], c[3], c[5], c[1], c[2]));
    }
}

Cyclotomic UqSl2::tet(const std::array<int, 6> &c, int orientation) const
{
    std::call_once(tet_once_, [this] { build_tet_table(); });
    size_t idx = 0;
    for (int k = 0; k < 6; ++k)
        idx = idx * n_ + c[k];
    int at = tet_index_[idx];
    if (at < 0)
        return Cyclotomic(0);
    return orientation > 0 ? tet_values_[at] : tet_values_[at].conj();
}

// -------------------------------------------------------------- factories

std::shared_ptr<GroupCategory> group_category(const Group &g, const Cocycle &a, const std::string &name)
{
    return std::make_shared<GroupCategory>(g, a, name.empty() ? "group:" + std::to_string(g.order()) : name);
}

std::shared_ptr<UqSl2> uq_sl2(int r, int s)
{
    return std::make_shared<UqSl2>(r, s);
}

std::shared_ptr<GroupCategory> load_group_category(const std::string &json_text, const std::string &name)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(1, static_cast<int>(e.byte), e.what());
    }
    try {
        Group g = Group::from_table(j.at("mul").get<std::vector<std::vector<int>>>());
        Cocycle c = trivial_cocycle(g);
        if (j.contains("cocycle")) {
            const auto &cj = j.at("cocycle");
            c.order = cj.at("order").get<int>();
            auto t = cj.at("exps").get<std::vector<std::vector<std::vector<long>>>>();
            const int n = g.order();
            if (static_cast<int>(t.size()) != n)
                throw Error(Errc::CocycleInvalid, "cocycle table has the wrong size");
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    for (int z = 0; z < n; ++z)
                        c.exps[(static_cast<size_t>(x) * n + y) * n + z] = t.at(x).at(y).at(z);
        }
        return group_category(g, c, name);
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(1, 1, e.what());
    }
}

namespace {

// "12" or "12,t=3" style; returns the leading integer and fills the option
int parse_selector_args(const std::string &body, const std::string &opt, long &value)
{
    std::string head = body, tail;
    auto comma = body.find(',');
    if (comma != std::string::npos) {
        head = body.substr(0, comma);
        tail = body.substr(comma + 1);
    }
    auto to_long = [](const std::string &s) {
        size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(s, &pos);
        } catch (const std::exception &) {
            pos = 0;
        }
        if (s.empty() || pos != s.size())
            throw Error(Errc::BadSelector, "expected an integer, got '" + s + "'");
        return v;
    };
    if (!tail.empty()) {
        if (tail.rfind(opt + "=", 0) != 0)
            throw Error(Errc::BadSelector, "unknown option '" + tail + "'");
        value = to_long(tail.substr(opt.size() + 1));
    }
    return static_cast<int>(to_long(head));
}

} // namespace

std::shared_ptr<FusionData> parse_category(const std::string &selector)
{
    if (selector.rfind("zn:", 0) == 0) {
        long t = 1;
        int N = parse_selector_args(selector.substr(3), "t", t);
        if (N < 1)
            throw Error(Errc::BadSelector, "N must be positive");
        return group_category(Group::cyclic(N), zn_cocycle(N, t), selector);
    }
    if (selector.rfind("uqsl2:", 0) == 0) {
        long s = 1;
        int r = parse_selector_args(selector.substr(6), "s", s);
        return uq_sl2(r, static_cast<int>(s));
    }
    if (selector.rfind("group:", 0) == 0) {
        std::string path = selector.substr(6);
        std::ifstream in(path);
        if (!in)
            throw Error(Errc::BadSelector, "cannot read " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return load_group_category(ss.str(), selector);
    }
    throw Error(Errc::BadSelector, "unknown category selector '" + selector + "'");
}

// ------------------------------------------------------------- graduator

Graduator compute_graduator(const FusionData &f)
{
    const int n = f.label_count();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    };
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            int first = -1;
            for (int z = 0; z < n; ++z)
                if (f.admissible(x, y, f.dual(z))) {
                    if (first < 0)
                        first = z;
                    else
                        unite(first, z);
                }
        }
    std::vector<int> cls(n, -1);
    int k = 0;
    std::vector<int> rep;
    for (int x = 0; x < n; ++x) {
        int r = find(x);
        if (cls[r] < 0) {
            cls[r] = k++;
            rep.push_back(x);
        }
        cls[x] = cls[r];
    }
    std::vector<std::vector<int>> table(k, std::vector<int>(k, -1));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                if (f.admissible(x, y, f.dual(z))) {
                    int &slot = table[cls[x]][cls[y]];
                    if (slot >= 0 && slot != cls[z])
                        throw Error(Errc::NotAGroup, "fusion does not descend to the label classes");
                    slot = cls[z];
                }
    for (auto &row : table)
        for (int v : row)
            if (v < 0)
                throw Error(Errc::NotAGroup, "missing product in the graduator");
    Graduator g{Group::from_table(table), cls};
    if (g.group.identity() != cls[f.unit()])
        throw Error(Errc::NotAGroup, "unit label does not map to the identity");
    return g;
}

} // namespace tv
