#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <thread>

#include "tv/error.hpp"
#include "tv/statesum.hpp"

namespace tv {

int resolve_workers(int requested)
{
    if (requested > 0)
        return requested;
    if (const char *env = std::getenv("STATESUM_WORKERS")) {
        int v = std::atoi(env);
        if (v > 0)
            return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

namespace {

struct TetInfo {
    std::array<EdgeRef, 6> pairs;  // (01, 02, 03, 12, 13, 23) in branch order
    int eps = 1;
};

// Static data for one enumeration: assignment order and the faces and
// tetrahedra completed at each depth.
struct Plan {
    std::vector<int> order;
    std::vector<std::vector<int>> faces_at, tets_at;
    std::vector<int> faces_pre, tets_pre;  // completed by pinned edges alone
};

std::vector<int> distinct(std::vector<int> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

Plan make_plan(const Triangulation &t, const std::vector<int> &pinned, bool with_tets)
{
    const int E = t.edge_count();
    std::vector<std::vector<int>> face_sets, tet_sets;
    for (const TriangleClass &tc : t.triangles())
        face_sets.push_back(distinct({tc.edges[0].cls, tc.edges[1].cls, tc.edges[2].cls}));
    if (with_tets)
        for (int s = 0; s < t.simplex_count(); ++s) {
            std::vector<int> v;
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j)
                    v.push_back(t.edge_of(s, i, j).cls);
            tet_sets.push_back(distinct(v));
        }
    std::vector<char> assigned(E, 0);
    for (int e = 0; e < E; ++e)
        assigned[e] = !pinned.empty() && pinned[e] >= 0;
    auto missing = [&](const std::vector<int> &set) {
        int m = 0;
        for (int e : set)
            m += !assigned[e];
        return m;
    };
    std::vector<std::vector<int>> edge_faces(E), edge_tets(E);
    for (size_t f = 0; f < face_sets.size(); ++f)
        for (int e : face_sets[f])
            edge_faces[e].push_back(static_cast<int>(f));
    for (size_t s = 0; s < tet_sets.size(); ++s)
        for (int e : tet_sets[s])
            edge_tets[e].push_back(static_cast<int>(s));

    Plan p;
    for (size_t f = 0; f < face_sets.size(); ++f)
        if (missing(face_sets[f]) == 0)
            p.faces_pre.push_back(static_cast<int>(f));
    for (size_t s = 0; s < tet_sets.size(); ++s)
        if (missing(tet_sets[s]) == 0)
            p.tets_pre.push_back(static_cast<int>(s));
    // greedy most-constrained-first: complete as many triangles as possible
    while (true) {
        int best = -1;
        std::array<int, 3> best_score{};
        for (int e = 0; e < E; ++e) {
            if (assigned[e])
                continue;
            int completes = 0, touched = 0;
            for (int f : edge_faces[e]) {
                int m = missing(face_sets[f]);
                completes += m == 1;
                touched += m < static_cast<int>(face_sets[f].size());
            }
            std::array<int, 3> score{completes, touched, -e};
            if (best < 0 || score > best_score) {
                best = e;
                best_score = score;
            }
        }
        if (best < 0)
            break;
        assigned[best] = 1;
        p.order.push_back(best);
        std::vector<int> fa, ta;
        for (int f : edge_faces[best])
            if (missing(face_sets[f]) == 0)
                fa.push_back(f);
        for (int s : edge_tets[best])
            if (missing(tet_sets[s]) == 0)
                ta.push_back(s);
        p.faces_at.push_back(fa);
        p.tets_at.push_back(ta);
    }
    return p;
}

std::vector<TetInfo> tet_infos(const Triangulation &t, bool need_branching, int orientation)
{
    std::vector<TetInfo> out;
    if (t.dim() != 3)
        return out;
    Branching b;
    if (need_branching)
        b = find_branching(t);
    for (int s = 0; s < t.simplex_count(); ++s) {
        std::array<int, 4> ord{0, 1, 2, 3};
        if (need_branching)
            ord = b.order[s];
        TetInfo ti;
        int k = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                ti.pairs[k++] = t.edge_of(s, ord[i], ord[j]);
        ti.eps = t.orientation(s) * perm_sign(std::vector<int>(ord.begin(), ord.end())) * orientation;
        out.push_back(ti);
    }
    return out;
}

inline int read_label(const std::vector<int> &c, const EdgeRef &e, const std::vector<int> &dual)
{
    return e.sign > 0 ? c[e.cls] : dual[c[e.cls]];
}

// Plain enumeration over an arbitrary label system.
template <class Adm>
void enumerate_plain(const Triangulation &t, int labels, const std::vector<int> &dual, const std::vector<int> &pinned,
                     Adm adm, const std::function<void(const std::vector<int> &)> &visit)
{
    const int E = t.edge_count();
    Plan p = make_plan(t, pinned, false);
    std::vector<int> c(E, -1);
    for (int e = 0; e < E && !pinned.empty(); ++e)
        c[e] = pinned[e];
    auto face_ok = [&](int f) {
        const TriangleClass &tc = t.triangle(f);
        return adm(read_label(c, tc.edges[0], dual), read_label(c, tc.edges[1], dual),
                   read_label(c, tc.edges[2], dual));
    };
    for (int f : p.faces_pre)
        if (!face_ok(f))
            return;
    std::function<void(size_t)> go = [&](size_t d) {
        if (d == p.order.size()) {
            visit(c);
            return;
        }
        int e = p.order[d];
        for (int l = 0; l < labels; ++l) {
            c[e] = l;
            bool ok = true;
            for (int f : p.faces_at[d])
                if (!face_ok(f)) {
                    ok = false;
                    break;
                }
            if (ok)
                go(d + 1);
        }
        c[e] = -1;
    };
    go(0);
}

} // namespace

std::vector<Coloring> enumerate_colorings(const Triangulation &t, const FusionData &f, const std::vector<int> &pinned)
{
    std::vector<int> dual(f.label_count());
    for (int x = 0; x < f.label_count(); ++x)
        dual[x] = f.dual(x);
    std::vector<Coloring> out;
    enumerate_plain(
        t, f.label_count(), dual, pinned, [&](int x, int y, int z) { return f.admissible(x, y, z); },
        [&](const std::vector<int> &c) { out.push_back(c); });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<GammaColoring> enumerate_gamma_colorings(const Triangulation &t, const Group &g,
                                                     const std::vector<int> &pinned)
{
    std::vector<int> dual(g.order());
    for (int x = 0; x < g.order(); ++x)
        dual[x] = g.inv(x);
    std::vector<GammaColoring> out;
    enumerate_plain(
        t, g.order(), dual, pinned, [&](int x, int y, int z) { return g.mul(g.mul(x, y), z) == g.identity(); },
        [&](const std::vector<int> &c) { out.push_back(c); });
    std::sort(out.begin(), out.end());
    return out;
}

GammaColoring project(const Coloring &c, const Graduator &g)
{
    GammaColoring out(c.size());
    for (size_t e = 0; e < c.size(); ++e)
        out[e] = g.projection[c[e]];
    return out;
}

bool is_gamma_coloring(const Triangulation &t, const Group &g, const GammaColoring &c)
{
    for (const TriangleClass &tc : t.triangles()) {
        int prod = g.identity();
        for (const EdgeRef &e : tc.edges)
            prod = g.mul(prod, e.sign > 0 ? c[e.cls] : g.inv(c[e.cls]));
        if (prod != g.identity())
            return false;
    }
    return true;
}

// ------------------------------------------------------------ canonical form

Canonicalizer::Canonicalizer(const Triangulation &t, const Group &g, bool boundary_fixed,
                             const std::vector<int> &tag_edges)
    : t_(&t), g_(g), boundary_fixed_(boundary_fixed)
{
    const int V = t.vertex_count(), E = t.edge_count();
    std::vector<int> parent(V);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int e = 0; e < E; ++e) {
        int a = find(t.edge_tail(e)), b = find(t.edge_head(e));
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    }
    component_.assign(V, -1);
    std::vector<int> comp_id(V, -1);
    int ncomp = 0;
    for (int v = 0; v < V; ++v) {
        int r = find(v);
        if (comp_id[r] < 0)
            comp_id[r] = ncomp++;
        component_[v] = comp_id[r];
    }
    component_edges_.assign(ncomp, {});
    for (int e = 0; e < E; ++e)
        component_edges_[component_[t.edge_tail(e)]].push_back(e);

    std::vector<char> roots(V, 0);
    if (boundary_fixed) {
        for (int v = 0; v < V; ++v)
            roots[v] = t.vertex_on_boundary(v);
    } else {
        std::vector<char> seen(ncomp, 0);
        for (int v = 0; v < V; ++v)
            if (!seen[component_[v]]) {
                seen[component_[v]] = 1;
                roots[v] = 1;
            }
    }
    tree_ = spanning_forest(t, roots);

    // generators: edges not determined by the tree and triangle relations
    std::vector<char> known(E, 0);
    for (int e : tree_.edges)
        known[e] = 1;
    if (boundary_fixed)
        for (int e = 0; e < E; ++e)
            if (t.edge_on_boundary(e))
                known[e] = 1;
    auto propagate = [&]() {
        bool grew = true;
        while (grew) {
            grew = false;
            for (const TriangleClass &tc : t.triangles()) {
                int unknown = -1, count = 0;
                bool several = false;
                for (const EdgeRef &r : tc.edges)
                    if (!known[r.cls]) {
                        if (unknown >= 0 && unknown != r.cls)
                            several = true;
                        unknown = r.cls;
                        ++count;
                    }
                if (unknown >= 0 && !several && count == 1) {
                    known[unknown] = 1;
                    grew = true;
                }
            }
        }
    };
    propagate();
    std::vector<int> preference = tag_edges;
    for (int e = 0; e < E; ++e)
        preference.push_back(e);
    for (int e : preference) {
        if (e < 0 || e >= E || known[e])
            continue;
        generators_.push_back(e);
        known[e] = 1;
        propagate();
    }
}

GammaColoring Canonicalizer::apply_gauge(const GammaColoring &c, const std::vector<int> &delta) const
{
    GammaColoring out(c.size());
    for (size_t e = 0; e < c.size(); ++e) {
        int tail = t_->edge_tail(static_cast<int>(e)), head = t_->edge_head(static_cast<int>(e));
        out[e] = g_.mul(g_.mul(delta[tail], c[e]), g_.inv(delta[head]));
    }
    return out;
}

HomotopyClass Canonicalizer::canonical(const GammaColoring &c) const
{
    const int V = t_->vertex_count();
    std::vector<int> delta(V, g_.identity());
    for (int v : tree_.order) {
        int pe = tree_.parent_edge[v];
        if (pe < 0)
            continue;
        int p = tree_.parent_vertex[v];
        delta[v] = t_->edge_tail(pe) == p ? g_.mul(delta[p], c[pe]) : g_.mul(delta[p], g_.inv(c[pe]));
    }
    GammaColoring rep = apply_gauge(c, delta);
    if (!boundary_fixed_) {
        for (const auto &edges : component_edges_) {
            std::vector<int> best;
            int best_h = g_.identity();
            for (int h = 0; h < g_.order(); ++h) {
                std::vector<int> cand;
                for (int e : edges)
                    cand.push_back(g_.mul(g_.mul(h, rep[e]), g_.inv(h)));
                if (best.empty() || cand < best) {
                    best = cand;
                    best_h = h;
                }
            }
            for (int e : edges)
                rep[e] = g_.mul(g_.mul(best_h, rep[e]), g_.inv(best_h));
        }
    }
    HomotopyClass out;
    out.rep = rep;
    for (int e : generators_)
        out.tag.push_back(rep[e]);
    return out;
}

HomotopyClass canonical_class(const GammaColoring &c, const Triangulation &t, const Group &g, bool boundary_fixed)
{
    return Canonicalizer(t, g, boundary_fixed).canonical(c);
}

std::vector<HomotopyClass> homotopy_classes(const Triangulation &t, const Group &g,
                                            const std::vector<int> &boundary_pins,
                                            const std::vector<int> &tag_edges)
{
    Canonicalizer canon(t, g, !boundary_pins.empty(), tag_edges);
    std::set<HomotopyClass> seen;
    for (const GammaColoring &c : enumerate_gamma_colorings(t, g, boundary_pins))
        seen.insert(canon.canonical(c));
    std::vector<HomotopyClass> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(), [](const HomotopyClass &a, const HomotopyClass &b) {
        return std::tie(a.tag, a.rep) < std::tie(b.tag, b.rep);
    });
    return out;
}

// -------------------------------------------------------------- state sums

namespace {

struct Accumulator {
    bool phase = false;
    int order = 1;
    std::map<std::vector<int>, Cyclotomic> exact;
    std::map<std::vector<int>, std::vector<long>> hist;

    void merge(Accumulator &&o)
    {
        for (auto &[k, v] : o.exact) {
            auto it = exact.find(k);
            if (it == exact.end())
                exact.emplace(k, std::move(v));
            else
                it->second += v;
        }
        for (auto &[k, v] : o.hist) {
            auto &h = hist[k];
            if (h.empty())
                h.assign(order, 0);
            for (int i = 0; i < order; ++i)
                h[i] += v[i];
        }
    }
};

class Engine {
public:
    Engine(const Triangulation &t, const FusionData &f, const Graduator *grad, const WeightedSum &w,
           const SumOptions &opt)
        : t_(t), f_(f), grad_(grad), w_(w)
    {
        if (w.with_gamma && !grad)
            throw Error(Errc::Internal, "graduator required for class grouping");
        tets_ = tet_infos(t, f.needs_branching(), opt.orientation);
        plan_ = make_plan(t, w.pinned, true);
        dual_.resize(f.label_count());
        for (int x = 0; x < f.label_count(); ++x)
            dual_[x] = f.dual(x);
        phase_ = f.phase_only();
        workers_ = resolve_workers(opt.workers);
    }

    Accumulator run()
    {
        const int E = t_.edge_count();
        std::vector<int> c(E, -1);
        for (int e = 0; e < E && !w_.pinned.empty(); ++e)
            c[e] = w_.pinned[e];
        Accumulator total = fresh();
        // pinned-only faces and tetrahedra
        Cyclotomic w0(1);
        long x0 = 0;
        for (int e = 0; e < E; ++e)
            if (c[e] >= 0 && !phase_ && w_.edge_dim[e])
                w0 *= f_.dim(c[e]);
        for (int fc : plan_.faces_pre) {
            if (!face_ok(c, fc))
                return total;
            if (!phase_ && w_.face_theta[fc])
                w0 *= theta_inv(c, fc);
        }
        for (int s : plan_.tets_pre) {
            if (phase_)
                x0 += tet_exp(c, s);
            else
                w0 *= tet(c, s);
        }
        if (!phase_ && w0.is_zero())
            return total;
        if (plan_.order.empty()) {
            leaf(total, c, w0, x0);
            return total;
        }
        const int L = f_.label_count();
        int nw = std::max(1, std::min(workers_, L));
        if (nw == 1) {
            Search s{this, c, {}, {}};
            s.descend(0, w0, x0, total, -1, 1);
            return total;
        }
        std::vector<Accumulator> parts(nw);
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> errors(nw);
        for (int k = 0; k < nw; ++k) {
            parts[k] = fresh();
            threads.emplace_back([&, k] {
                try {
                    Search s{this, c, {}, {}};
                    s.descend(0, w0, x0, parts[k], k, nw);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            });
        }
        for (auto &th : threads)
            th.join();
        for (auto &e : errors)
            if (e)
                std::rethrow_exception(e);
        for (auto &p : parts)
            total.merge(std::move(p));
        return total;
    }

private:
    struct Search {
        Engine *eng;
        std::vector<int> c;
        std::vector<int> key;
        std::array<int, 6> tmp;

        // labels at depth 0 are split among workers: label % stride == part
        void descend(size_t d, const Cyclotomic &w, long x, Accumulator &acc, int part, int stride)
        {
            Engine &E = *eng;
            if (d == E.plan_.order.size()) {
                E.leaf(acc, c, w, x);
                return;
            }
            int e = E.plan_.order[d];
            for (int l = 0; l < E.f_.label_count(); ++l) {
                if (d == 0 && part >= 0 && l % stride != part)
                    continue;
                c[e] = l;
                bool ok = true;
                for (int fc : E.plan_.faces_at[d])
                    if (!E.face_ok(c, fc)) {
                        ok = false;
                        break;
                    }
                if (!ok)
                    continue;
                if (E.phase_) {
                    long nx = x;
                    for (int s : E.plan_.tets_at[d])
                        nx += E.tet_exp(c, s);
                    descend(d + 1, w, nx % E.f_.field_order(), acc, part, stride);
                } else {
                    Cyclotomic nw = w;
                    if (E.w_.edge_dim[e])
                        nw *= E.f_.dim(l);
                    for (int fc : E.plan_.faces_at[d])
                        if (E.w_.face_theta[fc])
                            nw *= E.theta_inv(c, fc);
                    for (int s : E.plan_.tets_at[d])
                        nw *= E.tet(c, s);
                    if (nw.is_zero())
                        continue;
                    descend(d + 1, nw, x, acc, part, stride);
                }
            }
            c[e] = -1;
        }
    };

    Accumulator fresh() const
    {
        Accumulator a;
        a.phase = phase_;
        a.order = f_.field_order();
        return a;
    }

    bool face_ok(const std::vector<int> &c, int fc) const
    {
        const TriangleClass &tc = t_.triangle(fc);
        return f_.admissible(read_label(c, tc.edges[0], dual_), read_label(c, tc.edges[1], dual_),
                             read_label(c, tc.edges[2], dual_));
    }

    const Cyclotomic &theta_inv(const std::vector<int> &c, int fc) const
    {
        const TriangleClass &tc = t_.triangle(fc);
        return f_.theta_inv(read_label(c, tc.edges[0], dual_), read_label(c, tc.edges[1], dual_),
                            read_label(c, tc.edges[2], dual_));
    }

    std::array<int, 6> tet_colors(const std::vector<int> &c, int s) const
    {
        std::array<int, 6> out;
        for (int k = 0; k < 6; ++k)
            out[k] = read_label(c, tets_[s].pairs[k], dual_);
        return out;
    }

    Cyclotomic tet(const std::vector<int> &c, int s) const { return f_.tet(tet_colors(c, s), tets_[s].eps); }
    long tet_exp(const std::vector<int> &c, int s) const { return f_.tet_exponent(tet_colors(c, s), tets_[s].eps); }

    void leaf(Accumulator &acc, const std::vector<int> &c, const Cyclotomic &w, long x) const
    {
        std::vector<int> key;
        key.reserve(w_.key_edges.size() + (w_.with_gamma ? c.size() : 0));
        for (int e : w_.key_edges)
            key.push_back(c[e]);
        if (w_.with_gamma)
            for (int l : c)
                key.push_back(grad_->projection[l]);
        if (phase_) {
            auto &h = acc.hist[key];
            if (h.empty())
                h.assign(acc.order, 0);
            h[((x % acc.order) + acc.order) % acc.order] += 1;
        } else {
            auto it = acc.exact.find(key);
            if (it == acc.exact.end())
                acc.exact.emplace(std::move(key), w);
            else
                it->second += w;
        }
    }

    const Triangulation &t_;
    const FusionData &f_;
    const Graduator *grad_;
    const WeightedSum &w_;
    std::vector<TetInfo> tets_;
    Plan plan_;
    std::vector<int> dual_;
    bool phase_ = false;
    int workers_ = 1;
};

std::vector<int> vertex_count_key(const Triangulation &t)
{
    return {t.vertex_count()};
}

WeightedSum closed_weights(const Triangulation &t)
{
    WeightedSum w;
    w.edge_dim.assign(t.edge_count(), 1);
    w.face_theta.assign(t.triangle_count(), 1);
    w.delta_power = -t.vertex_count();
    return w;
}

} // namespace

std::vector<KeyedValue> weighted_sum(const Triangulation &t, const FusionData &f, const Graduator *grad,
                                     const WeightedSum &w, const SumOptions &opt)
{
    WeightedSum ww = w;
    if (ww.edge_dim.empty())
        ww.edge_dim.assign(t.edge_count(), 1);
    if (ww.face_theta.empty())
        ww.face_theta.assign(t.triangle_count(), 1);
    Engine eng(t, f, grad, ww, opt);
    Accumulator acc = eng.run();
    Cyclotomic norm = f.global_dim().pow(ww.delta_power);
    const size_t nk = ww.key_edges.size();
    std::vector<KeyedValue> out;
    auto push = [&](const std::vector<int> &key, Cyclotomic v) {
        KeyedValue kv;
        kv.key_labels.assign(key.begin(), key.begin() + nk);
        kv.gamma.assign(key.begin() + nk, key.end());
        kv.value = v * norm;
        out.push_back(std::move(kv));
    };
    if (acc.phase) {
        for (auto &[key, h] : acc.hist) {
            std::vector<Rational> poly(h.size());
            for (size_t i = 0; i < h.size(); ++i)
                poly[i] = h[i];
            push(key, Cyclotomic::from_poly(acc.order, poly));
        }
    } else {
        for (auto &[key, v] : acc.exact)
            push(key, v);
    }
    (void)vertex_count_key;
    return out;
}

Cyclotomic turaev_viro(const Triangulation &t, const FusionData &f, const SumOptions &opt)
{
    Cyclotomic total(0);
    for (const KeyedValue &kv : weighted_sum(t, f, nullptr, closed_weights(t), opt))
        total += kv.value;
    return total;
}

namespace {

std::vector<ClassValue> group_by_class(const Triangulation &t, const Graduator &grad,
                                       const std::vector<KeyedValue> &parts, const std::vector<int> &pins,
                                       const SumOptions &opt)
{
    Canonicalizer canon(t, grad.group, !pins.empty(), opt.tag_edges);
    std::map<HomotopyClass, Cyclotomic> by;
    for (const HomotopyClass &h : homotopy_classes(t, grad.group, pins, opt.tag_edges))
        by.emplace(h, Cyclotomic(0));
    for (const KeyedValue &kv : parts) {
        HomotopyClass h = canon.canonical(kv.gamma);
        auto it = by.find(h);
        if (it == by.end())
            throw Error(Errc::Internal, "colouring projects outside the enumerated classes");
        it->second += kv.value;
    }
    std::vector<ClassValue> out;
    for (auto &[h, v] : by)
        out.push_back({h, v});
    std::sort(out.begin(), out.end(), [](const ClassValue &a, const ClassValue &b) {
        return std::tie(a.cls.tag, a.cls.rep) < std::tie(b.cls.tag, b.cls.rep);
    });
    return out;
}

struct RelativeSetup {
    WeightedSum w;
    std::vector<int> gamma_pins;
};

RelativeSetup relative_setup(const Triangulation &t, const FusionData &f, const Graduator *grad, const Coloring &c0)
{
    BoundarySurface bs = boundary_surface(t);
    const Surface2 &s = bs.surface;
    if (static_cast<int>(c0.size()) != s.edge_count())
        throw Error(Errc::InadmissibleBoundary, "boundary colouring has the wrong number of edges");
    for (int l : c0)
        if (l < 0 || l >= f.label_count())
            throw Error(Errc::InadmissibleBoundary, "boundary label out of range");
    for (const TriangleClass &tc : s.triangles()) {
        int l[3];
        for (int k = 0; k < 3; ++k)
            l[k] = tc.edges[k].sign > 0 ? c0[tc.edges[k].cls] : f.dual(c0[tc.edges[k].cls]);
        if (!f.admissible(l[0], l[1], l[2]))
            throw Error(Errc::InadmissibleBoundary, "boundary colouring is not admissible");
    }
    RelativeSetup r;
    r.w.pinned.assign(t.edge_count(), -1);
    for (int e = 0; e < s.edge_count(); ++e) {
        const EdgeRef &m = bs.edge_map[e];
        int l = m.sign > 0 ? c0[e] : f.dual(c0[e]);
        if (r.w.pinned[m.cls] >= 0 && r.w.pinned[m.cls] != l)
            throw Error(Errc::InadmissibleBoundary, "boundary colouring disagrees on an identified edge");
        r.w.pinned[m.cls] = l;
    }
    r.w.edge_dim.assign(t.edge_count(), 1);
    for (int e = 0; e < t.edge_count(); ++e)
        if (t.edge_on_boundary(e))
            r.w.edge_dim[e] = 0;
    r.w.face_theta.assign(t.triangle_count(), 1);
    for (int fc = 0; fc < t.triangle_count(); ++fc)
        if (t.triangle(fc).boundary)
            r.w.face_theta[fc] = 0;
    r.w.delta_power = -t.vertex_count() + s.vertex_count();
    if (grad) {
        r.gamma_pins.assign(t.edge_count(), -1);
        for (int e = 0; e < t.edge_count(); ++e)
            if (r.w.pinned[e] >= 0)
                r.gamma_pins[e] = grad->projection[r.w.pinned[e]];
    }
    return r;
}

} // namespace

std::vector<ClassValue> htv(const Triangulation &t, const FusionData &f, const SumOptions &opt)
{
    Graduator grad = compute_graduator(f);
    WeightedSum w = closed_weights(t);
    w.with_gamma = true;
    return group_by_class(t, grad, weighted_sum(t, f, &grad, w, opt), {}, opt);
}

Cyclotomic tv_rel(const Triangulation &t, const FusionData &f, const Coloring &c0, const SumOptions &opt)
{
    RelativeSetup r = relative_setup(t, f, nullptr, c0);
    Cyclotomic total(0);
    for (const KeyedValue &kv : weighted_sum(t, f, nullptr, r.w, opt))
        total += kv.value;
    return total;
}

std::vector<ClassValue> htv_rel(const Triangulation &t, const FusionData &f, const Coloring &c0,
                                const SumOptions &opt)
{
    Graduator grad = compute_graduator(f);
    RelativeSetup r = relative_setup(t, f, &grad, c0);
    r.w.with_gamma = true;
    return group_by_class(t, grad, weighted_sum(t, f, &grad, r.w, opt), r.gamma_pins, opt);
}

// ------------------------------------------------------------------ Yetter

bool is_cycle(const Triangulation &t, const Group &g, const EdgeCharacterChain &alpha)
{
    std::vector<Character> chars = characters(g);
    if (static_cast<int>(alpha.size()) != t.edge_count())
        return false;
    const int ex = g.exponent();
    std::vector<std::vector<long>> div(t.vertex_count(), std::vector<long>(g.order(), 0));
    for (int e = 0; e < t.edge_count(); ++e) {
        if (alpha[e] < 0 || alpha[e] >= static_cast<int>(chars.size()))
            return false;
        const Character &ch = chars[alpha[e]];
        for (int x = 0; x < g.order(); ++x) {
            div[t.edge_tail(e)][x] += ch.exps[x];
            div[t.edge_head(e)][x] -= ch.exps[x];
        }
    }
    for (const auto &row : div)
        for (long v : row)
            if (((v % ex) + ex) % ex != 0)
                return false;
    return true;
}

EdgeCharacterChain add_boundary(const Triangulation &t, const Group &g, const EdgeCharacterChain &alpha,
                                const std::vector<int> &beta)
{
    std::vector<Character> chars = characters(g);
    const int ex = g.exponent();
    std::vector<std::vector<long>> acc(t.edge_count());
    for (int e = 0; e < t.edge_count(); ++e)
        acc[e] = chars[alpha[e]].exps;
    for (int fc = 0; fc < t.triangle_count(); ++fc) {
        const Character &b = chars[beta[fc]];
        for (const EdgeRef &r : t.triangle(fc).edges)
            for (int x = 0; x < g.order(); ++x)
                acc[r.cls][x] += r.sign * b.exps[x];
    }
    EdgeCharacterChain out(t.edge_count(), -1);
    for (int e = 0; e < t.edge_count(); ++e) {
        for (long &v : acc[e])
            v = ((v % ex) + ex) % ex;
        for (size_t k = 0; k < chars.size(); ++k)
            if (chars[k].exps == acc[e])
                out[e] = static_cast<int>(k);
        if (out[e] < 0)
            throw Error(Errc::Internal, "character sum not found");
    }
    return out;
}

Cyclotomic pairing(const Group &g, const EdgeCharacterChain &alpha, const GammaColoring &c)
{
    std::vector<Character> chars = characters(g);
    const int ex = g.exponent();
    long total = 0;
    for (size_t e = 0; e < c.size(); ++e)
        total += chars[alpha[e]].exps[c[e]];
    return Cyclotomic::root_of_unity(ex, total % ex);
}

YetterResult yetter(const Triangulation &t, const FusionData &f, const EdgeCharacterChain &alpha,
                    const SumOptions &opt)
{
    Graduator grad = compute_graduator(f);
    if (!is_cycle(t, grad.group, alpha))
        throw Error(Errc::NotACycle, "character chain is not a cycle");
    WeightedSum w = closed_weights(t);
    w.with_gamma = true;
    std::vector<KeyedValue> parts = weighted_sum(t, f, &grad, w, opt);
    YetterResult r{Cyclotomic(0), Cyclotomic(0)};
    // per graduator colouring the edge weights are constant, so the direct
    // sum is taken over these partial sums
    for (const KeyedValue &kv : parts)
        r.direct += pairing(grad.group, alpha, kv.gamma) * kv.value;
    for (const ClassValue &cv : group_by_class(t, grad, parts, {}, opt))
        r.factored += pairing(grad.group, alpha, cv.cls.rep) * cv.value;
    return r;
}

// ----------------------------------------------------------------- oracles

Cyclotomic oracle_dw_three_torus(int N, long t)
{
    Cocycle a = zn_cocycle(N, t);
    std::vector<Rational> poly(a.order, 0);
    for (int x = 0; x < N; ++x)
        for (int y = 0; y < N; ++y)
            for (int z = 0; z < N; ++z) {
                long e = a.exp(N, x, y, z) + a.exp(N, y, z, x) + a.exp(N, z, x, y) - a.exp(N, x, z, y) -
                         a.exp(N, z, y, x) - a.exp(N, y, x, z);
                poly[((e % a.order) + a.order) % a.order] += 1;
            }
    return Cyclotomic::from_poly(a.order, poly) / Cyclotomic(N);
}

std::vector<Cyclotomic> oracle_dw_lens_blocks(int N, long t, int p, int q)
{
    if (p < 2 || q <= 0 || q >= p || std::gcd(p, q) != 1)
        throw Error(Errc::BadLensParameters, "need 0 < q < p and gcd(p,q) = 1");
    int n = 1;
    while ((n * q) % p != 1)
        ++n;
    Cocycle a = zn_cocycle(N, t);
    std::vector<Cyclotomic> out;
    for (int g = 0; g < N; ++g) {
        if ((static_cast<long>(p) * g) % N != 0)
            continue;
        std::vector<Rational> poly(a.order, 0);
        for (int h = 0; h < N; ++h) {
            long e = 0;
            for (int i = 0; i < p; ++i)
                e += a.exp(N, g, static_cast<int>((static_cast<long>(i) * n * g + h) % N),
                           static_cast<int>((static_cast<long>(n) * g) % N));
            poly[e % a.order] += 1;
        }
        out.push_back(Cyclotomic::from_poly(a.order, poly) / Cyclotomic(N * N));
    }
    return out;
}

Cyclotomic oracle_dw_lens(int N, long t, int p, int q)
{
    Cyclotomic total(0);
    for (const Cyclotomic &v : oracle_dw_lens_blocks(N, t, p, q))
        total += v;
    return total;
}

} // namespace tv
