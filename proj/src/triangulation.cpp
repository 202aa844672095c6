#include "tv/triangulation.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

#include "tv/error.hpp"

namespace tv {

namespace {

constexpr int kPairs3[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
constexpr int kPairs2[4][4] = {{-1, 0, 1, -1}, {0, -1, 2, -1}, {1, 2, -1, -1}, {-1, -1, -1, -1}};

int pair_count(int dim) { return dim == 3 ? 6 : 3; }

struct UnionFind {
    std::vector<int> parent;
    std::vector<int> parity;  // parity relative to parent

    explicit UnionFind(int n) : parent(n), parity(n, 0) { std::iota(parent.begin(), parent.end(), 0); }

    std::pair<int, int> find(int x)
    {
        int p = 0;
        int r = x;
        while (parent[r] != r) {
            p ^= parity[r];
            r = parent[r];
        }
        // path compression with parity bookkeeping
        int cur = x, cp = p;
        while (parent[cur] != cur) {
            int next = parent[cur];
            int np = cp ^ parity[cur];
            parent[cur] = r;
            parity[cur] = cp;
            cur = next;
            cp = np;
        }
        return {r, p};
    }

    // returns false when the union contradicts an existing parity
    bool unite(int a, int b, int rel)
    {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb)
            return (pa ^ pb) == rel;
        parent[rb] = ra;
        parity[rb] = pa ^ pb ^ rel;
        return true;
    }
};

} // namespace

int pair_index(int dim, int i, int j)
{
    return dim == 3 ? kPairs3[i][j] : kPairs2[i][j];
}

int perm_sign(const std::vector<int> &perm)
{
    int sign = 1;
    for (size_t i = 0; i < perm.size(); ++i)
        for (size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j])
                sign = -sign;
    return sign;
}

void validate_gluing_spec(const GluingSpec &spec)
{
    if (spec.dim != 2 && spec.dim != 3)
        throw Error(Errc::BadPermutation, "dimension must be 2 or 3");
    int k = spec.dim + 1;
    std::vector<char> used(static_cast<size_t>(spec.simplex_count) * k, 0);
    for (const Gluing &g : spec.gluings) {
        if (g.a < 0 || g.b < 0 || g.a >= spec.simplex_count || g.b >= spec.simplex_count)
            throw Error(Errc::BadPermutation, "simplex index out of range");
        if (g.fa < 0 || g.fb < 0 || g.fa >= k || g.fb >= k)
            throw Error(Errc::BadPermutation, "facet index out of range");
        if (static_cast<int>(g.perm.size()) != k)
            throw Error(Errc::BadPermutation, "permutation must have " + std::to_string(k) + " entries");
        std::vector<char> seen(k, 0);
        for (int x : g.perm) {
            if (x < 0 || x >= k || seen[x])
                throw Error(Errc::BadPermutation, "not a bijection of vertex slots");
            seen[x] = 1;
        }
        if (g.perm[g.fa] != g.fb)
            throw Error(Errc::BadPermutation, "facet slot " + std::to_string(g.fa) +
                                                  " must map to facet slot " + std::to_string(g.fb));
        for (auto [s, f] : {std::pair{g.a, g.fa}, std::pair{g.b, g.fb}}) {
            char &u = used[static_cast<size_t>(s) * k + f];
            if (u && !(g.a == g.b && g.fa == g.fb))
                throw Error(Errc::DuplicateFacet,
                            "facet (" + std::to_string(s) + "," + std::to_string(f) + ") glued twice");
            u = 1;
        }
    }
}

Triangulation Triangulation::build(const GluingSpec &spec, int orientation_seed)
{
    validate_gluing_spec(spec);
    Triangulation t;
    t.spec_ = spec;
    const int n = spec.simplex_count;
    const int k = spec.dim + 1;
    const int np = pair_count(spec.dim);

    t.adj_.assign(n, {});
    for (const Gluing &g : spec.gluings) {
        if (g.a == g.b && g.fa == g.fb)
            throw Error(Errc::DegenerateGluing, "facet (" + std::to_string(g.a) + "," +
                                                    std::to_string(g.fa) + ") glued to itself");
        Adjacent &x = t.adj_[g.a][g.fa];
        Adjacent &y = t.adj_[g.b][g.fb];
        x.simplex = g.b;
        x.facet = g.fb;
        y.simplex = g.a;
        y.facet = g.fa;
        for (int i = 0; i < k; ++i) {
            x.perm[i] = g.perm[i];
            y.perm[g.perm[i]] = i;
        }
    }

    UnionFind vuf(n * k), euf(n * np), fuf(n * k);
    for (const Gluing &g : spec.gluings) {
        for (int x = 0; x < k; ++x)
            if (x != g.fa)
                vuf.unite(g.a * k + x, g.b * k + g.perm[x], 0);
        for (int x = 0; x < k; ++x) {
            for (int y = x + 1; y < k; ++y) {
                if (x == g.fa || y == g.fa)
                    continue;
                int px = g.perm[x], py = g.perm[y];
                int rel = px > py ? 1 : 0;
                if (!euf.unite(g.a * np + pair_index(spec.dim, x, y),
                               g.b * np + pair_index(spec.dim, std::min(px, py), std::max(px, py)), rel))
                    throw Error(Errc::DegenerateGluing, "an edge is identified with its own reverse");
            }
        }
        if (spec.dim == 3)
            fuf.unite(g.a * k + g.fa, g.b * k + g.fb, 0);
    }

    // vertex classes
    std::vector<int> vid(n * k, -1);
    t.vertex_.assign(n, {-1, -1, -1, -1});
    for (int s = 0; s < n; ++s)
        for (int x = 0; x < k; ++x) {
            int r = vuf.find(s * k + x).first;
            if (vid[r] < 0)
                vid[r] = t.n_vertices_++;
            t.vertex_[s][x] = vid[r];
        }

    // edge classes, directed by their first occurrence
    std::vector<int> eid(n * np, -1), eparity(n * np, 0);
    t.edge_.assign(n, {});
    for (int s = 0; s < n; ++s)
        for (int x = 0; x < k; ++x)
            for (int y = x + 1; y < k; ++y) {
                auto [r, p] = euf.find(s * np + pair_index(spec.dim, x, y));
                if (eid[r] < 0) {
                    eid[r] = static_cast<int>(t.edge_tail_.size());
                    eparity[r] = p;
                    t.edge_tail_.push_back(t.vertex_[s][x]);
                    t.edge_head_.push_back(t.vertex_[s][y]);
                }
                t.edge_[s][pair_index(spec.dim, x, y)] = EdgeRef{eid[r], p == eparity[r] ? 1 : -1};
            }

    // orientation
    t.orient_.assign(n, 0);
    for (int start = 0; start < n; ++start) {
        if (t.orient_[start] != 0)
            continue;
        t.orient_[start] = orientation_seed;
        std::deque<int> queue{start};
        while (!queue.empty()) {
            int s = queue.front();
            queue.pop_front();
            for (int f = 0; f < k; ++f) {
                const Adjacent &a = t.adj_[s][f];
                if (!a.glued())
                    continue;
                std::vector<int> perm(a.perm.begin(), a.perm.begin() + k);
                int want = -perm_sign(perm) * t.orient_[s];
                if (t.orient_[a.simplex] == 0) {
                    t.orient_[a.simplex] = want;
                    queue.push_back(a.simplex);
                } else if (t.orient_[a.simplex] != want) {
                    throw Error(Errc::NonOrientable, "gluings admit no consistent orientation");
                }
            }
        }
    }

    // triangle classes
    t.face_.assign(n, {-1, -1, -1, -1});
    auto make_triangle = [&](int s, int facet, std::array<int, 3> c) {
        TriangleClass tc;
        tc.simplex = s;
        tc.facet = facet;
        tc.corners = c;
        tc.edges = {t.edge_of(s, c[0], c[1]), t.edge_of(s, c[1], c[2]), t.edge_of(s, c[2], c[0])};
        return tc;
    };
    if (spec.dim == 3) {
        std::vector<int> fid(n * k, -1);
        for (int s = 0; s < n; ++s)
            for (int f = 0; f < 4; ++f) {
                int r = fuf.find(s * k + f).first;
                if (fid[r] < 0) {
                    fid[r] = static_cast<int>(t.triangles_.size());
                    std::array<int, 3> c{};
                    int idx = 0;
                    for (int x = 0; x < 4; ++x)
                        if (x != f)
                            c[idx++] = x;
                    t.triangles_.push_back(make_triangle(s, f, c));
                }
                t.face_[s][f] = fid[r];
                t.triangles_[fid[r]].incidences++;
            }
        for (auto &tc : t.triangles_)
            tc.boundary = tc.incidences == 1;
    } else {
        for (int s = 0; s < n; ++s) {
            t.triangles_.push_back(make_triangle(s, -1, {0, 1, 2}));
            t.triangles_.back().incidences = 1;
        }
    }

    t.boundary_vertex_.assign(t.n_vertices_, 0);
    t.boundary_edge_.assign(t.edge_count(), 0);
    for (int s = 0; s < n; ++s)
        for (int f = 0; f < k; ++f) {
            if (t.adj_[s][f].glued())
                continue;
            for (int x = 0; x < k; ++x) {
                if (x == f)
                    continue;
                t.boundary_vertex_[t.vertex_[s][x]] = 1;
                for (int y = x + 1; y < k; ++y)
                    if (y != f)
                        t.boundary_edge_[t.edge_of(s, x, y).cls] = 1;
            }
        }
    return t;
}

EdgeRef Triangulation::edge_of(int s, int i, int j) const
{
    if (i < j)
        return edge_[s][pair_index(dim(), i, j)];
    EdgeRef r = edge_[s][pair_index(dim(), j, i)];
    r.sign = -r.sign;
    return r;
}

int Triangulation::euler_characteristic() const
{
    int chi = vertex_count() - edge_count() + triangle_count();
    if (dim() == 3)
        chi -= simplex_count();
    return chi;
}

bool Triangulation::closed() const
{
    for (int s = 0; s < simplex_count(); ++s)
        for (int f = 0; f <= dim(); ++f)
            if (!adj_[s][f].glued())
                return false;
    return true;
}

BoundarySurface boundary_surface(const Triangulation3 &t)
{
    BoundarySurface out;
    std::vector<std::array<int, 4>> local_index;  // tet slot -> local slot of the boundary face
    std::vector<std::vector<int>> index_of(t.simplex_count(), std::vector<int>(4, -1));
    for (int s = 0; s < t.simplex_count(); ++s)
        for (int f = 0; f < 4; ++f)
            if (!t.adjacent(s, f).glued()) {
                index_of[s][f] = static_cast<int>(out.faces.size());
                out.faces.emplace_back(s, f);
                std::array<int, 4> li{-1, -1, -1, -1};
                int idx = 0;
                for (int x = 0; x < 4; ++x)
                    if (x != f)
                        li[x] = idx++;
                local_index.push_back(li);
            }

    GluingSpec spec;
    spec.dim = 2;
    spec.simplex_count = static_cast<int>(out.faces.size());
    std::vector<std::array<char, 3>> done(out.faces.size(), {0, 0, 0});
    for (size_t A = 0; A < out.faces.size(); ++A) {
        auto [s, f] = out.faces[A];
        for (int r = 0; r < 4; ++r) {
            if (r == f || done[A][local_index[A][r]])
                continue;
            // surface edge {p,q} of face f, opposite corner r; walk around it
            int p = -1, q = -1;
            for (int x = 0; x < 4; ++x)
                if (x != f && x != r)
                    (p < 0 ? p : q) = x;
            int cur = s, P = p, Q = q, X = r;
            int guard = 0;
            while (t.adjacent(cur, X).glued()) {
                const Adjacent &a = t.adjacent(cur, X);
                P = a.perm[P];
                Q = a.perm[Q];
                int E = a.facet;
                cur = a.simplex;
                X = 6 - P - Q - E;
                if (++guard > 4 * t.simplex_count() + 8)
                    throw Error(Errc::Internal, "boundary walk did not terminate");
            }
            int B = index_of[cur][X];
            int third = 6 - P - Q - X;
            Gluing g;
            g.a = static_cast<int>(A);
            g.fa = local_index[A][r];
            g.b = B;
            g.fb = local_index[B][third];
            g.perm.assign(3, -1);
            g.perm[local_index[A][p]] = local_index[B][P];
            g.perm[local_index[A][q]] = local_index[B][Q];
            g.perm[g.fa] = g.fb;
            done[A][g.fa] = 1;
            done[B][g.fb] = 1;
            spec.gluings.push_back(g);
        }
    }
    out.surface = Triangulation::build(spec);
    const Surface2 &S = out.surface;
    out.edge_map.assign(S.edge_count(), {});
    out.vertex_map.assign(S.vertex_count(), -1);
    for (size_t A = 0; A < out.faces.size(); ++A) {
        auto [s, f] = out.faces[A];
        for (int x = 0; x < 4; ++x) {
            if (x == f)
                continue;
            out.vertex_map[S.vertex_of(static_cast<int>(A), local_index[A][x])] = t.vertex_of(s, x);
            for (int y = x + 1; y < 4; ++y) {
                if (y == f)
                    continue;
                EdgeRef se = S.edge_of(static_cast<int>(A), local_index[A][x], local_index[A][y]);
                EdgeRef te = t.edge_of(s, x, y);
                out.edge_map[se.cls] = EdgeRef{te.cls, se.sign * te.sign};
            }
        }
    }
    return out;
}

namespace {

// true when the edge k->l of simplex s runs along the branching
bool runs_forward(const Triangulation &, const std::vector<char> &forward, const EdgeRef &e)
{
    return (forward[e.cls] != 0) == (e.sign > 0);
}

bool triangle_acyclic(const Triangulation &t, const std::vector<char> &forward, const TriangleClass &tc)
{
    bool a = runs_forward(t, forward, tc.edges[0]);
    bool b = runs_forward(t, forward, tc.edges[1]);
    bool c = runs_forward(t, forward, tc.edges[2]);
    return !(a == b && b == c);
}

std::array<int, 4> simplex_order(const Triangulation &t, const std::vector<char> &forward, int s)
{
    int k = t.dim() + 1;
    std::array<int, 4> out_deg{0, 0, 0, 0};
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j && runs_forward(t, forward, t.edge_of(s, i, j)))
                out_deg[i]++;
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.begin() + k, [&](int x, int y) { return out_deg[x] > out_deg[y]; });
    return order;
}

} // namespace

bool branching_valid(const Triangulation &t, const Branching &b)
{
    if (static_cast<int>(b.forward.size()) != t.edge_count())
        return false;
    for (int s = 0; s < t.simplex_count(); ++s) {
        int k = t.dim() + 1;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                for (int l = j + 1; l < k; ++l) {
                    bool a = runs_forward(t, b.forward, t.edge_of(s, i, j));
                    bool c = runs_forward(t, b.forward, t.edge_of(s, j, l));
                    bool d = runs_forward(t, b.forward, t.edge_of(s, l, i));
                    if (a == c && c == d)
                        return false;
                }
    }
    return true;
}

Branching find_branching(const Triangulation &t)
{
    const int E = t.edge_count();
    // triangles checked once their last edge (in class order) is assigned
    std::vector<std::vector<int>> check_at(E);
    for (int i = 0; i < t.triangle_count(); ++i) {
        const TriangleClass &tc = t.triangle(i);
        int last = std::max({tc.edges[0].cls, tc.edges[1].cls, tc.edges[2].cls});
        check_at[last].push_back(i);
    }
    Branching b;
    b.forward.assign(E, 1);
    std::function<bool(int)> search = [&](int e) {
        if (e == E)
            return true;
        for (char v : {char(1), char(0)}) {
            b.forward[e] = v;
            bool ok = true;
            for (int tri : check_at[e])
                if (!triangle_acyclic(t, b.forward, t.triangle(tri))) {
                    ok = false;
                    break;
                }
            if (ok && search(e + 1))
                return true;
        }
        return false;
    };
    if (!search(0))
        throw Error(Errc::BranchingNotFound, "no acyclic orientation of the edge classes exists");
    for (int s = 0; s < t.simplex_count(); ++s)
        b.order.push_back(simplex_order(t, b.forward, s));
    if (!branching_valid(t, b))
        throw Error(Errc::Internal, "branching search produced an invalid branching");
    return b;
}

SpanningTree spanning_forest(const Triangulation &t, const std::vector<char> &roots)
{
    const int V = t.vertex_count();
    std::vector<std::vector<std::pair<int, int>>> nbr(V);
    for (int e = 0; e < t.edge_count(); ++e) {
        int a = t.edge_tail(e), b = t.edge_head(e);
        if (a == b)
            continue;
        nbr[a].emplace_back(e, b);
        nbr[b].emplace_back(e, a);
    }
    SpanningTree tree;
    tree.parent_edge.assign(V, -1);
    tree.parent_vertex.assign(V, -1);
    std::vector<char> seen(V, 0);
    std::deque<int> queue;
    for (int v = 0; v < V; ++v)
        if (roots[v]) {
            seen[v] = 1;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        tree.order.push_back(v);
        for (auto [e, w] : nbr[v]) {
            if (seen[w])
                continue;
            seen[w] = 1;
            tree.parent_edge[w] = e;
            tree.parent_vertex[w] = v;
            tree.edges.push_back(e);
            queue.push_back(w);
        }
    }
    if (static_cast<int>(tree.order.size()) != V)
        throw Error(Errc::Disconnected, "complex is not connected to the chosen roots");
    return tree;
}

SpanningTree spanning_tree(const Triangulation &t, int root)
{
    std::vector<char> roots(t.vertex_count(), 0);
    roots.at(root) = 1;
    return spanning_forest(t, roots);
}

} // namespace tv
