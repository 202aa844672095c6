#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "tv/error.hpp"
#include "tv/triangulation.hpp"

namespace tv {

GluingSpec sphere_s3()
{
    // tetrahedron (x1 x2 x3 x4) in slots 0..3:
    // (x1 x4 x2) = (x3 x4 x2) and (x1 x3 x4) = (x3 x2 x1)
    GluingSpec s;
    s.dim = 3;
    s.simplex_count = 1;
    s.gluings.push_back({0, 2, 0, 0, {2, 1, 0, 3}});
    s.gluings.push_back({0, 1, 0, 3, {2, 3, 1, 0}});
    return s;
}

GluingSpec three_torus()
{
    // Cube [0,1]^3 cut into six tetrahedra around the main diagonal; opposite
    // cube faces are identified by translation.
    using Pt = std::array<int, 3>;
    std::vector<std::array<Pt, 4>> tets;
    std::array<int, 3> axes{0, 1, 2};
    do {
        Pt v0{0, 0, 0}, v1 = v0, v2, v3{1, 1, 1};
        v1[axes[0]] = 1;
        v2 = v1;
        v2[axes[1]] = 1;
        tets.push_back({v1, v0, v2, v3});
    } while (std::next_permutation(axes.begin(), axes.end()));

    std::map<std::array<Pt, 3>, std::vector<std::pair<int, int>>> shapes;
    auto shape_of = [&](int t, int f, Pt &lo) {
        lo = {1, 1, 1};
        for (int x = 0; x < 4; ++x)
            if (x != f)
                for (int c = 0; c < 3; ++c)
                    lo[c] = std::min(lo[c], tets[t][x][c]);
        std::array<Pt, 3> key;
        int i = 0;
        for (int x = 0; x < 4; ++x)
            if (x != f) {
                for (int c = 0; c < 3; ++c)
                    key[i][c] = tets[t][x][c] - lo[c];
                ++i;
            }
        std::sort(key.begin(), key.end());
        return key;
    };
    for (int t = 0; t < 6; ++t)
        for (int f = 0; f < 4; ++f) {
            Pt lo;
            shapes[shape_of(t, f, lo)].emplace_back(t, f);
        }

    GluingSpec s;
    s.dim = 3;
    s.simplex_count = 6;
    for (auto &[key, occ] : shapes) {
        if (occ.size() != 2)
            throw Error(Errc::Internal, "three-torus face matching failed");
        auto [t1, f1] = occ[0];
        auto [t2, f2] = occ[1];
        Pt lo1, lo2;
        shape_of(t1, f1, lo1);
        shape_of(t2, f2, lo2);
        Gluing g{t1, f1, t2, f2, std::vector<int>(4, -1)};
        g.perm[f1] = f2;
        for (int x = 0; x < 4; ++x) {
            if (x == f1)
                continue;
            Pt p = tets[t1][x];
            for (int c = 0; c < 3; ++c)
                p[c] += lo2[c] - lo1[c];
            for (int y = 0; y < 4; ++y)
                if (y != f2 && tets[t2][y] == p)
                    g.perm[x] = y;
        }
        s.gluings.push_back(g);
    }
    std::sort(s.gluings.begin(), s.gluings.end(), [](const Gluing &a, const Gluing &b) {
        return std::tie(a.a, a.fa) < std::tie(b.a, b.fa);
    });
    return s;
}

GluingSpec lens(int p, int q)
{
    if (p < 2 || q <= 0 || q >= p || std::gcd(p, q) != 1)
        throw Error(Errc::BadLensParameters,
                    "need 0 < q < p and gcd(p,q) = 1, got (" + std::to_string(p) + "," + std::to_string(q) + ")");
    // tetrahedron i = (a, b, c_i, c_{i+1}) around the axis ab
    GluingSpec s;
    s.dim = 3;
    s.simplex_count = p;
    for (int i = 0; i < p; ++i) {
        // (a b c_{i+1}) of tet i = (a b c_{i+1}) of tet i+1
        s.gluings.push_back({i, 2, (i + 1) % p, 3, {0, 1, 3, 2}});
        // (a c_i c_{i+1}) of tet i = (b c_{i+q} c_{i+q+1}) of tet i+q
        s.gluings.push_back({i, 1, (i + q) % p, 0, {1, 0, 2, 3}});
    }
    return s;
}

namespace {

struct LabeledEdge {
    int label;
    int from, to;  // polygon vertices
};

// Triangulated polygon whose boundary edges are paired by label.
GluingSpec polygon_surface(const std::vector<std::array<int, 3>> &tris, const std::vector<LabeledEdge> &bd)
{
    GluingSpec s;
    s.dim = 2;
    s.simplex_count = static_cast<int>(tris.size());
    auto find_edge = [&](int u, int v, std::vector<std::pair<int, int>> &out) {
        for (int t = 0; t < static_cast<int>(tris.size()); ++t)
            for (int f = 0; f < 3; ++f) {
                int x = tris[t][(f + 1) % 3], y = tris[t][(f + 2) % 3];
                if ((x == u && y == v) || (x == v && y == u))
                    out.emplace_back(t, f);
            }
    };
    auto glue = [&](int t1, int f1, int t2, int f2, const std::map<int, int> &vmap) {
        Gluing g{t1, f1, t2, f2, std::vector<int>(3, -1)};
        for (int x = 0; x < 3; ++x) {
            if (x == f1) {
                g.perm[x] = f2;
                continue;
            }
            int target = vmap.at(tris[t1][x]);
            for (int y = 0; y < 3; ++y)
                if (y != f2 && tris[t2][y] == target)
                    g.perm[x] = y;
        }
        s.gluings.push_back(g);
    };
    std::set<std::pair<int, int>> seen;
    for (int t = 0; t < s.simplex_count; ++t)
        for (int f = 0; f < 3; ++f) {
            int u = tris[t][(f + 1) % 3], v = tris[t][(f + 2) % 3];
            std::pair<int, int> key{std::min(u, v), std::max(u, v)};
            bool labeled = false;
            for (const auto &e : bd)
                if (std::min(e.from, e.to) == key.first && std::max(e.from, e.to) == key.second)
                    labeled = true;
            if (labeled || seen.count(key))
                continue;
            seen.insert(key);
            std::vector<std::pair<int, int>> occ;
            find_edge(u, v, occ);
            if (occ.size() != 2)
                throw Error(Errc::Internal, "polygon diagonal must border two triangles");
            glue(occ[0].first, occ[0].second, occ[1].first, occ[1].second, {{u, u}, {v, v}});
        }
    std::set<int> done;
    for (size_t i = 0; i < bd.size(); ++i) {
        if (done.count(bd[i].label))
            continue;
        done.insert(bd[i].label);
        size_t j = i + 1;
        while (j < bd.size() && bd[j].label != bd[i].label)
            ++j;
        if (j == bd.size())
            throw Error(Errc::Internal, "unpaired polygon edge label");
        std::vector<std::pair<int, int>> o1, o2;
        find_edge(bd[i].from, bd[i].to, o1);
        find_edge(bd[j].from, bd[j].to, o2);
        glue(o1.at(0).first, o1.at(0).second, o2.at(0).first, o2.at(0).second,
             {{bd[i].from, bd[j].from}, {bd[i].to, bd[j].to}});
    }
    std::sort(s.gluings.begin(), s.gluings.end(), [](const Gluing &a, const Gluing &b) {
        return std::tie(a.a, a.fa) < std::tie(b.a, b.fa);
    });
    return s;
}

} // namespace

GluingSpec surface_torus()
{
    // square A=0, B=1, D=2, C=3: a = A->B = C->D, b = B->D = A->C, diagonal e = A->D
    return polygon_surface({{1, 0, 2}, {0, 3, 2}}, {{0, 0, 1}, {1, 1, 2}, {0, 3, 2}, {1, 0, 3}});
}

GluingSpec surface_genus(int g)
{
    if (g < 1)
        throw Error(Errc::BadSelector, "genus must be at least 1");
    if (g == 1)
        return surface_torus();
    // 4g-gon with word a1 b1 a1^-1 b1^-1 ...; vertex 4g is vertex 0
    int n = 4 * g;
    auto V = [n](int i) { return i % n; };
    std::vector<std::array<int, 3>> tris;
    std::vector<LabeledEdge> bd;
    for (int i = 0; i < g; ++i) {
        int b0 = 4 * i;
        tris.push_back({V(b0), V(b0 + 1), V(b0 + 2)});
        tris.push_back({V(b0 + 2), V(b0 + 3), V(b0 + 4)});
        tris.push_back({V(b0), V(b0 + 2), V(b0 + 4)});
        bd.push_back({2 * i, V(b0), V(b0 + 1)});
        bd.push_back({2 * i + 1, V(b0 + 1), V(b0 + 2)});
        bd.push_back({2 * i, V(b0 + 3), V(b0 + 2)});
        bd.push_back({2 * i + 1, V(b0 + 4), V(b0 + 3)});
    }
    for (int i = 1; i + 1 < g; ++i)
        tris.push_back({0, V(4 * i), V(4 * i + 4)});
    return polygon_surface(tris, bd);
}

GluingSpec disjoint_union(const GluingSpec &a, const GluingSpec &b)
{
    if (a.dim != b.dim)
        throw Error(Errc::BadSelector, "dimension mismatch in disjoint union");
    GluingSpec s = a;
    s.simplex_count = a.simplex_count + b.simplex_count;
    for (Gluing g : b.gluings) {
        g.a += a.simplex_count;
        g.b += a.simplex_count;
        s.gluings.push_back(g);
    }
    return s;
}

namespace {

using Role = std::pair<int, int>;  // (surface corner slot, level)

std::array<std::array<Role, 4>, 3> prism_roles(const std::array<int, 4> &order, int level)
{
    int u = order[0], v = order[1], w = order[2];
    int l0 = level, l1 = level + 1;
    return {{{Role{u, l0}, Role{v, l0}, Role{w, l0}, Role{w, l1}},
             {Role{u, l0}, Role{v, l0}, Role{v, l1}, Role{w, l1}},
             {Role{u, l0}, Role{u, l1}, Role{v, l1}, Role{w, l1}}}};
}

} // namespace

GluingSpec prism_spec(const Surface2 &s, const Branching &b, int layers, bool close_up)
{
    if (!branching_valid(s, b))
        throw Error(Errc::BranchingNotFound, "prism needs a valid branching");
    const int nT = s.simplex_count();
    GluingSpec out;
    out.dim = 3;
    out.simplex_count = 3 * nT * layers;
    auto tet_index = [nT](int layer, int t, int j) { return (layer * nT + t) * 3 + j; };

    for (int L = 0; L < layers; ++L) {
        for (int t = 0; t < nT; ++t) {
            out.gluings.push_back({tet_index(L, t, 0), 2, tet_index(L, t, 1), 2, {0, 1, 2, 3}});
            out.gluings.push_back({tet_index(L, t, 1), 1, tet_index(L, t, 2), 1, {0, 1, 2, 3}});
        }
        for (const Gluing &g : s.spec().gluings) {
            auto ra = prism_roles(b.order[g.a], L);
            auto rb = prism_roles(b.order[g.b], L);
            int x = -1, y = -1;
            for (int c : {b.order[g.a][0], b.order[g.a][1], b.order[g.a][2]})
                if (c != g.fa)
                    (x < 0 ? x : y) = c;  // x before y in branch order
            for (const std::array<Role, 3> &quad :
                 {std::array<Role, 3>{Role{x, L}, Role{y, L}, Role{y, L + 1}},
                  std::array<Role, 3>{Role{x, L}, Role{x, L + 1}, Role{y, L + 1}}}) {
                auto locate = [](const std::array<std::array<Role, 4>, 3> &roles, const std::set<Role> &want,
                                 int &tet, int &facet) {
                    for (int j = 0; j < 3; ++j)
                        for (int f = 0; f < 4; ++f) {
                            std::set<Role> have;
                            for (int k = 0; k < 4; ++k)
                                if (k != f)
                                    have.insert(roles[j][k]);
                            if (have == want) {
                                tet = j;
                                facet = f;
                                return;
                            }
                        }
                    throw Error(Errc::Internal, "prism quad face not found");
                };
                std::set<Role> wa(quad.begin(), quad.end()), wb;
                for (const Role &r : quad)
                    wb.insert({g.perm[r.first], r.second});
                int ja, fa, jb, fb;
                locate(ra, wa, ja, fa);
                locate(rb, wb, jb, fb);
                Gluing h{tet_index(L, g.a, ja), fa, tet_index(L, g.b, jb), fb, std::vector<int>(4, -1)};
                h.perm[fa] = fb;
                for (int k = 0; k < 4; ++k) {
                    if (k == fa)
                        continue;
                    Role r{g.perm[ra[ja][k].first], ra[ja][k].second};
                    for (int m = 0; m < 4; ++m)
                        if (m != fb && rb[jb][m] == r)
                            h.perm[k] = m;
                }
                out.gluings.push_back(h);
            }
        }
    }
    for (int L = 0; L + 1 < layers || (close_up && L < layers); ++L)
        for (int t = 0; t < nT; ++t)
            out.gluings.push_back({tet_index(L, t, 2), 0, tet_index((L + 1) % layers, t, 0), 3, {3, 0, 1, 2}});
    return out;
}

static Prism make_prism(const Surface2 &s, const Branching &b, int layers, bool close_up)
{
    Prism P{Triangulation::build(prism_spec(s, b, layers, close_up)), {}, {}, {}, {}, {}, {}};
    const int nT = s.simplex_count();
    const int last = layers - 1;
    P.bottom_edges.assign(s.edge_count(), {});
    P.top_edges.assign(s.edge_count(), {});
    P.bottom_vertices.assign(s.vertex_count(), -1);
    P.top_vertices.assign(s.vertex_count(), -1);
    for (int t = 0; t < nT; ++t) {
        const auto &ord = b.order[t];
        auto pos = [&](int corner) { return static_cast<int>(std::find(ord.begin(), ord.begin() + 3, corner) - ord.begin()); };
        int A = t * 3;                      // layer 0, (u0 v0 w0 w1)
        int C = (last * nT + t) * 3 + 2;    // last layer, (u0 u1 v1 w1)
        P.bottom_triangles.push_back(P.tri.triangle_of(A, 3));
        P.top_triangles.push_back(P.tri.triangle_of(C, 0));
        for (int i = 0; i < 3; ++i) {
            P.bottom_vertices[s.vertex_of(t, i)] = P.tri.vertex_of(A, pos(i));
            P.top_vertices[s.vertex_of(t, i)] = P.tri.vertex_of(C, 1 + pos(i));
            for (int j = i + 1; j < 3; ++j) {
                EdgeRef se = s.edge_of(t, i, j);
                EdgeRef bottom = P.tri.edge_of(A, pos(i), pos(j));
                EdgeRef top = P.tri.edge_of(C, 1 + pos(i), 1 + pos(j));
                P.bottom_edges[se.cls] = {bottom.cls, se.sign * bottom.sign};
                P.top_edges[se.cls] = {top.cls, se.sign * top.sign};
            }
        }
    }
    return P;
}

Prism prism_layers(const Surface2 &s, const Branching &b, int layers)
{
    return make_prism(s, b, layers, false);
}

Prism prism(const Surface2 &s, const Branching &b)
{
    return make_prism(s, b, 1, false);
}

Prism mapping_torus_identity(const Surface2 &s, const Branching &b)
{
    return make_prism(s, b, 1, true);
}

} // namespace tv
