#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "tv/error.hpp"
#include "tv/triangulation.hpp"

namespace tv {

namespace {

using Ids = std::array<int, 4>;
using Vec3 = std::array<double, 3>;

// A local rewrite: the old tetrahedra and the new ones, both described by
// abstract vertex ids, with coordinates realizing the configuration in R^3.
struct LocalMove {
    std::vector<int> old_tets;
    std::vector<Ids> old_ids;
    std::vector<Ids> new_ids;
    std::vector<Vec3> coords;
};

int geometric_sign(const LocalMove &m, const Ids &ids)
{
    const Vec3 &p0 = m.coords[ids[0]];
    Vec3 a, b, c;
    for (int k = 0; k < 3; ++k) {
        a[k] = m.coords[ids[1]][k] - p0[k];
        b[k] = m.coords[ids[2]][k] - p0[k];
        c[k] = m.coords[ids[3]][k] - p0[k];
    }
    double det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
                 a[2] * (b[0] * c[1] - b[1] * c[0]);
    if (std::abs(det) < 1e-12)
        throw Error(Errc::Internal, "degenerate move geometry");
    return det > 0 ? 1 : -1;
}

std::set<int> facet_ids(const Ids &ids, int f)
{
    std::set<int> s;
    for (int x = 0; x < 4; ++x)
        if (x != f)
            s.insert(ids[x]);
    return s;
}

int slot_of(const Ids &ids, int id)
{
    for (int x = 0; x < 4; ++x)
        if (ids[x] == id)
            return x;
    return -1;
}

void not_applicable(const std::string &why)
{
    throw Error(Errc::MoveNotApplicable, why);
}

MoveResult apply_move(const Triangulation3 &t, const LocalMove &m, bool result_larger)
{
    const int n = t.simplex_count();
    std::vector<int> cfg_index(n, -1);
    for (size_t i = 0; i < m.old_tets.size(); ++i) {
        if (cfg_index[m.old_tets[i]] >= 0)
            not_applicable("configuration tetrahedra are not distinct");
        cfg_index[m.old_tets[i]] = static_cast<int>(i);
        for (int f = 0; f < 4; ++f)
            if (!t.adjacent(m.old_tets[i], f).glued())
                not_applicable("move touches the boundary");
    }
    std::vector<int> renum(n, -1);
    int next = 0;
    for (int s = 0; s < n; ++s)
        if (cfg_index[s] < 0)
            renum[s] = next++;
    const int first_new = next;
    const int new_count = first_new + static_cast<int>(m.new_ids.size());

    // where does each old facet of the configuration end up
    auto new_facet_for = [&](int ci, int f, int &nt, int &nf) {
        std::set<int> want = facet_ids(m.old_ids[ci], f);
        nt = -1;
        for (size_t j = 0; j < m.new_ids.size(); ++j)
            for (int g = 0; g < 4; ++g)
                if (facet_ids(m.new_ids[j], g) == want) {
                    if (nt >= 0)
                        not_applicable("ambiguous facet in move");
                    nt = static_cast<int>(j);
                    nf = g;
                }
        return nt >= 0;
    };

    GluingSpec spec;
    spec.dim = 3;
    spec.simplex_count = new_count;
    for (const Gluing &g : t.spec().gluings)
        if (cfg_index[g.a] < 0 && cfg_index[g.b] < 0)
            spec.gluings.push_back({renum[g.a], g.fa, renum[g.b], g.fb, g.perm});

    std::set<std::pair<int, int>> handled;
    for (size_t ci = 0; ci < m.old_tets.size(); ++ci) {
        int T = m.old_tets[ci];
        for (int f = 0; f < 4; ++f) {
            if (handled.count({T, f}))
                continue;
            const Adjacent &adj = t.adjacent(T, f);
            int U = adj.simplex, g = adj.facet;
            handled.insert({T, f});
            int nt = -1, nf = -1;
            bool ext = new_facet_for(static_cast<int>(ci), f, nt, nf);
            int cu = cfg_index[U];
            if (!ext) {
                // internal face: must be shared with the configuration consistently
                if (cu < 0)
                    not_applicable("internal face leaves the configuration");
                for (int x = 0; x < 4; ++x)
                    if (x != f && m.old_ids[ci][x] != m.old_ids[cu][adj.perm[x]])
                        not_applicable("configuration is not embedded as expected");
                int ut, uf;
                if (new_facet_for(cu, g, ut, uf))
                    not_applicable("face is internal on one side only");
                handled.insert({U, g});
                continue;
            }
            Gluing h{first_new + nt, nf, -1, -1, std::vector<int>(4, -1)};
            h.perm[nf] = -2;
            if (cu < 0) {
                h.b = renum[U];
                h.fb = g;
                for (int y = 0; y < 4; ++y)
                    if (y != nf)
                        h.perm[y] = adj.perm[slot_of(m.old_ids[ci], m.new_ids[nt][y])];
            } else {
                int ut, uf;
                if (!new_facet_for(cu, g, ut, uf))
                    not_applicable("face is internal on one side only");
                handled.insert({U, g});
                h.b = first_new + ut;
                h.fb = uf;
                for (int y = 0; y < 4; ++y)
                    if (y != nf) {
                        int z = adj.perm[slot_of(m.old_ids[ci], m.new_ids[nt][y])];
                        h.perm[y] = slot_of(m.new_ids[ut], m.old_ids[cu][z]);
                    }
            }
            h.perm[nf] = h.fb;
            spec.gluings.push_back(h);
        }
    }
    // faces shared by two new tetrahedra
    for (size_t i = 0; i < m.new_ids.size(); ++i)
        for (int f = 0; f < 4; ++f) {
            std::set<int> a = facet_ids(m.new_ids[i], f);
            bool external = false;
            for (size_t ci = 0; ci < m.old_tets.size() && !external; ++ci)
                for (int g = 0; g < 4; ++g)
                    if (facet_ids(m.old_ids[ci], g) == a)
                        external = true;
            if (external)
                continue;
            for (size_t j = i; j < m.new_ids.size(); ++j)
                for (int g = 0; g < 4; ++g) {
                    if (j == i && g <= f)
                        continue;
                    if (facet_ids(m.new_ids[j], g) != a)
                        continue;
                    Gluing h{first_new + static_cast<int>(i), f, first_new + static_cast<int>(j), g,
                             std::vector<int>(4, -1)};
                    for (int x = 0; x < 4; ++x)
                        h.perm[x] = x == f ? g : slot_of(m.new_ids[j], m.new_ids[i][x]);
                    spec.gluings.push_back(h);
                }
        }
    std::sort(spec.gluings.begin(), spec.gluings.end(), [](const Gluing &a, const Gluing &b) {
        return std::tie(a.a, a.fa) < std::tie(b.a, b.fa);
    });

    // keep the orientation of the manifold
    int k = t.orientation(m.old_tets[0]) * geometric_sign(m, m.old_ids[0]);
    for (size_t ci = 1; ci < m.old_tets.size(); ++ci)
        if (t.orientation(m.old_tets[ci]) * geometric_sign(m, m.old_ids[ci]) != k)
            throw Error(Errc::Internal, "move geometry disagrees with orientation");
    int seed;
    if (first_new > 0) {
        int s0 = 0;
        while (cfg_index[s0] >= 0)
            ++s0;
        seed = t.orientation(s0);
    } else {
        seed = k * geometric_sign(m, m.new_ids[0]);
    }
    MoveResult res{Triangulation::build(spec, seed), result_larger, {}};
    const Triangulation3 &nt = res.result;
    for (size_t j = 0; j < m.new_ids.size(); ++j)
        if (nt.orientation(first_new + static_cast<int>(j)) != k * geometric_sign(m, m.new_ids[j]))
            throw Error(Errc::Internal, "move produced an inconsistent orientation");

    // edge classes of the smaller triangulation inside the larger one
    const Triangulation3 &small = result_larger ? t : nt;
    const Triangulation3 &large = result_larger ? nt : t;
    res.edge_map.assign(small.edge_count(), {});
    std::vector<char> found(small.edge_count(), 0);
    auto locate_in_large = [&](int s_small, int i, int j) -> EdgeRef {
        // survivor tetrahedra exist in both
        if (result_larger) {
            if (cfg_index[s_small] < 0)
                return large.edge_of(renum[s_small], i, j);
            const Ids &ids = m.old_ids[cfg_index[s_small]];
            for (size_t q = 0; q < m.new_ids.size(); ++q) {
                int a = slot_of(m.new_ids[q], ids[i]), b = slot_of(m.new_ids[q], ids[j]);
                if (a >= 0 && b >= 0)
                    return large.edge_of(first_new + static_cast<int>(q), a, b);
            }
        } else {
            if (s_small < first_new) {
                int old = static_cast<int>(std::find(renum.begin(), renum.end(), s_small) - renum.begin());
                return large.edge_of(old, i, j);
            }
            const Ids &ids = m.new_ids[s_small - first_new];
            for (size_t q = 0; q < m.old_ids.size(); ++q) {
                int a = slot_of(m.old_ids[q], ids[i]), b = slot_of(m.old_ids[q], ids[j]);
                if (a >= 0 && b >= 0)
                    return large.edge_of(m.old_tets[q], a, b);
            }
        }
        throw Error(Errc::Internal, "edge lost by move");
    };
    for (int s = 0; s < small.simplex_count(); ++s)
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                EdgeRef se = small.edge_of(s, i, j);
                if (found[se.cls])
                    continue;
                EdgeRef le = locate_in_large(s, i, j);
                res.edge_map[se.cls] = {le.cls, se.sign * le.sign};
                found[se.cls] = 1;
            }
    return res;
}

const std::vector<Vec3> kTetCorners = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}, {0, 0, 0}};

} // namespace

MoveResult pachner_14(const Triangulation3 &t, int tet)
{
    if (tet < 0 || tet >= t.simplex_count())
        not_applicable("no such tetrahedron");
    LocalMove m;
    m.old_tets = {tet};
    m.old_ids = {Ids{0, 1, 2, 3}};
    for (int k = 0; k < 4; ++k) {
        Ids ids{0, 1, 2, 3};
        ids[k] = 4;
        m.new_ids.push_back(ids);
    }
    m.coords = kTetCorners;
    return apply_move(t, m, true);
}

MoveResult pachner_41(const Triangulation3 &t, int vertex)
{
    if (vertex < 0 || vertex >= t.vertex_count())
        not_applicable("no such vertex");
    if (t.vertex_on_boundary(vertex))
        not_applicable("vertex lies on the boundary");
    std::vector<std::pair<int, int>> occ;
    for (int s = 0; s < t.simplex_count(); ++s)
        for (int x = 0; x < 4; ++x)
            if (t.vertex_of(s, x) == vertex)
                occ.emplace_back(s, x);
    if (occ.size() != 4)
        not_applicable("vertex does not have degree 4");
    LocalMove m;
    std::map<int, int> idx;
    for (auto [s, x] : occ) {
        if (idx.count(s))
            not_applicable("vertex appears twice in one tetrahedron");
        idx[s] = static_cast<int>(m.old_tets.size());
        m.old_tets.push_back(s);
        m.old_ids.push_back(Ids{-1, -1, -1, -1});
    }
    // propagate ids across the faces around the vertex
    int next_id = 0;
    {
        auto [s, x] = occ[0];
        Ids &ids = m.old_ids[0];
        ids[x] = 4;
        for (int y = 0; y < 4; ++y)
            if (y != x)
                ids[y] = next_id++;
    }
    std::vector<int> queue{0};
    std::vector<char> seen(4, 0);
    seen[0] = 1;
    while (!queue.empty()) {
        int ci = queue.back();
        queue.pop_back();
        int s = m.old_tets[ci];
        for (int f = 0; f < 4; ++f) {
            if (m.old_ids[ci][f] == 4)
                continue;
            const Adjacent &a = t.adjacent(s, f);
            if (!a.glued() || !idx.count(a.simplex))
                not_applicable("vertex star is not a subdivided tetrahedron");
            int cu = idx[a.simplex];
            Ids &u = m.old_ids[cu];
            for (int y = 0; y < 4; ++y) {
                if (y == f)
                    continue;
                int z = a.perm[y];
                if (u[z] < 0)
                    u[z] = m.old_ids[ci][y];
                else if (u[z] != m.old_ids[ci][y])
                    not_applicable("vertex star is not a subdivided tetrahedron");
            }
            // the neighbour contains the outer corner this tetrahedron misses
            int missing = 6;
            for (int y = 0; y < 4; ++y)
                if (m.old_ids[ci][y] != 4)
                    missing -= m.old_ids[ci][y];
            if (u[a.facet] < 0)
                u[a.facet] = missing;
            else if (u[a.facet] != missing)
                not_applicable("vertex star is not a subdivided tetrahedron");
            if (!seen[cu]) {
                seen[cu] = 1;
                queue.push_back(cu);
            }
        }
    }
    std::set<std::set<int>> sets;
    for (const Ids &ids : m.old_ids) {
        std::set<int> s(ids.begin(), ids.end());
        if (s.size() != 4 || !s.count(4))
            not_applicable("vertex star is not a subdivided tetrahedron");
        sets.insert(s);
    }
    if (sets.size() != 4)
        not_applicable("vertex star is not a subdivided tetrahedron");
    m.new_ids = {Ids{0, 1, 2, 3}};
    m.coords = kTetCorners;
    return apply_move(t, m, false);
}

MoveResult pachner_23(const Triangulation3 &t, int triangle)
{
    if (triangle < 0 || triangle >= t.triangle_count())
        not_applicable("no such triangle");
    const TriangleClass &tc = t.triangle(triangle);
    if (tc.boundary)
        not_applicable("triangle lies on the boundary");
    int A = tc.simplex, i = tc.facet;
    const Adjacent &adj = t.adjacent(A, i);
    int B = adj.simplex;
    if (A == B)
        not_applicable("the two tetrahedra at the triangle coincide");
    LocalMove m;
    m.old_tets = {A, B};
    Ids ib{-1, -1, -1, -1};
    for (int x = 0; x < 4; ++x)
        ib[adj.perm[x]] = x == i ? 4 : x;
    m.old_ids = {Ids{0, 1, 2, 3}, ib};
    for (int c = 0; c < 4; ++c) {
        if (c == i)
            continue;
        Ids ids{0, 1, 2, 3};
        ids[c] = 4;
        m.new_ids.push_back(ids);
    }
    m.coords.assign(5, Vec3{0, 0, 0});
    const std::vector<Vec3> base = {{1, 0, 0}, {0, 1, 0}, {-1, -1, 0}};
    int b = 0;
    for (int x = 0; x < 4; ++x)
        if (x != i)
            m.coords[x] = base[b++];
    m.coords[i] = {0, 0, 1};
    m.coords[4] = {0, 0, -1};
    return apply_move(t, m, true);
}

MoveResult pachner_32(const Triangulation3 &t, int edge)
{
    if (edge < 0 || edge >= t.edge_count())
        not_applicable("no such edge");
    if (t.edge_on_boundary(edge))
        not_applicable("edge lies on the boundary");
    std::vector<std::array<int, 3>> occ;
    for (int s = 0; s < t.simplex_count(); ++s)
        for (int x = 0; x < 4; ++x)
            for (int y = x + 1; y < 4; ++y)
                if (t.edge_of(s, x, y).cls == edge)
                    occ.push_back({s, x, y});
    if (occ.size() != 3)
        not_applicable("edge does not have degree 3");
    // ids: d=0, e=1, x=2, y=3, z=4 with tets (d e x y), (d e y z), (d e z x)
    LocalMove m;
    auto [T1, i, j] = occ[0];
    Ids id1{-1, -1, -1, -1};
    id1[i] = 0;
    id1[j] = 1;
    int other[2], n = 0;
    for (int x = 0; x < 4; ++x)
        if (x != i && x != j)
            other[n++] = x;
    id1[other[0]] = 2;
    id1[other[1]] = 3;
    m.old_tets = {T1};
    m.old_ids = {id1};
    // cross the face (d e y), opposite x, then the face (d e z), opposite y
    int cur = T1;
    Ids ids = id1;
    for (int step = 0; step < 2; ++step) {
        int opp = slot_of(ids, step == 0 ? 2 : 3);
        const Adjacent &a = t.adjacent(cur, opp);
        Ids nx{-1, -1, -1, -1};
        for (int x = 0; x < 4; ++x)
            if (x != opp)
                nx[a.perm[x]] = ids[x];
        nx[a.facet] = step == 0 ? 4 : 2;
        cur = a.simplex;
        ids = nx;
        m.old_tets.push_back(cur);
        m.old_ids.push_back(ids);
    }
    m.new_ids = {Ids{0, 2, 3, 4}, Ids{1, 2, 3, 4}};
    const double c = std::cos(2 * M_PI / 3), s = std::sin(2 * M_PI / 3);
    m.coords = {{0, 0, 1}, {0, 0, -1}, {1, 0, 0}, {c, s, 0}, {c, -s, 0}};
    return apply_move(t, m, false);
}

} // namespace tv
