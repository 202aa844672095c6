#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "tv/error.hpp"
#include "tv/tqft.hpp"

namespace tv {

ExactMatrix multiply(const ExactMatrix &x, const ExactMatrix &y)
{
    if (x.n != y.n)
        throw Error(Errc::Internal, "matrix size mismatch");
    ExactMatrix out{x.n, std::vector<Cyclotomic>(static_cast<size_t>(x.n) * x.n)};
    for (int i = 0; i < x.n; ++i)
        for (int k = 0; k < x.n; ++k) {
            if (x.at(i, k).is_zero())
                continue;
            for (int j = 0; j < x.n; ++j)
                if (!y.at(k, j).is_zero())
                    out.at(i, j) += x.at(i, k) * y.at(k, j);
        }
    return out;
}

ExactMatrix kronecker(const ExactMatrix &x, const ExactMatrix &y)
{
    ExactMatrix out{x.n * y.n, std::vector<Cyclotomic>(static_cast<size_t>(x.n * y.n) * (x.n * y.n))};
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.n; ++j) {
            if (x.at(i, j).is_zero())
                continue;
            for (int k = 0; k < y.n; ++k)
                for (int l = 0; l < y.n; ++l)
                    out.at(i * y.n + k, j * y.n + l) = x.at(i, j) * y.at(k, l);
        }
    return out;
}

ExactMatrix submatrix(const ExactMatrix &m, const std::vector<int> &idx)
{
    const int n = static_cast<int>(idx.size());
    ExactMatrix out{n, std::vector<Cyclotomic>(static_cast<size_t>(n) * n)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.at(i, j) = m.at(idx[i], idx[j]);
    return out;
}

Cyclotomic trace(const ExactMatrix &m)
{
    Cyclotomic t(0);
    for (int i = 0; i < m.n; ++i)
        t += m.at(i, i);
    return t;
}

int exact_rank(const ExactMatrix &m)
{
    ExactMatrix a = m;
    const int n = a.n;
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
        int piv = -1;
        for (int r = rank; r < n; ++r)
            if (!a.at(r, col).is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0)
            continue;
        if (piv != rank)
            for (int j = 0; j < n; ++j)
                std::swap(a.at(piv, j), a.at(rank, j));
        Cyclotomic inv = a.at(rank, col).inverse();
        for (int r = rank + 1; r < n; ++r) {
            if (a.at(r, col).is_zero())
                continue;
            Cyclotomic factor = a.at(r, col) * inv;
            for (int j = col; j < n; ++j)
                if (!a.at(rank, j).is_zero())
                    a.at(r, j) -= factor * a.at(rank, j);
        }
        ++rank;
    }
    return rank;
}

int approx_rank(const ComplexMatrix &m, double rel_tol)
{
    std::vector<std::complex<double>> a = m.a;
    const int n = m.n;
    auto at = [&](int i, int j) -> std::complex<double> & { return a[static_cast<size_t>(i) * n + j]; };
    std::vector<char> row_used(n, 0), col_used(n, 0);
    double first = 0;
    int rank = 0;
    for (int step = 0; step < n; ++step) {
        int pr = -1, pc = -1;
        double best = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!row_used[i] && !col_used[j] && std::abs(at(i, j)) > best) {
                    best = std::abs(at(i, j));
                    pr = i;
                    pc = j;
                }
        if (pr < 0)
            break;
        if (step == 0)
            first = best;
        if (best <= rel_tol * first)
            break;
        row_used[pr] = col_used[pc] = 1;
        ++rank;
        for (int i = 0; i < n; ++i) {
            if (row_used[i])
                continue;
            std::complex<double> f = at(i, pc) / at(pr, pc);
            for (int j = 0; j < n; ++j)
                at(i, j) -= f * at(pr, j);
        }
    }
    return rank;
}

std::vector<int> SurfaceColorings::indices_of(const HomotopyClass &x) const
{
    std::vector<int> out;
    for (size_t i = 0; i < basis.size(); ++i)
        if (cls[i] == x)
            out.push_back(static_cast<int>(i));
    return out;
}

SurfaceColorings surface_colorings(const Surface2 &s, const FusionData &f, const std::vector<int> &tag_edges)
{
    Graduator grad = compute_graduator(f);
    Canonicalizer canon(s, grad.group, false, tag_edges);
    SurfaceColorings sc;
    sc.basis = enumerate_colorings(s, f);
    std::set<HomotopyClass> seen;
    for (const Coloring &c : sc.basis) {
        sc.cls.push_back(canon.canonical(project(c, grad)));
        seen.insert(sc.cls.back());
    }
    sc.classes.assign(seen.begin(), seen.end());
    std::sort(sc.classes.begin(), sc.classes.end(), [](const HomotopyClass &a, const HomotopyClass &b) {
        return std::tie(a.tag, a.rep) < std::tie(b.tag, b.rep);
    });
    return sc;
}

namespace {

int surface_label(const FusionData &f, const EdgeRef &r, int label3d)
{
    return r.sign > 0 ? label3d : f.dual(label3d);
}

Cyclotomic contraction_weight(const Surface2 &s, const FusionData &f, const Coloring &c)
{
    Cyclotomic w(1);
    for (int l : c)
        w *= f.dim(l);
    for (const TriangleClass &tc : s.triangles()) {
        int l[3];
        for (int k = 0; k < 3; ++k)
            l[k] = tc.edges[k].sign > 0 ? c[tc.edges[k].cls] : f.dual(c[tc.edges[k].cls]);
        w *= f.theta_inv(l[0], l[1], l[2]);
    }
    return w;
}

} // namespace

ExactMatrix cobordism_matrix(const Prism &m, const Surface2 &s, const FusionData &f,
                             const std::vector<Coloring> &basis, const SumOptions &opt)
{
    const Triangulation &t = m.tri;
    const int E = s.edge_count();
    WeightedSum w;
    w.edge_dim.assign(t.edge_count(), 1);
    for (int e = 0; e < t.edge_count(); ++e)
        if (t.edge_on_boundary(e))
            w.edge_dim[e] = 0;
    w.face_theta.assign(t.triangle_count(), 1);
    for (int fc = 0; fc < t.triangle_count(); ++fc)
        if (t.triangle(fc).boundary)
            w.face_theta[fc] = 0;
    int boundary_vertices = 0;
    for (int v = 0; v < t.vertex_count(); ++v)
        boundary_vertices += t.vertex_on_boundary(v);
    w.delta_power = -t.vertex_count() + boundary_vertices - s.vertex_count();
    for (const EdgeRef &r : m.bottom_edges)
        w.key_edges.push_back(r.cls);
    for (const EdgeRef &r : m.top_edges)
        w.key_edges.push_back(r.cls);

    std::map<Coloring, int> index;
    for (size_t i = 0; i < basis.size(); ++i)
        index.emplace(basis[i], static_cast<int>(i));
    std::vector<Cyclotomic> omega;
    for (const Coloring &c : basis)
        omega.push_back(contraction_weight(s, f, c));

    const int n = static_cast<int>(basis.size());
    ExactMatrix out{n, std::vector<Cyclotomic>(static_cast<size_t>(n) * n)};
    for (const KeyedValue &kv : weighted_sum(t, f, nullptr, w, opt)) {
        Coloring in(E), outc(E);
        for (int e = 0; e < E; ++e) {
            in[e] = surface_label(f, m.bottom_edges[e], kv.key_labels[e]);
            outc[e] = surface_label(f, m.top_edges[e], kv.key_labels[E + e]);
        }
        auto i = index.find(in), j = index.find(outc);
        if (i == index.end() || j == index.end())
            continue;
        out.at(i->second, j->second) += kv.value * omega[j->second];
    }
    return out;
}

ExactMatrix full_cylinder(const Surface2 &s, const FusionData &f, const SurfaceColorings &sc,
                          const SumOptions &opt, int layers)
{
    Branching b = find_branching(s);
    return cobordism_matrix(prism_layers(s, b, layers), s, f, sc.basis, opt);
}

std::vector<std::complex<double>> symmetric_scaling(const Surface2 &s, const FusionData &f,
                                                    const std::vector<Coloring> &basis)
{
    std::vector<std::complex<double>> out;
    for (const Coloring &c : basis) {
        std::complex<double> d = 1;
        for (int l : c)
            d *= std::sqrt(f.dim(l).to_complex());
        for (const TriangleClass &tc : s.triangles()) {
            int l[3];
            for (int k = 0; k < 3; ++k)
                l[k] = tc.edges[k].sign > 0 ? c[tc.edges[k].cls] : f.dual(c[tc.edges[k].cls]);
            d /= std::sqrt(f.theta(l[0], l[1], l[2]).to_complex());
        }
        out.push_back(d);
    }
    return out;
}

namespace {

CylinderOperator make_operator(const Surface2 &s, const FusionData &f, const SurfaceColorings &sc,
                               const ExactMatrix &full, const HomotopyClass &x, Gauge gauge)
{
    CylinderOperator p;
    p.gauge = gauge;
    p.space.cls = x;
    std::vector<int> idx = sc.indices_of(x);
    for (int i : idx)
        p.space.basis.push_back(sc.basis[i]);
    p.exact = submatrix(full, idx);
    if (gauge == Gauge::Symmetric) {
        std::vector<std::complex<double>> d = symmetric_scaling(s, f, p.space.basis);
        const int n = p.exact.n;
        p.approx.n = n;
        p.approx.a.resize(static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                p.approx.a[static_cast<size_t>(i) * n + j] = d[i] * p.exact.at(i, j).to_complex() / d[j];
    }
    return p;
}

} // namespace

std::vector<CylinderOperator> cylinder_operators(const Surface2 &s, const FusionData &f, Gauge gauge,
                                                 const SumOptions &opt)
{
    SurfaceColorings sc = surface_colorings(s, f, opt.tag_edges);
    ExactMatrix full = full_cylinder(s, f, sc, opt);
    std::vector<CylinderOperator> out;
    for (const HomotopyClass &x : sc.classes)
        out.push_back(make_operator(s, f, sc, full, x, gauge));
    return out;
}

CylinderOperator cylinder_operator(const Surface2 &s, const FusionData &f, const HomotopyClass &x, Gauge gauge,
                                   const SumOptions &opt)
{
    SurfaceColorings sc = surface_colorings(s, f, opt.tag_edges);
    if (std::find(sc.classes.begin(), sc.classes.end(), x) == sc.classes.end())
        throw Error(Errc::ClassMismatch, "class has no colouring on this surface");
    return make_operator(s, f, sc, full_cylinder(s, f, sc, opt), x, gauge);
}

int block_rank(const CylinderOperator &p)
{
    int rank = exact_rank(p.exact);
    Cyclotomic tr = trace(p.exact);
    if (!tr.is_rational() || tr.rational_value() != Rational(rank))
        throw Error(Errc::RankTraceMismatch,
                    "rank " + std::to_string(rank) + " but trace " + tr.to_string());
    if (p.gauge == Gauge::Symmetric && approx_rank(p.approx) != rank)
        throw Error(Errc::RankTraceMismatch, "symmetric gauge rank disagrees with the exact rank");
    return rank;
}

BlockDims block_dims(const Surface2 &s, const FusionData &f, const SumOptions &opt)
{
    SurfaceColorings sc = surface_colorings(s, f, opt.tag_edges);
    ExactMatrix full = full_cylinder(s, f, sc, opt);
    BlockDims out;
    for (const HomotopyClass &x : sc.classes) {
        int r = block_rank(make_operator(s, f, sc, full, x, Gauge::Exact));
        out.blocks.emplace_back(x, r);
        out.total += r;
    }
    out.full_rank = exact_rank(full);
    return out;
}

std::vector<std::pair<HomotopyClass, Cyclotomic>> dims_via_trace(const Surface2 &s, const FusionData &f,
                                                                  const SumOptions &opt)
{
    Graduator grad = compute_graduator(f);
    Branching b = find_branching(s);
    Prism m = mapping_torus_identity(s, b);
    Canonicalizer canon(s, grad.group, false, opt.tag_edges);
    std::map<HomotopyClass, Cyclotomic> by;
    for (const HomotopyClass &x : homotopy_classes(s, grad.group, {}, opt.tag_edges))
        by.emplace(x, Cyclotomic(0));
    SumOptions inner = opt;
    inner.tag_edges.clear();
    for (const ClassValue &cv : htv(m.tri, f, inner)) {
        GammaColoring restricted(s.edge_count());
        for (int e = 0; e < s.edge_count(); ++e) {
            const EdgeRef &r = m.bottom_edges[e];
            restricted[e] = r.sign > 0 ? cv.cls.rep[r.cls] : grad.group.inv(cv.cls.rep[r.cls]);
        }
        by[canon.canonical(restricted)] += cv.value;
    }
    std::vector<std::pair<HomotopyClass, Cyclotomic>> out(by.begin(), by.end());
    std::sort(out.begin(), out.end(),
              [](const auto &a, const auto &b) { return std::tie(a.first.tag, a.first.rep) < std::tie(b.first.tag, b.first.rep); });
    for (const auto &[x, v] : out)
        if (!v.is_rational() || v.rational_value().get_den() != 1 || v.rational_value() < 0)
            throw Error(Errc::NonIntegerDimension, "trace formula gave " + v.to_string());
    return out;
}

} // namespace tv
