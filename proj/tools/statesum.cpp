#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tv/error.hpp"
#include "tv/json_io.hpp"
#include "tv/statesum.hpp"
#include "tv/tqft.hpp"

using nlohmann::json;
using namespace tv;

namespace {

struct Config {
    std::string manifold, surface, category = "zn:2", mode = "exact", format = "json";
    int workers = 0;
    int orientation = 1;
    std::string chain, check, diff;
    int N = 2, pmax = 8;
    std::vector<int> ranks;
};

struct OutputMode {
    bool approx = false;
    double tol = 1e-9;
};

OutputMode parse_mode(const std::string &m)
{
    OutputMode out;
    if (m == "exact")
        return out;
    if (m.rfind("approx", 0) == 0) {
        out.approx = true;
        if (m.size() > 6) {
            if (m[6] != ':')
                throw Error(Errc::BadSelector, "mode must be exact or approx[:tol]");
            try {
                out.tol = std::stod(m.substr(7));
            } catch (const std::exception &) {
                throw Error(Errc::BadSelector, "bad tolerance in mode " + m);
            }
        }
        return out;
    }
    throw Error(Errc::BadSelector, "mode must be exact or approx[:tol]");
}

std::string read_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::BadSelector, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<int> int_list(const std::string &s)
{
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception &) {
            throw Error(Errc::BadSelector, "expected integers, got '" + s + "'");
        }
    }
    return out;
}

struct Built {
    Triangulation tri;
    std::vector<int> tag_edges;
};

Built parse_manifold(const std::string &sel)
{
    if (sel == "s3")
        return {Triangulation::build(sphere_s3()), {}};
    if (sel == "t3")
        return {Triangulation::build(three_torus()), {0, 1, 5}};
    if (sel.rfind("lens:", 0) == 0) {
        std::vector<int> pq = int_list(sel.substr(5));
        if (pq.size() != 2)
            throw Error(Errc::BadSelector, "lens selector is lens:p,q");
        return {Triangulation::build(lens(pq[0], pq[1])), {0}};
    }
    if (sel.rfind("file:", 0) == 0) {
        std::string path = sel.substr(5);
        std::string text = read_file(path);
        bool is_json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
        return {Triangulation::build(is_json ? parse_gluing_spec_json(text) : parse_gluing_spec(text)), {}};
    }
    if (sel == "torus2")
        return {Triangulation::build(surface_torus()), {0, 1}};
    if (sel.rfind("sigma_g:", 0) == 0) {
        std::vector<int> g = int_list(sel.substr(8));
        if (g.size() != 1)
            throw Error(Errc::BadSelector, "surface selector is sigma_g:g");
        if (g[0] == 1)
            return {Triangulation::build(surface_torus()), {0, 1}};
        return {Triangulation::build(surface_genus(g[0])), {}};
    }
    throw Error(Errc::BadSelector, "unknown manifold selector '" + sel + "'");
}

json scalar_out(const Cyclotomic &c, const OutputMode &m)
{
    if (m.approx)
        return scalar_to_json(Scalar(ApproxComplex{c.to_complex(), m.tol}));
    return scalar_to_json(Scalar(c));
}

std::string pretty(const Cyclotomic &c)
{
    std::complex<double> z = c.to_complex();
    std::ostringstream os;
    os << c.to_string() << "  ~ " << std::setprecision(12) << z.real();
    if (std::abs(z.imag()) > 1e-12)
        os << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

std::string tag_string(const std::vector<int> &tag)
{
    std::string s = "(";
    for (size_t i = 0; i < tag.size(); ++i)
        s += (i ? "," : "") + std::to_string(tag[i]);
    return s + ")";
}

void emit(const json &j, const std::string &format)
{
    if (format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << j.dump() << "\n";
}

int cmd_compute(const std::string &what, const Config &cfg)
{
    OutputMode mode = parse_mode(cfg.mode);
    Built m = parse_manifold(cfg.manifold);
    if (m.tri.dim() != 3 || !m.tri.closed())
        throw Error(Errc::BadSelector, "compute needs a closed 3-manifold");
    auto f = parse_category(cfg.category);
    SumOptions opt;
    opt.orientation = cfg.orientation;
    opt.workers = cfg.workers;
    opt.tag_edges = m.tag_edges;

    json out = {{"invariant", what}, {"category", cfg.category}, {"manifold", cfg.manifold}};
    Cyclotomic value;
    std::vector<ClassValue> blocks;
    if (what == "tv") {
        value = turaev_viro(m.tri, *f, opt);
    } else if (what == "htv") {
        blocks = htv(m.tri, *f, opt);
        for (const ClassValue &b : blocks)
            value += b.value;
    } else if (what == "yetter") {
        Graduator grad = compute_graduator(*f);
        EdgeCharacterChain chain;
        if (cfg.chain.empty()) {
            std::vector<Character> chars = characters(grad.group);
            int trivial = 0;
            for (size_t k = 0; k < chars.size(); ++k)
                if (std::all_of(chars[k].exps.begin(), chars[k].exps.end(), [](long e) { return e == 0; }))
                    trivial = static_cast<int>(k);
            chain.assign(m.tri.edge_count(), trivial);
        } else {
            chain = int_list(cfg.chain);
        }
        YetterResult y = yetter(m.tri, *f, chain, opt);
        if (y.direct != y.factored)
            throw Error(Errc::Internal, "Yetter direct and factored sums disagree");
        value = y.direct;
    } else {
        throw Error(Errc::BadSelector, "invariant must be tv, htv or yetter");
    }
    out["value"] = scalar_out(value, mode);
    json jb = json::array();
    for (const ClassValue &b : blocks)
        jb.push_back({{"class_tag", class_tag_json(b.cls)}, {"value", scalar_out(b.value, mode)}});
    out["blocks"] = jb;

    if (cfg.format == "pretty") {
        std::cout << what << "(" << cfg.manifold << ", " << cfg.category << ") = " << pretty(value) << "\n";
        for (const ClassValue &b : blocks)
            std::cout << "  " << tag_string(b.cls.tag) << "  " << pretty(b.value) << "\n";
    } else if (cfg.format == "csv") {
        std::cout << "class_tag,value,re,im\n";
        std::cout << "total,\"" << value.to_string() << "\"," << value.to_complex().real() << ","
                  << value.to_complex().imag() << "\n";
        for (const ClassValue &b : blocks)
            std::cout << "\"" << tag_string(b.cls.tag) << "\",\"" << b.value.to_string() << "\","
                      << b.value.to_complex().real() << "," << b.value.to_complex().imag() << "\n";
    } else {
        emit(out, cfg.format);
    }
    return 0;
}

int cmd_dims(const Config &cfg)
{
    Built s = parse_manifold(cfg.surface);
    if (s.tri.dim() != 2)
        throw Error(Errc::BadSelector, "dims needs a surface selector (torus2, sigma_g:g, file:)");
    auto f = parse_category(cfg.category);
    SumOptions opt;
    opt.workers = cfg.workers;
    opt.tag_edges = s.tag_edges;
    BlockDims d = block_dims(s.tri, *f, opt);
    if (cfg.check == "trace") {
        auto tr = dims_via_trace(s.tri, *f, opt);
        if (tr.size() != d.blocks.size())
            throw Error(Errc::Internal, "trace formula found a different class set");
        for (size_t i = 0; i < tr.size(); ++i)
            if (!(tr[i].first == d.blocks[i].first) || tr[i].second != Cyclotomic(d.blocks[i].second))
                throw Error(Errc::Internal, "trace formula disagrees with block rank for class " +
                                                tag_string(d.blocks[i].first.tag));
    } else if (!cfg.check.empty()) {
        throw Error(Errc::BadSelector, "--check accepts only 'trace'");
    }
    if (d.total != d.full_rank)
        throw Error(Errc::Internal, "block ranks do not add up to the full cylinder rank");
    json out = {{"surface", cfg.surface}, {"category", cfg.category}, {"total", d.total}};
    json jb = json::array();
    for (const auto &[x, n] : d.blocks)
        jb.push_back({{"class_tag", class_tag_json(x)}, {"dim", n}});
    out["blocks"] = jb;
    if (cfg.format == "pretty") {
        for (const auto &[x, n] : d.blocks)
            std::cout << tag_string(x.tag) << "  " << n << "\n";
        std::cout << "total " << d.total << "\n";
    } else if (cfg.format == "csv") {
        std::cout << "class_tag,dim\n";
        for (const auto &[x, n] : d.blocks)
            std::cout << "\"" << tag_string(x.tag) << "\"," << n << "\n";
    } else {
        emit(out, cfg.format);
    }
    return 0;
}

// Reference order of the eight 3-torus classes, as graduator indices on edges a, b, c.
const std::vector<std::vector<int>> kT3Order = {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0},
                                                {1, 0, 1}, {1, 1, 0}, {0, 1, 1}, {1, 1, 1}};

json table_lens_zn(const Config &cfg, const OutputMode &mode)
{
    json rows = json::array();
    auto f = parse_category("zn:" + std::to_string(cfg.N));
    for (int p = 2; p <= cfg.pmax; ++p)
        for (int q = 1; q < p; ++q) {
            if (std::gcd(p, q) != 1)
                continue;
            Triangulation t = Triangulation::build(lens(p, q));
            SumOptions opt;
            opt.workers = cfg.workers;
            opt.tag_edges = {0};
            std::vector<ClassValue> h = htv(t, *f, opt);
            Cyclotomic total;
            json blocks = json::array();
            for (const ClassValue &b : h) {
                total += b.value;
                blocks.push_back(scalar_out(b.value, mode));
            }
            if (total != oracle_dw_lens(cfg.N, 1, p, q))
                throw Error(Errc::Internal, "lens state sum disagrees with the closed form");
            rows.push_back({{"p", p}, {"q", q}, {"tv", scalar_out(total, mode)}, {"htv", blocks}});
        }
    return {{"table", "lens-zn"}, {"N", cfg.N}, {"rows", rows}};
}

json table_t3_uq(const Config &cfg, const OutputMode &mode)
{
    json rows = json::array();
    Triangulation t = Triangulation::build(three_torus());
    std::vector<int> ranks = cfg.ranks.empty() ? std::vector<int>{3, 4, 5, 6} : cfg.ranks;
    for (int r : ranks) {
        auto f = uq_sl2(r);
        SumOptions opt;
        opt.workers = cfg.workers;
        opt.tag_edges = {0, 1, 5};
        std::vector<ClassValue> h = htv(t, *f, opt);
        Cyclotomic total;
        json blocks = json::array();
        for (const auto &tag : kT3Order)
            for (const ClassValue &b : h)
                if (b.cls.tag == tag)
                    blocks.push_back(scalar_out(b.value, mode));
        for (const ClassValue &b : h)
            total += b.value;
        rows.push_back({{"r", r}, {"tv", scalar_out(total, mode)}, {"htv", blocks}});
    }
    return {{"table", "t3-uq"}, {"rows", rows}};
}

json table_torus_dims(const Config &cfg)
{
    json rows = json::array();
    Triangulation s = Triangulation::build(surface_torus());
    std::vector<int> ranks = cfg.ranks.empty() ? std::vector<int>{3, 4, 5, 6} : cfg.ranks;
    for (int r : ranks) {
        auto f = uq_sl2(r);
        SumOptions opt;
        opt.workers = cfg.workers;
        opt.tag_edges = {0, 1};
        BlockDims d = block_dims(s, *f, opt);
        json dims = json::array();
        for (const auto &b : d.blocks)
            dims.push_back(b.second);
        rows.push_back({{"r", r}, {"dims", dims}, {"total", d.total}});
    }
    return {{"table", "torus-dims"}, {"rows", rows}};
}

bool json_values_equal(const json &a, const json &b)
{
    if (a.is_object() && (a.contains("order") || a.contains("re")) && b.is_object()) {
        Scalar x = scalar_from_json(a), y = scalar_from_json(b);
        if (x.mode() == Mode::Exact && y.mode() == Mode::Exact)
            return x.exact() == y.exact();
        return std::abs(x.to_approx().v - y.to_approx().v) <= 1e-9;
    }
    if (a.is_array() && b.is_array()) {
        if (a.size() != b.size())
            return false;
        for (size_t i = 0; i < a.size(); ++i)
            if (!json_values_equal(a[i], b[i]))
                return false;
        return true;
    }
    if (a.is_object() && b.is_object()) {
        if (a.size() != b.size())
            return false;
        for (auto it = a.begin(); it != a.end(); ++it)
            if (!b.contains(it.key()) || !json_values_equal(it.value(), b.at(it.key())))
                return false;
        return true;
    }
    return a == b;
}

int cmd_table(const std::string &name, const Config &cfg)
{
    OutputMode mode = parse_mode(cfg.mode);
    json table;
    if (name == "lens-zn")
        table = table_lens_zn(cfg, mode);
    else if (name == "t3-uq")
        table = table_t3_uq(cfg, mode);
    else if (name == "torus-dims")
        table = table_torus_dims(cfg);
    else
        throw Error(Errc::BadSelector, "table must be lens-zn, t3-uq or torus-dims");

    if (!cfg.diff.empty()) {
        json golden;
        try {
            golden = json::parse(read_file(cfg.diff));
        } catch (const json::exception &e) {
            throw Error(Errc::ParseError, std::string("golden file: ") + e.what());
        }
        const json &want = golden.at("rows"), &got = table.at("rows");
        int bad = 0;
        for (size_t i = 0; i < std::max(want.size(), got.size()); ++i) {
            if (i >= want.size() || i >= got.size() || !json_values_equal(want[i], got[i])) {
                std::cerr << "row " << i << ": golden " << (i < want.size() ? want[i].dump() : "-") << "\n"
                          << "       got    " << (i < got.size() ? got[i].dump() : "-") << "\n";
                ++bad;
            }
        }
        if (bad)
            throw Error(Errc::GoldenMismatch, std::to_string(bad) + " row(s) differ from " + cfg.diff);
        std::cerr << "golden " << cfg.diff << ": " << got.size() << " rows match\n";
    }

    if (cfg.format == "pretty") {
        for (const json &row : table.at("rows"))
            std::cout << row.dump() << "\n";
    } else {
        emit(table, cfg.format);
    }
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Turaev-Viro, homotopical TV, Yetter and HQFT block computations"};
    app.require_subcommand(1);
    Config cfg;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--category", cfg.category, "zn:N[,t=T] | uqsl2:r[,s=S] | group:<file>");
        sub->add_option("--mode", cfg.mode, "exact | approx[:tol]");
        sub->add_option("--format", cfg.format, "json | csv | pretty")
            ->check(CLI::IsMember({"json", "csv", "pretty"}));
        sub->add_option("--workers", cfg.workers, "worker threads (overrides STATESUM_WORKERS)");
    };

    std::string invariant, table;
    CLI::App *compute = app.add_subcommand("compute", "tv | htv | yetter of a closed 3-manifold");
    compute->add_option("invariant", invariant)->required()->check(CLI::IsMember({"tv", "htv", "yetter"}));
    compute->add_option("--manifold", cfg.manifold, "s3 | t3 | lens:p,q | file:<path>")->required();
    compute->add_option("--orientation", cfg.orientation, "1 or -1")->check(CLI::IsMember({1, -1}));
    compute->add_option("--chain", cfg.chain, "character index per edge class, comma separated (yetter)");
    common(compute);

    CLI::App *dims = app.add_subcommand("dims", "HQFT block dimensions of a surface");
    dims->add_option("--surface", cfg.surface, "torus2 | sigma_g:g | file:<path>")->required();
    dims->add_option("--check", cfg.check, "trace: compare with the mapping-torus trace formula");
    common(dims);

    CLI::App *tab = app.add_subcommand("table", "reproduce a reference table");
    tab->add_option("name", table)->required();
    tab->add_option("--N", cfg.N, "group order for lens-zn");
    tab->add_option("--pmax", cfg.pmax, "largest p for lens-zn");
    tab->add_option("--r", cfg.ranks, "ranks for t3-uq / torus-dims");
    tab->add_option("--diff", cfg.diff, "compare against a golden JSON file");
    common(tab);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*compute)
            return cmd_compute(invariant, cfg);
        if (*dims)
            return cmd_dims(cfg);
        return cmd_table(table, cfg);
    } catch (const ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_domain_error(e.code()) ? 2 : 1;
    } catch (const std::exception &e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}
