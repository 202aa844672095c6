#include <sstream>

#include <json.hpp>

#include "tv/error.hpp"
#include "tv/triangulation.hpp"

namespace tv {

namespace {

struct Token {
    std::string text;
    int column;
};

std::vector<Token> tokenize(const std::string &line)
{
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#')
            break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#')
            ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

int to_int(const Token &t, int line)
{
    size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(t.text, &pos);
    } catch (const std::exception &) {
        pos = 0;
    }
    if (pos != t.text.size() || t.text.empty())
        throw ParseError(line, t.column, "expected an integer, got '" + t.text + "'");
    return static_cast<int>(v);
}

} // namespace

GluingSpec parse_gluing_spec(const std::string &text)
{
    GluingSpec spec;
    bool have_dim = false, have_count = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<Token> tok = tokenize(line);
        if (tok.empty())
            continue;
        const std::string &kw = tok[0].text;
        if (kw == "dim") {
            if (tok.size() != 2)
                throw ParseError(lineno, tok[0].column, "usage: dim <2|3>");
            spec.dim = to_int(tok[1], lineno);
            if (spec.dim != 2 && spec.dim != 3)
                throw ParseError(lineno, tok[1].column, "dimension must be 2 or 3");
            have_dim = true;
        } else if (kw == "tets" || kw == "tris") {
            if (!have_dim)
                throw ParseError(lineno, tok[0].column, "'dim' must come first");
            if ((kw == "tets") != (spec.dim == 3))
                throw ParseError(lineno, tok[0].column, "'" + kw + "' does not match the dimension");
            if (tok.size() != 2)
                throw ParseError(lineno, tok[0].column, "usage: " + kw + " <count>");
            spec.simplex_count = to_int(tok[1], lineno);
            if (spec.simplex_count <= 0)
                throw ParseError(lineno, tok[1].column, "simplex count must be positive");
            have_count = true;
        } else if (kw == "glue") {
            if (!have_count)
                throw ParseError(lineno, tok[0].column, "simplex count must precede gluings");
            size_t want = 5 + spec.dim + 1;
            if (tok.size() != want)
                throw ParseError(lineno, tok[0].column,
                                 "glue needs " + std::to_string(want - 1) + " integers");
            Gluing g;
            g.a = to_int(tok[1], lineno);
            g.fa = to_int(tok[2], lineno);
            g.b = to_int(tok[3], lineno);
            g.fb = to_int(tok[4], lineno);
            for (size_t i = 5; i < tok.size(); ++i)
                g.perm.push_back(to_int(tok[i], lineno));
            spec.gluings.push_back(g);
        } else {
            throw ParseError(lineno, tok[0].column, "unknown keyword '" + kw + "'");
        }
    }
    if (!have_dim || !have_count)
        throw ParseError(lineno + 1, 1, "missing 'dim' or simplex count");
    validate_gluing_spec(spec);
    return spec;
}

GluingSpec parse_gluing_spec_json(const std::string &text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(1, static_cast<int>(e.byte), e.what());
    }
    GluingSpec spec;
    try {
        spec.dim = j.at("dim").get<int>();
        spec.simplex_count = j.at("simplices").get<int>();
        for (const auto &g : j.at("gluings")) {
            Gluing x;
            x.a = g.at("a").get<int>();
            x.fa = g.at("fa").get<int>();
            x.b = g.at("b").get<int>();
            x.fb = g.at("fb").get<int>();
            x.perm = g.at("perm").get<std::vector<int>>();
            spec.gluings.push_back(x);
        }
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(1, 1, e.what());
    }
    validate_gluing_spec(spec);
    return spec;
}

std::string serialize_gluing_spec(const GluingSpec &spec)
{
    std::ostringstream out;
    out << "dim " << spec.dim << "\n";
    out << (spec.dim == 3 ? "tets " : "tris ") << spec.simplex_count << "\n";
    for (const Gluing &g : spec.gluings) {
        out << "glue " << g.a << " " << g.fa << " " << g.b << " " << g.fb;
        for (int x : g.perm)
            out << " " << x;
        out << "\n";
    }
    return out.str();
}

std::string serialize_gluing_spec_json(const GluingSpec &spec)
{
    nlohmann::json j;
    j["dim"] = spec.dim;
    j["simplices"] = spec.simplex_count;
    j["gluings"] = nlohmann::json::array();
    for (const Gluing &g : spec.gluings)
        j["gluings"].push_back({{"a", g.a}, {"fa", g.fa}, {"b", g.b}, {"fb", g.fb}, {"perm", g.perm}});
    return j.dump();
}

} // namespace tv
