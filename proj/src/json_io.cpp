#include "tv/error.hpp"
#include "tv/json_io.hpp"

namespace tv {

nlohmann::json scalar_to_json(const Scalar &s)
{
    if (s.mode() == Mode::Approx) {
        const ApproxComplex &a = s.approx();
        return {{"re", a.v.real()}, {"im", a.v.imag()}};
    }
    Cyclotomic c = s.exact();
    if (c.is_rational())
        c = Cyclotomic(c.rational_value());
    nlohmann::json coeffs = nlohmann::json::array();
    for (const Rational &q : c.coeffs())
        coeffs.push_back(rational_string(q));
    return {{"order", c.order()}, {"coeffs", coeffs}};
}

Scalar scalar_from_json(const nlohmann::json &j)
{
    try {
        if (j.contains("re"))
            return Scalar(ApproxComplex{{j.at("re").get<double>(), j.at("im").get<double>()}});
        int order = j.at("order").get<int>();
        std::vector<Rational> poly;
        for (const auto &q : j.at("coeffs"))
            poly.push_back(parse_rational(q.get<std::string>()));
        return Scalar(Cyclotomic::from_poly(order, poly));
    } catch (const nlohmann::json::exception &e) {
        throw Error(Errc::ParseError, std::string("bad scalar: ") + e.what());
    }
}

nlohmann::json class_tag_json(const HomotopyClass &c)
{
    return c.tag;
}

} // namespace tv
