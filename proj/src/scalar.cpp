#include "tv/scalar.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "tv/error.hpp"

namespace tv {

namespace {

using Poly = std::vector<Rational>;

void trim(Poly &p)
{
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

std::vector<long> poly_div_exact(std::vector<long> num, const std::vector<long> &den)
{
    // den is monic
    int dn = static_cast<int>(den.size()) - 1;
    int nn = static_cast<int>(num.size()) - 1;
    std::vector<long> q(nn - dn + 1, 0);
    for (int i = nn; i >= dn; --i) {
        long c = num[i];
        q[i - dn] = c;
        if (c != 0)
            for (int j = 0; j <= dn; ++j)
                num[i - dn + j] -= c * den[j];
    }
    return q;
}

// r = a mod b, q = a div b over Q
void poly_divmod(const Poly &a, const Poly &b, Poly &q, Poly &r)
{
    r = a;
    trim(r);
    int db = static_cast<int>(b.size()) - 1;
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, Rational(0));
    Rational lead = b.back();
    while (!r.empty() && static_cast<int>(r.size()) - 1 >= db) {
        int dr = static_cast<int>(r.size()) - 1;
        Rational c = r.back() / lead;
        q[dr - db] = c;
        for (int j = 0; j <= db; ++j)
            r[dr - db + j] -= c * b[j];
        trim(r);
    }
}

Poly poly_mul(const Poly &a, const Poly &b)
{
    if (a.empty() || b.empty())
        return {};
    Poly out(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        for (size_t j = 0; j < b.size(); ++j)
            if (b[j] != 0)
                out[i + j] += a[i] * b[j];
    }
    return out;
}

Poly poly_sub(const Poly &a, const Poly &b)
{
    Poly out(std::max(a.size(), b.size()), Rational(0));
    for (size_t i = 0; i < a.size(); ++i)
        out[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i)
        out[i] -= b[i];
    trim(out);
    return out;
}

int lcm_order(int a, int b)
{
    return std::lcm(a, b);
}

} // namespace

int euler_phi(int m)
{
    int result = m;
    int n = m;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0)
                n /= p;
            result -= result / p;
        }
    }
    if (n > 1)
        result -= result / n;
    return result;
}

const std::vector<long> &cyclotomic_polynomial(int m)
{
    static std::mutex mu;
    static std::map<int, std::vector<long>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(m);
        if (it != cache.end())
            return it->second;
    }
    std::vector<long> num(m + 1, 0);
    num[0] = -1;
    num[m] = 1;
    for (int d = 1; d < m; ++d)
        if (m % d == 0)
            num = poly_div_exact(num, cyclotomic_polynomial(d));
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(m, std::move(num)).first->second;
}

Cyclotomic::Cyclotomic() : order_(1), coeffs_(1, Rational(0)) {}

Cyclotomic::Cyclotomic(const Rational &q, int order) : order_(order), coeffs_(euler_phi(order), Rational(0))
{
    coeffs_[0] = q;
    coeffs_[0].canonicalize();
}

Cyclotomic Cyclotomic::root_of_unity(int m, long k)
{
    long e = ((k % m) + m) % m;
    Poly p(e + 1, Rational(0));
    p[e] = 1;
    return from_poly(m, std::move(p));
}

Cyclotomic Cyclotomic::from_poly(int m, std::vector<Rational> poly)
{
    Cyclotomic c;
    c.order_ = m;
    for (Rational &x : poly)
        x.canonicalize();
    c.reduce(std::move(poly));
    return c;
}

void Cyclotomic::reduce(std::vector<Rational> &&poly)
{
    int m = order_;
    if (static_cast<int>(poly.size()) > m) {
        for (size_t i = m; i < poly.size(); ++i)
            if (poly[i] != 0)
                poly[i % m] += poly[i];
        poly.resize(m);
    }
    const std::vector<long> &phi = cyclotomic_polynomial(m);
    int d = static_cast<int>(phi.size()) - 1;
    for (int i = static_cast<int>(poly.size()) - 1; i >= d; --i) {
        if (poly[i] == 0)
            continue;
        Rational c = poly[i];
        for (int j = 0; j <= d; ++j)
            if (phi[j] != 0)
                poly[i - d + j] -= c * phi[j];
    }
    poly.resize(d, Rational(0));
    coeffs_ = std::move(poly);
}

bool Cyclotomic::is_zero() const
{
    for (const auto &c : coeffs_)
        if (c != 0)
            return false;
    return true;
}

bool Cyclotomic::is_rational() const
{
    for (size_t i = 1; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0)
            return false;
    return true;
}

Rational Cyclotomic::rational_value() const
{
    if (!is_rational())
        throw Error(Errc::Internal, "value is not rational: " + to_string());
    return coeffs_[0];
}

Cyclotomic Cyclotomic::in_order(int m) const
{
    if (m == order_)
        return *this;
    if (m % order_ != 0)
        throw Error(Errc::IncompatibleOrders,
                    "cannot embed order " + std::to_string(order_) + " into " + std::to_string(m));
    int step = m / order_;
    Poly p((coeffs_.size() - 1) * step + 1, Rational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        p[i * step] = coeffs_[i];
    return from_poly(m, std::move(p));
}

Cyclotomic Cyclotomic::conj() const
{
    Poly p(order_, Rational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        p[(order_ - static_cast<int>(i)) % order_] += coeffs_[i];
    return from_poly(order_, std::move(p));
}

Cyclotomic Cyclotomic::inverse() const
{
    if (is_zero())
        throw Error(Errc::DivisionByZero, "inverse of zero");
    if (is_rational())
        return Cyclotomic(Rational(1) / coeffs_[0], order_);
    // extended Euclid: find u with a*u = 1 mod phi
    const std::vector<long> &phil = cyclotomic_polynomial(order_);
    Poly r0(phil.begin(), phil.end()), r1 = coeffs_;
    trim(r1);
    Poly s0, s1{Rational(1)};
    while (!(r1.size() == 1)) {
        Poly q, r;
        poly_divmod(r0, r1, q, r);
        Poly s = poly_sub(s0, poly_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
        if (r1.empty())
            throw Error(Errc::Internal, "cyclotomic polynomial not irreducible?");
    }
    Rational inv = Rational(1) / r1[0];
    for (auto &c : s1)
        c *= inv;
    return from_poly(order_, std::move(s1));
}

Cyclotomic Cyclotomic::pow(long e) const
{
    if (e < 0)
        return inverse().pow(-e);
    Cyclotomic result(Rational(1), order_);
    Cyclotomic base = *this;
    while (e > 0) {
        if (e & 1)
            result *= base;
        base *= base;
        e >>= 1;
    }
    return result;
}

std::complex<double> Cyclotomic::to_complex() const
{
    long double re = 0, im = 0;
    const long double two_pi = 6.283185307179586476925286766559L;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0)
            continue;
        long double c = coeffs_[i].get_d();
        long double ang = two_pi * static_cast<long double>(i) / order_;
        re += c * std::cos(ang);
        im += c * std::sin(ang);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

Cyclotomic &Cyclotomic::operator+=(const Cyclotomic &b)
{
    if (b.order_ != order_) {
        int m = lcm_order(order_, b.order_);
        *this = in_order(m);
        return *this += b.in_order(m);
    }
    for (size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] += b.coeffs_[i];
    return *this;
}

Cyclotomic &Cyclotomic::operator-=(const Cyclotomic &b)
{
    if (b.order_ != order_) {
        int m = lcm_order(order_, b.order_);
        *this = in_order(m);
        return *this -= b.in_order(m);
    }
    for (size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] -= b.coeffs_[i];
    return *this;
}

Cyclotomic &Cyclotomic::operator*=(const Cyclotomic &b)
{
    if (b.order_ != order_) {
        if (b.is_rational()) {
            Rational q = b.coeffs_[0];
            for (auto &c : coeffs_)
                c *= q;
            return *this;
        }
        int m = lcm_order(order_, b.order_);
        *this = in_order(m);
        return *this *= b.in_order(m);
    }
    if (b.is_rational()) {
        const Rational &q = b.coeffs_[0];
        for (auto &c : coeffs_)
            c *= q;
        return *this;
    }
    reduce(poly_mul(coeffs_, b.coeffs_));
    return *this;
}

Cyclotomic &Cyclotomic::operator/=(const Cyclotomic &b)
{
    return *this *= b.inverse();
}

Cyclotomic Cyclotomic::operator-() const
{
    Cyclotomic c = *this;
    for (auto &x : c.coeffs_)
        x = -x;
    return c;
}

bool operator==(const Cyclotomic &a, const Cyclotomic &b)
{
    if (a.order_ != b.order_) {
        int m = lcm_order(a.order_, b.order_);
        return a.in_order(m).coeffs_ == b.in_order(m).coeffs_;
    }
    return a.coeffs_ == b.coeffs_;
}

std::string rational_string(const Rational &q)
{
    return q.get_str();
}

Rational parse_rational(const std::string &s)
{
    Rational q;
    if (q.set_str(s, 10) != 0)
        throw Error(Errc::BadSelector, "not a rational number: " + s);
    q.canonicalize();
    return q;
}

std::string Cyclotomic::to_string() const
{
    std::ostringstream out;
    bool first = true;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        const Rational &c = coeffs_[i];
        if (c == 0)
            continue;
        Rational a = abs(c);
        if (first)
            out << (c < 0 ? "-" : "");
        else
            out << (c < 0 ? " - " : " + ");
        first = false;
        if (i == 0) {
            out << a.get_str();
        } else {
            if (a != 1)
                out << a.get_str() << "*";
            out << "z";
            if (i > 1)
                out << "^" << i;
        }
    }
    if (first)
        out << "0";
    if (!is_rational())
        out << " (z = zeta_" << order_ << ")";
    return out.str();
}

const Cyclotomic &Scalar::exact() const
{
    if (mode() != Mode::Exact)
        throw Error(Errc::MixedMode, "exact value requested from approx scalar");
    return std::get<Cyclotomic>(val_);
}

const ApproxComplex &Scalar::approx() const
{
    if (mode() != Mode::Approx)
        throw Error(Errc::MixedMode, "approx value requested from exact scalar");
    return std::get<ApproxComplex>(val_);
}

ApproxComplex Scalar::to_approx(double tol) const
{
    if (mode() == Mode::Approx)
        return approx();
    return ApproxComplex{exact().to_complex(), tol};
}

namespace {

template <class ExactOp, class ApproxOp>
void combine(std::variant<Cyclotomic, ApproxComplex> &a, const Scalar &b, const Scalar &self,
             ExactOp eop, ApproxOp aop)
{
    if (self.mode() != b.mode())
        throw Error(Errc::MixedMode, "exact and approx scalars cannot be combined");
    if (self.mode() == Mode::Exact)
        eop(std::get<Cyclotomic>(a), b.exact());
    else
        aop(std::get<ApproxComplex>(a), b.approx());
}

} // namespace

Scalar &Scalar::operator+=(const Scalar &b)
{
    combine(val_, b, *this, [](Cyclotomic &x, const Cyclotomic &y) { x += y; },
            [](ApproxComplex &x, const ApproxComplex &y) { x.v += y.v; });
    return *this;
}

Scalar &Scalar::operator-=(const Scalar &b)
{
    combine(val_, b, *this, [](Cyclotomic &x, const Cyclotomic &y) { x -= y; },
            [](ApproxComplex &x, const ApproxComplex &y) { x.v -= y.v; });
    return *this;
}

Scalar &Scalar::operator*=(const Scalar &b)
{
    combine(val_, b, *this, [](Cyclotomic &x, const Cyclotomic &y) { x *= y; },
            [](ApproxComplex &x, const ApproxComplex &y) { x.v *= y.v; });
    return *this;
}

Scalar &Scalar::operator/=(const Scalar &b)
{
    combine(val_, b, *this, [](Cyclotomic &x, const Cyclotomic &y) { x /= y; },
            [](ApproxComplex &x, const ApproxComplex &y) {
                if (y.v == std::complex<double>(0, 0))
                    throw Error(Errc::DivisionByZero, "approx division by zero");
                x.v /= y.v;
            });
    return *this;
}

bool operator==(const Scalar &a, const Scalar &b)
{
    if (a.mode() != b.mode())
        throw Error(Errc::MixedMode, "exact and approx scalars cannot be compared");
    if (a.mode() == Mode::Exact)
        return a.exact() == b.exact();
    return a.approx().approx_equal(b.approx());
}

} // namespace tv
