#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace tv {

using Rational = mpq_class;

// Element of Q(zeta_m) in the power basis 1, z, ..., z^(phi(m)-1),
// reduced modulo the m-th cyclotomic polynomial.
class Cyclotomic {
public:
    Cyclotomic();  // zero in Q
    explicit Cyclotomic(const Rational &q, int order = 1);
    Cyclotomic(long v) : Cyclotomic(Rational(v)) {}
    Cyclotomic(int v) : Cyclotomic(Rational(v)) {}

    static Cyclotomic root_of_unity(int m, long k);
    // Reduces an arbitrary polynomial in zeta_m.
    static Cyclotomic from_poly(int m, std::vector<Rational> poly);

    int order() const { return order_; }
    const std::vector<Rational> &coeffs() const { return coeffs_; }
    bool is_zero() const;
    bool is_rational() const;
    Rational rational_value() const;  // throws unless is_rational()

    Cyclotomic in_order(int m) const;  // embeds into Q(zeta_m); order() must divide m
    Cyclotomic conj() const;           // zeta -> zeta^-1
    Cyclotomic inverse() const;
    Cyclotomic pow(long e) const;
    std::complex<double> to_complex() const;

    Cyclotomic &operator+=(const Cyclotomic &b);
    Cyclotomic &operator-=(const Cyclotomic &b);
    Cyclotomic &operator*=(const Cyclotomic &b);
    Cyclotomic &operator/=(const Cyclotomic &b);
    Cyclotomic operator-() const;

    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic &b) { return a += b; }
    friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic &b) { return a -= b; }
    friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic &b) { return a *= b; }
    friend Cyclotomic operator/(Cyclotomic a, const Cyclotomic &b) { return a /= b; }
    friend bool operator==(const Cyclotomic &a, const Cyclotomic &b);
    friend bool operator!=(const Cyclotomic &a, const Cyclotomic &b) { return !(a == b); }

    // "p/q" coefficient strings, e.g. "1/2 - z^2 (z = zeta_12)"
    std::string to_string() const;

private:
    int order_;
    std::vector<Rational> coeffs_;  // length phi(order_)

    void reduce(std::vector<Rational> &&poly);
};

int euler_phi(int m);
// Integer coefficients of the m-th cyclotomic polynomial, lowest degree first. Cached.
const std::vector<long> &cyclotomic_polynomial(int m);

struct ApproxComplex {
    std::complex<double> v;
    double tol = 1e-9;

    bool approx_equal(const ApproxComplex &b) const { return std::abs(v - b.v) <= tol; }
};

enum class Mode { Exact, Approx };

// Either an exact cyclotomic value or a tolerance-tagged complex number.
// Arithmetic between the two modes throws MixedMode.
class Scalar {
public:
    Scalar() : val_(Cyclotomic()) {}
    Scalar(Cyclotomic c) : val_(std::move(c)) {}
    Scalar(ApproxComplex a) : val_(a) {}

    Mode mode() const { return val_.index() == 0 ? Mode::Exact : Mode::Approx; }
    const Cyclotomic &exact() const;
    const ApproxComplex &approx() const;
    ApproxComplex to_approx(double tol = 1e-9) const;

    Scalar &operator+=(const Scalar &b);
    Scalar &operator-=(const Scalar &b);
    Scalar &operator*=(const Scalar &b);
    Scalar &operator/=(const Scalar &b);
    friend Scalar operator+(Scalar a, const Scalar &b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar &b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar &b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar &b) { return a /= b; }
    friend bool operator==(const Scalar &a, const Scalar &b);

private:
    std::variant<Cyclotomic, ApproxComplex> val_;
};

std::string rational_string(const Rational &q);
Rational parse_rational(const std::string &s);

} // namespace tv
