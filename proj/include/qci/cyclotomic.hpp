#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace qci {

using Rational = mpq_class;

// Element of the cyclotomic field Q(zeta_n), stored as a dense length-n
// coefficient vector over Q, reduced modulo the n-th cyclotomic polynomial.
// The reduced vector is canonical: two elements are equal iff their orders
// match and their coefficient vectors match.  All arithmetic is exact.
class Cyclotomic {
public:
    Cyclotomic() : order_(1), coeffs_(1) {}
    explicit Cyclotomic(unsigned order) : order_(order), coeffs_(order) {}
    Cyclotomic(unsigned order, const Rational& rational_value);

    // zeta_n^k
    static Cyclotomic zeta(unsigned order, long k = 1);
    static Cyclotomic from_rational(unsigned order, const Rational& value);
    // Coefficient vector c[k] ~ sum c[k] zeta_n^k; reduced on construction.
    static Cyclotomic from_coeffs(unsigned order, std::vector<Rational> coeffs);

    unsigned order() const { return order_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const;
    bool is_rational() const;
    // Requires is_rational().
    Rational rational_value() const;
    bool is_integer() const;

    Cyclotomic operator+(const Cyclotomic& o) const;
    Cyclotomic operator-(const Cyclotomic& o) const;
    Cyclotomic operator-() const;
    Cyclotomic operator*(const Cyclotomic& o) const;
    Cyclotomic operator/(const Cyclotomic& o) const;
    Cyclotomic& operator+=(const Cyclotomic& o);
    Cyclotomic& operator-=(const Cyclotomic& o);
    Cyclotomic& operator*=(const Cyclotomic& o);

    Cyclotomic inverse() const;           // throws on zero
    Cyclotomic conj() const;              // zeta -> zeta^{-1}
    Cyclotomic galois(unsigned k) const;  // zeta -> zeta^k, gcd(k, n) = 1
    Cyclotomic pow(long e) const;

    // Re-express in Q(zeta_m); requires order() | m.
    Cyclotomic lifted(unsigned m) const;

    bool operator==(const Cyclotomic& o) const;
    bool operator!=(const Cyclotomic& o) const { return !(*this == o); }
    // Total order on canonical forms (order, then coeff vector); used only
    // for deterministic sorting, no arithmetic meaning.
    int cmp(const Cyclotomic& o) const;

    size_t hash() const;

    // Polynomial string in the symbol `z`, e.g. "3/2*z^3 - z + 1".
    std::string to_string() const;
    static Cyclotomic parse(const std::string& text, unsigned order);

private:
    void reduce_();  // fold exponents mod n, then reduce mod Phi_n

    unsigned order_;
    std::vector<Rational> coeffs_;
};

inline Cyclotomic operator*(const Rational& r, const Cyclotomic& c) {
    return Cyclotomic::from_rational(c.order(), r) * c;
}

unsigned euler_phi(unsigned n);
// Monic integer coefficients of Phi_n, constant term first, length phi(n)+1.
const std::vector<mpz_class>& cyclotomic_polynomial(unsigned n);

size_t hash_rational(const Rational& q);
size_t hash_combine(size_t seed, size_t v);

}  // namespace qci
