#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "qci/cyclotomic.hpp"

namespace qci {

bool is_prime(uint64_t n);
uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t p);
uint64_t invmod(uint64_t a, uint64_t p);
// Smallest generator of F_p^*.
uint64_t primitive_root(uint64_t p);
// Smallest prime p > lower with p = 1 (mod m).
uint64_t next_prime_1_mod(uint64_t m, uint64_t lower);

// Element of F_p.  The modulus travels with the value; mixing moduli throws.
struct Fp {
    uint64_t v = 0;
    uint64_t p = 0;

    Fp() = default;
    Fp(uint64_t value, uint64_t modulus) : v(value % modulus), p(modulus) {}
    static Fp from_int(long long value, uint64_t modulus) {
        long long r = value % static_cast<long long>(modulus);
        if (r < 0) r += modulus;
        return Fp(static_cast<uint64_t>(r), modulus);
    }

    bool is_zero() const { return v == 0; }
    Fp operator+(Fp o) const { check(o); return Fp((v + o.v) % p, p); }
    Fp operator-(Fp o) const { check(o); return Fp((v + p - o.v) % p, p); }
    Fp operator-() const { return Fp(v == 0 ? 0 : p - v, p); }
    Fp operator*(Fp o) const { check(o); return Fp(mulmod(v, o.v, p), p); }
    Fp inverse() const {
        if (v == 0) throw std::domain_error("division by zero in F_p");
        return Fp(invmod(v, p), p);
    }
    Fp operator/(Fp o) const { return *this * o.inverse(); }
    Fp pow(uint64_t e) const { return Fp(powmod(v, e, p), p); }
    bool operator==(Fp o) const { return v == o.v && p == o.p; }
    bool operator!=(Fp o) const { return !(*this == o); }

private:
    void check(Fp o) const {
        if (p != o.p) throw std::invalid_argument("mixed F_p moduli");
    }
};

std::optional<Fp> sqrt_fp(Fp a);  // Tonelli-Shanks
// Smallest quadratic nonresidue of p.
uint64_t quadratic_nonresidue(uint64_t p);
uint64_t multiplicative_order(uint64_t a, uint64_t p);

// F_{p^2} = F_p[w] / (w^2 - nr), nr the smallest nonresidue of p.
struct Fp2 {
    Fp a, b;      // a + b*w
    uint64_t nr = 0;

    Fp2() = default;
    Fp2(Fp a_, Fp b_, uint64_t nr_) : a(a_), b(b_), nr(nr_) {}
    static Fp2 from_base(Fp x) { return Fp2(x, Fp(0, x.p), quadratic_nonresidue(x.p)); }

    uint64_t p() const { return a.p; }
    bool is_zero() const { return a.is_zero() && b.is_zero(); }
    bool in_base() const { return b.is_zero(); }

    Fp2 operator+(const Fp2& o) const { return Fp2(a + o.a, b + o.b, nr); }
    Fp2 operator-(const Fp2& o) const { return Fp2(a - o.a, b - o.b, nr); }
    Fp2 operator-() const { return Fp2(-a, -b, nr); }
    Fp2 operator*(const Fp2& o) const {
        Fp nrf(nr, p());
        return Fp2(a * o.a + nrf * (b * o.b), a * o.b + b * o.a, nr);
    }
    Fp2 inverse() const {
        // norm = a^2 - nr*b^2, nonzero for nonzero elements
        Fp nrf(nr, p());
        Fp norm = a * a - nrf * (b * b);
        if (norm.is_zero()) throw std::domain_error("division by zero in F_{p^2}");
        Fp ni = norm.inverse();
        return Fp2(a * ni, -b * ni, nr);
    }
    Fp2 operator/(const Fp2& o) const { return *this * o.inverse(); }
    Fp2 pow(uint64_t e) const;
    bool operator==(const Fp2& o) const { return a == o.a && b == o.b; }
    bool operator!=(const Fp2& o) const { return !(*this == o); }
};

std::optional<Fp2> sqrt_fp2(const Fp2& x);  // always succeeds for base-field inputs

// Embedding context Q(zeta_n) -> F_p with zeta_n |-> r of exact order n.
struct RootEmbedding {
    uint64_t p = 0;
    unsigned order = 1;
    uint64_t root = 1;

    // Deterministic canonical root: g^((p-1)/n) for the smallest primitive root g.
    static RootEmbedding make(uint64_t p, unsigned order);
    // Validates r has exact order n mod p.
    static RootEmbedding with_root(uint64_t p, unsigned order, uint64_t r);

    Fp embed_rational(const Rational& q) const;
    Fp operator()(const Cyclotomic& c) const;
};

}  // namespace qci
