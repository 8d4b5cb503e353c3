#include "qci/primefield.hpp"

#include <vector>

namespace qci {

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % p);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) {
    uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

uint64_t invmod(uint64_t a, uint64_t p) { return powmod(a % p, p - 2, p); }

namespace {
std::vector<uint64_t> prime_factors(uint64_t n) {
    std::vector<uint64_t> fs;
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            fs.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}
}  // namespace

uint64_t primitive_root(uint64_t p) {
    if (p == 2) return 1;
    auto fs = prime_factors(p - 1);
    for (uint64_t g = 2; g < p; ++g) {
        bool ok = true;
        for (uint64_t q : fs)
            if (powmod(g, (p - 1) / q, p) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw std::logic_error("no primitive root found");
}

uint64_t next_prime_1_mod(uint64_t m, uint64_t lower) {
    uint64_t p = lower + 1;
    p += (m - (p - 1) % m) % m;  // smallest p > lower with p = 1 mod m
    while (!is_prime(p)) p += m;
    return p;
}

uint64_t multiplicative_order(uint64_t a, uint64_t p) {
    a %= p;
    if (a == 0) throw std::domain_error("order of zero");
    uint64_t ord = 1;
    uint64_t x = a;
    while (x != 1) {
        x = mulmod(x, a, p);
        ++ord;
        if (ord > p) throw std::logic_error("order search overflow");
    }
    return ord;
}

uint64_t quadratic_nonresidue(uint64_t p) {
    for (uint64_t a = 2; a < p; ++a)
        if (powmod(a, (p - 1) / 2, p) == p - 1) return a;
    throw std::logic_error("no quadratic nonresidue (p = 2?)");
}

std::optional<Fp> sqrt_fp(Fp x) {
    uint64_t p = x.p;
    if (x.v == 0) return Fp(0, p);
    if (powmod(x.v, (p - 1) / 2, p) != 1) return std::nullopt;
    // Tonelli-Shanks
    uint64_t q = p - 1, s = 0;
    while ((q & 1) == 0) { q >>= 1; ++s; }
    uint64_t z = quadratic_nonresidue(p);
    uint64_t m = s;
    uint64_t c = powmod(z, q, p);
    uint64_t t = powmod(x.v, q, p);
    uint64_t r = powmod(x.v, (q + 1) / 2, p);
    while (t != 1) {
        uint64_t i = 0, tt = t;
        while (tt != 1) { tt = mulmod(tt, tt, p); ++i; }
        uint64_t b = powmod(c, uint64_t(1) << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return Fp(r, p);
}

Fp2 Fp2::pow(uint64_t e) const {
    Fp2 r(Fp(1, p()), Fp(0, p()), nr);
    Fp2 base = *this;
    while (e) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

std::optional<Fp2> sqrt_fp2(const Fp2& x) {
    uint64_t p = x.p();
    if (x.is_zero()) return Fp2(Fp(0, p), Fp(0, p), x.nr);
    if (x.in_base()) {
        // Every base-field element is a square in F_{p^2}.
        if (auto r = sqrt_fp(x.a)) return Fp2(*r, Fp(0, p), x.nr);
        // x = nr * (x/nr) with x/nr a residue; sqrt = w * sqrt(x/nr)
        Fp quotient = x.a / Fp(x.nr % p, p);
        auto r = sqrt_fp(quotient);
        if (!r) throw std::logic_error("nonresidue bookkeeping failed");
        return Fp2(Fp(0, p), *r, x.nr);
    }
    // General Tonelli-Shanks in F_{p^2}^* (order p^2 - 1).
    uint64_t n2 = p * p - 1;  // fits: p <= 2^31 expected at our scale
    auto is_square = [&](const Fp2& y) { return y.pow(n2 / 2) == Fp2(Fp(1, p), Fp(0, p), x.nr); };
    if (!is_square(x)) return std::nullopt;
    uint64_t q = n2, s = 0;
    while ((q & 1) == 0) { q >>= 1; ++s; }
    // deterministic nonsquare in F_{p^2}: try w, 1+w, 2+w, ...
    Fp2 z(Fp(0, p), Fp(1, p), x.nr);
    for (uint64_t a = 0; is_square(z); ++a) z = Fp2(Fp(a + 1, p), Fp(1, p), x.nr);
    Fp2 one(Fp(1, p), Fp(0, p), x.nr);
    uint64_t m = s;
    Fp2 c = z.pow(q);
    Fp2 t = x.pow(q);
    Fp2 r = x.pow((q + 1) / 2);
    while (!(t == one)) {
        uint64_t i = 0;
        Fp2 tt = t;
        while (!(tt == one)) { tt = tt * tt; ++i; }
        Fp2 b = c.pow(uint64_t(1) << (m - i - 1));
        m = i;
        c = b * b;
        t = t * c;
        r = r * b;
    }
    return r;
}

RootEmbedding RootEmbedding::make(uint64_t p, unsigned order) {
    if (!is_prime(p)) throw std::invalid_argument("modulus is not prime");
    if ((p - 1) % order != 0)
        throw std::invalid_argument("p must be 1 mod " + std::to_string(order));
    uint64_t g = primitive_root(p);
    return RootEmbedding{p, order, powmod(g, (p - 1) / order, p)};
}

RootEmbedding RootEmbedding::with_root(uint64_t p, unsigned order, uint64_t r) {
    if (!is_prime(p)) throw std::invalid_argument("modulus is not prime");
    if ((p - 1) % order != 0)
        throw std::invalid_argument("p must be 1 mod " + std::to_string(order));
    if (multiplicative_order(r, p) != order)
        throw std::invalid_argument("root does not have exact order " + std::to_string(order));
    return RootEmbedding{p, order, r % p};
}

Fp RootEmbedding::embed_rational(const Rational& q) const {
    mpz_class num = q.get_num(), den = q.get_den();
    mpz_class pz(static_cast<unsigned long>(p));
    mpz_class dm = den % pz;
    if (dm == 0) throw std::domain_error("denominator divisible by p");
    mpz_class nm = num % pz;
    if (nm < 0) nm += pz;
    uint64_t n = nm.get_ui();
    uint64_t d = dm.get_ui();
    return Fp(mulmod(n, invmod(d, p), p), p);
}

Fp RootEmbedding::operator()(const Cyclotomic& c) const {
    const Cyclotomic* src = &c;
    Cyclotomic lifted_value;
    if (c.order() != order) {
        if (order % c.order() != 0)
            throw std::invalid_argument("embedding order does not contain the element's order");
        lifted_value = c.lifted(order);
        src = &lifted_value;
    }
    Fp acc(0, p);
    uint64_t zk = 1;
    for (size_t k = 0; k < src->coeffs().size(); ++k) {
        const Rational& co = src->coeffs()[k];
        if (co != 0) acc = acc + embed_rational(co) * Fp(zk, p);
        zk = mulmod(zk, root, p);
    }
    return acc;
}

}  // namespace qci
