#include "qci/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qci {

unsigned euler_phi(unsigned n) {
    unsigned result = n;
    for (unsigned p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

namespace {

// x^n - 1 divided by the product of Phi_d over proper divisors d of n,
// by recursive exact polynomial division over Z.
std::vector<mpz_class> compute_cyclotomic_poly(unsigned n) {
    if (n == 1) return {mpz_class(-1), mpz_class(1)};  // x - 1
    std::vector<mpz_class> num(n + 1);
    num[0] = -1;
    num[n] = 1;
    for (unsigned d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        const auto& phi_d = cyclotomic_polynomial(d);
        // exact division num /= phi_d (phi_d monic)
        std::vector<mpz_class> quot(num.size() - phi_d.size() + 1);
        std::vector<mpz_class> rem = num;
        for (size_t i = quot.size(); i-- > 0;) {
            quot[i] = rem[i + phi_d.size() - 1];
            if (quot[i] == 0) continue;
            for (size_t j = 0; j < phi_d.size(); ++j)
                rem[i + j] -= quot[i] * phi_d[j];
        }
        num = std::move(quot);
    }
    return num;
}

std::map<unsigned, std::vector<mpz_class>> phi_cache;
std::mutex phi_cache_mutex;

}  // namespace

const std::vector<mpz_class>& cyclotomic_polynomial(unsigned n) {
    std::lock_guard<std::mutex> lock(phi_cache_mutex);
    auto it = phi_cache.find(n);
    if (it != phi_cache.end()) return it->second;
    auto poly = compute_cyclotomic_poly(n);
    return phi_cache.emplace(n, std::move(poly)).first->second;
}

size_t hash_rational(const Rational& q) {
    auto hash_mpz = [](const mpz_class& z) {
        size_t h = static_cast<size_t>(mpz_sgn(z.get_mpz_t()));
        size_t limbs = mpz_size(z.get_mpz_t());
        for (size_t i = 0; i < limbs; ++i)
            h = h * 1099511628211ULL + mpz_getlimbn(z.get_mpz_t(), i);
        return h;
    };
    return hash_mpz(q.get_num()) * 31 + hash_mpz(q.get_den());
}

size_t hash_combine(size_t seed, size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

Cyclotomic::Cyclotomic(unsigned order, const Rational& rational_value)
    : order_(order), coeffs_(order) {
    if (order == 0) throw std::invalid_argument("cyclotomic order must be positive");
    coeffs_[0] = rational_value;
}

Cyclotomic Cyclotomic::zeta(unsigned order, long k) {
    Cyclotomic z(order);
    long e = k % static_cast<long>(order);
    if (e < 0) e += order;
    z.coeffs_[static_cast<size_t>(e)] = 1;
    z.reduce_();
    return z;
}

Cyclotomic Cyclotomic::from_rational(unsigned order, const Rational& value) {
    return Cyclotomic(order, value);
}

Cyclotomic Cyclotomic::from_coeffs(unsigned order, std::vector<Rational> coeffs) {
    Cyclotomic z(order);
    for (size_t k = 0; k < coeffs.size(); ++k) {
        size_t e = k % order;
        z.coeffs_[e] += coeffs[k];
    }
    z.reduce_();
    return z;
}

void Cyclotomic::reduce_() {
    const unsigned phi = euler_phi(order_);
    if (order_ == 1) return;
    const auto& mod = cyclotomic_polynomial(order_);
    // long division by the monic Phi_n, top down
    for (size_t i = order_; i-- > phi;) {
        if (coeffs_[i] == 0) continue;
        Rational lead = coeffs_[i];
        coeffs_[i] = 0;
        for (unsigned j = 0; j < phi; ++j)
            coeffs_[i - phi + j] -= lead * Rational(mod[j]);
    }
    for (auto& c : coeffs_) c.canonicalize();
}

bool Cyclotomic::is_zero() const {
    for (const auto& c : coeffs_)
        if (c != 0) return false;
    return true;
}

bool Cyclotomic::is_rational() const {
    for (size_t k = 1; k < coeffs_.size(); ++k)
        if (coeffs_[k] != 0) return false;
    return true;
}

Rational Cyclotomic::rational_value() const {
    if (!is_rational()) throw std::domain_error("cyclotomic is not rational");
    return coeffs_[0];
}

bool Cyclotomic::is_integer() const {
    return is_rational() && coeffs_[0].get_den() == 1;
}

namespace {
unsigned common_order(unsigned a, unsigned b) {
    return static_cast<unsigned>(std::lcm(a, b));
}
}  // namespace

Cyclotomic Cyclotomic::lifted(unsigned m) const {
    if (m == order_) return *this;
    if (m % order_ != 0) throw std::invalid_argument("lift target must be a multiple of the order");
    unsigned step = m / order_;
    Cyclotomic out(m);
    for (size_t k = 0; k < coeffs_.size(); ++k)
        if (coeffs_[k] != 0) out.coeffs_[k * step] = coeffs_[k];
    out.reduce_();
    return out;
}

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
    if (order_ != o.order_) {
        unsigned m = common_order(order_, o.order_);
        return lifted(m) + o.lifted(m);
    }
    Cyclotomic out(order_);
    for (size_t k = 0; k < coeffs_.size(); ++k) out.coeffs_[k] = coeffs_[k] + o.coeffs_[k];
    return out;  // sum of reduced forms is reduced
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const {
    if (order_ != o.order_) {
        unsigned m = common_order(order_, o.order_);
        return lifted(m) - o.lifted(m);
    }
    Cyclotomic out(order_);
    for (size_t k = 0; k < coeffs_.size(); ++k) out.coeffs_[k] = coeffs_[k] - o.coeffs_[k];
    return out;
}

Cyclotomic Cyclotomic::operator-() const {
    Cyclotomic out(order_);
    for (size_t k = 0; k < coeffs_.size(); ++k) out.coeffs_[k] = -coeffs_[k];
    return out;
}

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
    if (order_ != o.order_) {
        unsigned m = common_order(order_, o.order_);
        return lifted(m) * o.lifted(m);
    }
    Cyclotomic out(order_);
    const unsigned n = order_;
    for (size_t i = 0; i < n; ++i) {
        if (coeffs_[i] == 0) continue;
        for (size_t j = 0; j < n; ++j) {
            if (o.coeffs_[j] == 0) continue;
            out.coeffs_[(i + j) % n] += coeffs_[i] * o.coeffs_[j];
        }
    }
    out.reduce_();
    return out;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) { return *this = *this + o; }
Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) { return *this = *this - o; }
Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& o) { return *this = *this * o; }

namespace {

using QPoly = std::vector<Rational>;  // dense, constant term first

void qpoly_trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly qpoly_rem(QPoly a, const QPoly& b) {
    qpoly_trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rational f = a.back() / b.back();
        size_t shift = a.size() - b.size();
        for (size_t j = 0; j < b.size(); ++j) a[shift + j] -= f * b[j];
        qpoly_trim(a);
    }
    return a;
}

}  // namespace

Cyclotomic Cyclotomic::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero cyclotomic");
    if (is_rational()) {
        return Cyclotomic(order_, Rational(1) / coeffs_[0]);
    }
    // extended Euclid for gcd(this, Phi_n) = 1 in Q[x]
    const auto& mod_z = cyclotomic_polynomial(order_);
    QPoly r0(mod_z.size());
    for (size_t i = 0; i < mod_z.size(); ++i) r0[i] = Rational(mod_z[i]);
    QPoly r1(coeffs_.begin(), coeffs_.end());
    qpoly_trim(r1);
    QPoly s0{}, s1{Rational(1)};  // coefficients of *this in the Bezout identity
    while (true) {
        qpoly_trim(r1);
        if (r1.empty()) throw std::domain_error("element not invertible (unreduced input?)");
        if (r1.size() == 1) break;
        // r0 = q*r1 + r2
        QPoly q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 0);
        QPoly r2 = r0;
        while (r2.size() >= r1.size()) {
            Rational f = r2.back() / r1.back();
            size_t shift = r2.size() - r1.size();
            q[shift] = f;
            for (size_t j = 0; j < r1.size(); ++j) r2[shift + j] -= f * r1[j];
            qpoly_trim(r2);
            if (r2.empty()) break;
        }
        // s2 = s0 - q*s1
        QPoly s2 = s0;
        s2.resize(std::max(s2.size(), q.size() + s1.size()), Rational(0));
        for (size_t i = 0; i < q.size(); ++i) {
            if (q[i] == 0) continue;
            for (size_t j = 0; j < s1.size(); ++j) s2[i + j] -= q[i] * s1[j];
        }
        qpoly_trim(s2);
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    Rational lead = r1[0];
    QPoly inv = qpoly_rem(std::move(s1), [&] {
        QPoly m(mod_z.size());
        for (size_t i = 0; i < mod_z.size(); ++i) m[i] = Rational(mod_z[i]);
        return m;
    }());
    Cyclotomic out(order_);
    for (size_t i = 0; i < inv.size() && i < out.coeffs_.size(); ++i)
        out.coeffs_[i] = inv[i] / lead;
    out.reduce_();
    return out;
}

Cyclotomic Cyclotomic::operator/(const Cyclotomic& o) const {
    if (order_ != o.order_) {
        unsigned m = common_order(order_, o.order_);
        return lifted(m) / o.lifted(m);
    }
    return *this * o.inverse();
}

Cyclotomic Cyclotomic::galois(unsigned k) const {
    if (std::gcd(k, order_) != 1)
        throw std::invalid_argument("galois exponent must be coprime to the order");
    Cyclotomic out(order_);
    for (size_t e = 0; e < coeffs_.size(); ++e) {
        if (coeffs_[e] == 0) continue;
        out.coeffs_[(e * k) % order_] += coeffs_[e];
    }
    out.reduce_();
    return out;
}

Cyclotomic Cyclotomic::conj() const { return galois(order_ == 1 ? 1 : order_ - 1); }

Cyclotomic Cyclotomic::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Cyclotomic result(order_, Rational(1));
    Cyclotomic base = *this;
    unsigned long n = static_cast<unsigned long>(e);
    while (n) {
        if (n & 1) result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

bool Cyclotomic::operator==(const Cyclotomic& o) const {
    if (order_ != o.order_) {
        unsigned m = common_order(order_, o.order_);
        return lifted(m) == o.lifted(m);
    }
    return coeffs_ == o.coeffs_;
}

int Cyclotomic::cmp(const Cyclotomic& o) const {
    if (order_ != o.order_) {
        unsigned m = common_order(order_, o.order_);
        return lifted(m).cmp(o.lifted(m));
    }
    for (size_t k = 0; k < coeffs_.size(); ++k) {
        int c = ::cmp(coeffs_[k], o.coeffs_[k]);
        if (c != 0) return c;
    }
    return 0;
}

size_t Cyclotomic::hash() const {
    size_t h = order_;
    for (const auto& c : coeffs_) h = hash_combine(h, hash_rational(c));
    return h;
}

std::string Cyclotomic::to_string() const {
    std::ostringstream out;
    bool first = true;
    for (size_t k = 0; k < coeffs_.size(); ++k) {
        const Rational& c = coeffs_[k];
        if (c == 0) continue;
        Rational a = c > 0 ? c : Rational(-c);
        if (first) {
            if (c < 0) out << "-";
            first = false;
        } else {
            out << (c > 0 ? " + " : " - ");
        }
        if (k == 0) {
            out << a.get_str();
        } else {
            if (a != 1) out << a.get_str() << "*";
            out << "z";
            if (k > 1) out << "^" << k;
        }
    }
    if (first) out << "0";
    return out.str();
}

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool peek_digit() {
        skip_ws();
        return pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]));
    }
    mpz_class integer() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw std::invalid_argument("expected integer in cyclotomic string: " + s);
        return mpz_class(s.substr(start, pos - start));
    }
};

}  // namespace

Cyclotomic Cyclotomic::parse(const std::string& text, unsigned order) {
    Parser p{text};
    std::vector<Rational> acc(order);
    bool any = false;
    int sign = 1;
    p.skip_ws();
    while (true) {
        p.skip_ws();
        if (p.pos >= text.size()) break;
        if (p.eat('+')) sign = 1;
        else if (p.eat('-')) sign = -1;
        else if (any) throw std::invalid_argument("expected '+' or '-' in cyclotomic string: " + text);
        p.skip_ws();
        Rational coeff(1);
        bool have_coeff = false;
        if (p.peek_digit()) {
            mpz_class num = p.integer();
            mpz_class den(1);
            if (p.eat('/')) den = p.integer();
            coeff = Rational(num, den);
            coeff.canonicalize();
            have_coeff = true;
        }
        unsigned exp = 0;
        bool have_z = false;
        size_t save = p.pos;
        if (have_coeff && !p.eat('*')) p.pos = save;
        if (p.eat('z')) {
            have_z = true;
            exp = 1;
            if (p.eat('^')) exp = static_cast<unsigned>(p.integer().get_ui());
        }
        if (!have_coeff && !have_z)
            throw std::invalid_argument("malformed term in cyclotomic string: " + text);
        acc[exp % order] += sign * coeff;
        any = true;
        sign = 1;
    }
    if (!any) throw std::invalid_argument("empty cyclotomic string");
    return from_coeffs(order, std::move(acc));
}

}  // namespace qci
