#include "qci/poly.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace qci {

PolyRing::PolyRing(unsigned nvars_, uint64_t p_, MonomialOrder ord)
    : nvars(nvars_), p(p_), order(ord) {
    if (nvars > kMaxVars) throw std::invalid_argument("too many variables");
    for (unsigned i = 0; i < nvars; ++i) names.push_back("x" + std::to_string(i + 1));
}

int PolyRing::cmp(const Monomial& a, const Monomial& b) const {
    if (order == MonomialOrder::DegRevLex) {
        unsigned da = a.degree(), db = b.degree();
        if (da != db) return da < db ? -1 : 1;
        // last variable where they differ: smaller exponent wins
        for (unsigned i = nvars; i-- > 0;) {
            if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? -1 : 1;
        }
        return 0;
    }
    for (unsigned i = 0; i < nvars; ++i) {
        if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? -1 : 1;
    }
    return 0;
}

unsigned Polynomial::degree() const {
    unsigned d = 0;
    for (const auto& t : terms) d = std::max(d, t.m.degree());
    return d;
}

bool Polynomial::is_homogeneous() const {
    if (terms.empty()) return true;
    unsigned d = terms[0].m.degree();
    for (const auto& t : terms)
        if (t.m.degree() != d) return false;
    return true;
}

std::string Polynomial::to_string(const PolyRing& ring) const {
    if (terms.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& t : terms) {
        if (!first) out << " + ";
        first = false;
        bool printed = false;
        if (t.c != 1 || t.m.is_one()) {
            out << t.c;
            printed = true;
        }
        for (unsigned i = 0; i < ring.nvars; ++i) {
            if (t.m.e[i] == 0) continue;
            if (printed) out << "*";
            out << ring.names[i];
            if (t.m.e[i] > 1) out << "^" << unsigned(t.m.e[i]);
            printed = true;
        }
    }
    return out.str();
}

Polynomial poly_from_terms(const PolyRing& ring, std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [&](const Term& a, const Term& b) { return ring.cmp(a.m, b.m) > 0; });
    Polynomial out;
    for (auto& t : terms) {
        uint64_t c = t.c % ring.p;
        if (c == 0) continue;
        if (!out.terms.empty() && out.terms.back().m == t.m) {
            out.terms.back().c = (out.terms.back().c + c) % ring.p;
            if (out.terms.back().c == 0) out.terms.pop_back();
        } else {
            out.terms.push_back({t.m, c});
        }
    }
    return out;
}

namespace {

// merge two descending term lists with coefficients combined mod p
Polynomial merge(const PolyRing& ring, const Polynomial& a, const Polynomial& b, bool subtract) {
    Polynomial out;
    out.terms.reserve(a.terms.size() + b.terms.size());
    size_t i = 0, j = 0;
    const uint64_t p = ring.p;
    while (i < a.terms.size() || j < b.terms.size()) {
        int c;
        if (i == a.terms.size()) c = -1;
        else if (j == b.terms.size()) c = 1;
        else c = ring.cmp(a.terms[i].m, b.terms[j].m);
        if (c > 0) {
            out.terms.push_back(a.terms[i++]);
        } else if (c < 0) {
            Term t = b.terms[j++];
            if (subtract) t.c = p - t.c;
            out.terms.push_back(t);
        } else {
            uint64_t bc = subtract ? p - b.terms[j].c : b.terms[j].c;
            uint64_t cc = (a.terms[i].c + bc) % p;
            if (cc != 0) out.terms.push_back({a.terms[i].m, cc});
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

Polynomial poly_add(const PolyRing& ring, const Polynomial& a, const Polynomial& b) {
    return merge(ring, a, b, false);
}

Polynomial poly_sub(const PolyRing& ring, const Polynomial& a, const Polynomial& b) {
    return merge(ring, a, b, true);
}

Polynomial poly_scale(const PolyRing& ring, const Polynomial& a, uint64_t c) {
    c %= ring.p;
    Polynomial out;
    if (c == 0) return out;
    out.terms = a.terms;
    for (auto& t : out.terms) t.c = mulmod(t.c, c, ring.p);
    return out;
}

Polynomial poly_term_mul(const PolyRing& ring, const Polynomial& a, const Term& t) {
    Polynomial out;
    out.terms.reserve(a.terms.size());
    for (const auto& at : a.terms) {
        uint64_t c = mulmod(at.c, t.c, ring.p);
        if (c) out.terms.push_back({at.m * t.m, c});
    }
    return out;  // multiplying by a term preserves the descending order
}

Polynomial poly_mul(const PolyRing& ring, const Polynomial& a, const Polynomial& b) {
    std::vector<Term> acc;
    acc.reserve(a.terms.size() * b.terms.size());
    for (const auto& ta : a.terms)
        for (const auto& tb : b.terms)
            acc.push_back({ta.m * tb.m, mulmod(ta.c, tb.c, ring.p)});
    return poly_from_terms(ring, std::move(acc));
}

Polynomial poly_monic(const PolyRing& ring, const Polynomial& a) {
    if (a.is_zero()) return a;
    return poly_scale(ring, a, invmod(a.terms[0].c, ring.p));
}

Polynomial normal_form(const PolyRing& ring, const Polynomial& f,
                       const std::vector<Polynomial>& basis) {
    Polynomial rem;
    Polynomial work = f;
    while (!work.is_zero()) {
        const Term& lt = work.leading();
        const Polynomial* reducer = nullptr;
        for (const auto& g : basis) {
            if (!g.is_zero() && g.leading().m.divides(lt.m)) {
                reducer = &g;
                break;
            }
        }
        if (reducer) {
            Term q{lt.m.quotient(reducer->leading().m),
                   mulmod(lt.c, invmod(reducer->leading().c, ring.p), ring.p)};
            work = poly_sub(ring, work, poly_term_mul(ring, *reducer, q));
        } else {
            rem.terms.push_back(lt);
            work.terms.erase(work.terms.begin());
        }
    }
    return rem;
}

namespace {

struct PairKey {
    unsigned deg;
    uint32_t i, j;
    bool operator<(const PairKey& o) const {
        if (deg != o.deg) return deg < o.deg;
        if (j != o.j) return j < o.j;
        return i < o.i;
    }
};

}  // namespace

std::vector<Polynomial> groebner_basis(const PolyRing& ring, std::vector<Polynomial> gens) {
    std::vector<Polynomial> basis;
    for (auto& g : gens)
        if (!g.is_zero()) basis.push_back(poly_monic(ring, g));

    std::map<PairKey, Monomial> pending;
    std::set<std::pair<uint32_t, uint32_t>> handled;
    auto push_pairs = [&](uint32_t j) {
        for (uint32_t i = 0; i < j; ++i) {
            Monomial l = Monomial::lcm(basis[i].leading().m, basis[j].leading().m);
            pending.emplace(PairKey{l.degree(), i, j}, l);
        }
    };
    for (uint32_t j = 1; j < basis.size(); ++j) push_pairs(j);

    while (!pending.empty()) {
        auto it = pending.begin();
        auto [key, l] = *it;
        pending.erase(it);
        uint32_t i = key.i, j = key.j;
        handled.insert({i, j});

        const Monomial& li = basis[i].leading().m;
        const Monomial& lj = basis[j].leading().m;
        // product criterion
        if (li * lj == l) continue;
        // chain criterion
        bool skip = false;
        for (uint32_t k = 0; k < basis.size() && !skip; ++k) {
            if (k == i || k == j) continue;
            if (!basis[k].leading().m.divides(l)) continue;
            auto pik = std::minmax(i, k), pjk = std::minmax(j, k);
            if (handled.count({pik.first, pik.second}) && handled.count({pjk.first, pjk.second}))
                skip = true;
        }
        if (skip) continue;

        Term qi{l.quotient(li), 1};
        Term qj{l.quotient(lj), 1};
        Polynomial spoly = poly_sub(ring, poly_term_mul(ring, basis[i], qi),
                                    poly_term_mul(ring, basis[j], qj));
        Polynomial r = normal_form(ring, spoly, basis);
        if (r.is_zero()) continue;
        basis.push_back(poly_monic(ring, r));
        push_pairs(static_cast<uint32_t>(basis.size()) - 1);
    }

    // minimalize: drop elements whose leading term is divisible by another's
    std::vector<Polynomial> minimal;
    for (size_t a = 0; a < basis.size(); ++a) {
        bool redundant = false;
        for (size_t b = 0; b < basis.size() && !redundant; ++b) {
            if (a == b) continue;
            if (!basis[b].leading().m.divides(basis[a].leading().m)) continue;
            if (basis[b].leading().m == basis[a].leading().m && b > a) continue;
            redundant = true;
        }
        if (!redundant) minimal.push_back(basis[a]);
    }
    // tail-reduce each element against the rest
    std::vector<Polynomial> reduced;
    for (size_t a = 0; a < minimal.size(); ++a) {
        std::vector<Polynomial> others;
        for (size_t b = 0; b < minimal.size(); ++b)
            if (b != a) others.push_back(minimal[b]);
        Polynomial r = normal_form(ring, minimal[a], others);
        if (!r.is_zero()) reduced.push_back(poly_monic(ring, r));
    }
    std::sort(reduced.begin(), reduced.end(), [&](const Polynomial& x, const Polynomial& y) {
        return ring.cmp(x.leading().m, y.leading().m) > 0;
    });
    return reduced;
}

Polynomial substitute_var(const PolyRing& ring, const Polynomial& f, unsigned var,
                          uint64_t value) {
    std::vector<Term> acc;
    acc.reserve(f.terms.size());
    for (const auto& t : f.terms) {
        Term nt = t;
        if (nt.m.e[var] > 0) {
            nt.c = mulmod(nt.c, powmod(value, nt.m.e[var], ring.p), ring.p);
            nt.m.e[var] = 0;
        }
        if (nt.c) acc.push_back(nt);
    }
    return poly_from_terms(ring, std::move(acc));
}

Fp2 evaluate_poly(const PolyRing& ring, const Polynomial& f, const std::array<Fp2, kMaxVars>& pt) {
    uint64_t nr = quadratic_nonresidue(ring.p);
    Fp2 acc(Fp(0, ring.p), Fp(0, ring.p), nr);
    for (const auto& t : f.terms) {
        Fp2 v(Fp(t.c, ring.p), Fp(0, ring.p), nr);
        for (unsigned i = 0; i < ring.nvars; ++i)
            for (unsigned k = 0; k < t.m.e[i]; ++k) v = v * pt[i];
        acc = acc + v;
    }
    return acc;
}

EmptinessCertificate projective_empty(const PolyRing& ring, const std::vector<Polynomial>& forms,
                                      bool chart_certificates) {
    EmptinessCertificate out;
    std::vector<bool> active(ring.nvars, false);
    for (const auto& f : forms)
        for (const auto& t : f.terms)
            for (unsigned v = 0; v < ring.nvars; ++v)
                if (t.m.e[v]) active[v] = true;
    std::vector<unsigned> active_vars;
    for (unsigned v = 0; v < ring.nvars; ++v)
        if (active[v]) active_vars.push_back(v);

    auto gb = groebner_basis(ring, forms);
    out.gb_size = gb.size();
    for (const auto& g : gb) out.leading_terms.push_back(g.leading().m);

    // a nonzero constant in the ideal: no projective (or affine) points at all
    bool has_unit = !gb.empty() && gb[0].leading().m.is_one();

    std::vector<Monomial> pure(active_vars.size());
    std::vector<bool> found(active_vars.size(), has_unit);
    if (!has_unit) {
        for (const auto& g : gb) {
            unsigned var;
            if (!g.leading().m.is_pure_power(&var)) continue;
            for (size_t a = 0; a < active_vars.size(); ++a)
                if (active_vars[a] == var && !found[a]) {
                    found[a] = true;
                    pure[a] = g.leading().m;
                }
        }
    }
    bool all_found = true;
    for (bool b : found) all_found = all_found && b;
    if (!active_vars.empty() && all_found) {
        out.status = EmptinessStatus::Empty;
        out.pure_powers = pure;
        if (chart_certificates) {
            for (unsigned v : active_vars) {
                std::vector<Polynomial> chart;
                for (const auto& f : forms) chart.push_back(substitute_var(ring, f, v, 1));
                auto cgb = groebner_basis(ring, chart);
                out.chart_unit.push_back(!cgb.empty() && cgb[0].leading().m.is_one());
            }
        }
        return out;
    }
    if (active_vars.empty()) {
        // all forms are identically zero: the whole space
        out.status = EmptinessStatus::NonemptyWitness;
        out.witness.assign(ring.nvars, 0);
        if (ring.nvars) out.witness[0] = 1;
        return out;
    }

    // exhaustive rational witness search on a bounded grid
    const size_t k = active_vars.size();
    double grid = 1;
    for (size_t a = 0; a + 1 < k; ++a) grid *= static_cast<double>(ring.p);
    if (grid <= (1 << 21)) {
        std::vector<uint64_t> coords(k, 0);
        // lead index = first nonzero coordinate, normalized to 1
        for (size_t lead = 0; lead < k; ++lead) {
            size_t tail = k - lead - 1;
            std::vector<uint64_t> rest(tail, 0);
            while (true) {
                std::array<Fp2, kMaxVars> pt;
                uint64_t nr = quadratic_nonresidue(ring.p);
                for (unsigned v = 0; v < ring.nvars; ++v)
                    pt[v] = Fp2(Fp(0, ring.p), Fp(0, ring.p), nr);
                pt[active_vars[lead]] = Fp2(Fp(1, ring.p), Fp(0, ring.p), nr);
                for (size_t tdx = 0; tdx < tail; ++tdx)
                    pt[active_vars[lead + 1 + tdx]] = Fp2(Fp(rest[tdx], ring.p), Fp(0, ring.p), nr);
                bool zero = true;
                for (const auto& f : forms)
                    if (!evaluate_poly(ring, f, pt).is_zero()) {
                        zero = false;
                        break;
                    }
                if (zero) {
                    out.status = EmptinessStatus::NonemptyWitness;
                    out.witness.assign(ring.nvars, 0);
                    out.witness[active_vars[lead]] = 1;
                    for (size_t tdx = 0; tdx < tail; ++tdx)
                        out.witness[active_vars[lead + 1 + tdx]] = rest[tdx];
                    return out;
                }
                // increment odometer
                size_t pos = 0;
                while (pos < tail) {
                    if (++rest[pos] < ring.p) break;
                    rest[pos] = 0;
                    ++pos;
                }
                if (pos == tail) break;
                if (tail == 0) break;
            }
        }
    }
    out.status = EmptinessStatus::UndecidedOverFp;
    return out;
}

namespace {

using UPoly = std::vector<Fp2>;  // dense, constant term first

void utrim(UPoly& f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
}

UPoly umod(UPoly a, const UPoly& b) {
    utrim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Fp2 f = a.back() / b.back();
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] = a[shift + i] - f * b[i];
        utrim(a);
    }
    return a;
}

UPoly ugcd(UPoly a, UPoly b) {
    utrim(a);
    utrim(b);
    while (!b.empty()) {
        UPoly r = umod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Fp2 inv = a.back().inverse();
        for (auto& c : a) c = c * inv;
    }
    return a;
}

UPoly umul(const UPoly& a, const UPoly& b, const UPoly& mod) {
    if (a.empty() || b.empty()) return {};
    UPoly out(a.size() + b.size() - 1,
              Fp2(Fp(0, a[0].p()), Fp(0, a[0].p()), a[0].nr));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j)
            out[i + j] = out[i + j] + a[i] * b[j];
    }
    return umod(std::move(out), mod);
}

// x^e mod f via binary powering
UPoly upowmod_x(uint64_t base_exp_hi, uint64_t base_exp_lo, const UPoly& mod, uint64_t p,
                uint64_t nr) {
    // exponent = base_exp_hi * 2^64 + base_exp_lo is overkill here; exponents
    // fit in 64 bits for the moduli we use (p^2 < 2^63)
    (void)base_exp_hi;
    uint64_t e = base_exp_lo;
    Fp2 zero(Fp(0, p), Fp(0, p), nr), one(Fp(1, p), Fp(0, p), nr);
    UPoly result{one};
    UPoly x{zero, one};
    x = umod(std::move(x), mod);
    UPoly base = x;
    while (e) {
        if (e & 1) result = umul(result, base, mod);
        base = umul(base, base, mod);
        e >>= 1;
    }
    return result;
}

UPoly uderiv(const UPoly& f, uint64_t p, uint64_t nr) {
    if (f.size() <= 1) return {};
    UPoly out(f.size() - 1, Fp2(Fp(0, p), Fp(0, p), nr));
    for (size_t i = 1; i < f.size(); ++i)
        out[i - 1] = f[i] * Fp2(Fp(i % p, p), Fp(0, p), nr);
    utrim(out);
    return out;
}

void collect_roots(const UPoly& split_part, uint64_t p, uint64_t nr, uint64_t shift_seed,
                   std::vector<Fp2>& out) {
    UPoly g = split_part;
    utrim(g);
    if (g.size() <= 1) return;
    if (g.size() == 2) {
        out.push_back(-(g[0] / g[1]));
        return;
    }
    if (g.size() == 3) {
        // quadratic formula; the polynomial splits over F_{p^2} by construction
        Fp2 a = g[2], b = g[1], c = g[0];
        Fp2 two(Fp(2, p), Fp(0, p), nr), four(Fp(4, p), Fp(0, p), nr);
        Fp2 disc = b * b - four * a * c;
        auto s = sqrt_fp2(disc);
        if (!s) throw std::logic_error("split quadratic without square discriminant");
        Fp2 inv2a = (two * a).inverse();
        out.push_back((-b + *s) * inv2a);
        out.push_back((-b - *s) * inv2a);
        return;
    }
    // equal-degree-1 splitting: gcd(g, (x + a)^{(q-1)/2} - 1) with deterministic shifts
    uint64_t q2 = p * p;
    for (uint64_t a = shift_seed;; ++a) {
        Fp2 zero(Fp(0, p), Fp(0, p), nr), one(Fp(1, p), Fp(0, p), nr);
        UPoly shifted{Fp2(Fp(a % p, p), Fp(a / p % p, p), nr), one};  // x + a (a ranges F_{p^2})
        // compute (x+a)^{(q2-1)/2} mod g
        UPoly acc{one};
        UPoly base = umod(shifted, g);
        uint64_t e = (q2 - 1) / 2;
        while (e) {
            if (e & 1) acc = umul(acc, base, g);
            base = umul(base, base, g);
            e >>= 1;
        }
        // subtract 1
        if (acc.empty()) acc.push_back(zero);
        acc[0] = acc[0] - one;
        utrim(acc);
        UPoly h = ugcd(g, acc);
        if (h.size() > 1 && h.size() < g.size()) {
            UPoly quot(g.size() - h.size() + 1, zero);
            UPoly rem = g;
            for (size_t i = quot.size(); i-- > 0;) {
                quot[i] = rem[i + h.size() - 1] / h.back();
                if (quot[i].is_zero()) continue;
                for (size_t j = 0; j < h.size(); ++j)
                    rem[i + j] = rem[i + j] - quot[i] * h[j];
            }
            collect_roots(h, p, nr, a + 1, out);
            collect_roots(quot, p, nr, a + 1, out);
            return;
        }
    }
}

}  // namespace

RootsResult roots_in_fp2(const std::vector<Fp2>& poly) {
    RootsResult out;
    UPoly f = poly;
    utrim(f);
    if (f.empty() || f.size() == 1) return out;  // zero or constant: no isolated roots reported
    const uint64_t p = f[0].p();
    const uint64_t nr = f[0].nr;

    // squarefree kernel
    UPoly d = uderiv(f, p, nr);
    UPoly sf = f;
    if (!d.empty()) {
        UPoly g = ugcd(f, d);
        if (g.size() > 1) {
            // sf = f / g
            Fp2 zero(Fp(0, p), Fp(0, p), nr);
            UPoly quot(f.size() - g.size() + 1, zero);
            UPoly rem = f;
            for (size_t i = quot.size(); i-- > 0;) {
                quot[i] = rem[i + g.size() - 1] / g.back();
                if (quot[i].is_zero()) continue;
                for (size_t j = 0; j < g.size(); ++j)
                    rem[i + j] = rem[i + j] - quot[i] * g[j];
            }
            sf = std::move(quot);
            utrim(sf);
        }
    } else {
        // derivative vanished (f is a polynomial in x^p); the gcd with
        // x^{p^2} - x below still extracts each distinct root once
        sf = f;
    }

    // product of the linear factors: gcd(sf, x^{p^2} - x)
    uint64_t q2 = p * p;
    UPoly frob = upowmod_x(0, q2, sf, p, nr);
    // frob = x^{q2} mod sf; linear part = gcd(sf, frob - x)
    Fp2 one(Fp(1, p), Fp(0, p), nr), zero(Fp(0, p), Fp(0, p), nr);
    UPoly fx = frob;
    if (fx.size() < 2) fx.resize(2, zero);
    fx[1] = fx[1] - one;
    utrim(fx);
    UPoly lin = ugcd(sf, fx);
    out.unresolved_degree = static_cast<unsigned>(sf.size() - lin.size());
    if (lin.size() > 1) collect_roots(lin, p, nr, 0, out.roots);
    return out;
}

}  // namespace qci
