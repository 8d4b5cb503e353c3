#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qci/primefield.hpp"

namespace qci {

constexpr unsigned kMaxVars = 8;

struct Monomial {
    std::array<uint8_t, kMaxVars> e{};

    unsigned degree() const {
        unsigned d = 0;
        for (auto x : e) d += x;
        return d;
    }
    bool divides(const Monomial& o) const {
        for (unsigned i = 0; i < kMaxVars; ++i)
            if (e[i] > o.e[i]) return false;
        return true;
    }
    Monomial operator*(const Monomial& o) const {
        Monomial m;
        for (unsigned i = 0; i < kMaxVars; ++i) m.e[i] = static_cast<uint8_t>(e[i] + o.e[i]);
        return m;
    }
    Monomial quotient(const Monomial& o) const {  // requires o.divides(*this)
        Monomial m;
        for (unsigned i = 0; i < kMaxVars; ++i) m.e[i] = static_cast<uint8_t>(e[i] - o.e[i]);
        return m;
    }
    static Monomial lcm(const Monomial& a, const Monomial& b) {
        Monomial m;
        for (unsigned i = 0; i < kMaxVars; ++i) m.e[i] = std::max(a.e[i], b.e[i]);
        return m;
    }
    bool is_one() const {
        for (auto x : e)
            if (x) return false;
        return true;
    }
    bool is_pure_power(unsigned* var_out = nullptr) const {
        int var = -1;
        for (unsigned i = 0; i < kMaxVars; ++i) {
            if (e[i] == 0) continue;
            if (var >= 0) return false;
            var = static_cast<int>(i);
        }
        if (var < 0) return false;
        if (var_out) *var_out = static_cast<unsigned>(var);
        return true;
    }
    bool operator==(const Monomial& o) const { return e == o.e; }
};

enum class MonomialOrder { DegRevLex, Lex };

struct PolyRing {
    unsigned nvars = 8;
    uint64_t p = 65537;
    MonomialOrder order = MonomialOrder::DegRevLex;
    std::vector<std::string> names;  // defaults to x1..x8

    PolyRing() = default;
    PolyRing(unsigned nvars_, uint64_t p_, MonomialOrder ord);

    // -1, 0, 1 for a < b, a == b, a > b
    int cmp(const Monomial& a, const Monomial& b) const;
};

struct Term {
    Monomial m;
    uint64_t c = 0;  // in [1, p)
};

// terms sorted descending in the ring's order, coefficients nonzero
struct Polynomial {
    std::vector<Term> terms;

    bool is_zero() const { return terms.empty(); }
    const Term& leading() const { return terms.front(); }
    unsigned degree() const;
    bool is_homogeneous() const;
    std::string to_string(const PolyRing& ring) const;
};

Polynomial poly_from_terms(const PolyRing& ring, std::vector<Term> terms);
Polynomial poly_add(const PolyRing& ring, const Polynomial& a, const Polynomial& b);
Polynomial poly_sub(const PolyRing& ring, const Polynomial& a, const Polynomial& b);
Polynomial poly_mul(const PolyRing& ring, const Polynomial& a, const Polynomial& b);
Polynomial poly_scale(const PolyRing& ring, const Polynomial& a, uint64_t c);
Polynomial poly_term_mul(const PolyRing& ring, const Polynomial& a, const Term& t);
Polynomial poly_monic(const PolyRing& ring, const Polynomial& a);

// full normal form of f modulo the basis (leading and tail reduction)
Polynomial normal_form(const PolyRing& ring, const Polynomial& f,
                       const std::vector<Polynomial>& basis);

// reduced Groebner basis (Buchberger with product and chain criteria);
// deterministic and canonical for the ring's order
std::vector<Polynomial> groebner_basis(const PolyRing& ring, std::vector<Polynomial> gens);

// substitute: var -> constant (also used for charts with value 1 / strata with 0)
Polynomial substitute_var(const PolyRing& ring, const Polynomial& f, unsigned var, uint64_t value);

Fp2 evaluate_poly(const PolyRing& ring, const Polynomial& f, const std::array<Fp2, kMaxVars>& pt);

enum class EmptinessStatus { Empty, NonemptyWitness, UndecidedOverFp };

struct EmptinessCertificate {
    EmptinessStatus status = EmptinessStatus::UndecidedOverFp;
    std::vector<Monomial> leading_terms;      // of the reduced GB
    std::vector<Monomial> pure_powers;        // one per active variable when Empty
    std::vector<bool> chart_unit;             // per active variable chart, when requested
    std::vector<uint64_t> witness;            // projective point coordinates when Nonempty
    size_t gb_size = 0;
};

// Decides emptiness of V(forms) in projective space over the algebraic
// closure of F_p.  Empty iff the reduced GB's leading terms contain a pure
// power of every active variable; rational witnesses are searched
// exhaustively when the chart enumeration is small enough.
EmptinessCertificate projective_empty(const PolyRing& ring, const std::vector<Polynomial>& forms,
                                      bool chart_certificates = true);

// roots of a univariate polynomial (dense, constant first) with coefficients
// in F_{p^2}, searched inside F_{p^2}; unresolved_degree counts the part of
// the squarefree kernel whose roots need a larger field
struct RootsResult {
    std::vector<Fp2> roots;
    unsigned unresolved_degree = 0;
};
RootsResult roots_in_fp2(const std::vector<Fp2>& poly);

}  // namespace qci
