#include "qci/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qci {

CycMatrix eigenspace(const CycMatrix& M, unsigned m, unsigned lambda_exponent) {
    unsigned order = m;
    for (size_t i = 0; i < M.rows(); ++i)
        for (size_t j = 0; j < M.cols(); ++j) order = std::lcm(order, M(i, j).order());
    const size_t n = M.rows();
    const Cyclotomic one(order, Rational(1));
    CycMatrix P = CycMatrix::identity(n, one);
    Cyclotomic lambda = Cyclotomic::zeta(m, lambda_exponent).lifted(order);
    for (unsigned j = 0; j < m; ++j) {
        if (j == lambda_exponent) continue;
        Cyclotomic mu = Cyclotomic::zeta(m, j).lifted(order);
        CycMatrix factor = M;
        for (size_t d = 0; d < n; ++d) factor(d, d) -= mu;
        P = P * factor.scaled((lambda - mu).inverse());
    }
    return P.column_space();
}

FpForm embed_form(const QuadraticForm& gram, const RootEmbedding& emb) {
    FpForm out(gram.rows(), gram.cols(), Fp(0, emb.p));
    for (size_t i = 0; i < gram.rows(); ++i)
        for (size_t j = 0; j < gram.cols(); ++j)
            if (!gram(i, j).is_zero()) out(i, j) = emb(gram(i, j));
    return out;
}

Polynomial form_to_poly(const PolyRing& ring, const FpForm& gram) {
    std::vector<Term> terms;
    for (unsigned i = 0; i < gram.rows(); ++i) {
        for (unsigned j = i; j < gram.cols(); ++j) {
            uint64_t c = (i == j) ? gram(i, j).v : (2 * gram(i, j).v) % ring.p;
            if (c == 0) continue;
            Term t;
            t.m.e[i] = static_cast<uint8_t>(t.m.e[i] + 1);
            t.m.e[j] = static_cast<uint8_t>(t.m.e[j] + 1);
            t.c = c;
            terms.push_back(t);
        }
    }
    return poly_from_terms(ring, std::move(terms));
}

std::vector<FpForm> specialize_mod_p(const QuadricFamily& family,
                                     const std::vector<std::vector<uint64_t>>& params,
                                     const RootEmbedding& emb) {
    const MatrixGroup& G = *family.group;
    const uint64_t p = emb.p;
    if (params.size() != family.constituents.size())
        throw std::invalid_argument("one parameter point per constituent required");

    std::vector<FpForm> forms;
    for (size_t ci = 0; ci < family.constituents.size(); ++ci) {
        const FamilyConstituent& con = family.constituents[ci];
        const auto& c = params[ci];
        if (c.size() != con.multiplicity)
            throw std::invalid_argument("parameter point has wrong length");
        bool all_zero = true;
        for (uint64_t x : c)
            if (x % p) all_zero = false;
        if (all_zero) throw std::invalid_argument("all-zero parameter tuple");

        std::vector<Fp> seed(con.seeds.rows(), Fp(0, p));
        for (size_t j = 0; j < con.multiplicity; ++j) {
            if (c[j] % p == 0) continue;
            Fp cj(c[j], p);
            for (size_t r = 0; r < con.seeds.rows(); ++r)
                if (!con.seeds(r, j).is_zero()) seed[r] = seed[r] + cj * emb(con.seeds(r, j));
        }

        std::vector<std::vector<Fp>> vecs;
        if (con.degree == 1) {
            vecs.push_back(seed);
        } else {
            for (ElemIndex g : con.orbit_elements) {
                CycMatrix S = sym2_rep_element(G.elements[g]);
                std::vector<Fp> w(seed.size(), Fp(0, p));
                for (size_t r = 0; r < S.rows(); ++r)
                    for (size_t cc = 0; cc < S.cols(); ++cc)
                        if (!S(r, cc).is_zero() && !seed[cc].is_zero())
                            w[r] = w[r] + emb(S(r, cc)) * seed[cc];
                vecs.push_back(std::move(w));
            }
        }

        const unsigned dim = G.dim;
        const auto& mons = sym2_monomials(dim);
        const Fp half = Fp(2, p).inverse();
        for (const auto& w : vecs) {
            FpForm gram(dim, dim, Fp(0, p));
            for (size_t k = 0; k < mons.size(); ++k) {
                auto [i, j] = mons[k];
                if (w[k].is_zero()) continue;
                if (i == j) {
                    gram(i, i) = w[k];
                } else {
                    gram(i, j) = w[k] * half;
                    gram(j, i) = gram(i, j);
                }
            }
            forms.push_back(std::move(gram));
        }
    }
    return forms;
}

namespace {

Matrix<Fp> embed_matrix(const CycMatrix& M, const RootEmbedding& emb) {
    Matrix<Fp> out(M.rows(), M.cols(), Fp(0, emb.p));
    for (size_t i = 0; i < M.rows(); ++i)
        for (size_t j = 0; j < M.cols(); ++j)
            if (!M(i, j).is_zero()) out(i, j) = emb(M(i, j));
    return out;
}

bool forms_rank4(const std::vector<FpForm>& forms, uint64_t p) {
    const auto& mons = sym2_monomials(8);
    Matrix<Fp> stacked(forms.size(), mons.size(), Fp(0, p));
    for (size_t r = 0; r < forms.size(); ++r)
        for (size_t k = 0; k < mons.size(); ++k) {
            auto [i, j] = mons[k];
            stacked(r, k) = (i == j) ? forms[r](i, i) : Fp(2, p) * forms[r](i, j);
        }
    return stacked.rank() == 4;
}

}  // namespace

FreenessCertificate freeness_check(const MatrixGroup& G, const QuadricFamily& family,
                                   const std::vector<std::vector<uint64_t>>& params, uint64_t p) {
    FreenessCertificate cert;
    cert.prime = p;
    cert.params = params;

    RootEmbedding emb = RootEmbedding::make(p, G.conductor);
    std::vector<FpForm> forms = specialize_mod_p(family, params, emb);
    if (!forms_rank4(forms, p)) {
        cert.free = false;
        cert.failure = "parameter choice spans fewer than four quadrics";
        return cert;
    }

    CentralExtensionData ext = scalar_subgroup(G);
    FiniteGroup Q = quotient_by_central(G, ext.scalar_elements, G.conductor);

    cert.free = true;
    for (unsigned qc = 1; qc < Q.conj.num_classes(); ++qc) {
        ElemIndex lift = Q.coset_rep[Q.conj.representatives[qc]];
        const CycMatrix& M = G.elements[lift];
        unsigned m = G.table.element_order(lift);
        for (unsigned j = 0; j < m; ++j) {
            CycMatrix basis = eigenspace(M, m, j);
            if (basis.cols() == 0) continue;
            EigenspaceCheck chk;
            chk.quotient_class = qc;
            chk.lift = lift;
            chk.element_order = m;
            chk.lambda_exponent = j;
            chk.dim = static_cast<unsigned>(basis.cols());
            chk.basis = basis;

            Matrix<Fp> Bp = embed_matrix(basis, emb);
            const unsigned k = chk.dim;
            PolyRing ring(k, p, MonomialOrder::DegRevLex);
            std::vector<Polynomial> restricted;
            for (const auto& F : forms) {
                Matrix<Fp> R = Bp.transpose() * F * Bp;
                restricted.push_back(form_to_poly(ring, R));
            }
            chk.emptiness = projective_empty(ring, restricted, true);
            if (chk.emptiness.status != EmptinessStatus::Empty && cert.free) {
                cert.free = false;
                std::ostringstream msg;
                msg << "fixed locus meets X: projective class " << qc << ", eigenvalue zeta_"
                    << m << "^" << j;
                cert.failure = msg.str();
            }
            cert.checks.push_back(std::move(chk));
        }
    }
    return cert;
}

namespace {

bool point_less(const std::array<Fp2, 8>& a, const std::array<Fp2, 8>& b) {
    for (size_t i = 0; i < 8; ++i) {
        if (a[i].a.v != b[i].a.v) return a[i].a.v < b[i].a.v;
        if (a[i].b.v != b[i].b.v) return a[i].b.v < b[i].b.v;
    }
    return false;
}

std::array<Fp2, 8> normalize_point(std::array<Fp2, 8> pt) {
    for (size_t i = 0; i < 8; ++i) {
        if (!pt[i].is_zero()) {
            Fp2 inv = pt[i].inverse();
            for (size_t j = 0; j < 8; ++j) pt[j] = pt[j] * inv;
            break;
        }
    }
    return pt;
}

std::vector<unsigned> zero_pattern(const std::array<Fp2, 8>& pt) {
    std::vector<unsigned> zs;
    for (unsigned i = 0; i < 8; ++i)
        if (pt[i].is_zero()) zs.push_back(i + 1);
    return zs;
}

unsigned jacobian_rank(const std::vector<FpForm>& forms, const std::array<Fp2, 8>& pt) {
    const uint64_t p = pt[0].p();
    const uint64_t nr = pt[0].nr;
    Matrix<Fp2> J(forms.size(), 8, Fp2(Fp(0, p), Fp(0, p), nr));
    for (size_t i = 0; i < forms.size(); ++i)
        for (size_t jv = 0; jv < 8; ++jv) {
            Fp2 acc(Fp(0, p), Fp(0, p), nr);
            for (size_t k = 0; k < 8; ++k)
                if (!forms[i](jv, k).is_zero())
                    acc = acc + Fp2(forms[i](jv, k), Fp(0, p), nr) * pt[k];
            J(i, jv) = acc + acc;  // gradient of x^T F x is 2 F x
        }
    return static_cast<unsigned>(J.rank());
}

Fp2 eval_form(const FpForm& F, const std::array<Fp2, 8>& pt) {
    const uint64_t p = pt[0].p();
    const uint64_t nr = pt[0].nr;
    Fp2 acc(Fp(0, p), Fp(0, p), nr);
    for (size_t i = 0; i < 8; ++i) {
        if (pt[i].is_zero()) continue;
        for (size_t j = 0; j < 8; ++j) {
            if (F(i, j).is_zero() || pt[j].is_zero()) continue;
            acc = acc + Fp2(F(i, j), Fp(0, p), nr) * pt[i] * pt[j];
        }
    }
    return acc;
}

// ---- diagonal-pattern mode ----

void census_diagonal(const std::vector<FpForm>& forms, uint64_t p, SingularCensus& out) {
    for (const auto& F : forms)
        for (size_t i = 0; i < 8; ++i)
            for (size_t j = 0; j < 8; ++j)
                if (i != j && !F(i, j).is_zero())
                    throw std::invalid_argument(
                        "diagonal-pattern mode requires forms with only square monomials");

    const uint64_t nr = quadratic_nonresidue(p);
    const Fp2 zero2(Fp(0, p), Fp(0, p), nr);

    std::vector<unsigned> support(4);
    for (unsigned a = 0; a < 8; ++a)
        for (unsigned b = a + 1; b < 8; ++b)
            for (unsigned c = b + 1; c < 8; ++c)
                for (unsigned d = c + 1; d < 8; ++d) {
                    support = {a, b, c, d};
                    Matrix<Fp> A(4, 4, Fp(0, p));
                    for (size_t i = 0; i < 4; ++i)
                        for (size_t k = 0; k < 4; ++k) A(i, k) = forms[i](support[k], support[k]);
                    Matrix<Fp> ker = A.kernel();
                    if (ker.cols() == 0) continue;
                    if (ker.cols() > 1) {
                        out.positive_dimensional = true;
                        out.notes.push_back("pattern with kernel dimension > 1 (degenerate parameters)");
                        continue;
                    }
                    std::array<Fp, 4> u;
                    bool has_zero = false;
                    for (size_t k = 0; k < 4; ++k) {
                        u[k] = ker(k, 0);
                        if (u[k].is_zero()) has_zero = true;
                    }
                    if (has_zero) continue;  // support is not exact here
                    Fp inv0 = u[0].inverse();
                    for (auto& x : u) x = x * inv0;

                    std::array<Fp2, 3> roots;
                    for (size_t k = 1; k < 4; ++k) {
                        auto r = sqrt_fp2(Fp2(u[k], Fp(0, p), nr));
                        if (!r) throw std::logic_error("base-field element without F_{p^2} sqrt");
                        roots[k - 1] = *r;
                    }
                    for (unsigned signs = 0; signs < 8; ++signs) {
                        std::array<Fp2, 8> pt;
                        pt.fill(zero2);
                        pt[support[0]] = Fp2(Fp(1, p), Fp(0, p), nr);
                        for (size_t k = 1; k < 4; ++k) {
                            Fp2 v = roots[k - 1];
                            if (signs & (1u << (k - 1))) v = -v;
                            pt[support[k]] = v;
                        }
                        for (const auto& F : forms)
                            if (!eval_form(F, pt).is_zero())
                                throw std::logic_error("census point does not lie on X");
                        CensusPoint cp;
                        cp.coords = pt;
                        cp.zeros = zero_pattern(pt);
                        out.points.push_back(std::move(cp));
                    }
                }
}

// ---- jacobian-groebner mode ----

Polynomial reorder(const PolyRing& ring, const Polynomial& f) {
    return poly_from_terms(ring, f.terms);
}

std::vector<Polynomial> jacobian_ideal(const PolyRing& ring, const std::vector<FpForm>& forms) {
    std::vector<Polynomial> gens;
    for (const auto& F : forms) gens.push_back(form_to_poly(ring, F));

    // rows of the Jacobian as linear polynomials
    std::vector<std::vector<Polynomial>> Jrow(forms.size(), std::vector<Polynomial>(8));
    for (size_t i = 0; i < forms.size(); ++i)
        for (unsigned jv = 0; jv < 8; ++jv) {
            std::vector<Term> ts;
            for (unsigned k = 0; k < 8; ++k) {
                uint64_t c = (2 * forms[i](jv, k).v) % ring.p;
                if (!c) continue;
                Term t;
                t.m.e[k] = 1;
                t.c = c;
                ts.push_back(t);
            }
            Jrow[i][jv] = poly_from_terms(ring, std::move(ts));
        }

    // all 4x4 minors over column subsets, expanded by permutations
    std::vector<std::array<int, 4>> perms;
    std::vector<int> perm_sign;
    {
        std::array<int, 4> idx{0, 1, 2, 3};
        do {
            int inversions = 0;
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j)
                    if (idx[i] > idx[j]) ++inversions;
            perms.push_back(idx);
            perm_sign.push_back(inversions % 2 ? -1 : 1);
        } while (std::next_permutation(idx.begin(), idx.end()));
    }

    for (unsigned a = 0; a < 8; ++a)
        for (unsigned b = a + 1; b < 8; ++b)
            for (unsigned c = b + 1; c < 8; ++c)
                for (unsigned d = c + 1; d < 8; ++d) {
                    unsigned cols[4] = {a, b, c, d};
                    Polynomial det;
                    for (int pi = 0; pi < 24; ++pi) {
                        Polynomial prod = Jrow[0][cols[perms[pi][0]]];
                        for (int r = 1; r < 4 && !prod.is_zero(); ++r)
                            prod = poly_mul(ring, prod, Jrow[r][cols[perms[pi][r]]]);
                        if (prod.is_zero()) continue;
                        if (perm_sign[pi] < 0) prod = poly_scale(ring, prod, ring.p - 1);
                        det = poly_add(ring, det, prod);
                    }
                    if (!det.is_zero()) gens.push_back(std::move(det));
                }
    return gens;
}

struct MTerm2 {
    Monomial m;
    Fp2 c;
};
using MPoly2 = std::vector<MTerm2>;

MPoly2 to_mpoly2(const Polynomial& f, uint64_t p, uint64_t nr) {
    MPoly2 out;
    for (const auto& t : f.terms) out.push_back({t.m, Fp2(Fp(t.c, p), Fp(0, p), nr)});
    return out;
}

MPoly2 substitute2(const MPoly2& f, unsigned var, const Fp2& value) {
    MPoly2 out;
    for (const auto& t : f) {
        MTerm2 nt = t;
        if (nt.m.e[var] > 0) {
            Fp2 v = value;
            Fp2 acc = value;
            for (unsigned k = 1; k < nt.m.e[var]; ++k) acc = acc * v;
            nt.c = nt.c * acc;
            nt.m.e[var] = 0;
        }
        if (!nt.c.is_zero()) out.push_back(nt);
    }
    // combine equal monomials
    MPoly2 combined;
    for (const auto& t : out) {
        bool merged = false;
        for (auto& u : combined)
            if (u.m == t.m) {
                u.c = u.c + t.c;
                merged = true;
                break;
            }
        if (!merged) combined.push_back(t);
    }
    MPoly2 cleaned;
    for (const auto& t : combined)
        if (!t.c.is_zero()) cleaned.push_back(t);
    return cleaned;
}

// is f univariate in `var` given that only vars in `remaining` may appear?
bool univariate_in(const MPoly2& f, unsigned var, const std::vector<unsigned>& remaining) {
    for (const auto& t : f)
        for (unsigned v : remaining)
            if (v != var && t.m.e[v] > 0) return false;
    return true;
}

std::vector<Fp2> as_upoly(const MPoly2& f, unsigned var, uint64_t p, uint64_t nr) {
    unsigned deg = 0;
    for (const auto& t : f) deg = std::max(deg, static_cast<unsigned>(t.m.e[var]));
    std::vector<Fp2> out(deg + 1, Fp2(Fp(0, p), Fp(0, p), nr));
    for (const auto& t : f) out[t.m.e[var]] = out[t.m.e[var]] + t.c;
    return out;
}

void extract_points(const std::vector<MPoly2>& polys, std::vector<unsigned> remaining,
                    std::array<Fp2, 8>& assignment, uint64_t p, uint64_t nr,
                    SingularCensus& out, std::vector<std::array<Fp2, 8>>& found) {
    if (remaining.empty()) {
        for (const auto& f : polys) {
            Fp2 acc(Fp(0, p), Fp(0, p), nr);
            bool nonconst = false;
            for (const auto& t : f) {
                if (!t.m.is_one()) nonconst = true;
                acc = acc + t.c;
            }
            if (nonconst || !acc.is_zero()) return;  // residual constraint violated
        }
        found.push_back(assignment);
        return;
    }
    unsigned var = remaining.back();
    std::vector<unsigned> rest(remaining.begin(), remaining.end() - 1);

    // gcd of all polynomials that are univariate in the innermost variable
    std::vector<Fp2> g;
    bool have = false;
    for (const auto& f : polys) {
        if (f.empty()) continue;
        if (!univariate_in(f, var, remaining)) continue;
        auto u = as_upoly(f, var, p, nr);
        if (u.size() <= 1) {
            if (!u.empty() && !u[0].is_zero()) return;  // nonzero constant: no solutions
            continue;
        }
        if (!have) {
            g = u;
            have = true;
        } else {
            // univariate gcd
            std::vector<Fp2> a = g, b = u;
            auto trim = [](std::vector<Fp2>& f2) {
                while (!f2.empty() && f2.back().is_zero()) f2.pop_back();
            };
            trim(a);
            trim(b);
            while (!b.empty()) {
                // a mod b
                while (a.size() >= b.size() && !a.empty()) {
                    Fp2 f2 = a.back() / b.back();
                    size_t shift = a.size() - b.size();
                    for (size_t i = 0; i < b.size(); ++i) a[shift + i] = a[shift + i] - f2 * b[i];
                    trim(a);
                }
                std::swap(a, b);
            }
            g = a;
        }
    }
    if (!have) {
        out.unresolved += 1;
        out.notes.push_back("no univariate eliminant for a variable (branch skipped)");
        return;
    }
    auto roots = roots_in_fp2(g);
    out.unresolved += roots.unresolved_degree;
    for (const Fp2& r : roots.roots) {
        assignment[var] = r;
        std::vector<MPoly2> next;
        next.reserve(polys.size());
        for (const auto& f : polys) next.push_back(substitute2(f, var, r));
        extract_points(next, rest, assignment, p, nr, out, found);
    }
}

void census_groebner(const std::vector<FpForm>& forms, uint64_t p, SingularCensus& out) {
    PolyRing ring(8, p, MonomialOrder::DegRevLex);
    std::vector<Polynomial> gens = jacobian_ideal(ring, forms);

    EmptinessCertificate top = projective_empty(ring, gens, false);
    if (top.status == EmptinessStatus::Empty) return;  // smooth: no singular points

    const uint64_t nr = quadratic_nonresidue(p);
    PolyRing lexring(8, p, MonomialOrder::Lex);

    for (unsigned mask = 1; mask < 256; ++mask) {
        std::vector<unsigned> support;
        for (unsigned v = 0; v < 8; ++v)
            if (mask & (1u << v)) support.push_back(v);
        unsigned chart = support[0];

        std::vector<Polynomial> sub;
        bool unit = false;
        for (const auto& f : gens) {
            Polynomial g = f;
            for (unsigned v = 0; v < 8; ++v)
                if (!(mask & (1u << v))) g = substitute_var(ring, g, v, 0);
            g = substitute_var(ring, g, chart, 1);
            if (g.is_zero()) continue;
            if (g.leading().m.is_one() && g.terms.size() == 1) {
                unit = true;
                break;
            }
            sub.push_back(reorder(lexring, g));
        }
        if (unit) continue;
        if (sub.empty()) {
            out.positive_dimensional = true;
            out.notes.push_back("a full coordinate stratum lies in the singular locus");
            continue;
        }

        auto gb = groebner_basis(lexring, sub);
        if (!gb.empty() && gb[0].leading().m.is_one()) continue;  // empty stratum

        std::vector<unsigned> active(support.begin() + 1, support.end());
        if (!active.empty()) {
            std::vector<bool> has_pure(8, false);
            for (const auto& g : gb) {
                unsigned v;
                if (g.leading().m.is_pure_power(&v)) has_pure[v] = true;
            }
            bool zero_dim = true;
            for (unsigned v : active) zero_dim = zero_dim && has_pure[v];
            if (!zero_dim) {
                out.positive_dimensional = true;
                out.notes.push_back("positive-dimensional singular stratum (degenerate parameters)");
                continue;
            }
        }

        std::vector<MPoly2> polys;
        for (const auto& g : gb) polys.push_back(to_mpoly2(g, p, nr));
        std::array<Fp2, 8> assignment;
        for (auto& x : assignment) x = Fp2(Fp(0, p), Fp(0, p), nr);
        assignment[chart] = Fp2(Fp(1, p), Fp(0, p), nr);
        std::vector<std::array<Fp2, 8>> found;
        extract_points(polys, active, assignment, p, nr, out, found);

        for (auto& pt : found) {
            bool exact_support = true;
            for (unsigned v : active)
                if (pt[v].is_zero()) exact_support = false;
            if (!exact_support) continue;  // handled by a smaller stratum
            for (const auto& F : forms)
                if (!eval_form(F, pt).is_zero())
                    throw std::logic_error("extracted point does not satisfy the quadrics");
            if (jacobian_rank(forms, pt) > 3)
                throw std::logic_error("extracted point is not singular");
            CensusPoint cp;
            cp.coords = pt;
            cp.zeros = zero_pattern(pt);
            out.points.push_back(std::move(cp));
        }
    }
}

}  // namespace

std::map<std::vector<unsigned>, unsigned> SingularCensus::pattern_counts() const {
    std::map<std::vector<unsigned>, unsigned> out;
    for (const auto& pt : points) out[pt.zeros] += 1;
    return out;
}

SingularCensus singular_census(const std::vector<FpForm>& forms, CensusMode mode, uint64_t p) {
    if (forms.size() != 4) throw std::invalid_argument("exactly four quadrics expected");
    SingularCensus out;
    out.prime = p;
    out.mode = mode;
    if (mode == CensusMode::DiagonalPattern)
        census_diagonal(forms, p, out);
    else
        census_groebner(forms, p, out);
    std::sort(out.points.begin(), out.points.end(),
              [](const CensusPoint& a, const CensusPoint& b) { return point_less(a.coords, b.coords); });
    return out;
}

OdpResult odp_test(const std::array<Fp2, 8>& point, const std::vector<FpForm>& forms) {
    OdpResult res;
    const uint64_t p = point[0].p();
    const uint64_t nr = point[0].nr;
    const Fp2 zero2(Fp(0, p), Fp(0, p), nr);

    Matrix<Fp2> J(forms.size(), 8, zero2);
    for (size_t i = 0; i < forms.size(); ++i)
        for (size_t jv = 0; jv < 8; ++jv) {
            Fp2 acc = zero2;
            for (size_t k = 0; k < 8; ++k)
                if (!forms[i](jv, k).is_zero() && !point[k].is_zero())
                    acc = acc + Fp2(forms[i](jv, k), Fp(0, p), nr) * point[k];
            J(i, jv) = acc + acc;
        }
    if (J.rank() != 3) {
        res.reason = "jacobian rank is " + std::to_string(J.rank()) + ", not 3";
        return res;
    }

    Matrix<Fp2> left = J.transpose().kernel();  // 4 x 1
    if (left.cols() != 1) {
        res.reason = "left kernel of the jacobian is not a line";
        return res;
    }
    Matrix<Fp2> H(8, 8, zero2);
    for (size_t i = 0; i < forms.size(); ++i) {
        const Fp2& li = left(i, 0);
        if (li.is_zero()) continue;
        for (size_t r = 0; r < 8; ++r)
            for (size_t c = 0; c < 8; ++c)
                if (!forms[i](r, c).is_zero())
                    H(r, c) = H(r, c) + li * Fp2(forms[i](r, c), Fp(0, p), nr);
    }
    H = H + H;  // Hessian of x^T F x is 2F

    Matrix<Fp2> W = J.kernel();  // 8 x 5, contains the point's direction
    // chart: largest-index nonzero coordinate; remove the point's direction
    size_t chart = 0;
    for (size_t i = 0; i < 8; ++i)
        if (!point[i].is_zero()) chart = i;
    Fp2 pc_inv = point[chart].inverse();
    Matrix<Fp2> adjusted(8, W.cols(), zero2);
    for (size_t c = 0; c < W.cols(); ++c) {
        Fp2 f = W(chart, c) * pc_inv;
        for (size_t r = 0; r < 8; ++r) adjusted(r, c) = W(r, c) - f * point[r];
    }
    Matrix<Fp2> T = adjusted.column_space();
    if (T.cols() != 4) {
        res.reason = "tangent complement has dimension " + std::to_string(T.cols());
        return res;
    }
    res.ok = true;
    Matrix<Fp2> restricted = T.transpose() * H * T;
    res.is_odp = restricted.rank() == 4;
    return res;
}

bool divisor_incidence(const DivisorPencil& pencil, const SingularCensus& census,
                       const RootEmbedding& emb, std::string* violation) {
    FpForm parts[4] = {embed_form(pencil.A1, emb), embed_form(pencil.B1, emb),
                       embed_form(pencil.A2, emb), embed_form(pencil.B2, emb)};
    for (size_t idx = 0; idx < census.points.size(); ++idx) {
        for (int f = 0; f < 4; ++f) {
            if (!eval_form(parts[f], census.points[idx].coords).is_zero()) {
                if (violation) {
                    std::ostringstream msg;
                    msg << "pencil part " << f << " does not vanish at census point " << idx;
                    *violation = msg.str();
                }
                return false;
            }
        }
    }
    return true;
}

bool pencil_invariance(const MatrixGroup& G, const DivisorPencil& pencil) {
    // the rank conditions are cubic forms on the pencil parameter line, so
    // vanishing at five distinct points proves vanishing identically
    static const std::pair<long, long> samples[5] = {{1, 0}, {0, 1}, {1, 1}, {1, 2}, {1, 3}};
    for (auto [r1, r2] : samples) {
        Cyclotomic c1(1, Rational(r1)), c2(1, Rational(r2));
        std::vector<QuadraticForm> f;
        f.push_back(pencil.A1.scaled(c1) + pencil.B1.scaled(c2));
        f.push_back(pencil.A2.scaled(c1) + pencil.B2.scaled(c2));
        if (stack_coeff_rows(f).rank() != 2)
            throw std::invalid_argument("pencil is degenerate at a sample parameter");
        for (ElemIndex gi : G.generator_indices) {
            const CycMatrix& M = G.elements[gi];
            for (int which = 0; which < 2; ++which) {
                std::vector<QuadraticForm> stacked = f;
                stacked.push_back(M * f[which] * M.transpose());
                if (stack_coeff_rows(stacked).rank() != 2) return false;
            }
        }
    }
    return true;
}

bool census_closed_under(const CycMatrix& g, const SingularCensus& census,
                         const RootEmbedding& emb) {
    const uint64_t p = emb.p;
    const uint64_t nr = quadratic_nonresidue(p);
    Matrix<Fp> gp = embed_matrix(g, emb);
    std::vector<std::array<Fp2, 8>> sorted;
    for (const auto& cp : census.points) sorted.push_back(cp.coords);

    for (const auto& cp : census.points) {
        std::array<Fp2, 8> img;
        for (size_t r = 0; r < 8; ++r) {
            Fp2 acc(Fp(0, p), Fp(0, p), nr);
            for (size_t c = 0; c < 8; ++c)
                if (!gp(r, c).is_zero() && !cp.coords[c].is_zero())
                    acc = acc + Fp2(gp(r, c), Fp(0, p), nr) * cp.coords[c];
            img[r] = acc;
        }
        img = normalize_point(img);
        bool member = false;
        for (const auto& q : sorted)
            if (q == img) {
                member = true;
                break;
            }
        if (!member) return false;
    }
    return true;
}

}  // namespace qci
