#include "qci/quadrics.hpp"

#include <map>
#include <numeric>
#include <sstream>

namespace qci {

const std::vector<std::pair<unsigned, unsigned>>& sym2_monomials(unsigned dim) {
    static std::map<unsigned, std::vector<std::pair<unsigned, unsigned>>> cache;
    auto it = cache.find(dim);
    if (it != cache.end()) return it->second;
    std::vector<std::pair<unsigned, unsigned>> mons;
    for (unsigned i = 0; i < dim; ++i)
        for (unsigned j = i; j < dim; ++j) mons.emplace_back(i, j);
    return cache.emplace(dim, std::move(mons)).first->second;
}

size_t sym2_index(unsigned i, unsigned j, unsigned dim) {
    if (i > j) std::swap(i, j);
    // offset of row i in the upper-triangular enumeration
    return static_cast<size_t>(i) * dim - static_cast<size_t>(i) * (i + 1) / 2 + j;
}

std::vector<Cyclotomic> form_to_coeffs(const QuadraticForm& gram) {
    const unsigned dim = static_cast<unsigned>(gram.rows());
    const auto& mons = sym2_monomials(dim);
    std::vector<Cyclotomic> out;
    out.reserve(mons.size());
    const Cyclotomic two(1, Rational(2));
    for (auto [i, j] : mons)
        out.push_back(i == j ? gram(i, j) : two * gram(i, j));
    return out;
}

QuadraticForm coeffs_to_form(const std::vector<Cyclotomic>& coeffs, unsigned dim) {
    const auto& mons = sym2_monomials(dim);
    if (coeffs.size() != mons.size()) throw std::invalid_argument("coefficient length mismatch");
    unsigned order = 1;
    for (const auto& c : coeffs) order = std::lcm(order, c.order());
    QuadraticForm gram(dim, dim, Cyclotomic(order));
    const Cyclotomic half(1, Rational(1, 2));
    for (size_t k = 0; k < mons.size(); ++k) {
        auto [i, j] = mons[k];
        if (i == j) {
            gram(i, i) = coeffs[k].lifted(order);
        } else {
            Cyclotomic v = half * coeffs[k];
            gram(i, j) = v.lifted(order);
            gram(j, i) = gram(i, j);
        }
    }
    return gram;
}

CycMatrix sym2_rep_element(const CycMatrix& g) {
    const unsigned dim = static_cast<unsigned>(g.rows());
    const auto& mons = sym2_monomials(dim);
    const size_t n2 = mons.size();
    unsigned order = 1;
    for (size_t i = 0; i < dim; ++i)
        for (size_t j = 0; j < dim; ++j) order = std::lcm(order, g(i, j).order());
    CycMatrix out(n2, n2, Cyclotomic(order));

    // nonzero entries per column of g
    std::vector<std::vector<std::pair<unsigned, Cyclotomic>>> col_nz(dim);
    for (unsigned c = 0; c < dim; ++c)
        for (unsigned r = 0; r < dim; ++r)
            if (!g(r, c).is_zero()) col_nz[c].emplace_back(r, g(r, c));

    for (size_t k = 0; k < n2; ++k) {
        auto [i, j] = mons[k];
        for (const auto& [r, a] : col_nz[i])
            for (const auto& [s, b] : col_nz[j]) {
                size_t row = sym2_index(r, s, dim);
                out(row, k) += a * b;
            }
    }
    return out;
}

CycMatrix isotypic_projector(const MatrixGroup& G, const CharacterTable& T, unsigned irrep) {
    const size_t n2 = sym2_monomials(G.dim).size();
    const unsigned cond = G.conductor;
    CycMatrix acc(n2, n2, Cyclotomic(cond));

    std::vector<Cyclotomic> coeff_of_class;
    for (unsigned c = 0; c < G.conj.num_classes(); ++c)
        coeff_of_class.push_back(T.irreducibles[irrep].values[c].conj());

    for (ElemIndex g = 0; g < G.order(); ++g) {
        const Cyclotomic& a = coeff_of_class[G.conj.class_of[g]];
        if (a.is_zero()) continue;
        CycMatrix S = sym2_rep_element(G.elements[g]);
        for (size_t r = 0; r < n2; ++r)
            for (size_t c = 0; c < n2; ++c)
                if (!S(r, c).is_zero()) acc(r, c) += a * S(r, c);
    }
    Rational scale(T.degrees[irrep], static_cast<unsigned long>(G.order()));
    return acc.scaled(Cyclotomic(1, scale));
}

CycMatrix isotypic_component(const MatrixGroup& G, const CharacterTable& T, unsigned irrep) {
    return isotypic_projector(G, T, irrep).column_space();
}

namespace {

// restriction R of the operator S to the invariant column span B (reduced
// column echelon), via S*B = B*R read off at B's pivot rows
CycMatrix restrict_to_span(const CycMatrix& S, const CycMatrix& B) {
    CycMatrix SB = S * B;
    CycMatrix Bt = B.transpose();
    auto pivots = Bt.rref();
    if (pivots.size() != B.cols()) throw std::logic_error("basis is not full rank");
    CycMatrix Bpiv(B.cols(), B.cols(), Cyclotomic(1)), SBpiv(B.cols(), B.cols(), Cyclotomic(1));
    for (size_t r = 0; r < pivots.size(); ++r)
        for (size_t c = 0; c < B.cols(); ++c) {
            Bpiv(r, c) = B(pivots[r], c);
            SBpiv(r, c) = SB(pivots[r], c);
        }
    return Bpiv.inverse() * SBpiv;
}

// multiplicity of the eigenvalue zeta_e^j in the irrep chi at the element h
Rational eigenvalue_multiplicity(const GroupCore& G, const ClassFunction& chi, ElemIndex h,
                                 unsigned e, unsigned j) {
    Cyclotomic acc(G.conductor);
    for (unsigned s = 0; s < e; ++s) {
        unsigned cls = G.conj.class_of[G.table.power(h, s)];
        long exp = -static_cast<long>(j) * s;
        acc += chi.values[cls] * Cyclotomic::zeta(e, exp);
    }
    Cyclotomic m = acc * Cyclotomic(1, Rational(1, e));
    if (!m.is_rational()) throw std::logic_error("eigenvalue multiplicity not rational");
    return m.rational_value();
}

std::vector<ElemIndex> select_orbit_elements(const MatrixGroup& G,
                                             const std::vector<CycMatrix>& sym2_cache,
                                             const std::vector<Cyclotomic>& seed,
                                             unsigned degree) {
    const size_t n2 = seed.size();
    std::vector<ElemIndex> chosen;
    CycMatrix stacked(degree, n2, Cyclotomic(G.conductor));
    size_t have = 0;
    for (ElemIndex g = 0; g < G.order() && have < degree; ++g) {
        std::vector<Cyclotomic> w = sym2_cache[g].apply(seed);
        CycMatrix trial(have + 1, n2, Cyclotomic(G.conductor));
        for (size_t r = 0; r < have; ++r)
            for (size_t c = 0; c < n2; ++c) trial(r, c) = stacked(r, c);
        for (size_t c = 0; c < n2; ++c) trial(have, c) = w[c].lifted(G.conductor);
        if (trial.rank() == have + 1) {
            for (size_t c = 0; c < n2; ++c) stacked(have, c) = trial(have, c);
            chosen.push_back(g);
            ++have;
        }
    }
    if (have != degree) throw std::logic_error("orbit of seed does not span a full copy");
    return chosen;
}

}  // namespace

QuadricFamily equivariant_quadric_family(const MatrixGroup& G, const CharacterTable& T,
                                         const std::vector<Rational>& v_multiplicities) {
    QuadricFamily fam;
    fam.group = &G;

    // cache the induced matrices once; they are reused across constituents
    std::vector<CycMatrix> sym2_cache;
    sym2_cache.reserve(G.order());
    for (ElemIndex g = 0; g < G.order(); ++g)
        sym2_cache.push_back(sym2_rep_element(G.elements[g]));

    std::ostringstream shape;
    for (size_t irrep = 0; irrep < v_multiplicities.size(); ++irrep) {
        const Rational& mv = v_multiplicities[irrep];
        if (mv == 0) continue;
        if (mv.get_den() != 1 || mv < 0)
            throw std::invalid_argument("quadric character has a non-integral constituent");
        unsigned occurrences = static_cast<unsigned>(mv.get_num().get_ui());

        FamilyConstituent base;
        base.irrep_index = static_cast<unsigned>(irrep);
        base.degree = T.degrees[irrep];

        CycMatrix B = isotypic_component(G, T, static_cast<unsigned>(irrep));
        if (B.cols() % base.degree != 0)
            throw std::logic_error("isotypic dimension is not a multiple of the degree");
        base.multiplicity = static_cast<unsigned>(B.cols()) / base.degree;

        if (base.degree == 1) {
            base.seeds = B;
            base.orbit_elements = {0};
            for (size_t c = 0; c < B.cols(); ++c) {
                CycMatrix block(B.rows(), 1, Cyclotomic(G.conductor));
                for (size_t r = 0; r < B.rows(); ++r) block(r, 0) = B(r, c);
                base.blocks.push_back(std::move(block));
            }
        } else {
            // find an element with a simple eigenvalue in this irrep; the
            // corresponding eigenspace inside the isotypic component is a
            // canonical copy of the multiplicity space
            bool found = false;
            for (ElemIndex h = 1; h < G.order() && !found; ++h) {
                unsigned e = G.table.element_order(h);
                for (unsigned j = 0; j < e && !found; ++j) {
                    Rational mult = eigenvalue_multiplicity(G, T.irreducibles[irrep], h, e, j);
                    if (mult != 1) continue;
                    CycMatrix R = restrict_to_span(sym2_cache[h], B);
                    Cyclotomic lambda = Cyclotomic::zeta(e, j).lifted(G.conductor);
                    for (size_t d = 0; d < R.rows(); ++d) R(d, d) -= lambda;
                    CycMatrix ker = R.kernel();
                    if (ker.cols() != base.multiplicity)
                        throw std::logic_error("seed eigenspace has unexpected dimension");
                    base.seeds = (B * ker).column_space();
                    found = true;
                }
            }
            if (!found)
                throw std::runtime_error(
                    "no group element separates a 1-dimensional eigenspace of the constituent");

            std::vector<Cyclotomic> seed0(base.seeds.rows(), Cyclotomic(G.conductor));
            for (size_t r = 0; r < base.seeds.rows(); ++r) seed0[r] = base.seeds(r, 0);
            base.orbit_elements = select_orbit_elements(G, sym2_cache, seed0, base.degree);

            for (size_t j = 0; j < base.multiplicity; ++j) {
                std::vector<Cyclotomic> seed(base.seeds.rows(), Cyclotomic(G.conductor));
                for (size_t r = 0; r < base.seeds.rows(); ++r) seed[r] = base.seeds(r, j);
                CycMatrix block(base.seeds.rows(), base.degree, Cyclotomic(G.conductor));
                for (size_t k = 0; k < base.orbit_elements.size(); ++k) {
                    auto w = sym2_cache[base.orbit_elements[k]].apply(seed);
                    for (size_t r = 0; r < w.size(); ++r) block(r, k) = w[r].lifted(G.conductor);
                }
                base.blocks.push_back(std::move(block));
            }
        }

        for (unsigned occ = 0; occ < occurrences; ++occ) {
            if (!shape.str().empty()) shape << " x ";
            shape << "P" << (base.multiplicity - 1);
            fam.constituents.push_back(base);
        }
    }
    fam.parameter_shape = shape.str();

    // the four quadrics: total degree across constituents must be 4
    unsigned total = 0;
    for (const auto& c : fam.constituents) total += c.degree;
    if (total != 4) throw std::logic_error("constituent degrees do not sum to four");
    return fam;
}

SpecializeResult specialize(const QuadricFamily& family,
                            const std::vector<std::vector<Rational>>& params) {
    const MatrixGroup& G = *family.group;
    if (params.size() != family.constituents.size())
        throw std::invalid_argument("one parameter point per constituent required");

    SpecializeResult out;
    std::vector<std::vector<Cyclotomic>> coeff_rows;
    for (size_t ci = 0; ci < family.constituents.size(); ++ci) {
        const FamilyConstituent& con = family.constituents[ci];
        const auto& c = params[ci];
        if (c.size() != con.multiplicity)
            throw std::invalid_argument("parameter point has wrong length");
        bool all_zero = true;
        for (const auto& x : c)
            if (x != 0) all_zero = false;
        if (all_zero) throw std::invalid_argument("all-zero parameter tuple");

        // seed = sum_j c_j seeds_j ; member = span of the orbit of the seed
        std::vector<Cyclotomic> seed(con.seeds.rows(), Cyclotomic(G.conductor));
        for (size_t j = 0; j < con.multiplicity; ++j) {
            if (c[j] == 0) continue;
            Cyclotomic cj(1, c[j]);
            for (size_t r = 0; r < con.seeds.rows(); ++r) seed[r] += cj * con.seeds(r, j);
        }

        std::vector<std::vector<Cyclotomic>> vecs;
        if (con.degree == 1) {
            vecs.push_back(seed);
        } else {
            for (ElemIndex g : con.orbit_elements)
                vecs.push_back(sym2_rep_element(G.elements[g]).apply(seed));
            // the preselected orbit can degenerate at special parameters;
            // fall back to a greedy scan so the member is still a full copy
            CycMatrix test(vecs.size(), seed.size(), Cyclotomic(G.conductor));
            for (size_t r = 0; r < vecs.size(); ++r)
                for (size_t cc = 0; cc < seed.size(); ++cc)
                    test(r, cc) = vecs[r][cc].lifted(G.conductor);
            if (test.rank() < con.degree) {
                vecs.clear();
                std::vector<CycMatrix> cache;
                for (ElemIndex g = 0; g < G.order(); ++g)
                    cache.push_back(sym2_rep_element(G.elements[g]));
                auto orbit = select_orbit_elements(G, cache, seed, con.degree);
                for (ElemIndex g : orbit) vecs.push_back(cache[g].apply(seed));
            }
        }
        for (auto& w : vecs) {
            for (auto& x : w) x = x.lifted(G.conductor);
            out.forms.push_back(coeffs_to_form(w, G.dim));
            coeff_rows.push_back(std::move(w));
        }
    }

    CycMatrix stacked(coeff_rows.size(), coeff_rows.empty() ? 0 : coeff_rows[0].size(),
                      Cyclotomic(G.conductor));
    for (size_t r = 0; r < coeff_rows.size(); ++r)
        for (size_t c = 0; c < coeff_rows[r].size(); ++c) stacked(r, c) = coeff_rows[r][c];
    out.degenerate = stacked.rank() < 4;
    return out;
}

Matrix<Cyclotomic> stack_coeff_rows(const std::vector<QuadraticForm>& forms) {
    if (forms.empty()) return CycMatrix(0, 0, Cyclotomic(1));
    unsigned dim = static_cast<unsigned>(forms[0].rows());
    const size_t n2 = sym2_monomials(dim).size();
    unsigned order = 1;
    std::vector<std::vector<Cyclotomic>> rows;
    for (const auto& f : forms) {
        rows.push_back(form_to_coeffs(f));
        for (const auto& x : rows.back()) order = std::lcm(order, x.order());
    }
    CycMatrix out(forms.size(), n2, Cyclotomic(order));
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < n2; ++c) out(r, c) = rows[r][c].lifted(order);
    return out;
}

bool same_span(const std::vector<QuadraticForm>& a, const std::vector<QuadraticForm>& b) {
    CycMatrix A = stack_coeff_rows(a);
    CycMatrix B = stack_coeff_rows(b);
    size_t ra = A.rank(), rb = B.rank();
    if (ra != rb) return false;
    std::vector<QuadraticForm> both = a;
    both.insert(both.end(), b.begin(), b.end());
    return stack_coeff_rows(both).rank() == ra;
}

std::vector<Rational> member_parameters(const QuadricFamily& family, size_t constituent,
                                        const std::vector<QuadraticForm>& member) {
    const FamilyConstituent& con = family.constituents[constituent];
    const unsigned cond = family.group->conductor;
    CycMatrix M = stack_coeff_rows(member).transpose();  // 36 x r, columns span the member
    // solve for intersections of span(M) with span(seeds)
    const size_t n2 = M.rows();
    CycMatrix aug(n2, M.cols() + con.multiplicity, Cyclotomic(cond));
    for (size_t r = 0; r < n2; ++r) {
        for (size_t c = 0; c < M.cols(); ++c) aug(r, c) = M(r, c).lifted(cond);
        for (size_t j = 0; j < con.multiplicity; ++j)
            aug(r, M.cols() + j) = -con.seeds(r, j);
    }
    CycMatrix ker = aug.kernel();
    if (ker.cols() != 1)
        throw std::runtime_error("member does not meet the seed space in a line");
    std::vector<Rational> out;
    for (size_t j = 0; j < con.multiplicity; ++j) {
        const Cyclotomic& x = ker(M.cols() + j, 0);
        if (!x.is_rational())
            throw std::runtime_error("member parameters are not rational");
        out.push_back(x.rational_value());
    }
    return out;
}

}  // namespace qci
