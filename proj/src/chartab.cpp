#include "qci/chartab.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qci {

Cyclotomic inner_product(const GroupCore& G, const ClassFunction& f, const ClassFunction& g) {
    if (f.size() != G.conj.num_classes() || g.size() != G.conj.num_classes())
        throw std::invalid_argument("class function length mismatch");
    Cyclotomic acc(G.conductor);
    for (unsigned c = 0; c < f.size(); ++c) {
        if (f.values[c].is_zero() || g.values[c].is_zero()) continue;
        acc += Cyclotomic(1, Rational(G.conj.sizes[c])) * f.values[c] * g.values[c].conj();
    }
    return acc * Cyclotomic(1, Rational(1, static_cast<unsigned long>(G.order())));
}

CharacterTestResult is_character(const GroupCore& G, const ClassFunction& f,
                                 const CharacterTable& T) {
    CharacterTestResult out;
    out.is_character = true;
    for (size_t i = 0; i < T.irreducibles.size(); ++i) {
        Cyclotomic m = inner_product(G, f, T.irreducibles[i]);
        bool ok = m.is_integer() && m.rational_value() >= 0;
        if (!m.is_rational()) ok = false;
        if (!ok && out.failing_index < 0) {
            out.failing_index = static_cast<int>(i);
            std::ostringstream w;
            w << "<f, chi_" << i << "> = " << m.to_string();
            out.witness = w.str();
            out.is_character = false;
        }
        out.multiplicities.push_back(m.is_rational() ? m.rational_value() : Rational(0));
    }
    return out;
}

ClassFunction trivial_character(const GroupCore& G) {
    ClassFunction f;
    f.values.assign(G.conj.num_classes(), Cyclotomic(G.conductor, Rational(1)));
    return f;
}

ClassFunction defining_character(const MatrixGroup& G) {
    ClassFunction f;
    for (unsigned c = 0; c < G.conj.num_classes(); ++c)
        f.values.push_back(matrix_trace(G.elements[G.conj.representatives[c]]).lifted(G.conductor));
    return f;
}

namespace {

using FpMat = Matrix<Fp>;

// characteristic polynomial over F_p via Hessenberg reduction
std::vector<Fp> charpoly(FpMat a) {
    const size_t n = a.rows();
    const uint64_t p = a(0, 0).p;
    const Fp zero(0, p), one(1, p);
    // reduce to Hessenberg form
    for (size_t col = 0; col + 2 < n; ++col) {
        size_t piv = col + 1;
        while (piv < n && a(piv, col).is_zero()) ++piv;
        if (piv == n) continue;
        if (piv != col + 1) {
            for (size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col + 1, j));
            for (size_t i = 0; i < n; ++i) std::swap(a(i, piv), a(i, col + 1));
        }
        Fp inv = a(col + 1, col).inverse();
        for (size_t row = col + 2; row < n; ++row) {
            if (a(row, col).is_zero()) continue;
            Fp f = a(row, col) * inv;
            for (size_t j = 0; j < n; ++j) a(row, j) = a(row, j) - f * a(col + 1, j);
            for (size_t i = 0; i < n; ++i) a(i, col + 1) = a(i, col + 1) + f * a(i, row);
        }
    }
    // recurrence on leading principal minors of (xI - H), H upper Hessenberg:
    // p_m = (x - H[m-1][m-1]) p_{m-1} - sum_k H[k][m-1] (prod_l H[l+1][l]) p_k
    std::vector<std::vector<Fp>> pchar(n + 1);
    pchar[0] = {one};
    for (size_t m = 1; m <= n; ++m) {
        std::vector<Fp> pm(m + 1, zero);
        for (size_t k = 0; k < pchar[m - 1].size(); ++k) {
            pm[k + 1] = pm[k + 1] + pchar[m - 1][k];
            pm[k] = pm[k] - a(m - 1, m - 1) * pchar[m - 1][k];
        }
        Fp beta = one;
        for (size_t k = m - 1; k-- > 0;) {
            beta = beta * a(k + 1, k);
            if (beta.is_zero()) break;
            Fp coeff = a(k, m - 1) * beta;
            if (coeff.is_zero()) continue;
            for (size_t j = 0; j < pchar[k].size(); ++j)
                pm[j] = pm[j] - coeff * pchar[k][j];
        }
        pchar[m] = std::move(pm);
    }
    return pchar[n];
}

std::vector<uint64_t> poly_roots_scan(const std::vector<Fp>& poly, uint64_t p) {
    std::vector<uint64_t> roots;
    for (uint64_t x = 0; x < p; ++x) {
        uint64_t acc = 0;
        for (size_t i = poly.size(); i-- > 0;) acc = (mulmod(acc, x, p) + poly[i].v) % p;
        if (acc == 0) roots.push_back(x);
    }
    return roots;
}

struct SeparationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace

CharacterTable character_table(const GroupCore& G, uint64_t prime) {
    const auto& conj = G.conj;
    const size_t k = conj.num_classes();
    const size_t n = G.order();
    const unsigned e = conj.exponent;

    uint64_t p = prime;
    bool auto_prime = (p == 0);
    if (auto_prime) p = next_prime_1_mod(e, 2 * n);

    for (int attempt = 0; attempt < 8; ++attempt) {
        if (!is_prime(p) || (p - 1) % e != 0)
            throw std::invalid_argument("character-table prime must be 1 mod the exponent");
        try {
            const Fp zero(0, p), one(1, p);

            // class "structure constant" matrices M_i acting on the center of F_p[G]:
            // (M_i)[m][j] = #{ x in C_i : class(x^{-1} z_m) = j },  z_m the class rep
            std::vector<FpMat> class_mats;
            class_mats.reserve(k);
            for (size_t i = 0; i < k; ++i) {
                FpMat M(k, k, zero);
                for (size_t m = 0; m < k; ++m) {
                    ElemIndex zm = conj.representatives[m];
                    for (ElemIndex x : conj.classes[i]) {
                        unsigned j = conj.class_of[G.table.mul[G.table.inv[x]][zm]];
                        M(m, j) = M(m, j) + one;
                    }
                }
                class_mats.push_back(std::move(M));
            }

            // refine to the common one-dimensional eigenspaces
            // subspace = columns of a basis matrix in reduced column echelon form
            std::vector<FpMat> subspaces{FpMat::identity(k, one)};
            for (size_t i = 1; i < k; ++i) {
                bool all_one = true;
                for (const auto& s : subspaces)
                    if (s.cols() > 1) all_one = false;
                if (all_one) break;

                std::vector<FpMat> next;
                for (const auto& B : subspaces) {
                    if (B.cols() == 1) {
                        next.push_back(B);
                        continue;
                    }
                    // restriction R with M*B = B*R, read off at pivot rows
                    FpMat MB = class_mats[i] * B;
                    // find pivot rows of B (reduced column echelon: unit rows)
                    std::vector<size_t> pivot_rows;
                    {
                        FpMat Bt = B.transpose();
                        auto piv = Bt.rref();
                        pivot_rows.assign(piv.begin(), piv.end());
                    }
                    if (pivot_rows.size() != B.cols())
                        throw SeparationFailure("degenerate subspace basis");
                    FpMat Bpiv(B.cols(), B.cols(), zero), MBpiv(B.cols(), B.cols(), zero);
                    for (size_t r = 0; r < pivot_rows.size(); ++r)
                        for (size_t c = 0; c < B.cols(); ++c) {
                            Bpiv(r, c) = B(pivot_rows[r], c);
                            MBpiv(r, c) = MB(pivot_rows[r], c);
                        }
                    FpMat R = Bpiv.inverse() * MBpiv;

                    auto cp = charpoly(R);
                    auto roots = poly_roots_scan(cp, p);
                    if (roots.empty()) throw SeparationFailure("no eigenvalue in F_p");
                    size_t dims = 0;
                    for (uint64_t lam : roots) {
                        FpMat RL = R;
                        for (size_t d = 0; d < R.rows(); ++d) RL(d, d) = RL(d, d) - Fp(lam, p);
                        FpMat ker = RL.kernel();
                        if (ker.cols() == 0) continue;
                        FpMat sub = B * ker;
                        // canonicalize to reduced column echelon
                        sub = sub.column_space();
                        dims += sub.cols();
                        next.push_back(std::move(sub));
                    }
                    if (dims != B.cols())
                        throw SeparationFailure("eigenspaces do not fill the subspace");
                }
                subspaces = std::move(next);
            }
            for (const auto& s : subspaces)
                if (s.cols() != 1) throw SeparationFailure("common eigenspaces not all 1-dim");
            if (subspaces.size() != k) throw SeparationFailure("wrong number of eigenvectors");

            // a common eigenvector v is proportional to (conj(chi(g_j)))_j
            RootEmbedding emb = RootEmbedding::make(p, e);
            const unsigned conductor = G.conductor;
            unsigned lift_step = conductor / e;
            if (conductor % e != 0) throw std::logic_error("conductor does not contain exponent");

            std::vector<ClassFunction> chars;
            std::vector<unsigned> degrees;
            for (const auto& V : subspaces) {
                std::vector<Fp> v(k, zero);
                for (size_t j = 0; j < k; ++j) v[j] = V(j, 0);
                if (v[0].is_zero()) throw SeparationFailure("eigenvector vanishes at identity");
                Fp v0inv = v[0].inverse();

                // omega_i = |C_i| v[inv(i)] / v[0];  |G|/d^2 = sum_i omega_i omega_{i'} / |C_i|
                std::vector<Fp> omega(k);
                for (size_t i = 0; i < k; ++i)
                    omega[i] = Fp(conj.sizes[i], p) * v[conj.inverse_class(i)] * v0inv;
                Fp s(0, p);
                for (size_t i = 0; i < k; ++i)
                    s = s + omega[i] * omega[conj.inverse_class(i)] / Fp(conj.sizes[i], p);
                if (s.is_zero()) throw SeparationFailure("degree norm vanished");
                Fp d2 = Fp(n % p, p) / s;
                unsigned degree = 0;
                for (unsigned d = 1; static_cast<uint64_t>(d) * d <= n; ++d)
                    if (Fp(static_cast<uint64_t>(d) * d % p, p) == d2) {
                        degree = d;
                        break;
                    }
                if (degree == 0) throw SeparationFailure("no integral degree matches");

                // chi(g_i) mod p = d * v[inv(i)] / v[0]
                std::vector<Fp> chi_p(k);
                for (size_t i = 0; i < k; ++i)
                    chi_p[i] = Fp(degree, p) * v[conj.inverse_class(i)] * v0inv;

                // lift each value through eigenvalue multiplicities:
                // c_j = (1/m) sum_s chi(g^s) r_m^{-js}, then chi(g) = sum c_j zeta_m^j
                ClassFunction chi;
                chi.values.reserve(k);
                for (size_t c = 0; c < k; ++c) {
                    unsigned m = conj.rep_order[c];
                    uint64_t rm = powmod(emb.root, e / m, p);
                    uint64_t rm_inv = invmod(rm, p);
                    std::vector<Rational> coeffs(conductor);
                    uint64_t minv = invmod(m % p, p);
                    mpz_class total = 0;
                    for (unsigned j = 0; j < m; ++j) {
                        uint64_t acc = 0;
                        uint64_t w = 1;  // rm^{-j s}
                        uint64_t rmj = powmod(rm_inv, j, p);
                        for (unsigned sdx = 0; sdx < m; ++sdx) {
                            unsigned cls = conj.power_map[sdx % e][c];
                            acc = (acc + mulmod(chi_p[cls].v, w, p)) % p;
                            w = mulmod(w, rmj, p);
                        }
                        uint64_t cj = mulmod(acc, minv, p);
                        if (cj > degree)
                            throw SeparationFailure("eigenvalue multiplicity out of range");
                        total += static_cast<unsigned long>(cj);
                        coeffs[(static_cast<size_t>(j) * (conductor / m)) % conductor] +=
                            Rational(static_cast<unsigned long>(cj));
                    }
                    if (total != degree)
                        throw SeparationFailure("eigenvalue multiplicities do not sum to degree");
                    chi.values.push_back(Cyclotomic::from_coeffs(conductor, std::move(coeffs)));
                }
                if (!chi.values[0].is_integer() ||
                    chi.values[0].rational_value() != Rational(degree))
                    throw SeparationFailure("lifted degree mismatch");
                chars.push_back(std::move(chi));
                degrees.push_back(degree);
            }

            // deterministic ordering: by degree, then by canonical value vector
            std::vector<size_t> perm(chars.size());
            std::iota(perm.begin(), perm.end(), 0);
            std::sort(perm.begin(), perm.end(), [&](size_t a, size_t b) {
                if (degrees[a] != degrees[b]) return degrees[a] < degrees[b];
                for (size_t c = 0; c < k; ++c) {
                    int cv = chars[a].values[c].cmp(chars[b].values[c]);
                    if (cv != 0) return cv < 0;
                }
                return false;
            });

            CharacterTable T;
            T.group = &G;
            T.prime = p;
            for (size_t idx : perm) {
                T.irreducibles.push_back(std::move(chars[idx]));
                T.degrees.push_back(degrees[idx]);
            }

            // exact verification over Q(zeta): orthonormal rows, sum of squares
            unsigned long sum_sq = 0;
            for (unsigned d : T.degrees) sum_sq += static_cast<unsigned long>(d) * d;
            if (sum_sq != n) throw SeparationFailure("sum of squared degrees mismatch");
            for (size_t i = 0; i < T.irreducibles.size(); ++i)
                for (size_t j = i; j < T.irreducibles.size(); ++j) {
                    Cyclotomic ip = inner_product(G, T.irreducibles[i], T.irreducibles[j]);
                    Rational expect = (i == j) ? 1 : 0;
                    if (!ip.is_rational() || ip.rational_value() != expect)
                        throw SeparationFailure("row orthogonality failed exactly");
                }
            return T;
        } catch (const SeparationFailure&) {
            if (!auto_prime) throw;
            p = next_prime_1_mod(e, p);
        }
    }
    throw std::runtime_error("character table: no suitable prime found");
}

}  // namespace qci
