#include "qci/group.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace qci {

ElemIndex CayleyTable::power(ElemIndex g, long k) const {
    unsigned n = element_order(g);
    long e = k % static_cast<long>(n);
    if (e < 0) e += n;
    ElemIndex acc = 0;
    for (long i = 0; i < e; ++i) acc = mul[acc][g];
    return acc;
}

unsigned CayleyTable::element_order(ElemIndex g) const {
    unsigned n = 1;
    ElemIndex x = g;
    while (x != 0) {
        x = mul[x][g];
        ++n;
    }
    return n;
}

unsigned group_exponent(const CayleyTable& table) {
    unsigned e = 1;
    for (ElemIndex g = 0; g < table.order(); ++g)
        e = std::lcm(e, table.element_order(g));
    return e;
}

unsigned ConjugacyData::inverse_class(unsigned c) const {
    unsigned ord = rep_order[c];
    return power_map[(ord - 1) % exponent][c];
}

namespace {

struct MatrixKeyHash {
    size_t operator()(const CycMatrix& m) const { return hash_matrix(m); }
};

}  // namespace

MatrixGroup close_group(const std::vector<CycMatrix>& generators, size_t cap,
                        const std::string& name) {
    if (generators.empty())
        throw GroupBuildError(GroupBuildError::Kind::BadInput, "no generators");
    const unsigned dim = static_cast<unsigned>(generators[0].rows());
    unsigned order = 1;
    for (const auto& g : generators) {
        if (g.rows() != dim || g.cols() != dim)
            throw GroupBuildError(GroupBuildError::Kind::BadInput, "generator shape mismatch");
        for (size_t i = 0; i < g.rows(); ++i)
            for (size_t j = 0; j < g.cols(); ++j)
                order = std::lcm(order, g(i, j).order());
        if (g.rank() != dim)
            throw GroupBuildError(GroupBuildError::Kind::NonInvertibleGenerator,
                                  "generator is not invertible");
    }

    MatrixGroup G;
    G.name = name;
    G.dim = dim;
    G.matrix_order = order;
    const Cyclotomic one(order, Rational(1));

    // normalize generators to the common entry order so hashing is canonical
    auto lift_matrix = [&](const CycMatrix& m) {
        CycMatrix out(dim, dim, Cyclotomic(order));
        for (size_t i = 0; i < dim; ++i)
            for (size_t j = 0; j < dim; ++j) out(i, j) = m(i, j).lifted(order);
        return out;
    };

    std::unordered_map<CycMatrix, ElemIndex, MatrixKeyHash> index_of;
    G.elements.push_back(CycMatrix::identity(dim, one));
    index_of.emplace(G.elements[0], 0);

    std::vector<CycMatrix> gens;
    for (const auto& g : generators) gens.push_back(lift_matrix(g));

    // left-multiplication closure; lambda[s][x] = index of gens[s] * elements[x]
    std::vector<std::vector<ElemIndex>> gen_action(gens.size());
    // BFS tree: how each element was first produced (generator s applied to parent)
    std::vector<std::pair<int, ElemIndex>> produced_by{{-1, 0}};

    size_t head = 0;
    while (head < G.elements.size()) {
        ElemIndex x = static_cast<ElemIndex>(head++);
        for (size_t s = 0; s < gens.size(); ++s) {
            CycMatrix prod = gens[s] * G.elements[x];
            auto it = index_of.find(prod);
            ElemIndex idx;
            if (it != index_of.end()) {
                idx = it->second;
            } else {
                if (G.elements.size() >= cap)
                    throw GroupBuildError(GroupBuildError::Kind::CapExceeded,
                                          "closure cap " + std::to_string(cap) + " exceeded");
                idx = static_cast<ElemIndex>(G.elements.size());
                G.elements.push_back(prod);
                index_of.emplace(std::move(prod), idx);
                produced_by.push_back({static_cast<int>(s), x});
            }
            if (gen_action[s].size() < G.elements.size()) gen_action[s].resize(G.elements.size(), 0);
            gen_action[s][x] = idx;
        }
    }
    const size_t n = G.elements.size();
    for (auto& act : gen_action) act.resize(n);

    // generator indices (first occurrences of the generator matrices)
    for (const auto& g : gens) G.generator_indices.push_back(index_of.at(g));

    // left-multiplication permutation of every element, composed along the BFS tree
    std::vector<std::vector<ElemIndex>> lambda(n);
    lambda[0].resize(n);
    std::iota(lambda[0].begin(), lambda[0].end(), 0);
    for (ElemIndex e = 1; e < n; ++e) {
        auto [s, parent] = produced_by[e];
        lambda[e].resize(n);
        const auto& ls = gen_action[static_cast<size_t>(s)];
        const auto& lp = lambda[parent];
        for (size_t x = 0; x < n; ++x) lambda[e][x] = ls[lp[x]];
    }

    G.table.mul = std::move(lambda);
    G.table.inv.resize(n);
    for (ElemIndex g = 0; g < n; ++g) {
        for (ElemIndex h = 0; h < n; ++h) {
            if (G.table.mul[g][h] == 0) {
                G.table.inv[g] = h;
                break;
            }
        }
    }

    G.conj = conjugacy_classes(G.table);
    G.conductor = std::lcm(order, G.conj.exponent);
    return G;
}

ConjugacyData conjugacy_classes(const CayleyTable& table) {
    const size_t n = table.order();
    ConjugacyData out;
    out.class_of.assign(n, UINT32_MAX);

    std::vector<unsigned> elem_order(n);
    for (ElemIndex g = 0; g < n; ++g) elem_order[g] = table.element_order(g);

    // orbit of g under full conjugation
    std::vector<std::vector<ElemIndex>> raw_classes;
    for (ElemIndex g = 0; g < n; ++g) {
        if (out.class_of[g] != UINT32_MAX) continue;
        std::vector<ElemIndex> orbit;
        std::vector<bool> seen(n, false);
        for (ElemIndex h = 0; h < n; ++h) {
            ElemIndex c = table.mul[table.mul[h][g]][table.inv[h]];
            if (!seen[c]) {
                seen[c] = true;
                orbit.push_back(c);
            }
        }
        std::sort(orbit.begin(), orbit.end());
        unsigned cls = static_cast<unsigned>(raw_classes.size());
        for (ElemIndex e : orbit) out.class_of[e] = cls;
        raw_classes.push_back(std::move(orbit));
    }

    // order classes: identity first, then by element order, then discovery order
    std::vector<unsigned> perm(raw_classes.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](unsigned a, unsigned b) {
        unsigned oa = elem_order[raw_classes[a][0]];
        unsigned ob = elem_order[raw_classes[b][0]];
        if (oa != ob) return oa < ob;
        return raw_classes[a][0] < raw_classes[b][0];
    });
    std::vector<unsigned> new_index(raw_classes.size());
    for (unsigned i = 0; i < perm.size(); ++i) new_index[perm[i]] = i;

    out.classes.resize(raw_classes.size());
    for (unsigned i = 0; i < perm.size(); ++i) out.classes[i] = std::move(raw_classes[perm[i]]);
    for (ElemIndex g = 0; g < n; ++g) out.class_of[g] = new_index[out.class_of[g]];
    for (const auto& cls : out.classes) {
        out.representatives.push_back(cls[0]);
        out.sizes.push_back(static_cast<unsigned>(cls.size()));
        out.rep_order.push_back(elem_order[cls[0]]);
    }

    out.exponent = 1;
    for (unsigned o : out.rep_order) out.exponent = std::lcm(out.exponent, o);

    out.power_map.assign(out.exponent, std::vector<unsigned>(out.classes.size()));
    for (unsigned k = 0; k < out.exponent; ++k)
        for (unsigned c = 0; c < out.classes.size(); ++c)
            out.power_map[k][c] = out.class_of[table.power(out.representatives[c], k)];

    return out;
}

CentralExtensionData scalar_subgroup(const MatrixGroup& G) {
    CentralExtensionData out;
    std::vector<std::pair<ElemIndex, Cyclotomic>> scalars;
    for (ElemIndex g = 0; g < G.order(); ++g) {
        Cyclotomic s;
        if (matrix_is_scalar(G.elements[g], &s)) scalars.emplace_back(g, s);
    }
    // scalars of a finite matrix group form a cyclic group; find the maximal order
    unsigned max_ord = 1;
    for (auto& [idx, val] : scalars) max_ord = std::max(max_ord, G.table.element_order(idx));
    if (scalars.size() != max_ord)
        throw GroupBuildError(GroupBuildError::Kind::BadInput,
                              "scalar subgroup is not cyclic");
    if ((max_ord & (max_ord - 1)) != 0)
        throw GroupBuildError(GroupBuildError::Kind::BadInput,
                              "scalar subgroup order is not a power of two");

    out.scalar_order = max_ord;
    // generator: the scalar element of maximal order with the smallest index
    ElemIndex sigma = 0;
    bool found = false;
    for (auto& [idx, val] : scalars) {
        if (G.table.element_order(idx) == max_ord) {
            sigma = idx;
            found = true;
            break;
        }
    }
    if (!found) throw std::logic_error("scalar generator selection failed");
    out.scalar_generator = sigma;
    matrix_is_scalar(G.elements[sigma], &out.scalar_value);

    ElemIndex cur = 0;
    for (unsigned k = 0; k < max_ord; ++k) {
        out.scalar_elements.push_back(cur);
        unsigned cls = G.conj.class_of[cur];
        if (G.conj.sizes[cls] != 1)
            throw std::logic_error("scalar element in a non-singleton class");
        out.scalar_classes.push_back(cls);
        cur = G.table.mul[sigma][cur];
    }
    out.projective_order = G.order() / max_ord;
    return out;
}

FiniteGroup quotient_by_central(const GroupCore& G, const std::vector<ElemIndex>& Z,
                                unsigned conductor_hint) {
    const size_t n = G.order();
    std::vector<bool> in_z(n, false);
    for (ElemIndex z : Z) in_z[z] = true;
    if (Z.empty() || !in_z[0])
        throw GroupBuildError(GroupBuildError::Kind::BadInput, "subgroup must contain identity");
    for (ElemIndex a : Z) {
        for (ElemIndex b : Z)
            if (!in_z[G.table.mul[a][b]])
                throw GroupBuildError(GroupBuildError::Kind::BadInput, "Z is not a subgroup");
        for (ElemIndex g = 0; g < n; ++g)
            if (G.table.mul[a][g] != G.table.mul[g][a])
                throw GroupBuildError(GroupBuildError::Kind::BadInput, "Z is not central");
    }

    // coset representative = smallest element index in the coset
    std::vector<ElemIndex> coset_min(n);
    for (ElemIndex g = 0; g < n; ++g) {
        ElemIndex m = g;
        for (ElemIndex z : Z) m = std::min(m, G.table.mul[g][z]);
        coset_min[g] = m;
    }
    std::vector<ElemIndex> reps;
    std::vector<int> coset_id(n, -1);
    for (ElemIndex g = 0; g < n; ++g) {
        if (coset_min[g] == g) {
            coset_id[g] = static_cast<int>(reps.size());
            reps.push_back(g);
        }
    }
    const size_t q = reps.size();

    FiniteGroup Q;
    Q.name = G.name.empty() ? "" : G.name + "/Z";
    Q.coset_rep = reps;
    Q.table.mul.assign(q, std::vector<ElemIndex>(q));
    for (size_t a = 0; a < q; ++a)
        for (size_t b = 0; b < q; ++b)
            Q.table.mul[a][b] =
                static_cast<ElemIndex>(coset_id[coset_min[G.table.mul[reps[a]][reps[b]]]]);
    Q.table.inv.resize(q);
    for (size_t a = 0; a < q; ++a)
        for (size_t b = 0; b < q; ++b)
            if (Q.table.mul[a][b] == 0) {
                Q.table.inv[a] = static_cast<ElemIndex>(b);
                break;
            }
    Q.conj = conjugacy_classes(Q.table);
    Q.conductor = std::lcm(conductor_hint, Q.conj.exponent);
    return Q;
}

bool matrix_is_scalar(const CycMatrix& m, Cyclotomic* scalar_out) {
    if (m.rows() != m.cols() || m.rows() == 0) return false;
    const Cyclotomic& d = m(0, 0);
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) {
            if (i == j) {
                if (m(i, j) != d) return false;
            } else if (!m(i, j).is_zero()) {
                return false;
            }
        }
    if (scalar_out) *scalar_out = d;
    return true;
}

bool projective_equal(const CycMatrix& A, const CycMatrix& B) {
    CycMatrix q = A * B.inverse();
    return matrix_is_scalar(q);
}

}  // namespace qci
