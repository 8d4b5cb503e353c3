#include "qci/lefschetz.hpp"

#include <numeric>

namespace qci {

namespace {

ClassFunction half_square_plus_minus(const GroupCore& G, const ClassFunction& chi, bool plus) {
    if (chi.size() != G.conj.num_classes())
        throw std::invalid_argument("class function length mismatch");
    const Cyclotomic half(1, Rational(1, 2));
    ClassFunction out;
    out.values.reserve(chi.size());
    for (unsigned c = 0; c < chi.size(); ++c) {
        unsigned c2 = G.conj.power_map[2 % G.conj.exponent][c];
        Cyclotomic sq = chi.values[c] * chi.values[c];
        Cyclotomic val = plus ? (sq + chi.values[c2]) : (sq - chi.values[c2]);
        out.values.push_back(half * val);
    }
    return out;
}

}  // namespace

ClassFunction sym2_character(const GroupCore& G, const ClassFunction& chi) {
    return half_square_plus_minus(G, chi, true);
}

ClassFunction alt2_character(const GroupCore& G, const ClassFunction& chi) {
    return half_square_plus_minus(G, chi, false);
}

namespace {

ClassFunction scalar_supported(const GroupCore& G, const CentralExtensionData& ext,
                               const Cyclotomic& xi, unsigned long coeff, unsigned xi_power_step) {
    unsigned ord = 1;
    Cyclotomic x = xi;
    while (!x.is_rational() || x.rational_value() != 1) {
        x *= xi;
        ++ord;
        if (ord > 128) throw std::invalid_argument("xi is not a root of unity");
    }
    if (ord != ext.scalar_order)
        throw std::invalid_argument("xi is not a primitive root of the scalar order");

    ClassFunction f;
    f.values.assign(G.conj.num_classes(), Cyclotomic(G.conductor));
    const Cyclotomic c(1, Rational(coeff));
    for (unsigned k = 0; k < ext.scalar_order; ++k)
        f.values[ext.scalar_classes[k]] =
            (c * xi.pow(static_cast<long>(k) * xi_power_step)).lifted(G.conductor);
    return f;
}

}  // namespace

ClassFunction scalar_trace_vector(const GroupCore& G, const CentralExtensionData& ext,
                                  const Cyclotomic& xi) {
    return scalar_supported(G, ext, xi, 8, 1);
}

ClassFunction o2_trace_vector(const GroupCore& G, const CentralExtensionData& ext,
                              const Cyclotomic& xi) {
    return scalar_supported(G, ext, xi, 32, 2);
}

LefschetzVerdict lefschetz_check(const MatrixGroup& G, const CharacterTable& T) {
    CentralExtensionData ext = scalar_subgroup(G);

    LefschetzVerdict verdict;
    verdict.scalar_order = ext.scalar_order;
    verdict.projective_order = ext.projective_order;

    if (256 % ext.projective_order != 0) {
        verdict.guards_ok = false;
        verdict.guard_failure = "projective order " + std::to_string(ext.projective_order) +
                                " does not divide 256";
        return verdict;
    }
    if (ext.projective_order == 64 && ext.scalar_order < 4) {
        verdict.guards_ok = false;
        verdict.guard_failure =
            "projective order 64 requires a scalar subgroup of order at least 4";
        return verdict;
    }

    // candidate primitive 2^d-th roots, tried in a fixed order
    std::vector<Cyclotomic> candidates;
    if (ext.scalar_order == 1) {
        candidates.push_back(Cyclotomic(1, Rational(1)));
    } else {
        for (unsigned j = 1; j < ext.scalar_order; j += 2)
            candidates.push_back(Cyclotomic::zeta(ext.scalar_order, j));
    }

    // best failing candidate = the one that reached the furthest stage
    int best_stage = -1;
    for (const Cyclotomic& xi : candidates) {
        ClassFunction tV = scalar_trace_vector(G, ext, xi);
        ClassFunction tO2 = o2_trace_vector(G, ext, xi);
        CharacterTestResult tv_test = is_character(G, tV, T);

        ClassFunction v;
        {
            ClassFunction sym2 = sym2_character(G, tV);
            v.values.reserve(sym2.size());
            for (unsigned c = 0; c < sym2.size(); ++c)
                v.values.push_back(sym2.values[c] - tO2.values[c]);
        }

        if (!tv_test.is_character) {
            if (best_stage < 0) {
                best_stage = 0;
                verdict.xi_used = xi;
                verdict.tV = tV;
                verdict.tO2 = tO2;
                verdict.v = v;
                verdict.witness = "tV is not a character: " + tv_test.witness;
            }
            continue;
        }

        CharacterTestResult v_test = is_character(G, v, T);
        if (!v_test.is_character) {
            if (best_stage < 1) {
                best_stage = 1;
                verdict.xi_used = xi;
                verdict.tV = tV;
                verdict.tO2 = tO2;
                verdict.v = v;
                verdict.witness = "v is not a character: " + v_test.witness;
            }
            continue;
        }

        if (!v.values[0].is_integer() || v.values[0].rational_value() != 4)
            throw std::logic_error("quadric character has wrong dimension at the identity");

        verdict.pass = true;
        verdict.xi_used = xi;
        verdict.tV = tV;
        verdict.tO2 = tO2;
        verdict.v = v;
        verdict.tV_multiplicities = tv_test.multiplicities;
        verdict.v_multiplicities = v_test.multiplicities;
        verdict.witness.clear();
        return verdict;
    }
    return verdict;
}

}  // namespace qci
