#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qci/chartab.hpp"

namespace qci {

// character of Sym^2 of a representation with character chi:
// value at (g) is (chi(g)^2 + chi(g^2)) / 2
ClassFunction sym2_character(const GroupCore& G, const ClassFunction& chi);
// antisymmetric counterpart (chi(g)^2 - chi(g^2)) / 2
ClassFunction alt2_character(const GroupCore& G, const ClassFunction& chi);

// trace vector of V: 8 xi^k on the class of sigma^k, zero elsewhere
ClassFunction scalar_trace_vector(const GroupCore& G, const CentralExtensionData& ext,
                                  const Cyclotomic& xi);
// trace vector of H^0(X, O(2)): 32 xi^{2k} on scalar classes, zero elsewhere
ClassFunction o2_trace_vector(const GroupCore& G, const CentralExtensionData& ext,
                              const Cyclotomic& xi);

struct LefschetzVerdict {
    bool pass = false;
    // order guards (Prop 3.5 bound and the |K/Ker tau| >= 4 lemma)
    bool guards_ok = true;
    std::string guard_failure;

    unsigned scalar_order = 1;
    size_t projective_order = 0;
    Cyclotomic xi_used;             // the successful primitive root (pass) or first candidate
    ClassFunction tV, tO2, v;
    std::vector<Rational> tV_multiplicities;  // when pass
    std::vector<Rational> v_multiplicities;   // when pass
    std::string witness;                      // failing multiplicity when fail
};

// Steps I-III for one supplied central extension: try every primitive
// 2^d-th root xi for the scalar generator; pass if any candidate makes both
// tV and v genuine characters.
LefschetzVerdict lefschetz_check(const MatrixGroup& G, const CharacterTable& T);

}  // namespace qci
