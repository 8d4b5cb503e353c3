#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qci/group.hpp"

namespace qci {

// Cyclotomic value per conjugacy class, in the group's class ordering.
struct ClassFunction {
    std::vector<Cyclotomic> values;

    const Cyclotomic& at(unsigned cls) const { return values[cls]; }
    size_t size() const { return values.size(); }
    bool operator==(const ClassFunction& o) const { return values == o.values; }
};

struct CharacterTable {
    const GroupCore* group = nullptr;
    std::vector<ClassFunction> irreducibles;  // sorted by degree, then value vector
    std::vector<unsigned> degrees;
    uint64_t prime = 0;  // the Dixon prime actually used

    size_t size() const { return irreducibles.size(); }
};

// exact inner product (1/|G|) sum_c |C| f(c) conj(g(c))
Cyclotomic inner_product(const GroupCore& G, const ClassFunction& f, const ClassFunction& g);

struct CharacterTestResult {
    bool is_character = false;
    std::vector<Rational> multiplicities;  // exact, one per irreducible (when all rational)
    int failing_index = -1;                // first multiplicity that is not a nonneg integer
    std::string witness;
};

// f is a genuine character iff every <f, chi_i> is a nonnegative rational integer.
CharacterTestResult is_character(const GroupCore& G, const ClassFunction& f,
                                 const CharacterTable& T);

// Dixon's method; deterministic given (group, prime).  When prime = 0 the
// smallest p = 1 (mod exponent) with p > 2|G| is used, retrying on the next
// admissible prime if eigenvalue separation fails.
CharacterTable character_table(const GroupCore& G, uint64_t prime = 0);

// trace class function of a matrix group's defining representation
ClassFunction defining_character(const MatrixGroup& G);

ClassFunction trivial_character(const GroupCore& G);

}  // namespace qci
