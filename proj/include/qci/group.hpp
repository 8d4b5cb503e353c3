#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qci/matrix.hpp"

namespace qci {

using ElemIndex = uint16_t;

struct CayleyTable {
    std::vector<std::vector<ElemIndex>> mul;  // mul[g][h] = g*h, index 0 = identity
    std::vector<ElemIndex> inv;

    size_t order() const { return mul.size(); }
    ElemIndex product(ElemIndex g, ElemIndex h) const { return mul[g][h]; }
    ElemIndex power(ElemIndex g, long k) const;
    unsigned element_order(ElemIndex g) const;
};

struct ConjugacyData {
    std::vector<std::vector<ElemIndex>> classes;  // partition; class 0 = {identity}
    std::vector<ElemIndex> representatives;
    std::vector<unsigned> sizes;
    std::vector<unsigned> class_of;           // element index -> class index
    std::vector<unsigned> rep_order;          // order of elements in the class
    unsigned exponent = 1;
    // power_map[k][c] = class of g^k for g in class c, k = 0..exponent-1
    std::vector<std::vector<unsigned>> power_map;

    size_t num_classes() const { return classes.size(); }
    unsigned inverse_class(unsigned c) const;  // via power_map at order-1 powers
};

// Cayley structure + conjugacy data; the common core of matrix groups and
// abstract quotients.
struct GroupCore {
    CayleyTable table;
    ConjugacyData conj;
    unsigned conductor = 1;  // cyclotomic order that contains all character values
    std::string name;

    size_t order() const { return table.order(); }
};

struct MatrixGroup : GroupCore {
    unsigned dim = 8;
    unsigned matrix_order = 8;  // cyclotomic order of the matrix entries
    std::vector<CycMatrix> elements;
    std::vector<ElemIndex> generator_indices;
};

struct FiniteGroup : GroupCore {
    // present when the group arose as a central quotient
    std::vector<ElemIndex> coset_rep;  // quotient element -> representative in the parent
};

struct CentralExtensionData {
    ElemIndex scalar_generator = 0;      // sigma with matrix xi * I
    unsigned scalar_order = 1;           // 2^d
    Cyclotomic scalar_value;             // the primitive root xi attached to sigma
    std::vector<ElemIndex> scalar_elements;  // sigma^k for k = 0..2^d-1, in power order
    std::vector<unsigned> scalar_classes;    // their (singleton) class indices
    size_t projective_order = 0;
};

struct GroupBuildError : std::runtime_error {
    enum class Kind { CapExceeded, NonInvertibleGenerator, BadInput };
    Kind kind;
    GroupBuildError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// Breadth-first closure of the generated matrix group; fills Cayley table,
// inverses and conjugacy data.  Throws GroupBuildError when the cap is hit.
MatrixGroup close_group(const std::vector<CycMatrix>& generators, size_t cap = 4096,
                        const std::string& name = "");

ConjugacyData conjugacy_classes(const CayleyTable& table);

// Identifies the subgroup of scalar matrices; requires it to be cyclic of
// 2-power order (the framework's assumption).
CentralExtensionData scalar_subgroup(const MatrixGroup& G);

// Central quotient G/Z for a central subgroup Z given by element indices.
FiniteGroup quotient_by_central(const GroupCore& G, const std::vector<ElemIndex>& Z,
                                unsigned conductor_hint = 1);

bool projective_equal(const CycMatrix& A, const CycMatrix& B);

// exponent of the group from conjugacy data
unsigned group_exponent(const CayleyTable& table);

}  // namespace qci
