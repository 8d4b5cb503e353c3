#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qci/chartab.hpp"

namespace qci {

// Quadratic forms are 8x8 symmetric Gram matrices: q(x) = x^T A x, so the
// monomial x_i x_j (i < j) carries coefficient 2 A[i][j] and x_i^2 carries
// A[i][i].  This convention is shared project-wide.
using QuadraticForm = CycMatrix;

// monomial basis of Sym^2: pairs (i, j) with i <= j in lexicographic order
const std::vector<std::pair<unsigned, unsigned>>& sym2_monomials(unsigned dim = 8);
size_t sym2_index(unsigned i, unsigned j, unsigned dim = 8);

// coefficient vector on the monomial basis <-> Gram matrix
std::vector<Cyclotomic> form_to_coeffs(const QuadraticForm& gram);
QuadraticForm coeffs_to_form(const std::vector<Cyclotomic>& coeffs, unsigned dim = 8);

// induced action of a group element on the monomial basis (dim 36 for 8 vars)
CycMatrix sym2_rep_element(const CycMatrix& g);

// projector (deg/|G|) sum_g conj(chi(g)) Sym2(g) onto the chi-isotypic component
CycMatrix isotypic_projector(const MatrixGroup& G, const CharacterTable& T, unsigned irrep);

// exact basis of the isotypic component (36 x dim matrix, columns = basis,
// reduced column echelon); empty basis for multiplicity zero
CycMatrix isotypic_component(const MatrixGroup& G, const CharacterTable& T, unsigned irrep);

struct FamilyConstituent {
    unsigned irrep_index = 0;
    unsigned degree = 1;
    unsigned multiplicity = 1;         // multiplicity of the irrep inside Sym^2
    CycMatrix seeds;                   // 36 x multiplicity, aligned seed vectors
    std::vector<ElemIndex> orbit_elements;  // group elements spanning one copy from a seed
    std::vector<CycMatrix> blocks;     // one 36 x degree block per multiplicity direction
};

// The equivariant family of four quadrics: one constituent per irreducible
// occurrence in the quadric character v, each parameterized by a point of
// P^{multiplicity - 1}.
struct QuadricFamily {
    const MatrixGroup* group = nullptr;
    std::vector<FamilyConstituent> constituents;
    std::string parameter_shape;  // e.g. "P1 x P1"

    size_t parameter_count() const {
        size_t n = 0;
        for (const auto& c : constituents) n += c.multiplicity;
        return n;
    }
};

QuadricFamily equivariant_quadric_family(const MatrixGroup& G, const CharacterTable& T,
                                         const std::vector<Rational>& v_multiplicities);

struct SpecializeResult {
    std::vector<QuadraticForm> forms;  // deterministic ordered basis, 4 forms when generic
    bool degenerate = false;           // stacked span has rank < 4
};

// exact specialization at one projective parameter point per constituent
SpecializeResult specialize(const QuadricFamily& family,
                            const std::vector<std::vector<Rational>>& params);

// the 4-space spanned by a member, as a rank-4 coefficient matrix (rows =
// coefficient vectors); used for span comparisons
Matrix<Cyclotomic> stack_coeff_rows(const std::vector<QuadraticForm>& forms);

// true iff the two lists of forms span the same subspace of Sym^2
bool same_span(const std::vector<QuadraticForm>& a, const std::vector<QuadraticForm>& b);

// recover the parameter point of a single-copy subrepresentation: intersect
// the span with the seed eigenspace of the constituent (used to match
// externally given members against the family's parameterization)
std::vector<Rational> member_parameters(const QuadricFamily& family, size_t constituent,
                                        const std::vector<QuadraticForm>& member);

}  // namespace qci
