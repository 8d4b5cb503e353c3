#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "qci/poly.hpp"
#include "qci/quadrics.hpp"

namespace qci {

// exact basis of ker(M - lambda I) for a finite-order matrix, via the
// spectral projector prod_{mu != lambda} (M - mu I)/(lambda - mu) over the
// m-th roots of unity; columns of the result span the eigenspace
CycMatrix eigenspace(const CycMatrix& M, unsigned m, unsigned lambda_exponent);

// quadratic forms over F_p as symmetric Gram matrices
using FpForm = Matrix<Fp>;

FpForm embed_form(const QuadraticForm& gram, const RootEmbedding& emb);
Polynomial form_to_poly(const PolyRing& ring, const FpForm& gram);

// family specialization with parameters drawn in F_p
std::vector<FpForm> specialize_mod_p(const QuadricFamily& family,
                                     const std::vector<std::vector<uint64_t>>& params,
                                     const RootEmbedding& emb);

struct EigenspaceCheck {
    unsigned quotient_class = 0;
    ElemIndex lift = 0;            // matrix representative in the cover
    unsigned element_order = 1;
    unsigned lambda_exponent = 0;  // lambda = zeta_m^j
    unsigned dim = 0;
    CycMatrix basis;               // 8 x dim exact eigenbasis
    EmptinessCertificate emptiness;
};

struct FreenessCertificate {
    bool free = false;
    uint64_t prime = 0;
    std::vector<std::vector<uint64_t>> params;
    std::vector<EigenspaceCheck> checks;  // every nontrivial projective class, each eigenvalue
    std::string failure;                  // first non-empty intersection, when not free
};

// Step IV for one parameter choice: one representative per nontrivial
// conjugacy class of the projective group, exact eigenspaces, restricted
// quadrics mod p, Groebner emptiness per eigenvalue.
FreenessCertificate freeness_check(const MatrixGroup& G, const QuadricFamily& family,
                                   const std::vector<std::vector<uint64_t>>& params, uint64_t p);

struct CensusPoint {
    std::array<Fp2, 8> coords;       // first nonzero coordinate normalized to 1
    std::vector<unsigned> zeros;     // 1-based indices of vanishing coordinates
    bool odp = false;
};

enum class CensusMode { DiagonalPattern, JacobianGroebner };

struct SingularCensus {
    uint64_t prime = 0;
    CensusMode mode = CensusMode::DiagonalPattern;
    std::vector<CensusPoint> points;     // canonically sorted
    bool positive_dimensional = false;   // degenerate parameters detected
    unsigned unresolved = 0;             // branches needing a field beyond F_{p^2}
    std::vector<std::string> notes;

    size_t total() const { return points.size(); }
    std::map<std::vector<unsigned>, unsigned> pattern_counts() const;
};

// Step V census of the singular locus of 4 quadrics over F_p.
// DiagonalPattern requires forms with only square monomials.
SingularCensus singular_census(const std::vector<FpForm>& forms, CensusMode mode, uint64_t p);

struct OdpResult {
    bool ok = false;       // preconditions held (Jacobian rank 3, usable chart)
    bool is_odp = false;   // restricted Hessian has full rank 4
    std::string reason;
};

OdpResult odp_test(const std::array<Fp2, 8>& point, const std::vector<FpForm>& forms);

// the two bilinear forms f_i = r1 A_i + r2 B_i of the node-incident divisor pencil
struct DivisorPencil {
    QuadraticForm A1, B1, A2, B2;
};

// true iff both the r1-part and the r2-part of each pencil form vanish at
// every census point (checked over F_{p^2})
bool divisor_incidence(const DivisorPencil& pencil, const SingularCensus& census,
                       const RootEmbedding& emb, std::string* violation = nullptr);

// true iff span{f1, f2} is carried to itself by every generator, proved
// exactly: the rank conditions are degree-3 forms in (r1 : r2), so checking
// five distinct parameter points forces identical vanishing
bool pencil_invariance(const MatrixGroup& G, const DivisorPencil& pencil);

// orbit closure of the census point set under an embedded group element
bool census_closed_under(const CycMatrix& g, const SingularCensus& census,
                         const RootEmbedding& emb);

}  // namespace qci
