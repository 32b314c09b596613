// cone_oracles.hpp — membership oracles with certificates for the cone
// families of bipartite Hermitian operators.
//
// member_psd / member_ppt / member_dpsd / member_sep_small decide exactly via
// eigenvalues. member_decomp decides feasibility of X = X1 + X2 (X1 psd, X2 of
// psd partial transpose) by Dykstra alternating projections, with a dual
// witness search over the unit-trace doubly positive operators for the Out
// side. member_bpsd is deliberately one-sided: sound Out via see-saw product
// vectors, In only through a decomposability certificate.

#pragma once

#include "conelab/verdict.hpp"

namespace conelab {

Verdict member_psd(const BipartiteOperator& x, const ToleranceConfig& cfg);
Verdict member_ppt(const BipartiteOperator& x, const ToleranceConfig& cfg);
Verdict member_dpsd(const BipartiteOperator& x, const ToleranceConfig& cfg);
Verdict member_decomp(const BipartiteOperator& x, const ToleranceConfig& cfg);
Verdict member_bpsd(const BipartiteOperator& x, const ToleranceConfig& cfg);

// PPT criterion; exact only for d*s <= 6, larger dimensions are rejected.
Verdict member_sep_small(const BipartiteOperator& x, const ToleranceConfig& cfg);

Verdict member(ConeId cone, const BipartiteOperator& x, const ToleranceConfig& cfg);

// Recheck a verdict's certificate from scratch, independent of how the oracle
// produced it. Verdicts without an attached witness are rechecked through the
// exact eigenvalue test of their cone.
bool verify_certificate(const BipartiteOperator& x, const Verdict& verdict,
                        const ToleranceConfig& cfg);

// Minimum of (x (x) y)* X (x (x) y) over unit product vectors by alternating
// smallest-eigenvector updates from `multistarts` random starts.
ProductVectorWitness seesaw_min_product(const BipartiteOperator& x, const ToleranceConfig& cfg);

}  // namespace conelab
