// free_systems.hpp — free-dual pairings, free spectrahedron membership,
// Kraus recovery from psd Choi matrices, and the minimal/maximal operator
// systems over polyhedral base cones.

#pragma once

#include "conelab/cone_oracles.hpp"
#include "conelab/linear_map.hpp"
#include "conelab/tuple_basis.hpp"

#include <optional>
#include <vector>

namespace conelab {

// Coefficient tuple (B_1,...,B_d) of r x r Hermitian matrices defining the
// level-wise cones { A : sum_i B_i (x) A_i psd }. Coefficients must be
// linearly independent; an order unit u with sum_i u_i B_i = I is validated
// when supplied.
class FreeSpectrahedron {
public:
    FreeSpectrahedron(MatrixTuple coeffs, std::optional<RealVector> order_unit = std::nullopt);

    const MatrixTuple& coeffs() const { return coeffs_; }
    int tuple_length() const { return coeffs_.length(); }
    int coeff_dim() const { return coeffs_.level(); }
    const std::optional<RealVector>& order_unit() const { return order_unit_; }

private:
    MatrixTuple coeffs_;
    std::optional<RealVector> order_unit_;
};

// Closed salient polyhedral cone in R^dim, described by extreme rays, the
// extreme rays of its dual, and an interior order unit.
struct PolyhedralCone {
    int dim = 0;
    std::vector<RealVector> rays;
    std::vector<RealVector> dual_rays;
    RealVector order_unit;

    void validate() const;

    static PolyhedralCone simplex(int dim);  // R^dim_+, rays/dual rays e_i
    // Cone over the square in R^3: rays (+-1, +-1, 1),
    // dual rays (+-1, 0, 1), (0, +-1, 1), unit (0, 0, 1).
    static PolyhedralCone square_cone();
};

// sum_i B_i^T (x) A_i with the B factor first; Hermitian for Hermitian tuples.
HermitianMatrix pairing_tuple(const MatrixTuple& b, const MatrixTuple& a);

// Block form of the free-dual pairing: sum_ij B_ij^T (x) A_ji for bipartite
// operators sharing the first factor.
HermitianMatrix pairing_bipartite(const BipartiteOperator& b, const BipartiteOperator& a);

bool member_free_spectrahedron(const FreeSpectrahedron& s, const MatrixTuple& a,
                               double psd_tol = 1e-9);

// Kraus operators of the completely positive map with psd Choi matrix c:
// scaled reshapes of the positive eigenvectors. Throws when c is not psd.
std::vector<Matrix> kraus_from_psd(const BipartiteOperator& c, const ToleranceConfig& cfg);

// A in C^max at level s iff sum_i l_i A_i is psd for every dual ray l.
bool member_cmax(const PolyhedralCone& c, const MatrixTuple& a, double psd_tol = 1e-9);

// In-certificate of C^min membership: one psd block per extreme ray with
// sum_k ray_k (x) P_k = A.
struct CminDecomposition {
    std::vector<HermitianMatrix> blocks;
};

// Out-certificate: a tuple B with sum_i c_i B_i psd for every ray c of the
// base cone and <B, A> < 0.
struct CminDualWitness {
    MatrixTuple b;
    double pairing = 0.0;
};

struct CminVerdict {
    Status status = Status::Inconclusive;
    double residual = 0.0;
    std::optional<CminDecomposition> decomposition;
    std::optional<CminDualWitness> witness;
};

// Conic feasibility A = sum_k ray_k (x) P_k over psd blocks P_k by Dykstra
// alternating projections between the product psd cone and the affine
// constraint; dual witness search on failure.
CminVerdict member_cmin(const PolyhedralCone& c, const MatrixTuple& a,
                        const ToleranceConfig& cfg);

bool verify_cmin_certificate(const PolyhedralCone& c, const MatrixTuple& a,
                             const CminVerdict& verdict, const ToleranceConfig& cfg);

// Randomized search for an element of C^max \ C^min: walk random directions
// from the order-unit tuple to the C^max boundary, step back inside, and ask
// member_cmin for a certified Out. Returns the element and its witness.
struct MinMaxGap {
    MatrixTuple element;
    CminDualWitness witness;
};
std::optional<MinMaxGap> find_cmax_cmin_gap(const PolyhedralCone& c, int level,
                                            const ToleranceConfig& cfg, int attempts);

// Zero-padding embedding of a (2,2) operator into (d,s) blocks; compressing
// back with the canonical isometries recovers the input.
BipartiteOperator lift(const BipartiteOperator& m, int d, int s);

}  // namespace conelab
