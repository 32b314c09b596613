#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "conelab/free_systems.hpp"
#include "conelab/random.hpp"
#include "conelab/slice.hpp"

using namespace conelab;

namespace {

const ToleranceConfig kCfg;

MatrixTuple tuple_of(std::initializer_list<Matrix> ms) {
    std::vector<HermitianMatrix> entries;
    for (const auto& m : ms) entries.emplace_back(m);
    return MatrixTuple::validated(std::move(entries));
}

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

}  // namespace

TEST_CASE("pairing_tuple basics") {
    const MatrixTuple b = tuple_of({Matrix::Identity(1, 1)});
    const MatrixTuple a = tuple_of({Matrix::Identity(2, 2)});
    CHECK((pairing_tuple(b, a).mat() - Matrix::Identity(2, 2)).norm() == 0.0);

    Matrix d1(2, 2), d2(2, 2), e1(2, 2), e2(2, 2);
    d1 << 2, 0, 0, 3;
    d2 << 5, 0, 0, 7;
    e1 << 1, 0, 0, 4;
    e2 << 6, 0, 0, 8;
    const HermitianMatrix pr = pairing_tuple(tuple_of({d1, d2}), tuple_of({e1, e2}));
    // diagonal result with entrywise products summed over the tuple index
    CHECK(pr(0, 0).real() == doctest::Approx(2 * 1 + 5 * 6));
    CHECK(pr(3, 3).real() == doctest::Approx(3 * 4 + 7 * 8));
    CHECK(pr.mat().diagonal().asDiagonal().toDenseMatrix().norm() ==
          doctest::Approx(pr.frobenius()));
}

TEST_CASE("compressing the tuple pairing by sum e_j (x) e_j gives the trace pairing") {
    const int d = 3, s = 2;
    std::vector<HermitianMatrix> bs, as;
    for (int i = 0; i < d; ++i) {
        bs.push_back(random_hermitian(s, 600 + i));
        as.push_back(random_hermitian(s, 610 + i));
    }
    const MatrixTuple b = MatrixTuple::validated(bs);
    const MatrixTuple a = MatrixTuple::validated(as);
    Matrix v = Matrix::Zero(s * s, 1);
    for (int j = 0; j < s; ++j) v(j * s + j, 0) = 1.0;
    const HermitianMatrix compressed = compress(pairing_tuple(b, a), v);
    CHECK(compressed(0, 0).real() == doctest::Approx(trace_inner(b, a)).epsilon(1e-12));
}

TEST_CASE("pairing_bipartite is psd on psd pairs and contains the trace pairing") {
    const BipartiteOperator c = choi_matrix(LinearMapSpec::identity(2));
    CHECK(min_eigenvalue(pairing_bipartite(c, c)) >= -1e-9);

    for (int trial = 0; trial < 20; ++trial) {
        const BipartiteOperator a(2, 3, random_psd(6, 700 + trial));
        const BipartiteOperator b(2, 2, random_psd(4, 730 + trial));
        const HermitianMatrix pr = pairing_bipartite(b, a);
        CHECK(min_eigenvalue(pr) >= -1e-9 * norm_scale(pr.frobenius()));
    }

    // sampled free-dual-inside-dual containment: psd pairings imply
    // nonnegative trace pairings
    const BipartiteOperator a(2, 2, random_psd(4, 760));
    for (int trial = 0; trial < 50; ++trial) {
        const BipartiteOperator b(2, 2, random_psd(4, 800 + trial));
        CHECK(trace_inner(b, a) >= -1e-9);
    }
}

TEST_CASE("pairing_bipartite equals the compressed Kronecker product") {
    // independent construction: embed C^t (x) C^s into (C^d (x) C^t) (x)
    // (C^d (x) C^s) along the diagonal of the two d-factors and compress
    // B^T (x) A with it
    const int d = 3, t = 2, s = 2;
    const BipartiteOperator b(d, t, random_hermitian(d * t, 2400));
    const BipartiteOperator a(d, s, random_hermitian(d * s, 2401));

    Matrix big = Matrix::Zero(d * t * d * s, d * t * d * s);
    const Matrix bt = b.mat().transpose();
    for (int r = 0; r < d * t; ++r)
        for (int c = 0; c < d * t; ++c)
            big.block(r * d * s, c * d * s, d * s, d * s) = bt(r, c) * a.mat();

    Matrix embed = Matrix::Zero(d * t * d * s, t * s);
    for (int alpha = 0; alpha < t; ++alpha)
        for (int beta = 0; beta < s; ++beta)
            for (int r = 0; r < d; ++r)
                embed((r * t + alpha) * d * s + r * s + beta, alpha * s + beta) = 1.0;

    const HermitianMatrix compressed = compress(HermitianMatrix(big), embed);
    const HermitianMatrix direct = pairing_bipartite(b, a);
    CHECK((compressed.mat() - direct.mat()).norm() <=
          1e-12 * norm_scale(direct.frobenius()));
}

TEST_CASE("free spectrahedron membership") {
    // coefficients diag(1,0), diag(0,1) over R^2_+: the order-unit tuple is in
    Matrix b1 = Matrix::Zero(2, 2), b2 = Matrix::Zero(2, 2);
    b1(0, 0) = 1.0;
    b2(1, 1) = 1.0;
    RealVector unit(2);
    unit << 1.0, 1.0;
    const FreeSpectrahedron sp(tuple_of({b1, b2}), unit);
    CHECK(member_free_spectrahedron(sp, tuple_of({Matrix::Identity(2, 2),
                                                  Matrix::Identity(2, 2)})));
    CHECK_FALSE(member_free_spectrahedron(sp, tuple_of({pauli_x(), Matrix::Identity(2, 2)})));

    // level 1 reduces to the classical spectrahedron test
    Matrix neg(1, 1), pos(1, 1);
    neg(0, 0) = -1.0;
    pos(0, 0) = 2.0;
    CHECK(member_free_spectrahedron(sp, tuple_of({pos, pos})));
    CHECK_FALSE(member_free_spectrahedron(sp, tuple_of({neg, pos})));

    CHECK_THROWS_AS(member_free_spectrahedron(sp, tuple_of({pos})), std::invalid_argument);
    CHECK_THROWS_AS(pairing_tuple(tuple_of({pos}), tuple_of({pos, pos})),
                    std::invalid_argument);
}

TEST_CASE("coefficients from the orthonormal Hermitian basis assemble bipartite operators") {
    const int d = 2;
    const MatrixTuple coeffs = MatrixTuple::validated(hermitian_basis(d));
    const FreeSpectrahedron sp(coeffs);
    for (int trial = 0; trial < 10; ++trial) {
        const BipartiteOperator x(d, 2, random_hermitian(2 * d, 900 + trial));
        const MatrixTuple coords = bipartite_to_tuple(x);
        CHECK(member_free_spectrahedron(sp, coords) == member_psd(x, kCfg).in());
    }
}

TEST_CASE("free spectrahedron validation") {
    // dependent coefficients
    Matrix m = pauli_z();
    CHECK_THROWS_AS(FreeSpectrahedron(tuple_of({m, 2.0 * m})), std::invalid_argument);
    // wrong order unit
    Matrix b1 = Matrix::Zero(2, 2), b2 = Matrix::Zero(2, 2);
    b1(0, 0) = 1.0;
    b2(1, 1) = 1.0;
    RealVector unit(2);
    unit << 1.0, 2.0;
    CHECK_THROWS_AS(FreeSpectrahedron(tuple_of({b1, b2}), unit), std::invalid_argument);
}

TEST_CASE("kraus recovery") {
    const BipartiteOperator c_id = choi_matrix(LinearMapSpec::identity(2));
    const auto single = kraus_from_psd(c_id, kCfg);
    REQUIRE(single.size() == 1);
    // proportional to a unitary with unit scale: K* K = I up to phase
    CHECK((single[0].adjoint() * single[0] - Matrix::Identity(2, 2)).norm() <= 1e-10);

    const auto four = kraus_from_psd(BipartiteOperator::identity(2, 2), kCfg);
    CHECK(four.size() == 4);
    const BipartiteOperator back = choi_matrix(LinearMapSpec::from_kraus(2, 2, four));
    CHECK((back - BipartiteOperator::identity(2, 2)).frobenius() <= 1e-10);

    for (int trial = 0; trial < 25; ++trial) {
        const int d = 2 + trial % 2;
        const int s = 2 + (trial / 2) % 2;
        const BipartiteOperator c(d, s, random_psd(d * s, 1000 + trial));
        const auto kraus = kraus_from_psd(c, kCfg);
        const BipartiteOperator rec = choi_matrix(LinearMapSpec::from_kraus(d, s, kraus));
        CHECK((c - rec).frobenius() <= 1e-8 * norm_scale(c.frobenius()));
    }

    CHECK_THROWS_AS(kraus_from_psd(choi_matrix(LinearMapSpec::transposition(2)), kCfg),
                    std::invalid_argument);
}

TEST_CASE("member_cmax over the positive orthant") {
    const PolyhedralCone orthant = PolyhedralCone::simplex(2);
    Matrix b1 = Matrix::Zero(2, 2), b2 = Matrix::Zero(2, 2);
    b1(0, 0) = 1.0;
    b2(1, 1) = 1.0;
    CHECK(member_cmax(orthant, tuple_of({b1, b2})));
    CHECK_FALSE(member_cmax(orthant, tuple_of({pauli_x(), Matrix::Identity(2, 2)})));
}

TEST_CASE("member_cmin definitional case and certificate recheck") {
    const PolyhedralCone simplex = PolyhedralCone::simplex(3);
    // A = ray (x) P for the second ray
    const HermitianMatrix p = random_psd(2, 1100);
    const MatrixTuple a =
        tuple_of({Matrix::Zero(2, 2), p.mat(), Matrix::Zero(2, 2)});
    const CminVerdict v = member_cmin(simplex, a, kCfg);
    CHECK(v.status == Status::In);
    REQUIRE(v.decomposition.has_value());
    CHECK(verify_cmin_certificate(simplex, a, v, kCfg));
    for (const auto& blk : v.decomposition->blocks) CHECK(is_psd(blk, kCfg.psd_tol));
}

TEST_CASE("simplex cones have matching min and max systems") {
    const PolyhedralCone simplex = PolyhedralCone::simplex(3);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<HermitianMatrix> coords;
        for (int i = 0; i < 3; ++i) {
            const std::uint64_t seed = Rng::derive_seed(1200, 8 * trial + i);
            coords.push_back(trial % 2 == 0 ? random_psd(2, seed) : random_hermitian(2, seed));
        }
        const MatrixTuple a = MatrixTuple::validated(std::move(coords));
        ToleranceConfig cfg = kCfg;
        cfg.seed = Rng::derive_seed(1300, trial);
        const bool in_max = member_cmax(simplex, a, cfg.psd_tol);
        const CminVerdict in_min = member_cmin(simplex, a, cfg);
        REQUIRE(in_min.status != Status::Inconclusive);
        CHECK(in_max == (in_min.status == Status::In));
        CHECK(verify_cmin_certificate(simplex, a, in_min, cfg));
    }
}

TEST_CASE("square cone separates the min and max systems") {
    const PolyhedralCone square = PolyhedralCone::square_cone();
    const MatrixTuple gap_element =
        tuple_of({pauli_x(), pauli_z(), 1.2 * Matrix::Identity(2, 2)});
    CHECK(member_cmax(square, gap_element, kCfg.psd_tol));
    const CminVerdict v = member_cmin(square, gap_element, kCfg);
    CHECK(v.status == Status::Out);
    REQUIRE(v.witness.has_value());
    CHECK(verify_cmin_certificate(square, gap_element, v, kCfg));
    CHECK(v.witness->pairing < 0.0);

    const MatrixTuple feasible =
        tuple_of({pauli_x(), pauli_z(), 1.45 * Matrix::Identity(2, 2)});
    CHECK(member_cmin(square, feasible, kCfg).status == Status::In);

    ToleranceConfig cfg = kCfg;
    cfg.seed = 77;
    const auto gap = find_cmax_cmin_gap(square, 2, cfg, 100);
    REQUIRE(gap.has_value());
    CHECK(member_cmax(square, gap->element, cfg.psd_tol));

    // a simplex cone has no gap to find
    CHECK_FALSE(find_cmax_cmin_gap(PolyhedralCone::simplex(3), 2, cfg, 8).has_value());
}

TEST_CASE("lift embeds and compresses back") {
    const BipartiteOperator m = slice_matrix({1.3, 0.4});
    CHECK(lift(m, 2, 2).bitwise_equal(m));

    const BipartiteOperator hat = lift(m, 3, 4);
    CHECK(hat.frobenius() == doctest::Approx(m.frobenius()));

    // compressing with the canonical product isometry recovers the input
    Matrix embed = Matrix::Zero(12, 4);
    for (int i = 0; i < 2; ++i)
        for (int a = 0; a < 2; ++a) embed(i * 4 + a, i * 2 + a) = 1.0;
    CHECK((compress(hat.herm(), embed).mat() - m.mat()).norm() == 0.0);

    CHECK_THROWS_AS(lift(m, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(lift(BipartiteOperator::identity(3, 2), 3, 3), std::invalid_argument);
}

TEST_CASE("polyhedral cone validation") {
    PolyhedralCone bad = PolyhedralCone::simplex(2);
    bad.dual_rays[0][0] = -1.0;  // pairs negatively with the first ray
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    PolyhedralCone boundary_unit = PolyhedralCone::simplex(2);
    boundary_unit.order_unit[0] = 0.0;  // on the boundary, not interior
    CHECK_THROWS_AS(boundary_unit.validate(), std::invalid_argument);
}
