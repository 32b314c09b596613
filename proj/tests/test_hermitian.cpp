#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "conelab/hermitian.hpp"
#include "conelab/bipartite.hpp"
#include "conelab/linear_map.hpp"
#include "conelab/random.hpp"
#include "conelab/tuple_basis.hpp"

#include <Eigen/Eigenvalues>

using namespace conelab;

namespace {

Matrix swap_matrix_2x2() {
    Matrix sw = Matrix::Zero(4, 4);
    sw(0, 0) = 1.0;
    sw(1, 2) = 1.0;
    sw(2, 1) = 1.0;
    sw(3, 3) = 1.0;
    return sw;
}

}  // namespace

TEST_CASE("construction symmetrizes and validates") {
    Matrix m(2, 2);
    m << 1.0, Complex(0.5, 0.25), Complex(0.5, -0.25), 2.0;
    const HermitianMatrix h(m);
    CHECK(h(0, 1) == std::conj(h(1, 0)));

    Matrix skew(2, 2);
    skew << 1.0, 1.0, -1.0, 1.0;  // far from Hermitian
    CHECK_THROWS_AS(HermitianMatrix{skew}, std::invalid_argument);

    Matrix nan(1, 1);
    nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(HermitianMatrix{nan}, std::invalid_argument);
}

TEST_CASE("eigendecomposition on fixed matrices") {
    Matrix d(2, 2);
    d << 3.0, 0.0, 0.0, 1.0;
    const Spectrum sd = eig_hermitian(HermitianMatrix(d));
    CHECK(sd.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(sd.eigenvalues[1] == doctest::Approx(3.0));

    Matrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    const Spectrum sx = eig_hermitian(HermitianMatrix(x));
    CHECK(sx.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(sx.eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("eigendecomposition reconstructs random matrices") {
    for (int n : {1, 2, 3, 5, 9, 16}) {
        const HermitianMatrix h = random_hermitian(n, 100 + n);
        const Spectrum spec = eig_hermitian(h);
        const Matrix recon = spec.eigenvectors *
                             spec.eigenvalues.cast<Complex>().asDiagonal() *
                             spec.eigenvectors.adjoint();
        CHECK((recon - h.mat()).norm() <= 1e-10 * norm_scale(h.frobenius()));
        CHECK((spec.eigenvectors.adjoint() * spec.eigenvectors - Matrix::Identity(n, n)).norm() <=
              1e-10);
        for (int k = 0; k + 1 < n; ++k) CHECK(spec.eigenvalues[k] <= spec.eigenvalues[k + 1]);
    }
}

TEST_CASE("eigenvalues match an independent dense solver") {
    for (int n : {2, 4, 7, 12}) {
        const HermitianMatrix h = random_hermitian(n, 4242 + n);
        const Spectrum mine = eig_hermitian(h);
        Eigen::SelfAdjointEigenSolver<Matrix> ref(h.mat());
        for (int k = 0; k < n; ++k)
            CHECK(mine.eigenvalues[k] ==
                  doctest::Approx(ref.eigenvalues()[k]).epsilon(1e-10));
    }
}

TEST_CASE("is_psd basics") {
    CHECK(is_psd(HermitianMatrix::identity(3), 1e-9));
    Matrix d(2, 2);
    d << 1.0, 0.0, 0.0, -1.0;
    CHECK_FALSE(is_psd(HermitianMatrix(d), 1e-9));
    CHECK_THROWS_AS(is_psd(HermitianMatrix::identity(2), -1.0), std::invalid_argument);
}

TEST_CASE("tensor products") {
    const HermitianMatrix i2 = HermitianMatrix::identity(2);
    CHECK((tensor(i2, i2).mat() - Matrix::Identity(4, 4)).norm() == 0.0);

    Matrix a(2, 2), b(2, 2);
    a << 1.0, 0.0, 0.0, 2.0;
    b << 3.0, 0.0, 0.0, 4.0;
    const HermitianMatrix t = tensor(HermitianMatrix(a), HermitianMatrix(b));
    Matrix expect(4, 4);
    expect.setZero();
    expect.diagonal() << 3.0, 4.0, 6.0, 8.0;
    CHECK((t.mat() - expect).norm() == 0.0);
}

TEST_CASE("tensor spectrum is the product set") {
    const HermitianMatrix a = random_hermitian(2, 7);
    const HermitianMatrix b = random_hermitian(3, 8);
    const Spectrum sa = eig_hermitian(a);
    const Spectrum sb = eig_hermitian(b);
    std::vector<double> products;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) products.push_back(sa.eigenvalues[i] * sb.eigenvalues[j]);
    std::sort(products.begin(), products.end());
    const Spectrum st = eig_hermitian(tensor(a, b));
    for (int k = 0; k < 6; ++k)
        CHECK(st.eigenvalues[k] == doctest::Approx(products[k]).epsilon(1e-9));
}

TEST_CASE("partial transpose on elementary tensors and the swap operator") {
    // X = E_12 (x) B + E_21 (x) B*
    Matrix b(2, 2);
    b << Complex(1.0, 0.5), Complex(0.0, 1.0), Complex(2.0, 0.0), Complex(-1.0, 0.25);
    Matrix m = Matrix::Zero(4, 4);
    m.block(0, 2, 2, 2) = b;
    m.block(2, 0, 2, 2) = b.adjoint();
    const BipartiteOperator x(2, 2, HermitianMatrix(m));
    const BipartiteOperator g = partial_transpose(x);
    CHECK((g.block(1, 0) - b).norm() == 0.0);
    CHECK((g.block(0, 1) - b.adjoint()).norm() == 0.0);

    // Gamma(sum E_ij (x) E_ij) = swap
    const BipartiteOperator choi_id = choi_matrix(LinearMapSpec::identity(2));
    CHECK((partial_transpose(choi_id).mat() - swap_matrix_2x2()).norm() == 0.0);

    // involution and isometry on random input
    const BipartiteOperator r(2, 3, random_hermitian(6, 19));
    CHECK(partial_transpose(partial_transpose(r)).bitwise_equal(r));
    CHECK(partial_transpose(r).frobenius() == doctest::Approx(r.frobenius()));
}

TEST_CASE("compress") {
    const HermitianMatrix a = random_hermitian(3, 5);
    CHECK((compress(a, Matrix::Identity(3, 3)).mat() - a.mat()).norm() == 0.0);

    Matrix e1 = Matrix::Zero(3, 1);
    e1(0, 0) = 1.0;
    const HermitianMatrix c = compress(a, e1);
    CHECK(c.dim() == 1);
    CHECK(c(0, 0).real() == doctest::Approx(a(0, 0).real()));

    const HermitianMatrix p = random_psd(3, 6);
    Rng rng(7);
    Matrix v(3, 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) v(i, j) = rng.gaussian_complex();
    CHECK(is_psd(compress(p, v), 1e-9));

    CHECK_THROWS_AS(compress(a, Matrix::Identity(2, 2)), std::invalid_argument);
}

TEST_CASE("compress respects composition") {
    const HermitianMatrix a = random_hermitian(4, 11);
    Rng rng(12);
    Matrix v(4, 3), w(3, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) v(i, j) = rng.gaussian_complex();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) w(i, j) = rng.gaussian_complex();
    const HermitianMatrix lhs = compress(compress(a, v), w);
    const HermitianMatrix rhs = compress(a, v * w);
    CHECK((lhs.mat() - rhs.mat()).norm() <= 1e-12 * norm_scale(rhs.frobenius()));
}

TEST_CASE("choi matrices of the basic maps") {
    const BipartiteOperator c_id = choi_matrix(LinearMapSpec::identity(2));
    Matrix expect(4, 4);
    expect.setZero();
    expect(0, 0) = expect(0, 3) = expect(3, 0) = expect(3, 3) = 1.0;
    CHECK((c_id.mat() - expect).norm() == 0.0);

    const BipartiteOperator c_t = choi_matrix(LinearMapSpec::transposition(2));
    CHECK((c_t.mat() - swap_matrix_2x2()).norm() == 0.0);

    const BipartiteOperator c_tr = choi_matrix(LinearMapSpec::trace_map(2, 2));
    CHECK((c_tr.mat() - 0.5 * Matrix::Identity(4, 4)).norm() == 0.0);
}

TEST_CASE("choi matrix is linear and rejects non-*-linear images") {
    const int d = 2, s = 3;
    auto random_map = [&](std::uint64_t seed) {
        std::vector<Matrix> images(d * d);
        Rng rng(seed);
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                Matrix m(s, s);
                for (int r = 0; r < s; ++r)
                    for (int c = 0; c < s; ++c) m(r, c) = rng.gaussian_complex();
                if (i == j) m = 0.5 * (m + m.adjoint().eval());  // T(E_ii) is Hermitian
                images[i * d + j] = m;
                images[j * d + i] = m.adjoint();
            }
        }
        return LinearMapSpec(d, s, std::move(images));
    };
    const LinearMapSpec t1 = random_map(31);
    const LinearMapSpec t2 = random_map(32);
    std::vector<Matrix> mixed(d * d);
    for (int i = 0; i < d * d; ++i)
        mixed[i] = 2.0 * t1.image(i / d, i % d) - 0.5 * t2.image(i / d, i % d);
    const LinearMapSpec tm(d, s, std::move(mixed));
    const Matrix lhs = choi_matrix(tm).mat();
    const Matrix rhs = 2.0 * choi_matrix(t1).mat() - 0.5 * choi_matrix(t2).mat();
    CHECK((lhs - rhs).norm() <= 1e-12 * norm_scale(rhs.norm()));

    std::vector<Matrix> broken(4, Matrix::Zero(2, 2));
    broken[1](0, 0) = 1.0;  // T(E_12) with T(E_21) = 0 breaks *-linearity
    CHECK_THROWS_AS(LinearMapSpec(2, 2, std::move(broken)), std::invalid_argument);
}

TEST_CASE("project_psd") {
    const HermitianMatrix p = random_psd(3, 21);
    CHECK((project_psd(p).mat() - p.mat()).norm() <= 1e-10 * norm_scale(p.frobenius()));

    Matrix d(2, 2);
    d << 1.0, 0.0, 0.0, -2.0;
    Matrix expect(2, 2);
    expect << 1.0, 0.0, 0.0, 0.0;
    CHECK((project_psd(HermitianMatrix(d)).mat() - expect).norm() <= 1e-12);

    const HermitianMatrix h = random_hermitian(4, 22);
    const HermitianMatrix once = project_psd(h);
    const HermitianMatrix twice = project_psd(once);
    CHECK((twice - once).frobenius() <= 1e-10 * norm_scale(once.frobenius()));
}

TEST_CASE("project_psd is the metric projection") {
    const HermitianMatrix h = random_hermitian(3, 23);
    const HermitianMatrix p = project_psd(h);
    const HermitianMatrix defect = h - p;
    for (int k = 0; k < 100; ++k) {
        const HermitianMatrix q = random_psd(3, 2300 + k);
        CHECK(trace_inner(defect, q - p) <= 1e-9 * norm_scale(h.frobenius()) *
                                                norm_scale(q.frobenius()));
    }
}

TEST_CASE("tuple conversion round trips and preserves pairings") {
    const BipartiteOperator x(2, 3, random_hermitian(6, 41));
    const MatrixTuple t = bipartite_to_tuple(x);
    CHECK(t.length() == 4);
    const BipartiteOperator back = tuple_to_bipartite(t, 2);
    CHECK((back.mat() - x.mat()).norm() <= 1e-12 * norm_scale(x.frobenius()));

    const BipartiteOperator id(3, 2, HermitianMatrix::identity(6));
    const BipartiteOperator id_back = tuple_to_bipartite(bipartite_to_tuple(id), 3);
    CHECK((id_back.mat() - id.mat()).norm() <= 1e-14);

    const BipartiteOperator y(2, 3, random_hermitian(6, 42));
    const MatrixTuple u = bipartite_to_tuple(y);
    CHECK(trace_inner(x, y) == doctest::Approx(trace_inner(t, u)).epsilon(1e-12));
}

TEST_CASE("tuple conversion rejects mismatched shapes") {
    const BipartiteOperator x(2, 2, random_hermitian(4, 43));
    const MatrixTuple t = bipartite_to_tuple(x);
    CHECK_THROWS_AS(tuple_to_bipartite(t, 3), std::invalid_argument);
}

TEST_CASE("basis matrices map to standard unit tuples") {
    const auto basis = hermitian_basis(2);
    for (size_t k = 0; k < basis.size(); ++k) {
        const BipartiteOperator x(2, 1, basis[k]);
        const MatrixTuple t = bipartite_to_tuple(x);
        for (size_t l = 0; l < basis.size(); ++l)
            CHECK(t.entries[l](0, 0).real() == doctest::Approx(k == l ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("random sampling is reproducible and lands in the right cones") {
    const HermitianMatrix h1 = random_hermitian(4, 77);
    const HermitianMatrix h2 = random_hermitian(4, 77);
    CHECK((h1.mat() - h2.mat()).norm() == 0.0);

    const HermitianMatrix p = random_psd(5, 78);
    CHECK(eig_hermitian(p).eigenvalues[0] >= 0.0);

    const Vector v = random_product_vector(2, 3, 79);
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
}
