#include "conelab/tuple_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace conelab {

MatrixTuple MatrixTuple::validated(std::vector<HermitianMatrix> entries) {
    if (entries.empty()) throw std::invalid_argument("MatrixTuple: need at least one entry");
    const int s = entries.front().dim();
    for (const auto& e : entries)
        if (e.dim() != s) throw std::invalid_argument("MatrixTuple: entries must share one size");
    MatrixTuple t;
    t.entries = std::move(entries);
    return t;
}

double trace_inner(const MatrixTuple& a, const MatrixTuple& b) {
    if (a.length() != b.length() || a.level() != b.level())
        throw std::invalid_argument("trace_inner: tuple shape mismatch");
    double sum = 0.0;
    for (int i = 0; i < a.length(); ++i) sum += trace_inner(a.entries[i], b.entries[i]);
    return sum;
}

std::vector<HermitianMatrix> hermitian_basis(int d) {
    if (d < 1) throw std::invalid_argument("hermitian_basis: d must be >= 1");
    std::vector<HermitianMatrix> basis;
    basis.reserve(d * d);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < d; ++i) {
        Matrix m = Matrix::Zero(d, d);
        m(i, i) = 1.0;
        basis.push_back(HermitianMatrix::symmetrized(std::move(m)));
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            Matrix sym = Matrix::Zero(d, d);
            sym(i, j) = inv_sqrt2;
            sym(j, i) = inv_sqrt2;
            basis.push_back(HermitianMatrix::symmetrized(std::move(sym)));
            Matrix asym = Matrix::Zero(d, d);
            asym(i, j) = Complex(0.0, inv_sqrt2);
            asym(j, i) = Complex(0.0, -inv_sqrt2);
            basis.push_back(HermitianMatrix::symmetrized(std::move(asym)));
        }
    return basis;
}

MatrixTuple bipartite_to_tuple(const BipartiteOperator& x) {
    const int d = x.d();
    const int s = x.s();
    const auto basis = hermitian_basis(d);
    std::vector<HermitianMatrix> coords;
    coords.reserve(basis.size());
    for (const auto& f : basis) {
        // Coefficient of F in X = sum_k F_k (x) A_k: A = sum_ij F(j,i) X_ij.
        Matrix a = Matrix::Zero(s, s);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const Complex w = f(j, i);
                if (w != Complex(0.0, 0.0)) a += w * x.block(i, j);
            }
        coords.push_back(HermitianMatrix::symmetrized(std::move(a)));
    }
    return MatrixTuple::validated(std::move(coords));
}

BipartiteOperator tuple_to_bipartite(const MatrixTuple& t, int d) {
    if (t.length() != d * d)
        throw std::invalid_argument("tuple_to_bipartite: tuple length must be d*d");
    const int s = t.level();
    const auto basis = hermitian_basis(d);
    Matrix m = Matrix::Zero(d * s, d * s);
    for (int k = 0; k < d * d; ++k) {
        const HermitianMatrix& f = basis[k];
        const HermitianMatrix& a = t.entries[k];
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const Complex w = f(i, j);
                if (w != Complex(0.0, 0.0)) m.block(i * s, j * s, s, s) += w * a.mat();
            }
    }
    return BipartiteOperator(d, s, HermitianMatrix::symmetrized(std::move(m)));
}

}  // namespace conelab
