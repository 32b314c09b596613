// hermitian.hpp — Hermitian matrices: construction, eigendecomposition,
// tensor products, compressions, psd tests and the Frobenius psd projection.

#pragma once

#include "conelab/types.hpp"

#include <stdexcept>

namespace conelab {

// Hermitian n x n matrix. Storage is exactly Hermitian: entries(j,i) is the
// bitwise conjugate of entries(i,j) and the diagonal is exactly real.
class HermitianMatrix {
public:
    // Validating constructor for external input: symmetrizes (H + H*)/2 and
    // rejects if the correction exceeds 1e-8 * ||H||_F or entries are not finite.
    explicit HermitianMatrix(const Matrix& raw);

    // Internal fast path for matrices that are Hermitian by construction up to
    // rounding: symmetrizes unconditionally, no rejection test.
    static HermitianMatrix symmetrized(Matrix m);

    static HermitianMatrix zero(int n) { return symmetrized(Matrix::Zero(n, n)); }
    static HermitianMatrix identity(int n) { return symmetrized(Matrix::Identity(n, n)); }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& mat() const { return m_; }
    Complex operator()(int i, int j) const { return m_(i, j); }

    double frobenius() const { return m_.norm(); }
    double trace() const { return m_.trace().real(); }

    HermitianMatrix operator+(const HermitianMatrix& o) const;
    HermitianMatrix operator-(const HermitianMatrix& o) const;
    HermitianMatrix operator*(double c) const;

private:
    HermitianMatrix() = default;
    Matrix m_;
};

// Real trace inner product <A,B> = tr(AB); real for Hermitian arguments.
double trace_inner(const HermitianMatrix& a, const HermitianMatrix& b);

struct Spectrum {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // orthonormal columns, H = V diag(w) V*
};

// Cyclic complex Jacobi eigendecomposition. Sweeps until the off-diagonal
// Frobenius norm drops below 1e-12 * ||H||_F, capped at 100 sweeps.
// Throws std::runtime_error on non-convergence.
Spectrum eig_hermitian(const HermitianMatrix& h);

double min_eigenvalue(const HermitianMatrix& h);

// min eigenvalue >= -tol * max(1, ||H||_F)
bool is_psd(const HermitianMatrix& h, double tol);

// Kronecker product; Hermitian for Hermitian factors.
HermitianMatrix tensor(const HermitianMatrix& a, const HermitianMatrix& b);

// V* A V for a complex s x t matrix V (s = dim A); psd in, psd out.
HermitianMatrix compress(const HermitianMatrix& a, const Matrix& v);

// Frobenius-nearest psd matrix: clip negative eigenvalues at zero.
HermitianMatrix project_psd(const HermitianMatrix& h);

}  // namespace conelab
