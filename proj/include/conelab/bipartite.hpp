// bipartite.hpp — Hermitian operators on a d (x) s tensor space with block
// access and the partial transpose on the first factor.

#pragma once

#include "conelab/hermitian.hpp"

#include <vector>

namespace conelab {

// Hermitian element of Mat_d (x) Mat_s viewed as a d x d grid of s x s blocks.
class BipartiteOperator {
public:
    BipartiteOperator(int d, int s, HermitianMatrix mat);

    static BipartiteOperator zero(int d, int s);
    static BipartiteOperator identity(int d, int s);

    // Assemble from a row-major d*d list of s x s blocks; blocks[j*d+i] must be
    // the adjoint of blocks[i*d+j] up to rounding.
    static BipartiteOperator from_blocks(int d, int s, const std::vector<Matrix>& blocks);

    int d() const { return d_; }
    int s() const { return s_; }
    int dim() const { return d_ * s_; }
    const HermitianMatrix& herm() const { return mat_; }
    const Matrix& mat() const { return mat_.mat(); }

    Matrix block(int i, int j) const;  // s x s block at block position (i, j)

    double frobenius() const { return mat_.frobenius(); }
    double trace() const { return mat_.trace(); }

    BipartiteOperator operator+(const BipartiteOperator& o) const;
    BipartiteOperator operator-(const BipartiteOperator& o) const;
    BipartiteOperator operator*(double c) const;

    bool bitwise_equal(const BipartiteOperator& o) const;

private:
    int d_;
    int s_;
    HermitianMatrix mat_;
};

// Transposition of the first tensor factor: block (i,j) of the result is
// block (j,i) of the input. An involutive Frobenius isometry.
BipartiteOperator partial_transpose(const BipartiteOperator& x);

double trace_inner(const BipartiteOperator& a, const BipartiteOperator& b);

}  // namespace conelab
