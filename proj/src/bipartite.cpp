#include "conelab/bipartite.hpp"

#include <cstring>
#include <stdexcept>

namespace conelab {

BipartiteOperator::BipartiteOperator(int d, int s, HermitianMatrix mat)
    : d_(d), s_(s), mat_(std::move(mat)) {
    if (d < 1 || s < 1) throw std::invalid_argument("BipartiteOperator: dimensions must be >= 1");
    if (mat_.dim() != d * s)
        throw std::invalid_argument("BipartiteOperator: matrix dimension must equal d*s");
}

BipartiteOperator BipartiteOperator::zero(int d, int s) {
    return BipartiteOperator(d, s, HermitianMatrix::zero(d * s));
}

BipartiteOperator BipartiteOperator::identity(int d, int s) {
    return BipartiteOperator(d, s, HermitianMatrix::identity(d * s));
}

BipartiteOperator BipartiteOperator::from_blocks(int d, int s,
                                                 const std::vector<Matrix>& blocks) {
    if (static_cast<int>(blocks.size()) != d * d)
        throw std::invalid_argument("from_blocks: need d*d blocks");
    Matrix m(d * s, d * s);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const Matrix& blk = blocks[i * d + j];
            if (blk.rows() != s || blk.cols() != s)
                throw std::invalid_argument("from_blocks: every block must be s x s");
            m.block(i * s, j * s, s, s) = blk;
        }
    return BipartiteOperator(d, s, HermitianMatrix(m));
}

Matrix BipartiteOperator::block(int i, int j) const {
    return mat_.mat().block(i * s_, j * s_, s_, s_);
}

BipartiteOperator BipartiteOperator::operator+(const BipartiteOperator& o) const {
    if (d_ != o.d_ || s_ != o.s_) throw std::invalid_argument("BipartiteOperator: shape mismatch");
    return BipartiteOperator(d_, s_, mat_ + o.mat_);
}

BipartiteOperator BipartiteOperator::operator-(const BipartiteOperator& o) const {
    if (d_ != o.d_ || s_ != o.s_) throw std::invalid_argument("BipartiteOperator: shape mismatch");
    return BipartiteOperator(d_, s_, mat_ - o.mat_);
}

BipartiteOperator BipartiteOperator::operator*(double c) const {
    return BipartiteOperator(d_, s_, mat_ * c);
}

bool BipartiteOperator::bitwise_equal(const BipartiteOperator& o) const {
    if (d_ != o.d_ || s_ != o.s_) return false;
    const Matrix& a = mat_.mat();
    const Matrix& b = o.mat_.mat();
    return std::memcmp(a.data(), b.data(), sizeof(Complex) * a.size()) == 0;
}

BipartiteOperator partial_transpose(const BipartiteOperator& x) {
    const int d = x.d();
    const int s = x.s();
    Matrix m(d * s, d * s);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m.block(i * s, j * s, s, s) = x.block(j, i);
    return BipartiteOperator(d, s, HermitianMatrix::symmetrized(std::move(m)));
}

double trace_inner(const BipartiteOperator& a, const BipartiteOperator& b) {
    return trace_inner(a.herm(), b.herm());
}

}  // namespace conelab
