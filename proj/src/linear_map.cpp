#include "conelab/linear_map.hpp"

#include <stdexcept>

namespace conelab {

LinearMapSpec::LinearMapSpec(int d, int s, std::vector<Matrix> images) : d_(d), s_(s) {
    if (d < 1 || s < 1) throw std::invalid_argument("LinearMapSpec: dimensions must be >= 1");
    if (static_cast<int>(images.size()) != d * d)
        throw std::invalid_argument("LinearMapSpec: need d*d images");
    double scale = 0.0;
    for (const auto& m : images) {
        if (m.rows() != s || m.cols() != s)
            throw std::invalid_argument("LinearMapSpec: every image must be s x s");
        if (!is_finite(m)) throw std::invalid_argument("LinearMapSpec: images must be finite");
        scale += m.squaredNorm();
    }
    scale = norm_scale(std::sqrt(scale));
    // Enforce T(E_ji) = T(E_ij)* by averaging each pair; reject large violations.
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            Matrix& upper = images[i * d + j];
            Matrix& lower = images[j * d + i];
            const Matrix avg = 0.5 * (upper + lower.adjoint());
            const double corr = (avg - upper).norm() + (avg.adjoint() - lower).norm();
            if (corr > 1e-8 * scale)
                throw std::invalid_argument("LinearMapSpec: images violate *-linearity");
            upper = avg;
            lower = avg.adjoint();
        }
    images_ = std::move(images);
}

LinearMapSpec LinearMapSpec::identity(int d) {
    std::vector<Matrix> images(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Matrix e = Matrix::Zero(d, d);
            e(i, j) = 1.0;
            images[i * d + j] = std::move(e);
        }
    return LinearMapSpec(d, d, std::move(images));
}

LinearMapSpec LinearMapSpec::transposition(int d) {
    std::vector<Matrix> images(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Matrix e = Matrix::Zero(d, d);
            e(j, i) = 1.0;
            images[i * d + j] = std::move(e);
        }
    return LinearMapSpec(d, d, std::move(images));
}

LinearMapSpec LinearMapSpec::trace_map(int d, int s) {
    std::vector<Matrix> images(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            images[i * d + j] =
                i == j ? Matrix(Matrix::Identity(s, s) / double(s)) : Matrix(Matrix::Zero(s, s));
    return LinearMapSpec(d, s, std::move(images));
}

LinearMapSpec LinearMapSpec::from_kraus(int d, int s, const std::vector<Matrix>& kraus) {
    std::vector<Matrix> images(d * d, Matrix::Zero(s, s));
    for (const auto& k : kraus) {
        if (k.rows() != d || k.cols() != s)
            throw std::invalid_argument("from_kraus: operators must be d x s");
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                // K* E_ij K = (row i of K)* (row j of K)
                images[i * d + j] += k.row(i).adjoint() * k.row(j);
    }
    return LinearMapSpec(d, s, std::move(images));
}

Matrix LinearMapSpec::apply(const Matrix& a) const {
    if (a.rows() != d_ || a.cols() != d_)
        throw std::invalid_argument("LinearMapSpec::apply: argument must be d x d");
    Matrix out = Matrix::Zero(s_, s_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) out += a(i, j) * image(i, j);
    return out;
}

BipartiteOperator choi_matrix(const LinearMapSpec& t) {
    const int d = t.d();
    const int s = t.s();
    Matrix m(d * s, d * s);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m.block(i * s, j * s, s, s) = t.image(i, j);
    return BipartiteOperator(d, s, HermitianMatrix::symmetrized(std::move(m)));
}

}  // namespace conelab
