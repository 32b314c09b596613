#include "conelab/hermitian.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

namespace conelab {

namespace {

// Force exact Hermitian storage: average with the adjoint, zero the
// imaginary parts of the diagonal. Adding 0.0 canonicalizes negative zeros
// so that equal values are also bitwise equal regardless of entry history.
void make_exactly_hermitian(Matrix& m) {
    const Eigen::Index n = m.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = Complex(m(i, i).real() + 0.0, 0.0);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const Complex raw = 0.5 * (m(i, j) + std::conj(m(j, i)));
            const Complex avg(raw.real() + 0.0, raw.imag() + 0.0);
            m(i, j) = avg;
            m(j, i) = std::conj(avg);
        }
    }
}

}  // namespace

HermitianMatrix::HermitianMatrix(const Matrix& raw) {
    if (raw.rows() < 1 || raw.rows() != raw.cols())
        throw std::invalid_argument("HermitianMatrix: need a square matrix of dimension >= 1");
    if (!is_finite(raw))
        throw std::invalid_argument("HermitianMatrix: entries must be finite");
    Matrix sym = raw;
    make_exactly_hermitian(sym);
    const double correction = (sym - raw).norm();
    if (correction > 1e-8 * norm_scale(raw.norm()))
        throw std::invalid_argument("HermitianMatrix: input is not Hermitian within tolerance");
    m_ = std::move(sym);
}

HermitianMatrix HermitianMatrix::symmetrized(Matrix m) {
    assert(m.rows() >= 1 && m.rows() == m.cols());
    make_exactly_hermitian(m);
    assert((m - m.adjoint().eval()).norm() == 0.0);
    HermitianMatrix h;
    h.m_ = std::move(m);
    return h;
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
    return symmetrized(m_ + o.m_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
    return symmetrized(m_ - o.m_);
}

HermitianMatrix HermitianMatrix::operator*(double c) const {
    return symmetrized(m_ * c);
}

double trace_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
    return (a.mat() * b.mat()).trace().real();
}

Spectrum eig_hermitian(const HermitianMatrix& h) {
    const int n = h.dim();
    Matrix a = h.mat();
    Matrix v = Matrix::Identity(n, n);
    const double target = 1e-12 * h.frobenius();

    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
        return std::sqrt(s);
    };

    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    while (off_norm() > target) {
        if (++sweep > kMaxSweeps) {
            std::ostringstream msg;
            msg << "eig_hermitian: no convergence after " << kMaxSweeps
                << " sweeps (off-diagonal " << off_norm() << ", target " << target << ")";
            throw std::runtime_error(msg.str());
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r <= target / (n * n) || r == 0.0) continue;
                const Complex phase = a(p, q) / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * r);
                const double sign = theta >= 0.0 ? 1.0 : -1.0;
                const double t = sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const Complex s = t * c * phase;

                // Rotate rows/columns p and q: A <- U* A U with
                // U = I except U(p,p)=c, U(p,q)=s, U(q,p)=-conj(s), U(q,q)=c.
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp - std::conj(s) * akq;
                    a(k, q) = s * akp + c * akq;
                    a(p, k) = std::conj(a(k, p));
                    a(q, k) = std::conj(a(k, q));
                }
                a(p, p) = Complex(app - t * r, 0.0);
                a(q, q) = Complex(aqq + t * r, 0.0);
                a(p, q) = Complex(0.0, 0.0);
                a(q, p) = Complex(0.0, 0.0);
                for (int k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = c * vkp - std::conj(s) * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    Spectrum spec;
    spec.eigenvalues.resize(n);
    spec.eigenvectors.resize(n, n);
    for (int k = 0; k < n; ++k) {
        spec.eigenvalues[k] = a(order[k], order[k]).real();
        spec.eigenvectors.col(k) = v.col(order[k]);
    }
    return spec;
}

double min_eigenvalue(const HermitianMatrix& h) {
    return eig_hermitian(h).eigenvalues[0];
}

bool is_psd(const HermitianMatrix& h, double tol) {
    if (tol < 0.0) throw std::invalid_argument("is_psd: tol must be nonnegative");
    return min_eigenvalue(h) >= -tol * norm_scale(h.frobenius());
}

HermitianMatrix tensor(const HermitianMatrix& a, const HermitianMatrix& b) {
    const int na = a.dim();
    const int nb = b.dim();
    Matrix out(na * nb, na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j)
            out.block(i * nb, j * nb, nb, nb) = a(i, j) * b.mat();
    return HermitianMatrix::symmetrized(std::move(out));
}

HermitianMatrix compress(const HermitianMatrix& a, const Matrix& v) {
    if (v.rows() != a.dim())
        throw std::invalid_argument("compress: V must have as many rows as dim(A)");
    return HermitianMatrix::symmetrized(v.adjoint() * a.mat() * v);
}

HermitianMatrix project_psd(const HermitianMatrix& h) {
    const Spectrum spec = eig_hermitian(h);
    const int n = h.dim();
    Matrix out = Matrix::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        const double w = spec.eigenvalues[k];
        if (w > 0.0) out += w * (spec.eigenvectors.col(k) * spec.eigenvectors.col(k).adjoint());
    }
    return HermitianMatrix::symmetrized(std::move(out));
}

}  // namespace conelab
