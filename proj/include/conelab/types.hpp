// types.hpp — shared aliases and small numeric helpers

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>

namespace conelab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline bool is_finite(double x) { return std::isfinite(x); }

inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline bool is_finite(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!is_finite(m(i, j))) return false;
    return true;
}

// Relative scale used by the tolerance tests throughout: max(1, ||.||_F).
inline double norm_scale(double frobenius_norm) {
    return frobenius_norm > 1.0 ? frobenius_norm : 1.0;
}

}  // namespace conelab
