// linear_map.hpp — *-linear maps between matrix algebras, given by their
// values on the matrix units, and the Choi matrix encoding.

#pragma once

#include "conelab/bipartite.hpp"

#include <vector>

namespace conelab {

// Linear map T: Mat_d -> Mat_s stored as the d*d images T(E_ij) (row-major).
// *-linearity T(E_ji) = T(E_ij)* is enforced at construction.
class LinearMapSpec {
public:
    LinearMapSpec(int d, int s, std::vector<Matrix> images);

    static LinearMapSpec identity(int d);
    static LinearMapSpec transposition(int d);
    // A |-> tr(A) I_s / s
    static LinearMapSpec trace_map(int d, int s);
    // A |-> sum_k K_k* A K_k for d x s Kraus operators.
    static LinearMapSpec from_kraus(int d, int s, const std::vector<Matrix>& kraus);

    int d() const { return d_; }
    int s() const { return s_; }
    const Matrix& image(int i, int j) const { return images_[i * d_ + j]; }

    Matrix apply(const Matrix& a) const;

private:
    int d_;
    int s_;
    std::vector<Matrix> images_;
};

// C_T = sum_ij E_ij (x) T(E_ij); Hermitian by *-linearity of T.
BipartiteOperator choi_matrix(const LinearMapSpec& t);

}  // namespace conelab
