// tuple_basis.hpp — d-tuples of Hermitian s x s matrices and the coordinate
// conversion between bipartite operators and tuples over the orthonormal
// Hermitian basis of the first factor.

#pragma once

#include "conelab/bipartite.hpp"

#include <vector>

namespace conelab {

// d-tuple of Hermitian s x s matrices: a level-s element in coordinates.
struct MatrixTuple {
    std::vector<HermitianMatrix> entries;

    int length() const { return static_cast<int>(entries.size()); }
    int level() const { return entries.empty() ? 0 : entries.front().dim(); }

    static MatrixTuple validated(std::vector<HermitianMatrix> entries);
};

// <A,B> = sum_i tr(B_i A_i)
double trace_inner(const MatrixTuple& a, const MatrixTuple& b);

// Orthonormal basis of the Hermitian d x d matrices under tr(AB):
// E_11..E_dd first, then for each i<j (lexicographic) the symmetric element
// (E_ij+E_ji)/sqrt(2) followed by the antisymmetric i(E_ij-E_ji)/sqrt(2).
std::vector<HermitianMatrix> hermitian_basis(int d);

// Coordinates of a bipartite operator with respect to hermitian_basis(d):
// a tuple of length d*d at level s. Inverse of tuple_to_bipartite.
MatrixTuple bipartite_to_tuple(const BipartiteOperator& x);

BipartiteOperator tuple_to_bipartite(const MatrixTuple& t, int d);

}  // namespace conelab
