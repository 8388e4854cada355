#pragma once

#include <span>
#include <vector>

#include "alt/matrix.hpp"

namespace alt {

// l x l Hankel matrix of a (2l-1)-sample sequence: S(i,j) = seq[i+j].
// Symmetric by construction.
Matrix hankel_embed(std::span<const double> sequence, std::size_t l);

struct EigenDecomposition {
    // ascending by |value|; ties by signed value, then diagonalization order
    std::vector<double> values;
    Matrix vectors; // column i pairs with values[i]
};

// Cyclic Jacobi rotations on a full symmetric matrix. Converged when the
// off-diagonal Frobenius norm drops to 1e-13 * (1 + ||S||_F); hard cap of
// 100 sweeps, after which the residual is reported as an error.
EigenDecomposition symmetric_eigen(const Matrix& S);

// Flip the vector so its largest-|component| entry (lowest index on ties)
// is nonnegative. Downstream features square everything, so the choice only
// pins byte-level reproducibility.
void canonicalize_sign(std::span<double> v);

// The "law" of a short sequence: eigenvector of its Hankel embedding for the
// smallest-absolute eigenvalue. For sequences obeying a linear recurrence of
// order < l the matrix is rank-deficient and S v ~ 0.
struct ShapeletVector {
    std::vector<double> components; // unit norm, canonical sign
    double eigenvalue = 0.0;        // signed value of the min-|.| eigenvalue
    int source_class = -1;
};

ShapeletVector shapelet_vector(std::span<const double> sequence, std::size_t l, int source_class);

} // namespace alt
