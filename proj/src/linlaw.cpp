#include "alt/linlaw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "alt/error.hpp"

namespace alt {

Matrix hankel_embed(std::span<const double> sequence, std::size_t l) {
    if (l < 2) fail("config", "embedding dimension l must be >= 2");
    if (sequence.size() != 2 * l - 1)
        fail("config", "hankel_embed expects a sequence of length 2l-1 = " +
                           std::to_string(2 * l - 1) + ", got " + std::to_string(sequence.size()));
    Matrix S(l, l);
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j) S(i, j) = sequence[i + j];
    return S;
}

namespace {

double off_diagonal_norm(const Matrix& A) {
    double sum = 0.0;
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = i + 1; j < A.cols(); ++j) sum += A(i, j) * A(i, j);
    return std::sqrt(2.0 * sum);
}

} // namespace

EigenDecomposition symmetric_eigen(const Matrix& S) {
    const std::size_t n = S.rows();
    if (n == 0 || S.cols() != n) fail("compute", "symmetric_eigen expects a square matrix");
    if (!S.all_finite()) fail("compute", "symmetric_eigen: matrix has non-finite entries");

    Matrix A = S;
    Matrix V = Matrix::identity(n);
    const double threshold = 1e-13 * (1.0 + S.frobenius_norm());
    const int max_sweeps = 100;

    int sweep = 0;
    while (off_diagonal_norm(A) > threshold) {
        if (++sweep > max_sweeps) {
            std::ostringstream msg;
            msg << "Jacobi eigensolver did not converge in " << max_sweeps
                << " sweeps; off-diagonal residual " << off_diagonal_norm(A);
            fail("compute", msg.str());
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (apq == 0.0) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = theta >= 0.0
                                     ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                     : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                A(p, p) -= t * apq;
                A(q, q) += t * apq;
                A(p, q) = A(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = A(r, p);
                    const double arq = A(r, q);
                    A(r, p) = A(p, r) = arp - s * (arq + tau * arp);
                    A(r, q) = A(q, r) = arq + s * (arp - tau * arq);
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double vrp = V(r, p);
                    const double vrq = V(r, q);
                    V(r, p) = c * vrp - s * vrq;
                    V(r, q) = s * vrp + c * vrq;
                }
            }
        }
    }

    // stable order: |value| ascending, ties by signed value, then position
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double fa = std::fabs(A(a, a));
        const double fb = std::fabs(A(b, b));
        if (fa != fb) return fa < fb;
        return A(a, a) < A(b, b);
    });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = A(order[i], order[i]);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, i) = V(r, order[i]);
    }
    return out;
}

void canonicalize_sign(std::span<double> v) {
    std::size_t pivot = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = std::fabs(v[i]);
        if (a > best) {
            best = a;
            pivot = i;
        }
    }
    if (v[pivot] < 0.0)
        for (double& x : v) x = -x;
}

ShapeletVector shapelet_vector(std::span<const double> sequence, std::size_t l, int source_class) {
    const Matrix S = hankel_embed(sequence, l);
    EigenDecomposition eig = symmetric_eigen(S);

    ShapeletVector sv;
    sv.source_class = source_class;
    sv.eigenvalue = eig.values.front();
    sv.components.resize(l);
    for (std::size_t r = 0; r < l; ++r) sv.components[r] = eig.vectors(r, 0);

    double norm = 0.0;
    for (double x : sv.components) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : sv.components) x /= norm;
    canonicalize_sign(sv.components);
    return sv;
}

} // namespace alt
