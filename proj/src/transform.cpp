#include "alt/transform.hpp"

#include <string>

#include "alt/error.hpp"

namespace alt {

std::size_t embed_rows(std::size_t h, const WindowConfig& config) {
    const std::size_t span = config.s * config.l;
    const std::size_t o = h + 1 > span ? (h - span + 1) / config.k : 0;
    if (o < 1)
        fail("data", "embedding needs o = floor((h - s*l + 1)/k) >= 1, violated for h = " +
                         std::to_string(h) + " under config " + config.str());
    return o;
}

Matrix embed_instance(std::span<const double> series, const WindowConfig& config) {
    if (series.size() != config.series_length)
        fail("data", "series length " + std::to_string(series.size()) +
                         " does not match config " + config.str() + " context h = " +
                         std::to_string(config.series_length));
    const std::size_t o = embed_rows(series.size(), config);
    Matrix A(o, config.l);
    for (std::size_t w = 0; w < o; ++w)
        for (std::size_t t = 0; t < config.l; ++t) A(w, t) = series[w * config.k + t * config.s];
    return A;
}

Matrix apply_bank(const Matrix& A, const Matrix& P) {
    if (A.cols() != P.rows())
        fail("compute", "apply_bank dimension mismatch: A is " + std::to_string(A.rows()) + "x" +
                            std::to_string(A.cols()) + ", P is " + std::to_string(P.rows()) + "x" +
                            std::to_string(P.cols()));
    Matrix O(A.rows(), P.cols());
    const std::size_t l = A.cols();
    const std::size_t n = P.cols();
    for (std::size_t i = 0; i < A.rows(); ++i) {
        const double* arow = A.row(i);
        double* orow = O.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            long double acc = 0.0L;
            for (std::size_t t = 0; t < l; ++t) acc += static_cast<long double>(arow[t]) * P(t, j);
            orow[j] = static_cast<double>(acc);
        }
    }
    return O;
}

ClassResponse square_partition(const Matrix& O, std::span<const std::size_t> class_offsets) {
    if (class_offsets.size() < 2 || class_offsets.front() != 0 ||
        class_offsets.back() != O.cols())
        fail("compute", "class offsets do not partition the " + std::to_string(O.cols()) +
                            " columns of O");
    ClassResponse response;
    response.partitions.reserve(class_offsets.size() - 1);
    for (std::size_t y = 0; y + 1 < class_offsets.size(); ++y) {
        const std::size_t begin = class_offsets[y];
        const std::size_t end = class_offsets[y + 1];
        if (end < begin || end > O.cols()) fail("compute", "class offsets not monotone");
        Matrix part(O.rows(), end - begin);
        for (std::size_t i = 0; i < O.rows(); ++i)
            for (std::size_t j = begin; j < end; ++j) {
                const double v = O(i, j);
                part(i, j - begin) = v * v;
            }
        response.partitions.push_back(std::move(part));
    }
    return response;
}

} // namespace alt
