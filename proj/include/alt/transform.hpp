#pragma once

#include <span>
#include <vector>

#include "alt/matrix.hpp"
#include "alt/shapelet_bank.hpp"

namespace alt {

// Rows the o x l embedding has for a series of length h under this config.
std::size_t embed_rows(std::size_t h, const WindowConfig& config);

// Strided view of a full instance channel: row w holds
// series[w*k + t*s] for t = 0..l-1, with o = floor((h - s*l + 1)/k) rows.
Matrix embed_instance(std::span<const double> series, const WindowConfig& config);

// Plain product O = A * P (o x l times l x N). Accumulates each entry in
// long double; stays within 1e-10 relative of the naive double product.
Matrix apply_bank(const Matrix& A, const Matrix& P);

// Squared responses of O split into the bank's class blocks. Entries are
// squares, hence nonnegative, and insensitive to shapelet sign flips.
struct ClassResponse {
    std::vector<Matrix> partitions; // c matrices, o x (block width)
};

ClassResponse square_partition(const Matrix& O, std::span<const std::size_t> class_offsets);

} // namespace alt
