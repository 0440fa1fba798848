#pragma once

#include <string>

#include "nsamg/sparse.hpp"

namespace nsamg {

// MatrixMarket coordinate format, real, general or symmetric, 1-based
// indices. Symmetric storage is expanded, duplicate entries summed.
SparseMatrix read_matrix_market(const std::string& path);
void write_matrix_market(const SparseMatrix& A, const std::string& path);

} // namespace nsamg
