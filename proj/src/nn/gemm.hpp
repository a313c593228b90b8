#pragma once

#include <cstddef>

namespace pulsekit::nn {

// C (MxN) += A (MxK) * B (KxN), all row-major dense.
void gemm(std::size_t M, std::size_t N, std::size_t K, const double* A, const double* B,
          double* C);

// C (MxK) += A (MxN) * B^T where B is (KxN) row-major, i.e.
// C[m][k] += sum_n A[m][n] * B[k][n].
void gemm_abt(std::size_t M, std::size_t K, std::size_t N, const double* A,
              const double* B, double* C);

} // namespace pulsekit::nn
