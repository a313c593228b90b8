#include "nn/gemm.hpp"

#ifdef __AVX2__
#include <immintrin.h>
#endif

namespace pulsekit::nn {

#ifdef __AVX2__

void gemm(std::size_t M, std::size_t N, std::size_t K, const double* A, const double* B,
          double* C) {
    constexpr std::size_t MR = 4, NR = 12;
    std::size_t m = 0;
    for (; m + MR <= M; m += MR) {
        const double* a0 = A + m * K;
        const double* a1 = a0 + K;
        const double* a2 = a1 + K;
        const double* a3 = a2 + K;
        std::size_t n = 0;
        for (; n + NR <= N; n += NR) {
            __m256d c00 = _mm256_setzero_pd(), c01 = c00, c02 = c00;
            __m256d c10 = c00, c11 = c00, c12 = c00;
            __m256d c20 = c00, c21 = c00, c22 = c00;
            __m256d c30 = c00, c31 = c00, c32 = c00;
            for (std::size_t k = 0; k < K; ++k) {
                const double* bk = B + k * N + n;
                __m256d b0 = _mm256_loadu_pd(bk);
                __m256d b1 = _mm256_loadu_pd(bk + 4);
                __m256d b2 = _mm256_loadu_pd(bk + 8);
                __m256d av = _mm256_set1_pd(a0[k]);
                c00 = _mm256_fmadd_pd(av, b0, c00);
                c01 = _mm256_fmadd_pd(av, b1, c01);
                c02 = _mm256_fmadd_pd(av, b2, c02);
                av = _mm256_set1_pd(a1[k]);
                c10 = _mm256_fmadd_pd(av, b0, c10);
                c11 = _mm256_fmadd_pd(av, b1, c11);
                c12 = _mm256_fmadd_pd(av, b2, c12);
                av = _mm256_set1_pd(a2[k]);
                c20 = _mm256_fmadd_pd(av, b0, c20);
                c21 = _mm256_fmadd_pd(av, b1, c21);
                c22 = _mm256_fmadd_pd(av, b2, c22);
                av = _mm256_set1_pd(a3[k]);
                c30 = _mm256_fmadd_pd(av, b0, c30);
                c31 = _mm256_fmadd_pd(av, b1, c31);
                c32 = _mm256_fmadd_pd(av, b2, c32);
            }
            double* c = C + m * N + n;
            auto acc = [N](double* row, __m256d v0, __m256d v1, __m256d v2) {
                (void)N;
                _mm256_storeu_pd(row, _mm256_add_pd(_mm256_loadu_pd(row), v0));
                _mm256_storeu_pd(row + 4, _mm256_add_pd(_mm256_loadu_pd(row + 4), v1));
                _mm256_storeu_pd(row + 8, _mm256_add_pd(_mm256_loadu_pd(row + 8), v2));
            };
            acc(c, c00, c01, c02);
            acc(c + N, c10, c11, c12);
            acc(c + 2 * N, c20, c21, c22);
            acc(c + 3 * N, c30, c31, c32);
        }
        for (; n < N; ++n) {
            double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
            for (std::size_t k = 0; k < K; ++k) {
                double bk = B[k * N + n];
                s0 += a0[k] * bk;
                s1 += a1[k] * bk;
                s2 += a2[k] * bk;
                s3 += a3[k] * bk;
            }
            C[m * N + n] += s0;
            C[(m + 1) * N + n] += s1;
            C[(m + 2) * N + n] += s2;
            C[(m + 3) * N + n] += s3;
        }
    }
    for (; m < M; ++m) {
        std::size_t n = 0;
        for (; n + 4 <= N; n += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (std::size_t k = 0; k < K; ++k)
                acc = _mm256_fmadd_pd(_mm256_set1_pd(A[m * K + k]),
                                      _mm256_loadu_pd(B + k * N + n), acc);
            _mm256_storeu_pd(C + m * N + n,
                             _mm256_add_pd(_mm256_loadu_pd(C + m * N + n), acc));
        }
        for (; n < N; ++n) {
            double s = 0;
            for (std::size_t k = 0; k < K; ++k) s += A[m * K + k] * B[k * N + n];
            C[m * N + n] += s;
        }
    }
}

void gemm_abt(std::size_t M, std::size_t K, std::size_t N, const double* A,
              const double* B, double* C) {
    constexpr std::size_t MR = 2, KR = 2;
    std::size_t m = 0;
    for (; m + MR <= M; m += MR) {
        std::size_t k = 0;
        for (; k + KR <= K; k += KR) {
            const double* a0 = A + m * N;
            const double* a1 = a0 + N;
            const double* b0 = B + k * N;
            const double* b1 = b0 + N;
            __m256d s00 = _mm256_setzero_pd(), s01 = s00, s10 = s00, s11 = s00;
            std::size_t n = 0;
            for (; n + 4 <= N; n += 4) {
                __m256d va0 = _mm256_loadu_pd(a0 + n);
                __m256d va1 = _mm256_loadu_pd(a1 + n);
                __m256d vb0 = _mm256_loadu_pd(b0 + n);
                __m256d vb1 = _mm256_loadu_pd(b1 + n);
                s00 = _mm256_fmadd_pd(va0, vb0, s00);
                s01 = _mm256_fmadd_pd(va0, vb1, s01);
                s10 = _mm256_fmadd_pd(va1, vb0, s10);
                s11 = _mm256_fmadd_pd(va1, vb1, s11);
            }
            alignas(32) double t[4];
            auto hsum = [&t](__m256d v) {
                _mm256_store_pd(t, v);
                return t[0] + t[1] + t[2] + t[3];
            };
            double d00 = hsum(s00), d01 = hsum(s01), d10 = hsum(s10), d11 = hsum(s11);
            for (; n < N; ++n) {
                d00 += a0[n] * b0[n];
                d01 += a0[n] * b1[n];
                d10 += a1[n] * b0[n];
                d11 += a1[n] * b1[n];
            }
            C[m * K + k] += d00;
            C[m * K + k + 1] += d01;
            C[(m + 1) * K + k] += d10;
            C[(m + 1) * K + k + 1] += d11;
        }
        for (; k < K; ++k)
            for (std::size_t mm = m; mm < m + MR; ++mm) {
                double s = 0;
                for (std::size_t n = 0; n < N; ++n) s += A[mm * N + n] * B[k * N + n];
                C[mm * K + k] += s;
            }
    }
    for (; m < M; ++m)
        for (std::size_t k = 0; k < K; ++k) {
            double s = 0;
            for (std::size_t n = 0; n < N; ++n) s += A[m * N + n] * B[k * N + n];
            C[m * K + k] += s;
        }
}

#else

void gemm(std::size_t M, std::size_t N, std::size_t K, const double* A, const double* B,
          double* C) {
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t k = 0; k < K; ++k) {
            double a = A[m * K + k];
            const double* brow = B + k * N;
            double* crow = C + m * N;
            for (std::size_t n = 0; n < N; ++n) crow[n] += a * brow[n];
        }
}

void gemm_abt(std::size_t M, std::size_t K, std::size_t N, const double* A,
              const double* B, double* C) {
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t k = 0; k < K; ++k) {
            double s = 0;
            for (std::size_t n = 0; n < N; ++n) s += A[m * N + n] * B[k * N + n];
            C[m * K + k] += s;
        }
}

#endif

} // namespace pulsekit::nn
