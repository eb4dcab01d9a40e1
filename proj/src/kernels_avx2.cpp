// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after detail::avx2_supported() returned true.
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <vector>

#include "ringsq/kernels.hpp"

namespace ringsq::kern::detail {

bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

// Interleaved complex layout: a ymm holds two complex doubles (r0,i0,r1,i1).
// For acc += a*b with broadcast scalar a = ar + i*ai:
//   acc += ar * b            (fmadd)
//   acc += ai * swapsign(b)  (fmadd, swapsign(b) = (-i0, r0, -i1, r1))
inline __m256d swapsign(__m256d b) {
  const __m256d sw = _mm256_permute_pd(b, 0b0101);
  const __m256d mask = _mm256_set_pd(0.0, -0.0, 0.0, -0.0);
  return _mm256_xor_pd(sw, mask);
}

constexpr int KC = 256;
constexpr int NC = 64;

// 4-row by 4-complex-column micro tile over p in [0, kc).
inline void micro_4x4(int kc, const double* a0, const double* a1, const double* a2,
                      const double* a3, const double* b, int ldb2, double* c0, double* c1,
                      double* c2, double* c3) {
  __m256d acc00 = _mm256_setzero_pd(), acc01 = _mm256_setzero_pd();
  __m256d acc10 = _mm256_setzero_pd(), acc11 = _mm256_setzero_pd();
  __m256d acc20 = _mm256_setzero_pd(), acc21 = _mm256_setzero_pd();
  __m256d acc30 = _mm256_setzero_pd(), acc31 = _mm256_setzero_pd();
  for (int p = 0; p < kc; ++p) {
    const double* brow = b + size_t(p) * ldb2;
    const __m256d b0 = _mm256_loadu_pd(brow);
    const __m256d b1 = _mm256_loadu_pd(brow + 4);
    const __m256d s0 = swapsign(b0);
    const __m256d s1 = swapsign(b1);
    __m256d ar, ai;
    ar = _mm256_broadcast_sd(a0 + 2 * p);
    ai = _mm256_broadcast_sd(a0 + 2 * p + 1);
    acc00 = _mm256_fmadd_pd(ar, b0, acc00);
    acc01 = _mm256_fmadd_pd(ar, b1, acc01);
    acc00 = _mm256_fmadd_pd(ai, s0, acc00);
    acc01 = _mm256_fmadd_pd(ai, s1, acc01);
    ar = _mm256_broadcast_sd(a1 + 2 * p);
    ai = _mm256_broadcast_sd(a1 + 2 * p + 1);
    acc10 = _mm256_fmadd_pd(ar, b0, acc10);
    acc11 = _mm256_fmadd_pd(ar, b1, acc11);
    acc10 = _mm256_fmadd_pd(ai, s0, acc10);
    acc11 = _mm256_fmadd_pd(ai, s1, acc11);
    ar = _mm256_broadcast_sd(a2 + 2 * p);
    ai = _mm256_broadcast_sd(a2 + 2 * p + 1);
    acc20 = _mm256_fmadd_pd(ar, b0, acc20);
    acc21 = _mm256_fmadd_pd(ar, b1, acc21);
    acc20 = _mm256_fmadd_pd(ai, s0, acc20);
    acc21 = _mm256_fmadd_pd(ai, s1, acc21);
    ar = _mm256_broadcast_sd(a3 + 2 * p);
    ai = _mm256_broadcast_sd(a3 + 2 * p + 1);
    acc30 = _mm256_fmadd_pd(ar, b0, acc30);
    acc31 = _mm256_fmadd_pd(ar, b1, acc31);
    acc30 = _mm256_fmadd_pd(ai, s0, acc30);
    acc31 = _mm256_fmadd_pd(ai, s1, acc31);
  }
  _mm256_storeu_pd(c0, _mm256_add_pd(_mm256_loadu_pd(c0), acc00));
  _mm256_storeu_pd(c0 + 4, _mm256_add_pd(_mm256_loadu_pd(c0 + 4), acc01));
  _mm256_storeu_pd(c1, _mm256_add_pd(_mm256_loadu_pd(c1), acc10));
  _mm256_storeu_pd(c1 + 4, _mm256_add_pd(_mm256_loadu_pd(c1 + 4), acc11));
  _mm256_storeu_pd(c2, _mm256_add_pd(_mm256_loadu_pd(c2), acc20));
  _mm256_storeu_pd(c2 + 4, _mm256_add_pd(_mm256_loadu_pd(c2 + 4), acc21));
  _mm256_storeu_pd(c3, _mm256_add_pd(_mm256_loadu_pd(c3), acc30));
  _mm256_storeu_pd(c3 + 4, _mm256_add_pd(_mm256_loadu_pd(c3 + 4), acc31));
}

inline void micro_edge(int mr, int nr, int kc, const cplx* a, int lda, const cplx* b, int ldb,
                       cplx* c, int ldc) {
  for (int i = 0; i < mr; ++i)
    for (int p = 0; p < kc; ++p) {
      const cplx av = a[size_t(i) * lda + p];
      const cplx* brow = b + size_t(p) * ldb;
      cplx* crow = c + size_t(i) * ldc;
      for (int j = 0; j < nr; ++j) crow[j] += av * brow[j];
    }
}

}  // namespace

void cgemm_avx2(int m, int n, int k, cplx alpha, const cplx* a, int lda, const cplx* b, int ldb,
                cplx beta, cplx* c, int ldc) {
  // C is pre-scaled by beta; alpha is folded into a scaled copy of A so the
  // micro kernel only ever accumulates plain products.
  for (int i = 0; i < m; ++i) {
    cplx* crow = c + size_t(i) * ldc;
    if (beta == cplx{}) {
      for (int j = 0; j < n; ++j) crow[j] = cplx{};
    } else if (beta != cplx{1.0, 0.0}) {
      for (int j = 0; j < n; ++j) crow[j] *= beta;
    }
  }

  std::vector<cplx> a_scaled;
  const cplx* a_use = a;
  int lda_use = lda;
  if (alpha != cplx{1.0, 0.0}) {
    a_scaled.resize(size_t(m) * k);
    for (int i = 0; i < m; ++i)
      for (int p = 0; p < k; ++p) a_scaled[size_t(i) * k + p] = alpha * a[size_t(i) * lda + p];
    a_use = a_scaled.data();
    lda_use = k;
  }

  for (int j0 = 0; j0 < n; j0 += NC) {
    const int nc = std::min(NC, n - j0);
    const int nc4 = nc & ~3;
    for (int p0 = 0; p0 < k; p0 += KC) {
      const int kc = std::min(KC, k - p0);
      int i = 0;
      for (; i + 4 <= m; i += 4) {
        const double* a0 = reinterpret_cast<const double*>(a_use + size_t(i) * lda_use + p0);
        const double* a1 = reinterpret_cast<const double*>(a_use + size_t(i + 1) * lda_use + p0);
        const double* a2 = reinterpret_cast<const double*>(a_use + size_t(i + 2) * lda_use + p0);
        const double* a3 = reinterpret_cast<const double*>(a_use + size_t(i + 3) * lda_use + p0);
        for (int j = 0; j < nc4; j += 4) {
          const double* bp =
              reinterpret_cast<const double*>(b + size_t(p0) * ldb + j0 + j);
          micro_4x4(kc, a0, a1, a2, a3, bp, 2 * ldb,
                    reinterpret_cast<double*>(c + size_t(i) * ldc + j0 + j),
                    reinterpret_cast<double*>(c + size_t(i + 1) * ldc + j0 + j),
                    reinterpret_cast<double*>(c + size_t(i + 2) * ldc + j0 + j),
                    reinterpret_cast<double*>(c + size_t(i + 3) * ldc + j0 + j));
        }
        if (nc4 < nc)
          micro_edge(4, nc - nc4, kc, a_use + size_t(i) * lda_use + p0, lda_use,
                     b + size_t(p0) * ldb + j0 + nc4, ldb, c + size_t(i) * ldc + j0 + nc4, ldc);
      }
      if (i < m)
        micro_edge(m - i, nc, kc, a_use + size_t(i) * lda_use + p0, lda_use,
                   b + size_t(p0) * ldb + j0, ldb, c + size_t(i) * ldc + j0, ldc);
    }
  }
}

void caxpy_avx2(size_t n, cplx a, const cplx* x, cplx* y) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  size_t i = 0;
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d acc = _mm256_loadu_pd(yd + 2 * i);
    acc = _mm256_fmadd_pd(ar, xv, acc);
    acc = _mm256_fmadd_pd(ai, swapsign(xv), acc);
    _mm256_storeu_pd(yd + 2 * i, acc);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void cxpay_avx2(size_t n, const cplx* x, cplx a, const cplx* s, cplx* y) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  size_t i = 0;
  const double* xd = reinterpret_cast<const double*>(x);
  const double* sd = reinterpret_cast<const double*>(s);
  double* yd = reinterpret_cast<double*>(y);
  for (; i + 2 <= n; i += 2) {
    const __m256d sv = _mm256_loadu_pd(sd + 2 * i);
    __m256d acc = _mm256_loadu_pd(xd + 2 * i);
    acc = _mm256_fmadd_pd(ar, sv, acc);
    acc = _mm256_fmadd_pd(ai, swapsign(sv), acc);
    _mm256_storeu_pd(yd + 2 * i, acc);
  }
  for (; i < n; ++i) y[i] = x[i] + a * s[i];
}

}  // namespace ringsq::kern::detail

#endif  // x86_64
