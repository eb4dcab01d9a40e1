#include "ringsq/kernels.hpp"

// Reference kernels. Plain loops, no intrinsics; these define the semantics
// the AVX2 variants are tested against.
namespace ringsq::kern::detail {

void cgemm_scalar(int m, int n, int k, cplx alpha, const cplx* a, int lda, const cplx* b,
                  int ldb, cplx beta, cplx* c, int ldc) {
  for (int i = 0; i < m; ++i) {
    cplx* crow = c + size_t(i) * ldc;
    if (beta == cplx{}) {
      for (int j = 0; j < n; ++j) crow[j] = cplx{};
    } else if (beta != cplx{1.0, 0.0}) {
      for (int j = 0; j < n; ++j) crow[j] *= beta;
    }
    const cplx* arow = a + size_t(i) * lda;
    for (int p = 0; p < k; ++p) {
      const cplx av = alpha * arow[p];
      if (av == cplx{}) continue;
      const cplx* brow = b + size_t(p) * ldb;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void caxpy_scalar(size_t n, cplx a, const cplx* x, cplx* y) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void cxpay_scalar(size_t n, const cplx* x, cplx a, const cplx* s, cplx* y) {
  for (size_t i = 0; i < n; ++i) y[i] = x[i] + a * s[i];
}

}  // namespace ringsq::kern::detail
