#include "ringsq/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <mutex>

namespace ringsq::kern {

namespace {

Isa detect_isa() {
  const char* force = std::getenv("RINGSQ_KERNELS");
  if (force != nullptr) {
    if (std::strcmp(force, "scalar") == 0) return Isa::scalar;
#if defined(__x86_64__) || defined(_M_X64)
    if (std::strcmp(force, "avx2") == 0 && detail::avx2_supported()) return Isa::avx2;
#endif
    return Isa::scalar;
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (detail::avx2_supported()) return Isa::avx2;
#endif
  return Isa::scalar;
}

Isa g_isa = Isa::scalar;
std::once_flag g_once;

Isa isa() {
  std::call_once(g_once, [] { g_isa = detect_isa(); });
  return g_isa;
}

}  // namespace

Isa active_isa() { return isa(); }

const char* isa_name(Isa i) { return i == Isa::avx2 ? "avx2" : "scalar"; }

void cgemm(int m, int n, int k, cplx alpha, const cplx* a, int lda, const cplx* b, int ldb,
           cplx beta, cplx* c, int ldc) {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa() == Isa::avx2) {
    detail::cgemm_avx2(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
    return;
  }
#endif
  detail::cgemm_scalar(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
}

void caxpy(size_t n, cplx a, const cplx* x, cplx* y) {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa() == Isa::avx2) {
    detail::caxpy_avx2(n, a, x, y);
    return;
  }
#endif
  detail::caxpy_scalar(n, a, x, y);
}

void cxpay(size_t n, const cplx* x, cplx a, const cplx* s, cplx* y) {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa() == Isa::avx2) {
    detail::cxpay_avx2(n, x, a, s, y);
    return;
  }
#endif
  detail::cxpay_scalar(n, x, a, s, y);
}

CMat matmul(const CMat& a, const CMat& b) {
  CMat c(a.rows(), b.cols());
  cgemm(a.rows(), b.cols(), a.cols(), cplx{1.0, 0.0}, a.data(), a.cols(), b.data(), b.cols(),
        cplx{}, c.data(), c.cols());
  return c;
}

CMat matmul_adjoint(const CMat& a, const CMat& b) {
  const CMat bh = b.adjoint();
  return matmul(a, bh);
}

}  // namespace ringsq::kern
