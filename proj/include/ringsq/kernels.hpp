#pragma once

#include <complex>

#include "ringsq/cmat.hpp"

// Data-parallel inner loops of the engine: dense complex double GEMM and the
// vector combines used by the RK4 propagator. Two implementations exist, a
// scalar reference and an AVX2+FMA variant; the active one is chosen at
// runtime from CPUID and can be forced with RINGSQ_KERNELS=scalar|avx2.
// The two are equivalence-tested against each other in tests/test_kernels.
namespace ringsq::kern {

enum class Isa { scalar, avx2 };

Isa active_isa();
const char* isa_name(Isa isa);

// C = alpha * A * B + beta * C. Row-major, leading dimensions in elements.
void cgemm(int m, int n, int k, cplx alpha, const cplx* a, int lda, const cplx* b, int ldb,
           cplx beta, cplx* c, int ldc);

// y = a*x + y
void caxpy(size_t n, cplx a, const cplx* x, cplx* y);

// y = x + a*s  (RK4 stage input: state plus scaled slope)
void cxpay(size_t n, const cplx* x, cplx a, const cplx* s, cplx* y);

// Matrix helpers on CMat built on the above.
CMat matmul(const CMat& a, const CMat& b);
CMat matmul_adjoint(const CMat& a, const CMat& b);  // a * b^dagger

namespace detail {
// Raw variant entry points, used by the dispatch table and the tests.
void cgemm_scalar(int m, int n, int k, cplx alpha, const cplx* a, int lda, const cplx* b,
                  int ldb, cplx beta, cplx* c, int ldc);
void caxpy_scalar(size_t n, cplx a, const cplx* x, cplx* y);
void cxpay_scalar(size_t n, const cplx* x, cplx a, const cplx* s, cplx* y);
#if defined(__x86_64__) || defined(_M_X64)
void cgemm_avx2(int m, int n, int k, cplx alpha, const cplx* a, int lda, const cplx* b, int ldb,
                cplx beta, cplx* c, int ldc);
void caxpy_avx2(size_t n, cplx a, const cplx* x, cplx* y);
void cxpay_avx2(size_t n, const cplx* x, cplx a, const cplx* s, cplx* y);
bool avx2_supported();
#endif
}  // namespace detail

}  // namespace ringsq::kern
