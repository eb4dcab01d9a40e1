#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ringsq/detail/eigen_map.hpp"
#include "ringsq/kernels.hpp"

using namespace ringsq;

namespace {

CMat random_mat(int rows, int cols, std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  CMat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = cplx{d(rng), d(rng)};
  return m;
}

double max_rel_diff(const CMat& a, const CMat& b) {
  double scale = std::max(a.max_abs(), b.max_abs());
  if (scale == 0.0) return 0.0;
  return (a - b).max_abs() / scale;
}

}  // namespace

TEST_CASE("scalar gemm matches Eigen") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> dim(1, 24);
    const int m = dim(rng), n = dim(rng), k = dim(rng);
    const CMat a = random_mat(m, k, rng), b = random_mat(k, n, rng);
    CMat c = random_mat(m, n, rng);
    CMat c_ref = c;
    const cplx alpha{0.7, -0.3}, beta{-0.2, 0.5};
    kern::detail::cgemm_scalar(m, n, k, alpha, a.data(), k, b.data(), n, beta, c.data(), n);
    detail::emap(c_ref) = alpha * detail::emap(a) * detail::emap(b) + beta * detail::emap(c_ref);
    CHECK(max_rel_diff(c, c_ref) < 1e-13);
  }
}

TEST_CASE("avx2 gemm is equivalent to the scalar reference") {
#if defined(__x86_64__)
  if (!kern::detail::avx2_supported()) {
    MESSAGE("avx2 not available; skipping");
    return;
  }
  std::mt19937 rng(11);
  // Edge sizes around the 4x4 micro tile plus production-like shapes.
  const int sizes[] = {1, 2, 3, 4, 5, 7, 8, 9, 16, 33, 67};
  for (int m : sizes)
    for (int n : {1, 3, 4, 5, 8, 66}) {
      const int k = (m * 7 + n) % 40 + 1;
      const CMat a = random_mat(m, k, rng), b = random_mat(k, n, rng);
      for (const cplx alpha : {cplx{1, 0}, cplx{0.3, -1.1}})
        for (const cplx beta : {cplx{0, 0}, cplx{1, 0}, cplx{-0.4, 0.2}}) {
          CMat c0 = random_mat(m, n, rng);
          CMat c1 = c0;
          kern::detail::cgemm_scalar(m, n, k, alpha, a.data(), k, b.data(), n, beta, c0.data(), n);
          kern::detail::cgemm_avx2(m, n, k, alpha, a.data(), k, b.data(), n, beta, c1.data(), n);
          CHECK(max_rel_diff(c0, c1) < 1e-13);
        }
    }
  // one production-size check
  const CMat a = random_mat(402, 402, rng), b = random_mat(402, 402, rng);
  CMat c0(402, 402), c1(402, 402);
  kern::detail::cgemm_scalar(402, 402, 402, cplx{1, 0}, a.data(), 402, b.data(), 402, cplx{},
                             c0.data(), 402);
  kern::detail::cgemm_avx2(402, 402, 402, cplx{1, 0}, a.data(), 402, b.data(), 402, cplx{},
                           c1.data(), 402);
  CHECK(max_rel_diff(c0, c1) < 1e-12);
#else
  MESSAGE("non-x86 build; dispatch always scalar");
#endif
}

TEST_CASE("vector combines match between variants") {
#if defined(__x86_64__)
  if (!kern::detail::avx2_supported()) return;
  std::mt19937 rng(3);
  for (size_t n : {size_t(1), size_t(2), size_t(5), size_t(1024), size_t(1025)}) {
    const CMat x = random_mat(1, int(n), rng);
    const CMat s = random_mat(1, int(n), rng);
    CMat y0 = random_mat(1, int(n), rng);
    CMat y1 = y0, o0(1, int(n)), o1(1, int(n));
    const cplx a{0.6, -0.8};
    kern::detail::caxpy_scalar(n, a, x.data(), y0.data());
    kern::detail::caxpy_avx2(n, a, x.data(), y1.data());
    CHECK(max_rel_diff(y0, y1) < 1e-14);
    kern::detail::cxpay_scalar(n, x.data(), a, s.data(), o0.data());
    kern::detail::cxpay_avx2(n, x.data(), a, s.data(), o1.data());
    CHECK(max_rel_diff(o0, o1) < 1e-14);
  }
#endif
}

TEST_CASE("matmul helpers") {
  std::mt19937 rng(5);
  const CMat a = random_mat(6, 6, rng);
  const CMat id = CMat::identity(6);
  CHECK(max_rel_diff(kern::matmul(a, id), a) == 0.0);
  const CMat aah = kern::matmul_adjoint(a, a);
  for (int r = 0; r < 6; ++r) {
    CHECK(aah(r, r).imag() == doctest::Approx(0.0).epsilon(1e-14));
    for (int c = 0; c < 6; ++c) {
      CHECK(aah(r, c).real() == doctest::Approx(std::conj(aah(c, r)).real()));
    }
  }
}

TEST_CASE("active isa reports something sane") {
  const auto isa = kern::active_isa();
  CHECK((isa == kern::Isa::scalar || isa == kern::Isa::avx2));
  MESSAGE("active kernel isa: ", kern::isa_name(isa));
}
