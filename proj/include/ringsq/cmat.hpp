#pragma once

#include <cassert>
#include <complex>
#include <vector>

namespace ringsq {

using cplx = std::complex<double>;
inline constexpr cplx iu{0.0, 1.0};

// Dense row-major complex matrix. The heavy products go through the kernel
// layer (ringsq/kernels.hpp); factorizations are done by mapping the storage
// into Eigen where needed.
class CMat {
 public:
  CMat() = default;
  CMat(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols) {}

  static CMat identity(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }

  cplx& operator()(int r, int c) { return data_[size_t(r) * cols_ + c]; }
  const cplx& operator()(int r, int c) const { return data_[size_t(r) * cols_ + c]; }

  void set_zero() { std::fill(data_.begin(), data_.end(), cplx{}); }

  CMat adjoint() const {
    CMat a(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) a(c, r) = std::conj((*this)(r, c));
    return a;
  }

  CMat transpose() const {
    CMat t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  CMat conjugate() const {
    CMat t(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) t.data_[i] = std::conj(data_[i]);
    return t;
  }

  CMat block(int r0, int c0, int nr, int nc) const {
    assert(r0 + nr <= rows_ && c0 + nc <= cols_);
    CMat b(nr, nc);
    for (int r = 0; r < nr; ++r)
      for (int c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
  }

  void set_block(int r0, int c0, const CMat& b) {
    assert(r0 + b.rows() <= rows_ && c0 + b.cols() <= cols_);
    for (int r = 0; r < b.rows(); ++r)
      for (int c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
  }

  // Diagonal scaling, d applied entrywise by row / by column.
  void scale_rows(const std::vector<cplx>& d) {
    assert(int(d.size()) == rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) (*this)(r, c) *= d[r];
  }
  void scale_cols(const std::vector<cplx>& d) {
    assert(int(d.size()) == cols_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) (*this)(r, c) *= d[c];
  }

  CMat operator+(const CMat& o) const {
    CMat s = *this;
    for (size_t i = 0; i < data_.size(); ++i) s.data_[i] += o.data_[i];
    return s;
  }
  CMat operator-(const CMat& o) const {
    CMat s = *this;
    for (size_t i = 0; i < data_.size(); ++i) s.data_[i] -= o.data_[i];
    return s;
  }
  CMat& operator+=(const CMat& o) {
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  CMat& operator*=(cplx a) {
    for (auto& v : data_) v *= a;
    return *this;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }
  double frob_norm() const {
    double s = 0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<cplx> data_;
};

}  // namespace ringsq
