#pragma once

#include <Eigen/Dense>

#include "ringsq/cmat.hpp"

namespace ringsq::detail {

using EigCMat =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Eigen::Map<EigCMat> emap(CMat& m) {
  return Eigen::Map<EigCMat>(m.data(), m.rows(), m.cols());
}

inline Eigen::Map<const EigCMat> emap(const CMat& m) {
  return Eigen::Map<const EigCMat>(m.data(), m.rows(), m.cols());
}

inline CMat from_eigen(const EigCMat& e) {
  CMat m(int(e.rows()), int(e.cols()));
  emap(m) = e;
  return m;
}

}  // namespace ringsq::detail
