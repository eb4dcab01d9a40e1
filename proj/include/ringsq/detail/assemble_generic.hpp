#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ringsq/config.hpp"
#include "ringsq/pair_solver.hpp"
#include "ringsq/pump.hpp"
#include "ringsq/units.hpp"

// Scalar-generic mirror of the propagation/assembly chain. Instantiated with
// long double it evaluates the same algorithm past the fp64 floor, which the
// symplectic checks need once ||S|| reaches the photon numbers of the
// undamped SFWM scenario. Plain loops throughout; equivalence against the
// production path is asserted in the unit tests.
namespace ringsq::detail {

template <typename T>
struct GMat {
  int n = 0;
  std::vector<std::complex<T>> v;
  explicit GMat(int dim = 0) : n(dim), v(size_t(dim) * dim) {}
  std::complex<T>& operator()(int r, int c) { return v[size_t(r) * n + c]; }
  const std::complex<T>& operator()(int r, int c) const { return v[size_t(r) * n + c]; }
  static GMat identity(int dim) {
    GMat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = T(1);
    return m;
  }
};

template <typename T>
GMat<T> gmul(const GMat<T>& a, const GMat<T>& b) {
  const int n = a.n;
  GMat<T> c(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const std::complex<T> av = a(i, k);
      if (av == std::complex<T>{}) continue;
      const std::complex<T>* brow = &b.v[size_t(k) * n];
      std::complex<T>* crow = &c.v[size_t(i) * n];
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

template <typename T>
GMat<T> generator_generic(const PumpKernels& kernels, const RingConfig& cfg,
                          const FrequencyGrid& grid, double z) {
  const int n = grid.n_points;
  const double dw = grid.spacing;
  const double inv_vp = 1.0 / cfg.pump.group_velocity;
  const double walk_s = 1.0 / cfg.signal.group_velocity - inv_vp;
  const double walk_i = 1.0 / cfg.idler.group_velocity - inv_vp;
  const double mu = cfg.phase_mismatch - cfg.freq_mismatch * inv_vp;
  const std::complex<T> fphase = std::polar(T(1), T(-mu * z));
  const std::complex<T> im{T(0), T(1)};
  GMat<T> gen(2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const cplx e64 = kernels.autocorr.eval((r - c) * dw);
      const cplx b64 =
          kernels.effective_pump.eval((r + c - (n - 1)) * dw + cfg.freq_mismatch);
      const std::complex<T> e{T(e64.real()), T(e64.imag())};
      const std::complex<T> b{T(b64.real()), T(b64.imag())};
      std::complex<T> g = T(2.0 * cfg.signal.gamma_xpm / units::two_pi * dw) * e;
      std::complex<T> h = T(2.0 * cfg.idler.gamma_xpm / units::two_pi * dw) * std::conj(e);
      if (r == c) {
        g += T(grid.offset(r) * walk_s);
        h += T(grid.offset(r) * walk_i);
      }
      const std::complex<T> f = T(cfg.gamma_sfwm / units::two_pi * dw) * b * fphase;
      gen(r, c) = im * g;
      gen(r, n + c) = im * f;
      gen(n + r, c) = -im * std::conj(f);
      gen(n + r, n + c) = -im * h;
    }
  }
  return gen;
}

template <typename T>
GMat<T> integrate_generic(const PumpKernels& kernels, const RingConfig& cfg,
                          const FrequencyGrid& grid, double segment_length, double z0,
                          int z_steps) {
  const int n2 = 2 * grid.n_points;
  GMat<T> a = GMat<T>::identity(n2);
  const bool z_const = (cfg.phase_mismatch - cfg.freq_mismatch / cfg.pump.group_velocity) == 0.0;
  GMat<T> gen = generator_generic<T>(kernels, cfg, grid, z0);
  const T h = T(segment_length) / T(z_steps);
  auto stage_mat = [&](const GMat<T>& base, T w, const GMat<T>& slope) {
    GMat<T> out(n2);
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] = base.v[i] + w * slope.v[i];
    return out;
  };
  for (int s = 0; s < z_steps; ++s) {
    const double z = z0 + double(s) * segment_length / z_steps;
    if (!z_const) gen = generator_generic<T>(kernels, cfg, grid, z);
    const GMat<T> k1 = gmul(gen, a);
    if (!z_const) gen = generator_generic<T>(kernels, cfg, grid, z + 0.5 * segment_length / z_steps);
    const GMat<T> k2 = gmul(gen, stage_mat(a, h / T(2), k1));
    const GMat<T> k3 = gmul(gen, stage_mat(a, h / T(2), k2));
    if (!z_const) gen = generator_generic<T>(kernels, cfg, grid, z + segment_length / z_steps);
    const GMat<T> k4 = gmul(gen, stage_mat(a, h, k3));
    for (size_t i = 0; i < a.v.size(); ++i)
      a.v[i] += h / T(6) * (k1.v[i] + T(2) * k2.v[i] + T(2) * k3.v[i] + k4.v[i]);
  }
  return a;
}

template <typename T>
struct GBounds {
  std::vector<std::complex<T>> t, r, gamma_seg, kappa_seg, e_seg;
};

template <typename T>
GBounds<T> boundaries_generic(const RingConfig& cfg, const FrequencyGrid& grid, int channels) {
  const int n = grid.n_points;
  GBounds<T> b;
  b.t.resize(2 * n);
  b.r.resize(2 * n);
  b.gamma_seg.resize(2 * n);
  b.kappa_seg.resize(2 * n);
  b.e_seg.resize(2 * n);
  const std::complex<T> im{T(0), T(1)};
  for (int half = 0; half < 2; ++half) {
    const ModeParams& m = half == 0 ? cfg.signal : cfg.idler;
    const T conj_sign = half == 0 ? T(1) : T(-1);
    const T g_seg = std::exp(T(-m.alpha * cfg.circumference) / T(2 * channels));
    const T k_seg = std::sqrt(std::max(T(0), T(1) - g_seg * g_seg));
    const T tau = std::sqrt(T(1) - T(m.coupling_rho) * T(m.coupling_rho));
    for (int k = 0; k < n; ++k) {
      const int idx = half * n + k;
      const double w = half == 0 ? grid.signal_freq(k) : grid.idler_freq(k);
      const T phase = T((m.center_freq - m.resonance_freq) * m.round_trip_time +
                        (w - m.center_freq) * cfg.pump.round_trip_time);
      b.t[idx] = tau;
      b.r[idx] = conj_sign * im * T(m.coupling_rho);
      b.gamma_seg[idx] = g_seg;
      b.kappa_seg[idx] = conj_sign * im * k_seg;
      b.e_seg[idx] = std::polar(T(1), conj_sign * phase / T(channels));
    }
  }
  return b;
}

// Full (1+M)2N-port S via the segment composition, then the max-abs
// symplectic defect, all in scalar type T.
template <typename T>
double symplectic_defect_generic(const PumpKernels& kernels, const RingConfig& cfg,
                                 const FrequencyGrid& grid, int channels, int z_steps) {
  using Mat = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const int n = grid.n_points;
  const int n2 = 2 * n;
  const double seg_len = cfg.circumference / channels;
  const bool z_const = (cfg.phase_mismatch - cfg.freq_mismatch / cfg.pump.group_velocity) == 0.0;

  const GBounds<T> b = boundaries_generic<T>(cfg, grid, channels);
  std::vector<GMat<T>> w(channels);
  for (int l = 0; l < channels; ++l) {
    if (l > 0 && z_const) {
      w[l] = w[0];
      continue;
    }
    w[l] = integrate_generic<T>(kernels, cfg, grid, seg_len, l * seg_len, z_steps);
    for (int r = 0; r < n2; ++r) {
      const std::complex<T> scale = b.gamma_seg[r] * b.e_seg[r];
      for (int c = 0; c < n2; ++c) w[l](r, c) *= scale;
    }
  }
  std::vector<GMat<T>> prefix(channels), suffix(channels);
  prefix[0] = w[0];
  for (int l = 1; l < channels; ++l) prefix[l] = gmul(w[l], prefix[l - 1]);
  suffix[channels - 1] = GMat<T>::identity(n2);
  for (int j = channels - 2; j >= 0; --j) suffix[j] = gmul(suffix[j + 1], w[j + 1]);

  Mat q(n2, n2);
  for (int r = 0; r < n2; ++r)
    for (int c = 0; c < n2; ++c)
      q(r, c) = (r == c ? std::complex<T>{T(1)} : std::complex<T>{}) -
                b.t[r] * prefix[channels - 1](r, c);
  const Mat qinv = Eigen::PartialPivLU<Mat>(q).inverse();

  auto to_mat = [&](const GMat<T>& g) {
    Mat m(n2, n2);
    for (int r = 0; r < n2; ++r)
      for (int c = 0; c < n2; ++c) m(r, c) = g(r, c);
    return m;
  };
  const Mat vm = to_mat(prefix[channels - 1]);
  const Mat x = vm * qinv;

  const int np = (1 + channels) * n2;
  Mat s = Mat::Zero(np, np);
  // S^aa
  for (int r = 0; r < n2; ++r)
    for (int c = 0; c < n2; ++c)
      s(r, c) = b.r[r] * x(r, c) * b.r[c] + (r == c ? b.t[r] : std::complex<T>{});
  // S^af,(j) = R (X T + I) suffix_j K
  Mat y = x;
  for (int r = 0; r < n2; ++r) {
    for (int c = 0; c < n2; ++c) y(r, c) *= b.t[c];
    y(r, r) += T(1);
  }
  for (int j = 0; j < channels; ++j) {
    const Mat blk = y * to_mat(suffix[j]);
    for (int r = 0; r < n2; ++r)
      for (int c = 0; c < n2; ++c)
        s(r, (1 + j) * n2 + c) = b.r[r] * blk(r, c) * b.kappa_seg[c];
  }
  // S^fa,(l) and S^ff,(l,j)
  for (int l = 0; l < channels; ++l) {
    const Mat pl = to_mat(prefix[l]) * qinv;
    for (int r = 0; r < n2; ++r)
      for (int c = 0; c < n2; ++c)
        s((1 + l) * n2 + r, c) =
            b.kappa_seg[r] / b.gamma_seg[r] * pl(r, c) * b.r[c];
    Mat plt = pl;
    for (int r = 0; r < n2; ++r)
      for (int c = 0; c < n2; ++c) plt(r, c) *= b.t[c];
    for (int j = 0; j < channels; ++j) {
      Mat blk = plt * to_mat(suffix[j]);
      if (j <= l) {
        GMat<T> su = GMat<T>::identity(n2);
        for (int q2 = l; q2 > j; --q2) su = gmul(su, w[q2]);
        for (int r = 0; r < n2; ++r)
          for (int c = 0; c < n2; ++c) blk(r, c) += su(r, c);
      }
      for (int r = 0; r < n2; ++r)
        for (int c = 0; c < n2; ++c) {
          std::complex<T> v = b.kappa_seg[r] / b.gamma_seg[r] * blk(r, c) * b.kappa_seg[c];
          if (l == j && r == c) v += T(1) / b.gamma_seg[r];
          s((1 + l) * n2 + r, (1 + j) * n2 + c) = v;
        }
    }
  }

  // max |S J S^H - J|
  double worst = 0.0;
  for (int r = 0; r < np; ++r) {
    for (int c = 0; c <= r; ++c) {
      std::complex<T> acc{};
      for (int k = 0; k < np; ++k) {
        const T sign = (k % n2) < n ? T(1) : T(-1);
        acc += sign * s(r, k) * std::conj(s(c, k));
      }
      if (r == c) acc -= (r % n2) < n ? T(1) : T(-1);
      worst = std::max(worst, double(std::abs(acc)));
    }
  }
  return worst;
}

}  // namespace ringsq::detail
