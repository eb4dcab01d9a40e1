#pragma once

#include <cmath>

// Unit conversions at the CLI/config boundary. Everything internal is SI:
// rad/s, s, m, J, W. Loss coefficients are field-intensity 1/m.
namespace ringsq::units {

inline constexpr double c_light = 299792458.0;  // m/s
inline constexpr double two_pi = 6.283185307179586476925286766559;

inline double omega_from_wavelength_nm(double nm) {
  return two_pi * c_light / (nm * 1e-9);
}

inline double rad_s_from_ghz(double ghz) { return two_pi * ghz * 1e9; }
inline double rad_s_from_mhz(double mhz) { return two_pi * mhz * 1e6; }
inline double ghz_from_rad_s(double w) { return w / (two_pi * 1e9); }

inline double hz_from_ghz(double ghz) { return ghz * 1e9; }

// alpha[dB/m] = 10 log10(e) * alpha[1/m]
inline double alpha_per_m_from_db_per_m(double db_per_m) {
  return db_per_m * std::log(10.0) / 10.0;
}
inline double alpha_per_m_from_db_per_cm(double db_per_cm) {
  return alpha_per_m_from_db_per_m(db_per_cm * 100.0);
}
inline double db_per_m_from_alpha(double alpha) {
  return alpha * 10.0 / std::log(10.0);
}

inline double joule_from_pj(double pj) { return pj * 1e-12; }
inline double pj_from_joule(double j) { return j * 1e12; }

}  // namespace ringsq::units
