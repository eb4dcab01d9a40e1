#include "ringsq/config.hpp"

#include <cmath>

namespace ringsq {

const char* to_string(ModeLabel m) {
  switch (m) {
    case ModeLabel::pump: return "pump";
    case ModeLabel::signal: return "signal";
    case ModeLabel::idler: return "idler";
  }
  return "?";
}

const ModeParams& RingConfig::mode(ModeLabel m) const {
  switch (m) {
    case ModeLabel::pump: return pump;
    case ModeLabel::signal: return signal;
    case ModeLabel::idler: return idler;
  }
  throw std::logic_error("bad mode label");
}

ModeParams& RingConfig::mode(ModeLabel m) {
  return const_cast<ModeParams&>(static_cast<const RingConfig*>(this)->mode(m));
}

namespace {

void validate_mode(const ModeParams& m, const RingConfig& cfg) {
  const std::string name = to_string(m.label);
  if (!(m.resonance_freq > 0)) throw std::invalid_argument(name + ": resonance_freq must be > 0");
  if (!(m.group_velocity > 0)) throw std::invalid_argument(name + ": group_velocity must be > 0");
  if (!(m.coupling_rho > 0 && m.coupling_rho < 1))
    throw std::invalid_argument(name + ": coupling_rho must be in (0,1)");
  if (std::abs(m.coupling_tau * m.coupling_tau + m.coupling_rho * m.coupling_rho - 1.0) > 1e-12)
    throw std::invalid_argument(name + ": tau^2 + rho^2 must equal 1");
  if (m.alpha < 0) throw std::invalid_argument(name + ": alpha must be >= 0");
  const double t_expect = cfg.circumference / m.group_velocity;
  if (std::abs(m.round_trip_time - t_expect) > 1e-9 * t_expect)
    throw std::invalid_argument(name + ": round_trip_time must equal L / v");
}

}  // namespace

void RingConfig::validate() const {
  if (!(circumference > 0)) throw std::invalid_argument("circumference must be > 0");
  if (phantom_channels < 1) throw std::invalid_argument("phantom_channels must be >= 1");
  if (pump.label != ModeLabel::pump || signal.label != ModeLabel::signal ||
      idler.label != ModeLabel::idler)
    throw std::invalid_argument("mode labels out of order");
  validate_mode(pump, *this);
  validate_mode(signal, *this);
  validate_mode(idler, *this);
  const double dw = signal.center_freq + idler.center_freq - 2.0 * pump.center_freq;
  if (std::abs(freq_mismatch - dw) > 1e-6 * std::abs(pump.center_freq))
    throw std::invalid_argument("freq_mismatch must equal w_s + w_i - 2 w_p");
}

namespace {

ModeRates rates_for(const ModeParams& m, double length) {
  ModeRates r;
  const double t = m.round_trip_time;
  r.kappa_ex = m.coupling_rho * m.coupling_rho / (2.0 * t);
  r.kappa_in = m.alpha * length / (2.0 * t);
  r.kappa_tot = r.kappa_ex + r.kappa_in;
  r.eta_escape = r.kappa_tot > 0 ? r.kappa_ex / r.kappa_tot : 1.0;
  // Escape efficiency of the discrete model itself: the |S_si|^2/|C_si|^2
  // weight that falls on the bus rather than the phantom channel,
  // rho^2 gamma^2 / (rho^2 gamma^2 + kappa^2).
  const double g2 = std::exp(-m.alpha * length);  // gamma^2
  const double rho2 = m.coupling_rho * m.coupling_rho;
  r.eta_escape_exact = g2 == 1.0 ? 1.0 : rho2 * g2 / (rho2 * g2 + 1.0 - g2);
  return r;
}

}  // namespace

const ModeRates& DerivedRates::mode(ModeLabel m) const {
  switch (m) {
    case ModeLabel::pump: return pump;
    case ModeLabel::signal: return signal;
    case ModeLabel::idler: return idler;
  }
  throw std::logic_error("bad mode label");
}

DerivedRates derive_rates(const RingConfig& cfg) {
  DerivedRates d;
  d.pump = rates_for(cfg.pump, cfg.circumference);
  d.signal = rates_for(cfg.signal, cfg.circumference);
  d.idler = rates_for(cfg.idler, cfg.circumference);
  d.fsr_hz = 1.0 / cfg.signal.round_trip_time;
  d.fwhm_hz = d.signal.kappa_tot / M_PI;
  d.finesse = d.fsr_hz / d.fwhm_hz;
  return d;
}

double resonance_fwhm(const RingConfig& cfg) {
  return 2.0 * derive_rates(cfg).signal.kappa_tot;
}

FrequencyGrid build_grid(const RingConfig& cfg, int n_points, double span) {
  if (n_points < 3) throw std::invalid_argument("grid: n_points must be >= 3");
  if (n_points % 2 == 0) throw std::invalid_argument("grid: n_points must be odd");
  if (!(span > 0)) throw std::invalid_argument("grid: span must be > 0");
  FrequencyGrid g;
  g.n_points = n_points;
  g.spacing = span / static_cast<double>(n_points - 1);
  if (span < 2.0 * g.spacing) throw std::invalid_argument("grid: span smaller than 2 spacings");
  g.signal_center = cfg.signal.center_freq;
  g.idler_center = cfg.idler.center_freq;
  return g;
}

}  // namespace ringsq
