#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "rhet/types.hpp"

// Closed-form spectra of the linearised optomechanical model and the
// detection formulas built on them.
//
// Field convention: A(ν) = Σ a_n exp(-iνt_n). Spectra are
//   S_aa†(ν) = <|A(ν)|²>/N,  S_a†a(ν) = <|A(-ν)|²>/N,  S_aa(ν) = <A(ν)A(-ν)>/N,
// so a tone a ∝ exp(-iω_M t) shows up in S_a†a(+ω_M) and in the heterodyne
// current at Ω+ω_M. S_aa is even and S_a†a†(ν) = conj(S_aa(ν)).
// With these definitions
//   homodyne:   S(ω) = S_aa†(ω) + S_a†a(ω) + 2 Re[e^{-2iθ} S_aa(ω)]
//   heterodyne: S(ω) = S_aa†(ω+Ω) + S_a†a(ω-Ω)
// hold exactly for the sampled current i = X cos(Ωt+θ) + Y sin(Ωt+θ).
//
// Stokes scattering (weight n̄+1) lands in S_a†a(-ω_M), i.e. at Ω-ω_M in the
// heterodyne current; anti-Stokes (weight n̄) at Ω+ω_M.
namespace rhet::analytic {

// χ_m(ω) = 1 / (m (ω_M² - ω² - iΓω)), in m/N.
inline cplx mech_susceptibility(double omega, const MechMode& mode) {
  return 1.0 / (mode.mass * cplx(mode.omega_m * mode.omega_m - omega * omega, -mode.gamma * omega));
}

// χ_c(ω) = 1 / (κ - i(Δ + ω)).
inline cplx cavity_susceptibility(double omega, double kappa, double detuning) {
  return 1.0 / cplx(kappa, -(detuning + omega));
}

struct FieldSpectra {
  std::vector<double> freqs;
  std::vector<double> s_aadag;
  std::vector<double> s_adaga;
  std::vector<cplx> s_aa;

  std::size_t size() const { return freqs.size(); }
};

namespace detail {

// Mechanical response in zero-point units, 2 m ω_M χ_m(ω).
inline cplx scaled_mech(double w, const MechMode& m) {
  return 2.0 * m.omega_m / cplx(m.omega_m * m.omega_m - w * w, -m.gamma * w);
}

// Ohmic thermal force spectrum in zero-point units.
inline double thermal_force(double w, const MechMode& m) {
  const double weight = w >= 0 ? m.nbar + 1.0 : m.nbar;
  return m.gamma * std::abs(w) / m.omega_m * weight;
}

struct Responses {
  std::vector<cplx> alpha;  // per mode
  cplx beta;
  cplx gamma;
};

// Output field a_out(w) = Σ_k α_k f_k + β a_in + γ a_in† in the
// exp(+iwt) convention of the Langevin equations. Reuses r.alpha storage.
inline void responses(const ExperimentConfig& cfg, double w, Responses& r) {
  const cplx chic = cavity_susceptibility(w, cfg.kappa, cfg.detuning);
  const cplx chic_mirror = std::conj(cavity_susceptibility(-w, cfg.kappa, cfg.detuning));
  const double root2k = std::sqrt(2.0 * cfg.kappa);
  const double ba = std::sqrt(cfg.backaction_weight);
  r.beta = 2.0 * cfg.kappa * chic - 1.0;
  r.gamma = 0.0;
  r.alpha.resize(cfg.modes.size());
  const cplx I(0.0, 1.0);
  for (std::size_t k = 0; k < cfg.modes.size(); ++k) {
    const auto& m = cfg.modes[k];
    const cplx chim = scaled_mech(w, m);
    r.alpha[k] = I * m.coupling * root2k * chic * chim;
    const cplx loop = I * 2.0 * cfg.kappa * m.coupling * m.coupling * ba * chic * chim;
    r.beta += loop * chic;
    r.gamma += loop * chic_mirror;
  }
}

}  // namespace detail

struct FieldPoint {
  double s_aadag = 0.0;
  double s_adaga = 0.0;
  cplx s_aa = 0.0;
};

// Reusable scratch for field_point; one per thread.
struct FieldScratch {
  detail::Responses plus, minus;
};

// Model spectra at a single frequency ν (rad/s). The normally ordered
// spectrum comes from the model; S_aa† follows from the commutator and S_aa
// is symmetrised to its even part. No physicality check.
inline FieldPoint field_point(const ExperimentConfig& cfg, double nu, FieldScratch& scratch) {
  // Langevin frequency w = -ν.
  const double w = -nu;
  auto& rp = scratch.plus;
  auto& rm = scratch.minus;
  detail::responses(cfg, w, rp);
  detail::responses(cfg, -w, rm);
  double adaga_w = std::norm(rm.gamma);
  double adaga_mw = std::norm(rp.gamma);
  cplx aa_w = rp.beta * rm.gamma;
  cplx aa_mw = rm.beta * rp.gamma;
  for (std::size_t k = 0; k < cfg.modes.size(); ++k) {
    const auto& m = cfg.modes[k];
    const double sw = detail::thermal_force(w, m);
    const double smw = detail::thermal_force(-w, m);
    adaga_w += std::norm(rm.alpha[k]) * sw;
    adaga_mw += std::norm(rp.alpha[k]) * smw;
    aa_w += rp.alpha[k] * rm.alpha[k] * sw;
    aa_mw += rm.alpha[k] * rp.alpha[k] * smw;
  }
  FieldPoint p;
  p.s_adaga = cfg.shot_floor * adaga_w;
  p.s_aadag = cfg.shot_floor * (adaga_mw + 1.0);
  p.s_aa = cfg.shot_floor * 0.5 * (aa_w + aa_mw);
  return p;
}

inline bool physical(const FieldPoint& p) {
  return std::norm(p.s_aa) <= p.s_aadag * p.s_adaga * (1.0 + 1e-9) + 1e-300;
}

inline std::string physicality_message(double nu, const FieldPoint& p) {
  std::ostringstream os;
  os << "physicality violated at " << rad_to_hz(nu) << " Hz: |S_aa|^2=" << std::norm(p.s_aa)
     << " > S_aa+ * S_a+a=" << p.s_aadag * p.s_adaga;
  return os.str();
}

// Field spectra of the cavity output on the given grid (rad/s). Throws
// Physicality naming the first frequency where |S_aa|^2 > S_aa+ * S_a+a.
inline FieldSpectra field_spectra(const ExperimentConfig& cfg, const std::vector<double>& freqs) {
  require_valid(cfg);
  FieldSpectra fs;
  fs.freqs = freqs;
  const std::size_t n = freqs.size();
  fs.s_aadag.resize(n);
  fs.s_adaga.resize(n);
  fs.s_aa.resize(n);
  FieldScratch scratch;
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = field_point(cfg, freqs[i], scratch);
    if (!physical(p)) throw Error(ErrorKind::Physicality, physicality_message(freqs[i], p));
    fs.s_aadag[i] = p.s_aadag;
    fs.s_adaga[i] = p.s_adaga;
    fs.s_aa[i] = p.s_aa;
  }
  return fs;
}

inline Spectrum homodyne_psd(const FieldSpectra& fs, double theta) {
  Spectrum s;
  s.freqs = fs.freqs;
  s.values.resize(fs.size());
  const cplx rot = std::polar(1.0, -2.0 * theta);
  for (std::size_t i = 0; i < fs.size(); ++i)
    s.values[i] = fs.s_aadag[i] + fs.s_adaga[i] + 2.0 * std::real(rot * fs.s_aa[i]);
  s.meta.variant = "analytic-homodyne";
  s.meta.theta = theta;
  return s;
}

namespace detail {

// Number of grid steps equal to omega; throws if the grid cannot represent it.
inline std::size_t shift_steps(const std::vector<double>& freqs, double omega) {
  if (freqs.size() < 2) throw Error(ErrorKind::Grid, "grid too small");
  const double step = freqs[1] - freqs[0];
  const double q = omega / step;
  const double qr = std::round(q);
  if (std::abs(q - qr) > 1e-6) throw Error(ErrorKind::Grid, "beat frequency is not a multiple of the grid step");
  const auto steps = static_cast<std::size_t>(qr);
  if (2 * steps >= freqs.size()) throw Error(ErrorKind::Grid, "grid does not cover the beat-shifted frequencies");
  return steps;
}

}  // namespace detail

// Heterodyne PSD on the inner part of the grid where ω±Ω is covered.
inline Spectrum heterodyne_psd(const FieldSpectra& fs, double omega_beat) {
  const std::size_t q = detail::shift_steps(fs.freqs, omega_beat);
  Spectrum s;
  for (std::size_t i = q; i + q < fs.size(); ++i) {
    s.freqs.push_back(fs.freqs[i]);
    s.values.push_back(fs.s_aadag[i + q] + fs.s_adaga[i - q]);
  }
  s.meta.variant = "analytic-heterodyne";
  return s;
}

// Normalised Fourier coefficient of F_ε at harmonic 2kΩ, as it multiplies
// exp(±2ikΩt): c0 = (1+ε)/2, c_k = (1-ε) sin(kπ/2)/(kπ).
inline double filter_coefficient(double epsilon, int k) {
  if (k < 0) throw Error(ErrorKind::Config, "harmonic index must be >= 0");
  if (k == 0) return 0.5 * (1.0 + epsilon);
  const double s = (k % 2 == 0) ? 0.0 : ((k % 4 == 1) ? 1.0 : -1.0);
  return (1.0 - epsilon) * s / (kPi * k);
}

// Mean of |F_ε| over one period; the gain used to compare filtered peaks
// against plain heterodyne ones.
inline double filter_gain(double epsilon) { return 0.5 * (1.0 + std::abs(epsilon)); }

// Expected filtered spectrum. Only the fundamental contributes in
// expectation: stationary fields carry no exp(±4iΩt) or higher terms.
inline Spectrum rhet_prediction(const FieldSpectra& fs, double omega_beat, double theta, double epsilon,
                                Variant variant) {
  const std::size_t q = detail::shift_steps(fs.freqs, omega_beat);
  const double c0 = filter_coefficient(epsilon, 0);
  const double c1 = filter_coefficient(epsilon, 1);
  const cplx rot = std::polar(1.0, -2.0 * theta);
  Spectrum s;
  for (std::size_t i = q; i + q < fs.size(); ++i) {
    const double het = fs.s_aadag[i + q] + fs.s_adaga[i - q];
    double corr;
    if (variant == Variant::TBar)
      corr = 2.0 * std::real(rot * fs.s_aa[i]);
    else
      corr = std::real(rot * (fs.s_aa[i - q] + fs.s_aa[i + q]));
    s.freqs.push_back(fs.freqs[i]);
    s.values.push_back(c0 * het + c1 * corr);
  }
  s.meta.variant = std::string("analytic-") + to_string(variant);
  s.meta.epsilon = epsilon;
  s.meta.theta = theta;
  return s;
}

namespace detail {

inline std::vector<double> shifted(const std::vector<double>& f, double by) {
  std::vector<double> out(f);
  for (auto& x : out) x += by;
  return out;
}

}  // namespace detail

// Grid-free heterodyne PSD: evaluates the model directly at ω±Ω.
inline Spectrum heterodyne_psd(const ExperimentConfig& cfg, const std::vector<double>& freqs) {
  const auto up = field_spectra(cfg, detail::shifted(freqs, cfg.omega_beat));
  const auto dn = field_spectra(cfg, detail::shifted(freqs, -cfg.omega_beat));
  Spectrum s;
  s.freqs = freqs;
  s.values.resize(freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i) s.values[i] = up.s_aadag[i] + dn.s_adaga[i];
  s.meta.variant = "analytic-heterodyne";
  return s;
}

inline Spectrum homodyne_psd(const ExperimentConfig& cfg, const std::vector<double>& freqs, double theta) {
  return homodyne_psd(field_spectra(cfg, freqs), theta);
}

// Grid-free filtered-spectrum prediction on an arbitrary grid.
inline Spectrum rhet_prediction(const ExperimentConfig& cfg, const std::vector<double>& freqs, double theta,
                                double epsilon, Variant variant) {
  const auto mid = field_spectra(cfg, freqs);
  const auto up = field_spectra(cfg, detail::shifted(freqs, cfg.omega_beat));
  const auto dn = field_spectra(cfg, detail::shifted(freqs, -cfg.omega_beat));
  const double c0 = filter_coefficient(epsilon, 0);
  const double c1 = filter_coefficient(epsilon, 1);
  const cplx rot = std::polar(1.0, -2.0 * theta);
  Spectrum s;
  s.freqs = freqs;
  s.values.resize(freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    const double het = up.s_aadag[i] + dn.s_adaga[i];
    const double corr = variant == Variant::TBar ? 2.0 * std::real(rot * mid.s_aa[i])
                                                 : std::real(rot * (dn.s_aa[i] + up.s_aa[i]));
    s.values[i] = c0 * het + c1 * corr;
  }
  s.meta.variant = std::string("analytic-") + to_string(variant);
  s.meta.epsilon = epsilon;
  s.meta.theta = theta;
  return s;
}

// Uniform grid covering every sideband (and its beat-shifted copies) with at
// least `bins_per_gamma` bins per narrowest linewidth; the step divides Ω so
// FieldSpectra-based heterodyne/rhet evaluation works on it.
inline std::vector<double> analytic_grid(const ExperimentConfig& cfg, int bins_per_gamma = 20) {
  double gmin = 0, wmax = 0, gmax = 0;
  for (const auto& m : cfg.modes) {
    gmin = gmin == 0 ? m.gamma : std::min(gmin, m.gamma);
    gmax = std::max(gmax, m.gamma);
    wmax = std::max(wmax, m.omega_m);
  }
  if (gmin <= 0) throw Error(ErrorKind::Config, "analytic grid needs at least one mode");
  double step = gmin / bins_per_gamma;
  if (cfg.omega_beat > 0) step = cfg.omega_beat / std::ceil(cfg.omega_beat / step);
  const double span = wmax + 2.0 * cfg.omega_beat + 20.0 * gmax;
  const auto half = static_cast<long>(std::ceil(span / step));
  std::vector<double> f;
  f.reserve(static_cast<std::size_t>(2 * half + 1));
  for (long k = -half; k <= half; ++k) f.push_back(step * static_cast<double>(k));
  return f;
}

struct SignCalibration {
  int theta_sense = +1;  // estimator quadrature θ_eff = θ_trace + theta_sense·θ_sel
  int corr_sign = +1;    // sign of the correlation term relative to 2Re[e^{-2iθ}S_aa]
};

// Convention fixed by sign_convention_calibration(); documented constant.
inline constexpr SignCalibration kSignCalibration{+1, +1};

struct TwoToneResponse {
  double theta_max;  // filter θ of maximum response at ω_M
  double peak;       // response at theta_max
};

// Brute-force ε=-1 t̄ response of a two-tone field a = e^{-iω_M t + iφ1} +
// e^{+iω_M t + iφ2}, projected on cos(ω_M τ), scanned over filter θ. Uses the
// literal square-wave filter and the literal double sum.
inline TwoToneResponse two_tone_response(double phi1, double phi2, int n_theta = 360) {
  const std::size_t n = 4000;
  const double dt = 1.0;
  const double wb = kTwoPi * 0.1037;
  const double wm = kTwoPi * 0.2781;
  const std::size_t lags = 24;
  std::vector<double> cur(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = dt * static_cast<double>(j);
    const cplx a = std::polar(1.0, -wm * t + phi1) + std::polar(1.0, wm * t + phi2);
    const cplx rot = std::polar(1.0, -wb * t);
    cur[j] = 2.0 * std::real(a * rot);
  }
  TwoToneResponse best{0.0, -1e300};
  for (int k = 0; k < n_theta; ++k) {
    const double theta = kPi * k / n_theta;
    double resp = 0.0;
    for (std::size_t m = 0; m < lags; ++m) {
      double acc = 0.0;
      for (std::size_t j = 0; j + m < n; ++j) {
        const double tbar = dt * (static_cast<double>(j) + 0.5 * static_cast<double>(m));
        const double ph = wrap_pi(2.0 * wb * tbar - 2.0 * theta);
        const double f = std::abs(ph) <= 0.5 * kPi ? 1.0 : -1.0;
        acc += f * cur[j] * cur[j + m];
      }
      resp += (m == 0 ? 1.0 : 2.0) * acc / static_cast<double>(n) * std::cos(wm * dt * static_cast<double>(m));
    }
    if (resp > best.peak) best = {theta, resp};
  }
  return best;
}

// Runs the two-tone oracle and fixes the sign/sense convention relating the
// estimator's filter θ to the e^{-2iθ} factor of the predictions. The
// two-tone field's S_aa has phase φ1+φ2, so the prediction peaks at
// θ = (φ1+φ2)/2 (mod π).
inline SignCalibration sign_convention_calibration() {
  const double phi1 = 0.9, phi2 = 0.5;
  const auto r = two_tone_response(phi1, phi2);
  const double predicted = 0.5 * (phi1 + phi2);
  auto dist = [](double a, double b) { return std::abs(wrap_pi(2.0 * (a - b))) / 2.0; };
  SignCalibration cal;
  const double d_plus = dist(r.theta_max, predicted);
  const double d_minus = dist(r.theta_max, -predicted);
  cal.theta_sense = d_plus <= d_minus ? +1 : -1;
  cal.corr_sign = r.peak > 0 ? +1 : -1;
  const double tol = kPi / 90.0;
  if (std::min(d_plus, d_minus) > tol)
    throw Error(ErrorKind::Config, "sign calibration mismatch: oracle maximum does not match prediction");
  if (cal.theta_sense != kSignCalibration.theta_sense || cal.corr_sign != kSignCalibration.corr_sign)
    throw Error(ErrorKind::Config, "sign calibration disagrees with the documented convention");
  return cal;
}

}  // namespace rhet::analytic
