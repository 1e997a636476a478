#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rhet/estimator.hpp"
#include "rhet/types.hpp"

// Numerical lock-in on the beat note: z = i·exp(-iΩt), averaged over one
// beat period (removes the 2Ω image), low-passed by a zero-phase
// (forward-backward) 2nd-order Butterworth, decimated to ~8× the bandwidth,
// arg(z) unwrapped. A coherent carrier α at the field level gives
// z -> α·exp(iθ(t)).
namespace rhet::lockin {

inline constexpr double kSnrThreshold = 10.0;

struct LockinOptions {
  double bandwidth_hz = 200.0;
  double snr_threshold = kSnrThreshold;
  double decimate_factor = 8.0;  // output rate / bandwidth
};

namespace detail {

struct Biquad {
  double b0, b1, b2, a1, a2;
};

inline Biquad butterworth_lowpass(double fc, double fs) {
  const double k = std::tan(kPi * fc / fs);
  const double norm = 1.0 / (1.0 + std::sqrt(2.0) * k + k * k);
  Biquad q;
  q.b0 = k * k * norm;
  q.b1 = 2.0 * q.b0;
  q.b2 = q.b0;
  q.a1 = 2.0 * (k * k - 1.0) * norm;
  q.a2 = (1.0 - std::sqrt(2.0) * k + k * k) * norm;
  return q;
}

// Transposed direct form II, started in steady state for the level `x0`.
inline void run(const Biquad& q, std::vector<cplx>& x, cplx x0) {
  cplx z2 = (q.b2 - q.a2) * x0;
  cplx z1 = (q.b1 - q.a1) * x0 + z2;
  for (auto& v : x) {
    const cplx in = v;
    const cplx y = q.b0 * in + z1;
    z1 = q.b1 * in - q.a1 * y + z2;
    z2 = q.b2 * in - q.a2 * y;
    v = y;
  }
}

// Moving average over one beat period, which cancels the 2Ω image of the
// demodulated carrier. Edge samples hold the nearest full-window value.
inline std::vector<cplx> beat_boxcar(const std::vector<cplx>& z, std::size_t period) {
  const std::size_t n = z.size();
  if (period < 2 || period >= n) return z;
  std::vector<cplx> out(n);
  cplx acc = 0.0;
  for (std::size_t k = 0; k < period; ++k) acc += z[k];
  const std::size_t half = period / 2;
  const double inv = 1.0 / static_cast<double>(period);
  for (std::size_t start = 0; start + period <= n; ++start) {
    out[start + half] = acc * inv;
    if (start + period < n) acc += z[start + period] - z[start];
  }
  for (std::size_t k = 0; k < half; ++k) out[k] = out[half];
  const std::size_t last = n - period + half;
  for (std::size_t k = last + 1; k < n; ++k) out[k] = out[last];
  return out;
}

// Zero-phase filtering with odd reflection padding at both ends; each pass
// starts in steady state at its first sample.
inline std::vector<cplx> filtfilt(const Biquad& q, const std::vector<cplx>& x, std::size_t pad) {
  const std::size_t n = x.size();
  pad = std::min(pad, n - 1);
  std::vector<cplx> ext(n + 2 * pad);
  for (std::size_t k = 0; k < pad; ++k) ext[k] = 2.0 * x.front() - x[pad - k];
  std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));
  for (std::size_t k = 0; k < pad; ++k) ext[pad + n + k] = 2.0 * x.back() - x[n - 2 - k];
  run(q, ext, ext.front());
  std::reverse(ext.begin(), ext.end());
  run(q, ext, ext.front());
  std::reverse(ext.begin(), ext.end());
  return std::vector<cplx>(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                           ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

}  // namespace detail

struct Demodulated {
  PhaseSeries phase;
  std::vector<cplx> baseband;  // decimated low-passed z
  double snr = 0.0;            // mean(|z|)² / var(|z|)
};

inline Demodulated demodulate_full(const TimeTrace& tr, double omega_beat, const LockinOptions& o = {}) {
  tr.validate();
  const double fs = 1.0 / tr.dt;
  if (!(o.bandwidth_hz > 0)) throw Error(ErrorKind::Usage, "lock-in bandwidth must be positive");
  if (!(o.bandwidth_hz < rad_to_hz(omega_beat) / 2.0))
    throw Error(ErrorKind::Usage, "lock-in bandwidth must be below half the beat frequency");
  const std::size_t n = tr.size();
  std::vector<cplx> z(n);
  for (std::size_t k = 0; k < n; ++k)
    z[k] = tr.samples[k] * std::polar(1.0, -omega_beat * tr.dt * static_cast<double>(k));
  const auto q = detail::butterworth_lowpass(o.bandwidth_hz, fs);
  const auto pad = static_cast<std::size_t>(std::ceil(20.0 * fs / (kTwoPi * o.bandwidth_hz)));
  const auto period = static_cast<std::size_t>(std::llround(kTwoPi / (omega_beat * tr.dt)));
  const auto lp = detail::filtfilt(q, detail::beat_boxcar(z, period), pad);
  const auto step = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(fs / (o.decimate_factor * o.bandwidth_hz))));

  Demodulated d;
  for (std::size_t k = 0; k < n; k += step) {
    d.baseband.push_back(lp[k]);
    d.phase.times.push_back(tr.dt * static_cast<double>(k));
  }
  double mean = 0.0, sq = 0.0;
  for (const auto& v : d.baseband) mean += std::abs(v);
  mean /= static_cast<double>(d.baseband.size());
  for (const auto& v : d.baseband) sq += (std::abs(v) - mean) * (std::abs(v) - mean);
  const double var = d.baseband.size() > 1 ? sq / static_cast<double>(d.baseband.size() - 1) : 0.0;
  d.snr = var > 0 ? mean * mean / var : std::numeric_limits<double>::infinity();
  if (!(d.snr >= o.snr_threshold) || mean == 0.0) throw Error(ErrorKind::Signal, "beat note not detected");

  d.phase.theta.resize(d.baseband.size());
  double prev = 0.0;
  for (std::size_t k = 0; k < d.baseband.size(); ++k) {
    double a = std::arg(d.baseband[k]);
    if (k > 0) a = prev + wrap_pi(a - prev);
    d.phase.theta[k] = a;
    prev = a;
  }
  return d;
}

// Recovered LO phase θ(t).
inline PhaseSeries demodulate(const TimeTrace& tr, double omega_beat, double bandwidth_hz = 200.0) {
  LockinOptions o;
  o.bandwidth_hz = bandwidth_hz;
  return demodulate_full(tr, omega_beat, o).phase;
}

// δθ(t) = θ(t) - mean θ.
inline PhaseSeries drift_of(const PhaseSeries& theta) {
  PhaseSeries d = theta;
  double mean = 0.0;
  for (double v : theta.theta) mean += v - theta.theta.front();
  mean = theta.theta.front() + mean / static_cast<double>(theta.theta.size());
  for (auto& v : d.theta) v -= mean;
  return d;
}

// Filter offset that cancels the drift. The measured quadrature is
// θ_trace(t) + Φ(t)/2, so Φ must move by -2δθ(t); `sign` = -1 applies the
// opposite (wrong) displacement, for sanity checks.
inline PhaseSeries correction_offset(const PhaseSeries& theta, double sign = 1.0) {
  auto d = drift_of(theta);
  for (auto& v : d.theta) v *= -sign;
  return d;
}

inline Spectrum correct_and_estimate(const TimeTrace& tr, const PhaseSeries& theta_series, double epsilon,
                                     double theta, Variant v, estimator::EstimatorOptions opts = {},
                                     double sign = 1.0) {
  theta_series.validate();
  if (theta_series.times.size() < 2) throw Error(ErrorKind::Usage, "theta series needs at least 2 samples");
  const double spacing = theta_series.times[1] - theta_series.times[0];
  if (theta_series.times.front() > spacing || theta_series.times.back() < tr.duration() - 2.0 * spacing - tr.dt)
    throw Error(ErrorKind::Usage, "theta series does not span the trace");
  opts.phase_correction = correction_offset(theta_series, sign);
  auto s = estimator::rhet_spectrum(tr, epsilon, theta, v, opts);
  s.meta.lockin = true;
  return s;
}

}  // namespace rhet::lockin
