#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rhet/analytic.hpp"
#include "rhet/fft.hpp"
#include "rhet/parallel.hpp"
#include "rhet/types.hpp"

// Filtered-autocorrelation ("r-heterodyne") spectra.
//
// Per segment of M samples, spectra are periodogram-normalised: S = |FFT|²/M,
// so unit-variance white noise gives 1. The filter F_ε = ε + (1-ε)·W, with W
// the 0/1 window, so every filtered spectrum is computed as
//   S(ε) = ε·S[1] + (1-ε)·S[W]
// which makes the ε-affine and ε = 1 identities hold exactly.
//
// t0:  A(m) = (1/M) Σ F(t_n) i_n i_{n+m}        -> Re[conj(FFT(F·i))·FFT(i)]/M
// t̄:   A(m) = (1/M) Σ F(t_n + mΔ/2) i_n i_{n+m}  -> Fourier series of W, odd
//      harmonics k ≤ K kept, each term a product U_k(-ω)U_k(ω)/M with
//      U_k = FFT(exp(ik(Ωt - Φ(t)/2))·i). A brute-force mode evaluates the
//      defining sum literally.
// Autocorrelations are kept as their even part (real spectra).
namespace rhet::estimator {

enum class Wrap { Circular, Linear };
enum class LagWindow { Rectangular, Bartlett, Hann };
enum class DataWindow { Rectangular, Hann };
enum class TbarMode { Harmonic, Exact };

inline LagWindow parse_lag_window(const std::string& s) {
  if (s == "rect" || s == "rectangular") return LagWindow::Rectangular;
  if (s == "bartlett") return LagWindow::Bartlett;
  if (s == "hann") return LagWindow::Hann;
  throw Error(ErrorKind::Usage, "unknown lag window '" + s + "' (expected rect|bartlett|hann)");
}

inline DataWindow parse_data_window(const std::string& s) {
  if (s == "rect" || s == "rectangular") return DataWindow::Rectangular;
  if (s == "hann") return DataWindow::Hann;
  throw Error(ErrorKind::Usage, "unknown window '" + s + "' (expected rect|hann)");
}

// Total filter phase Φ(t) = φ0 + dyn(t), dyn = 2·dynamic_offset(t).
inline double filter_phase(const FilterSpec& f, double t) {
  return f.phase_offset + (f.dynamic_offset ? 2.0 * f.dynamic_offset->at(t) : 0.0);
}

// True on the closed half-cycle |wrap(2Ωt - Φ(t))| <= π/2.
inline bool in_window(const FilterSpec& f, double t) {
  double ph = 2.0 * f.omega_beat * t - filter_phase(f, t);
  if (ph < -kPi || ph > kPi) ph = wrap_pi(ph);
  return std::abs(ph) <= 0.5 * kPi;
}

inline double eval_filter(const FilterSpec& f, double t) { return in_window(f, t) ? 1.0 : f.epsilon; }

// Fourier coefficient of W at exp(ik(2Ωt - Φ)).
inline double window_harmonic(int k) {
  if (k == 0) return 0.5;
  return std::sin(0.5 * kPi * k) / (kPi * k);
}

struct EstimatorOptions {
  std::size_t segments = 1;
  std::size_t max_lag = 0;  // samples; 0 = full segment (circular) or M/4 (linear)
  LagWindow window = LagWindow::Rectangular;
  Wrap wrap = Wrap::Circular;
  int harmonics = 1;  // t̄: highest odd window harmonic kept
  TbarMode tbar_mode = TbarMode::Harmonic;
  std::optional<PhaseSeries> phase_correction;  // becomes FilterSpec::dynamic_offset
  unsigned workers = 0;
};

struct Autocorrelation {
  std::vector<double> lags;    // s
  std::vector<double> values;  // even part, lags 0..L
  Variant variant = Variant::T0;
  FilterSpec filter;
  std::size_t nfft = 0;  // transform length pairing these lags with a frequency grid
  double dt = 0.0;
};

namespace detail {

struct Layout {
  std::size_t seg_len = 0;
  std::size_t count = 0;
  std::size_t nfft = 0;
  std::size_t full_lag = 0;
  std::size_t max_lag = 0;
  bool lag_window = false;
};

inline Layout make_layout(std::size_t n, const EstimatorOptions& o) {
  if (o.segments < 1) throw Error(ErrorKind::Usage, "segments must be >= 1");
  Layout l;
  l.count = o.segments;
  l.seg_len = n / o.segments;
  if (l.seg_len < 4) throw Error(ErrorKind::Usage, "trace too short for the requested number of segments");
  const bool circ = o.wrap == Wrap::Circular;
  l.nfft = circ ? l.seg_len : 2 * l.seg_len;
  l.full_lag = circ ? l.seg_len / 2 : l.seg_len - 1;
  l.max_lag = o.max_lag == 0 ? (circ ? l.full_lag : l.seg_len / 4) : o.max_lag;
  if (l.max_lag > l.full_lag)
    throw Error(ErrorKind::Usage, "max_lag too large: " + std::to_string(l.max_lag) + " > " +
                                      std::to_string(l.full_lag));
  l.lag_window = l.max_lag < l.full_lag || o.window != LagWindow::Rectangular;
  return l;
}

inline double lag_weight(LagWindow w, std::size_t m, std::size_t max_lag) {
  const double x = static_cast<double>(m) / static_cast<double>(max_lag + 1);
  switch (w) {
    case LagWindow::Bartlett: return 1.0 - x;
    case LagWindow::Hann: return 0.5 * (1.0 + std::cos(kPi * x));
    default: return 1.0;
  }
}

// Even lag sequence r (length nfft, r[m] = r[nfft-m]) -> real spectrum.
inline std::vector<double> spectrum_from_lags(const std::vector<double>& r) {
  const auto R = fft::forward_real(r);
  std::vector<double> s(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) s[j] = R[j].real();
  return s;
}

// Spectrum (natural order) -> truncated, lag-windowed spectrum.
inline void apply_lag_window(std::vector<double>& s, std::size_t max_lag, LagWindow w) {
  const std::size_t n = s.size();
  std::vector<cplx> S(s.begin(), s.end()), r(n);
  fft::backward(S, r);
  const double inv = 1.0 / static_cast<double>(n);
  std::vector<double> rr(n, 0.0);
  rr[0] = r[0].real() * inv;
  for (std::size_t m = 1; m <= max_lag && m < n; ++m) {
    const double wv = lag_weight(w, m, max_lag);
    rr[m] = r[m].real() * inv * wv;
    rr[n - m] = r[n - m].real() * inv * wv;
  }
  s = spectrum_from_lags(rr);
}

inline std::vector<double> to_ascending(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[fft::shifted_pos(k, v.size())] = v[k];
  return out;
}

inline std::vector<cplx> to_ascending(const std::vector<cplx>& v) {
  std::vector<cplx> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[fft::shifted_pos(k, v.size())] = v[k];
  return out;
}

inline void check_beat(const TimeTrace& tr, double omega_beat) {
  if (tr.omega_beat > 0 && std::abs(omega_beat - tr.omega_beat) > 1e-9 * tr.omega_beat)
    throw Error(ErrorKind::Config, "inconsistent beat frequency between filter and trace");
}

// Runs kernel(seg) for every segment in fixed-size batches and hands results
// to acc(seg, result) in segment order, so sums are independent of workers.
template <typename Result, typename Kernel, typename Acc>
void ordered_segments(std::size_t count, unsigned workers, Kernel&& kernel, Acc&& acc) {
  constexpr std::size_t kBatch = 16;
  if (workers == 0) workers = default_workers();
  std::vector<Result> slots(std::min(kBatch, count));
  for (std::size_t b0 = 0; b0 < count; b0 += kBatch) {
    const std::size_t nb = std::min(kBatch, count - b0);
    parallel_for(nb, workers, [&](std::size_t i) { slots[i] = kernel(b0 + i); });
    for (std::size_t i = 0; i < nb; ++i) {
      acc(b0 + i, slots[i]);
      slots[i] = Result{};
    }
  }
}

struct Segment {
  std::span<const double> x;
  double t0 = 0.0;  // absolute time of the first sample
  double dt = 0.0;
  std::size_t nfft = 0;
};

inline Segment segment_of(const TimeTrace& tr, const Layout& l, std::size_t s) {
  Segment seg;
  seg.x = std::span<const double>(tr.samples.data() + s * l.seg_len, l.seg_len);
  seg.t0 = tr.dt * static_cast<double>(s * l.seg_len);
  seg.dt = tr.dt;
  seg.nfft = l.nfft;
  return seg;
}

inline std::vector<double> padded(const Segment& seg) {
  std::vector<double> xp(seg.nfft, 0.0);
  std::copy(seg.x.begin(), seg.x.end(), xp.begin());
  return xp;
}

// FFT of exp(ik(Ωt - Φ(t)/2))·x, zero padded to nfft.
inline std::vector<cplx> demod_fft(const Segment& seg, const FilterSpec& f, int k) {
  std::vector<cplx> u(seg.nfft, 0.0);
  for (std::size_t n = 0; n < seg.x.size(); ++n) {
    const double t = seg.t0 + seg.dt * static_cast<double>(n);
    u[n] = std::polar(seg.x[n], k * (f.omega_beat * t - 0.5 * filter_phase(f, t)));
  }
  return fft::forward(u);
}

// Literal t̄ sum of the window-filtered lag products, lags 0..L.
inline std::vector<double> tbar_exact_lags(const Segment& seg, const FilterSpec& f, std::size_t max_lag, Wrap wrap) {
  const std::size_t m_len = seg.x.size();
  std::vector<double> r(max_lag + 1, 0.0);
  for (std::size_t m = 0; m <= max_lag; ++m) {
    double acc = 0.0;
    const std::size_t stop = wrap == Wrap::Circular ? m_len : m_len - m;
    for (std::size_t n = 0; n < stop; ++n) {
      const double t = seg.t0 + seg.dt * (static_cast<double>(n) + 0.5 * static_cast<double>(m));
      if (!in_window(f, t)) continue;
      const std::size_t k = n + m < m_len ? n + m : n + m - m_len;
      acc += seg.x[n] * seg.x[k];
    }
    r[m] = acc / static_cast<double>(m_len);
  }
  return r;
}

inline std::vector<double> even_extend(const std::vector<double>& r, std::size_t nfft) {
  std::vector<double> full(nfft, 0.0);
  full[0] = r[0];
  for (std::size_t m = 1; m < r.size() && m < nfft; ++m) {
    full[m] = r[m];
    full[nfft - m] = r[m];
  }
  return full;
}

// Filtered spectrum of one segment, natural FFT order, before lag windowing.
inline std::vector<double> segment_spectrum(const Segment& seg, const FilterSpec& f, Variant v,
                                            const EstimatorOptions& o, const Layout& l) {
  const std::size_t nfft = seg.nfft;
  const double inv_m = 1.0 / static_cast<double>(seg.x.size());
  const auto I = fft::forward_real(padded(seg));
  std::vector<double> s(nfft);
  for (std::size_t j = 0; j < nfft; ++j) s[j] = std::norm(I[j]) * inv_m;
  if (f.epsilon == 1.0) return s;

  std::vector<double> sw(nfft, 0.0);
  if (v == Variant::T0) {
    std::vector<double> g(nfft, 0.0);
    for (std::size_t n = 0; n < seg.x.size(); ++n)
      if (in_window(f, seg.t0 + seg.dt * static_cast<double>(n))) g[n] = seg.x[n];
    const auto G = fft::forward_real(g);
    for (std::size_t j = 0; j < nfft; ++j) sw[j] = std::real(std::conj(G[j]) * I[j]) * inv_m;
  } else if (o.tbar_mode == TbarMode::Harmonic) {
    if (o.harmonics < 1) throw Error(ErrorKind::Usage, "harmonics must be >= 1");
    for (std::size_t j = 0; j < nfft; ++j) sw[j] = 0.5 * s[j];
    for (int k = 1; k <= o.harmonics; k += 2) {
      const double wk = 2.0 * window_harmonic(k);
      const auto U = demod_fft(seg, f, k);
      for (std::size_t j = 0; j < nfft; ++j) sw[j] += wk * std::real(U[(nfft - j) % nfft] * U[j]) * inv_m;
    }
  } else {
    sw = spectrum_from_lags(even_extend(tbar_exact_lags(seg, f, l.max_lag, o.wrap), nfft));
  }
  const double e = f.epsilon;
  for (std::size_t j = 0; j < nfft; ++j) s[j] = e * s[j] + (1.0 - e) * sw[j];
  return s;
}

struct Accumulated {
  std::vector<double> mean;      // natural order
  std::vector<double> variance;  // of the mean; empty for one segment
};

template <typename Kernel>
Accumulated accumulate(const Layout& l, unsigned workers, Kernel&& kernel) {
  std::vector<double> sum(l.nfft, 0.0), sq(l.nfft, 0.0);
  ordered_segments<std::vector<double>>(l.count, workers, kernel, [&](std::size_t, const std::vector<double>& r) {
    for (std::size_t j = 0; j < l.nfft; ++j) {
      sum[j] += r[j];
      sq[j] += r[j] * r[j];
    }
  });
  Accumulated a;
  const double c = static_cast<double>(l.count);
  a.mean.resize(l.nfft);
  for (std::size_t j = 0; j < l.nfft; ++j) a.mean[j] = sum[j] / c;
  if (l.count > 1) {
    a.variance.resize(l.nfft);
    for (std::size_t j = 0; j < l.nfft; ++j)
      a.variance[j] = std::max(0.0, (sq[j] - c * a.mean[j] * a.mean[j]) / (c - 1.0)) / c;
  }
  return a;
}

inline Spectrum finish(const Accumulated& a, double dt) {
  Spectrum s;
  s.freqs = fft::two_sided_grid(a.mean.size(), dt);
  s.values = to_ascending(a.mean);
  if (!a.variance.empty()) s.variance = to_ascending(a.variance);
  return s;
}

}  // namespace detail

// Segment-averaged filtered spectrum for an explicit filter.
inline Spectrum filtered_spectrum(const TimeTrace& tr, const FilterSpec& f, Variant v,
                                  const EstimatorOptions& o = {}) {
  tr.validate();
  f.validate();
  detail::check_beat(tr, f.omega_beat);
  const auto l = detail::make_layout(tr.size(), o);
  auto acc = detail::accumulate(l, o.workers, [&](std::size_t s) {
    auto r = detail::segment_spectrum(detail::segment_of(tr, l, s), f, v, o, l);
    if (l.lag_window) detail::apply_lag_window(r, l.max_lag, o.window);
    return r;
  });
  auto out = detail::finish(acc, tr.dt);
  out.meta.epsilon = f.epsilon;
  out.meta.theta = 0.5 * f.phase_offset;
  out.meta.variant = to_string(v);
  out.meta.segments = l.count;
  out.meta.lockin = f.dynamic_offset.has_value();
  return out;
}

// Filtered autocorrelation of the whole trace (one segment), lags 0..max_lag.
inline Autocorrelation filtered_autocorr(const TimeTrace& tr, const FilterSpec& f, std::size_t max_lag, Variant v,
                                         const EstimatorOptions& o = {}) {
  tr.validate();
  f.validate();
  detail::check_beat(tr, f.omega_beat);
  EstimatorOptions one = o;
  one.segments = 1;
  one.max_lag = max_lag == 0 ? 0 : max_lag;
  const auto l = detail::make_layout(tr.size(), one);
  const auto seg = detail::segment_of(tr, l, 0);
  Autocorrelation a;
  a.variant = v;
  a.filter = f;
  a.nfft = l.nfft;
  a.dt = tr.dt;
  if (v == Variant::TBar && o.tbar_mode == TbarMode::Exact) {
    // ε·A[1] + (1-ε)·A[W], both by the literal sum.
    const auto rw = detail::tbar_exact_lags(seg, f, l.max_lag, o.wrap);
    std::vector<double> r1(l.max_lag + 1, 0.0);
    const std::size_t m_len = seg.x.size();
    for (std::size_t m = 0; m <= l.max_lag; ++m) {
      double acc = 0.0;
      const std::size_t stop = o.wrap == Wrap::Circular ? m_len : m_len - m;
      for (std::size_t n = 0; n < stop; ++n) acc += seg.x[n] * seg.x[(n + m) % m_len];
      r1[m] = acc / static_cast<double>(m_len);
    }
    a.values.resize(l.max_lag + 1);
    for (std::size_t m = 0; m <= l.max_lag; ++m) a.values[m] = f.epsilon * r1[m] + (1.0 - f.epsilon) * rw[m];
  } else {
    const auto s = detail::segment_spectrum(seg, f, v, one, l);
    std::vector<cplx> S(s.begin(), s.end()), r(l.nfft);
    fft::backward(S, r);
    a.values.resize(l.max_lag + 1);
    const double inv = 1.0 / static_cast<double>(l.nfft);
    for (std::size_t m = 0; m <= l.max_lag; ++m) a.values[m] = r[m].real() * inv;
  }
  a.lags.resize(a.values.size());
  for (std::size_t m = 0; m < a.lags.size(); ++m) a.lags[m] = tr.dt * static_cast<double>(m);
  return a;
}

// Wiener–Khinchin: two-sided transform of the even-extended, lag-windowed
// autocorrelation on an nfft-point grid. Σ_j S_j·(2π/nfft) = 2π·A(0).
inline Spectrum psd_from_autocorr(const Autocorrelation& a, LagWindow window = LagWindow::Rectangular) {
  if (a.values.empty() || a.nfft < 2) throw Error(ErrorKind::Usage, "empty autocorrelation");
  const std::size_t max_lag = a.values.size() - 1;
  std::vector<double> r(a.values);
  for (std::size_t m = 1; m < r.size(); ++m) r[m] *= detail::lag_weight(window, m, max_lag);
  const auto s = detail::spectrum_from_lags(detail::even_extend(r, a.nfft));
  Spectrum out;
  out.freqs = fft::two_sided_grid(a.nfft, a.dt);
  out.values = detail::to_ascending(s);
  out.meta.epsilon = a.filter.epsilon;
  out.meta.theta = 0.5 * a.filter.phase_offset;
  out.meta.variant = to_string(a.variant);
  out.meta.lockin = a.filter.dynamic_offset.has_value();
  return out;
}

// Filter F_ε with φ0 = 2θ (and the phase correction as dynamic offset),
// averaged over segments.
inline Spectrum rhet_spectrum(const TimeTrace& tr, double epsilon, double theta, Variant v,
                              const EstimatorOptions& o = {}) {
  FilterSpec f;
  f.epsilon = epsilon;
  f.omega_beat = tr.omega_beat;
  f.phase_offset = 2.0 * theta;
  f.dynamic_offset = o.phase_correction;
  auto s = filtered_spectrum(tr, f, v, o);
  s.meta.theta = theta;
  return s;
}

// Welch two-sided PSD over non-overlapping segments.
inline Spectrum standard_psd(const TimeTrace& tr, std::size_t segments, DataWindow window = DataWindow::Rectangular,
                             unsigned workers = 0) {
  tr.validate();
  EstimatorOptions o;
  o.segments = segments;
  const auto l = detail::make_layout(tr.size(), o);
  std::vector<double> taper;
  double inv_norm = 1.0 / static_cast<double>(l.seg_len);
  if (window == DataWindow::Hann) {
    taper.resize(l.seg_len);
    double ss = 0.0;
    for (std::size_t n = 0; n < l.seg_len; ++n) {
      taper[n] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(n) / static_cast<double>(l.seg_len)));
      ss += taper[n] * taper[n];
    }
    inv_norm = 1.0 / ss;
  }
  auto acc = detail::accumulate(l, workers, [&](std::size_t s) {
    const auto seg = detail::segment_of(tr, l, s);
    auto xp = detail::padded(seg);
    if (!taper.empty())
      for (std::size_t n = 0; n < l.seg_len; ++n) xp[n] *= taper[n];
    const auto I = fft::forward_real(xp);
    std::vector<double> r(l.nfft);
    for (std::size_t j = 0; j < l.nfft; ++j) r[j] = std::norm(I[j]) * inv_norm;
    return r;
  });
  auto out = detail::finish(acc, tr.dt);
  out.meta.epsilon = 1.0;
  out.meta.variant = "welch";
  out.meta.segments = l.count;
  return out;
}

struct ComplexSpectrum {
  std::vector<double> freqs;
  std::vector<cplx> values;
  std::size_t segments = 0;
};

// Segment-averaged spectral parts from which every fundamental-harmonic
// filtered spectrum follows (ascending frequency order):
//   s1:         |I|²/M
//   corr:       C  = U(-ω)U(ω)/M, U = FFT(exp(i(Ωt - dyn/2))·i)       (t̄)
//   corr_plus:  D+ = conj(P(ω))·I(ω)/M, P = FFT(exp(i(2Ωt - dyn))·i)   (t0)
//   corr_minus: D- = P(-ω)·I(ω)/M
// Rows: t̄ c0·s1 + c1·2Re[e^{-iφ0}C];  t0 c0·s1 + c1·(Re[e^{iφ0}D+] + Re[e^{-iφ0}D-]).
struct CorrelationParts {
  std::vector<double> freqs;
  std::vector<double> s1;
  std::vector<cplx> corr;
  std::vector<cplx> corr_plus;
  std::vector<cplx> corr_minus;
  std::size_t segments = 0;
  bool lockin = false;
};

inline CorrelationParts correlation_parts(const TimeTrace& tr, double omega_beat, bool want_tbar, bool want_t0,
                                          const EstimatorOptions& o = {}) {
  tr.validate();
  detail::check_beat(tr, omega_beat);
  EstimatorOptions oc = o;
  oc.wrap = Wrap::Circular;
  const auto l = detail::make_layout(tr.size(), oc);
  FilterSpec f;
  f.epsilon = -1.0;
  f.omega_beat = omega_beat;
  f.dynamic_offset = o.phase_correction;
  const std::size_t n = l.nfft;
  std::vector<double> s1(n, 0.0);
  std::vector<cplx> c(want_tbar ? n : 0), dp(want_t0 ? n : 0), dm(want_t0 ? n : 0);
  struct Parts {
    std::vector<double> s1;
    std::vector<cplx> c, dp, dm;
  };
  detail::ordered_segments<Parts>(
      l.count, o.workers,
      [&](std::size_t s) {
        const auto seg = detail::segment_of(tr, l, s);
        const double inv_m = 1.0 / static_cast<double>(seg.x.size());
        Parts p;
        const auto I = fft::forward_real(detail::padded(seg));
        p.s1.resize(n);
        for (std::size_t j = 0; j < n; ++j) p.s1[j] = std::norm(I[j]) * inv_m;
        if (want_tbar) {
          const auto U = detail::demod_fft(seg, f, 1);
          p.c.resize(n);
          for (std::size_t j = 0; j < n; ++j) p.c[j] = U[(n - j) % n] * U[j] * inv_m;
        }
        if (want_t0) {
          const auto P = detail::demod_fft(seg, f, 2);
          p.dp.resize(n);
          p.dm.resize(n);
          for (std::size_t j = 0; j < n; ++j) {
            p.dp[j] = std::conj(P[j]) * I[j] * inv_m;
            p.dm[j] = P[(n - j) % n] * I[j] * inv_m;
          }
        }
        return p;
      },
      [&](std::size_t, const Parts& p) {
        for (std::size_t j = 0; j < n; ++j) s1[j] += p.s1[j];
        for (std::size_t j = 0; j < c.size(); ++j) c[j] += p.c[j];
        for (std::size_t j = 0; j < dp.size(); ++j) {
          dp[j] += p.dp[j];
          dm[j] += p.dm[j];
        }
      });
  const double inv_c = 1.0 / static_cast<double>(l.count);
  for (auto& v : s1) v *= inv_c;
  for (auto& v : c) v *= inv_c;
  for (auto& v : dp) v *= inv_c;
  for (auto& v : dm) v *= inv_c;
  CorrelationParts out;
  out.freqs = fft::two_sided_grid(n, tr.dt);
  out.s1 = detail::to_ascending(s1);
  if (want_tbar) out.corr = detail::to_ascending(c);
  if (want_t0) {
    out.corr_plus = detail::to_ascending(dp);
    out.corr_minus = detail::to_ascending(dm);
  }
  out.segments = l.count;
  out.lockin = o.phase_correction.has_value();
  return out;
}

// Red/blue sideband cross-correlation <î*(ω+Ω)·î(ω-Ω)> in the demodulated
// frame, C(ω) ≈ e^{-2iθ}·S_aa(ω). Re[e^{-2iθ'}C] reproduces the ε = -1 t̄
// spectrum at θ' up to the factor 2·(2/π).
inline ComplexSpectrum complex_corr_spectrum(const TimeTrace& tr, double omega_beat, const EstimatorOptions& o = {}) {
  auto parts = correlation_parts(tr, omega_beat, true, false, o);
  ComplexSpectrum c;
  c.freqs = std::move(parts.freqs);
  c.values = std::move(parts.corr);
  c.segments = parts.segments;
  return c;
}

}  // namespace rhet::estimator
