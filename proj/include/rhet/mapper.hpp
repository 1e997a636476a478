#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rhet/analytic.hpp"
#include "rhet/estimator.hpp"
#include "rhet/parallel.hpp"
#include "rhet/types.hpp"

namespace rhet::mapper {

inline constexpr std::size_t kDefaultThetas = 800;

struct MapOptions {
  estimator::EstimatorOptions est;
  double band_lo = -std::numeric_limits<double>::infinity();  // rad/s
  double band_hi = std::numeric_limits<double>::infinity();
};

// θ_k = πk/n, k = 0..n-1.
inline std::vector<double> theta_grid(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::Usage, "need at least 2 theta values");
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = kPi * static_cast<double>(k) / static_cast<double>(n);
  return t;
}

namespace detail {

inline std::pair<std::size_t, std::size_t> band_range(const std::vector<double>& f, double lo, double hi) {
  std::size_t a = 0;
  while (a < f.size() && f[a] < lo) ++a;
  std::size_t b = a;
  while (b < f.size() && f[b] <= hi) ++b;
  if (a == b) throw Error(ErrorKind::Grid, "frequency band selects no bins");
  return {a, b};
}

}  // namespace detail

// Every row is a standalone rhet_spectrum at θ_k, cut to the band.
inline ThetaMap theta_map_exact(const TimeTrace& tr, double epsilon, std::size_t n_theta, Variant v,
                                const MapOptions& o = {}) {
  ThetaMap m;
  m.thetas = theta_grid(n_theta);
  std::size_t a = 0, b = 0;
  for (std::size_t r = 0; r < n_theta; ++r) {
    const auto s = estimator::rhet_spectrum(tr, epsilon, m.thetas[r], v, o.est);
    if (r == 0) {
      std::tie(a, b) = detail::band_range(s.freqs, o.band_lo, o.band_hi);
      m.freqs.assign(s.freqs.begin() + static_cast<std::ptrdiff_t>(a), s.freqs.begin() + static_cast<std::ptrdiff_t>(b));
      m.values.resize(n_theta * m.freqs.size());
    }
    std::copy(s.values.begin() + static_cast<std::ptrdiff_t>(a), s.values.begin() + static_cast<std::ptrdiff_t>(b),
              m.values.begin() + static_cast<std::ptrdiff_t>(r * m.freqs.size()));
  }
  return m;
}

// Fundamental-harmonic rows from one pass over the trace:
// t̄: c0·S1 + c1·2Re[e^{-2iθ}C];  t0: c0·S1 + c1·(Re[e^{2iθ}D+] + Re[e^{-2iθ}D-]).
inline ThetaMap theta_map_from_parts(const estimator::CorrelationParts& p, double epsilon, std::size_t n_theta,
                                     Variant v, double band_lo, double band_hi, unsigned workers = 0) {
  if (!(std::abs(epsilon) <= 1.0)) throw Error(ErrorKind::Config, "filter: |epsilon| must be <= 1");
  ThetaMap m;
  m.thetas = theta_grid(n_theta);
  const auto [a, b] = detail::band_range(p.freqs, band_lo, band_hi);
  const std::size_t cols = b - a;
  m.freqs.assign(p.freqs.begin() + static_cast<std::ptrdiff_t>(a), p.freqs.begin() + static_cast<std::ptrdiff_t>(b));
  m.values.resize(n_theta * cols);
  const double c0 = analytic::filter_coefficient(epsilon, 0);
  const double c1 = analytic::filter_coefficient(epsilon, 1);
  if (v == Variant::TBar && p.corr.empty()) throw Error(ErrorKind::Usage, "correlation parts lack the tbar term");
  if (v == Variant::T0 && p.corr_plus.empty()) throw Error(ErrorKind::Usage, "correlation parts lack the t0 terms");
  if (workers == 0) workers = default_workers();
  parallel_for(n_theta, workers, [&](std::size_t r) {
    const cplx rot = std::polar(1.0, -2.0 * m.thetas[r]);
    double* row = m.values.data() + r * cols;
    if (v == Variant::TBar) {
      for (std::size_t j = 0; j < cols; ++j)
        row[j] = c0 * p.s1[a + j] + c1 * 2.0 * std::real(rot * p.corr[a + j]);
    } else {
      const cplx rc = std::conj(rot);
      for (std::size_t j = 0; j < cols; ++j)
        row[j] = c0 * p.s1[a + j] + c1 * (std::real(rc * p.corr_plus[a + j]) + std::real(rot * p.corr_minus[a + j]));
    }
  });
  return m;
}

inline ThetaMap theta_map_fast(const TimeTrace& tr, double epsilon, std::size_t n_theta, Variant v = Variant::TBar,
                               const MapOptions& o = {}) {
  const auto parts = estimator::correlation_parts(tr, tr.omega_beat, v == Variant::TBar, v == Variant::T0, o.est);
  return theta_map_from_parts(parts, epsilon, n_theta, v, o.band_lo, o.band_hi, o.est.workers);
}

// Analytic prediction map on the given grid.
inline ThetaMap analytic_map(const ExperimentConfig& cfg, const std::vector<double>& freqs, double epsilon,
                             std::size_t n_theta, Variant v) {
  auto shifted = [&](double by) {
    std::vector<double> f(freqs);
    for (auto& x : f) x += by;
    return f;
  };
  const auto mid = analytic::field_spectra(cfg, freqs);
  const auto up = analytic::field_spectra(cfg, shifted(cfg.omega_beat));
  const auto dn = analytic::field_spectra(cfg, shifted(-cfg.omega_beat));
  const double c0 = analytic::filter_coefficient(epsilon, 0);
  const double c1 = analytic::filter_coefficient(epsilon, 1);
  ThetaMap m;
  m.thetas = theta_grid(n_theta);
  m.freqs = freqs;
  m.values.resize(n_theta * freqs.size());
  for (std::size_t r = 0; r < n_theta; ++r) {
    const cplx rot = std::polar(1.0, -2.0 * m.thetas[r]);
    for (std::size_t j = 0; j < freqs.size(); ++j) {
      const double het = up.s_aadag[j] + dn.s_adaga[j];
      const double corr = v == Variant::TBar ? 2.0 * std::real(rot * mid.s_aa[j])
                                             : std::real(rot * (dn.s_aa[j] + up.s_aa[j]));
      m.at(r, j) = c0 * het + c1 * corr;
    }
  }
  return m;
}

inline ThetaMap normalize_map(ThetaMap m, double reference_peak) {
  if (!(reference_peak > 0)) throw Error(ErrorKind::Usage, "reference peak must be positive");
  for (auto& v : m.values) v /= reference_peak;
  m.normalization = reference_peak;
  return m;
}

enum class Normalization { None, Het, HetGain };

inline Normalization parse_normalization(const std::string& s) {
  if (s == "none") return Normalization::None;
  if (s == "het") return Normalization::Het;
  if (s == "het-gain") return Normalization::HetGain;
  throw Error(ErrorKind::Usage, "unknown normalization '" + s + "' (expected none|het|het-gain)");
}

// Reference for normalize_map: het peak, optionally times the filter's mean
// gain (1+|ε|)/2 so that ε-filtered maps compare against plain heterodyne.
inline double reference_for(Normalization n, double het_peak, double epsilon) {
  switch (n) {
    case Normalization::Het: return het_peak;
    case Normalization::HetGain: return het_peak * analytic::filter_gain(epsilon);
    default: return 1.0;
  }
}

struct PeakOptions {
  bool signed_extremum = false;  // largest |value| (keeps its sign) instead of the maximum
  bool subtract_baseline = false;  // median of the outer half of the window
  std::size_t fit_bins = 1;      // quadratic fit over ±fit_bins around the extremum
};

struct Peak {
  double value = 0.0;
  double location = 0.0;  // rad/s
  double baseline = 0.0;
};

// Extremum in [center ± halfwidth] refined by a least-squares parabola.
inline Peak find_peak(const std::vector<double>& freqs, const std::vector<double>& values, double center,
                      double halfwidth, const PeakOptions& o = {}) {
  if (freqs.size() < 3 || freqs.size() != values.size()) throw Error(ErrorKind::Grid, "spectrum too small");
  if (center - halfwidth < freqs.front() || center + halfwidth > freqs.back())
    throw Error(ErrorKind::Grid, "peak window outside the frequency grid");
  const auto [a, b] = detail::band_range(freqs, center - halfwidth, center + halfwidth);
  Peak p;
  if (o.subtract_baseline) {
    std::vector<double> outer;
    const double inner = 0.5 * halfwidth;
    for (std::size_t j = a; j < b; ++j)
      if (std::abs(freqs[j] - center) > inner) outer.push_back(values[j]);
    if (!outer.empty()) {
      std::nth_element(outer.begin(), outer.begin() + static_cast<std::ptrdiff_t>(outer.size() / 2), outer.end());
      p.baseline = outer[outer.size() / 2];
    }
  }
  std::size_t best = a;
  auto score = [&](std::size_t j) {
    const double v = values[j] - p.baseline;
    return o.signed_extremum ? std::abs(v) : v;
  };
  for (std::size_t j = a; j < b; ++j)
    if (score(j) > score(best)) best = j;
  const double sgn = (o.signed_extremum && values[best] - p.baseline < 0) ? -1.0 : 1.0;

  const std::size_t lo = best >= a + o.fit_bins ? best - o.fit_bins : a;
  const std::size_t hi = std::min(b - 1, best + o.fit_bins);
  p.value = values[best] - p.baseline;
  p.location = freqs[best];
  if (hi - lo < 2) return p;
  // y = c0 + c1 x + c2 x², x in bins relative to best.
  double s[5] = {0, 0, 0, 0, 0}, t[3] = {0, 0, 0};
  for (std::size_t j = lo; j <= hi; ++j) {
    const double x = static_cast<double>(j) - static_cast<double>(best);
    const double y = sgn * (values[j] - p.baseline);
    double xp = 1.0;
    for (int k = 0; k < 5; ++k) {
      s[k] += xp;
      if (k < 3) t[k] += xp * y;
      xp *= x;
    }
  }
  const double m[3][3] = {{s[0], s[1], s[2]}, {s[1], s[2], s[3]}, {s[2], s[3], s[4]}};
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  if (std::abs(det) < 1e-300) return p;
  auto solve = [&](int col) {
    double mm[3][3];
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) mm[r][c] = c == col ? t[r] : m[r][c];
    return (mm[0][0] * (mm[1][1] * mm[2][2] - mm[1][2] * mm[2][1]) - mm[0][1] * (mm[1][0] * mm[2][2] - mm[1][2] * mm[2][0]) +
            mm[0][2] * (mm[1][0] * mm[2][1] - mm[1][1] * mm[2][0])) /
           det;
  };
  const double c0 = solve(0), c1 = solve(1), c2 = solve(2);
  if (!(c2 < 0)) return p;
  const double xv = -c1 / (2.0 * c2);
  if (std::abs(xv) > static_cast<double>(o.fit_bins)) return p;
  const double step = freqs[1] - freqs[0];
  p.value = sgn * (c0 + c1 * xv + c2 * xv * xv);
  p.location = freqs[best] + xv * step;
  return p;
}

inline double peak_amplitude(const Spectrum& s, double center, double halfwidth, const PeakOptions& o = {}) {
  return find_peak(s.freqs, s.values, center, halfwidth, o).value;
}

inline Peak map_row_peak(const ThetaMap& m, std::size_t row, double center, double halfwidth,
                         const PeakOptions& o = {}) {
  std::vector<double> v(m.values.begin() + static_cast<std::ptrdiff_t>(row * m.cols()),
                        m.values.begin() + static_cast<std::ptrdiff_t>((row + 1) * m.cols()));
  return find_peak(m.freqs, v, center, halfwidth, o);
}

struct ZeroContour {
  std::vector<double> omega;  // rad/s
  std::vector<double> theta;  // rad, continuity-tracked (may leave [0, π))
  double slope = 0.0;         // dθ/dω, least squares
  double delta_theta = 0.0;   // max - min of θ over the band
};

// Per column in the band, θ where the map crosses zero going from positive
// to negative with increasing θ (the first such crossing in [0, π) for the
// first column, then the one nearest the previous column's θ).
inline ZeroContour zero_contour(const ThetaMap& m, double band_lo, double band_hi) {
  if (m.rows() < 2) throw Error(ErrorKind::Usage, "map needs at least 2 rows");
  const std::size_t rows = m.rows();
  const double dth = kPi / static_cast<double>(rows);
  ZeroContour z;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (m.freqs[c] < band_lo || m.freqs[c] > band_hi) continue;
    std::vector<double> found;
    for (std::size_t r = 0; r < rows; ++r) {
      const double v0 = m.at(r, c);
      const double v1 = m.at((r + 1) % rows, c);
      if (v0 > 0 && v1 <= 0) {
        const double frac = v0 / (v0 - v1);
        found.push_back(m.thetas[r] + frac * dth);
      }
    }
    if (found.empty()) continue;
    double th;
    if (std::isnan(prev)) {
      th = found.front();
    } else {
      double best = std::numeric_limits<double>::infinity();
      th = prev;
      for (double f : found) {
        const double cand = prev + wrap_pi(2.0 * (f - prev)) / 2.0;
        if (std::abs(cand - prev) < best) {
          best = std::abs(cand - prev);
          th = cand;
        }
      }
    }
    prev = th;
    z.omega.push_back(m.freqs[c]);
    z.theta.push_back(th);
  }
  if (z.omega.empty()) throw Error(ErrorKind::Signal, "no sign change in band");
  const auto n = static_cast<double>(z.omega.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < z.omega.size(); ++k) {
    mx += z.omega[k];
    my += z.theta[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < z.omega.size(); ++k) {
    sxy += (z.omega[k] - mx) * (z.theta[k] - my);
    sxx += (z.omega[k] - mx) * (z.omega[k] - mx);
  }
  z.slope = sxx > 0 ? sxy / sxx : 0.0;
  const auto [mn, mxv] = std::minmax_element(z.theta.begin(), z.theta.end());
  z.delta_theta = *mxv - *mn;
  return z;
}

}  // namespace rhet::mapper
