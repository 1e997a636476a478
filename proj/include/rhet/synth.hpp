#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "rhet/analytic.hpp"
#include "rhet/fft.hpp"
#include "rhet/parallel.hpp"
#include "rhet/types.hpp"

namespace rhet::synth {

// θ(t) = θ0 + amplitude · sin(2π f t).
inline double phase_drift(double t, double theta0, double amplitude, double freq) {
  if (amplitude < 0) throw Error(ErrorKind::Config, "drift amplitude must be >= 0");
  return theta0 + amplitude * std::sin(kTwoPi * freq * t);
}

// i(t_n) = X cos(Ωt_n + θ(t_n)) + Y sin(Ωt_n + θ(t_n)).
template <typename PhaseFn>
TimeTrace modulate_current(const std::vector<double>& x_quad, const std::vector<double>& y_quad, double omega_beat,
                           PhaseFn&& theta_fn, double dt) {
  if (x_quad.size() != y_quad.size()) throw Error(ErrorKind::Config, "quadrature length mismatch");
  if (!(dt > 0)) throw Error(ErrorKind::Config, "dt must be positive");
  TimeTrace tr;
  tr.dt = dt;
  tr.omega_beat = omega_beat;
  tr.theta_nominal = theta_fn(0.0);
  tr.samples.resize(x_quad.size());
  for (std::size_t n = 0; n < x_quad.size(); ++n) {
    const double t = dt * static_cast<double>(n);
    const double ph = omega_beat * t + theta_fn(t);
    tr.samples[n] = x_quad[n] * std::cos(ph) + y_quad[n] * std::sin(ph);
  }
  return tr;
}

inline TimeTrace modulate_current(const std::vector<double>& x_quad, const std::vector<double>& y_quad,
                                  double omega_beat, double theta, double dt) {
  return modulate_current(x_quad, y_quad, omega_beat, [theta](double) { return theta; }, dt);
}

inline TimeTrace modulate_current(const std::vector<double>& x_quad, const std::vector<double>& y_quad,
                                  double omega_beat, const PhaseSeries& theta, double dt) {
  return modulate_current(x_quad, y_quad, omega_beat, [&theta](double t) { return theta.at(t); }, dt);
}

struct Tone {
  double amplitude = 1.0;
  double omega = 0.0;  // rad/s
  double phase = 0.0;
};

struct Quadratures {
  std::vector<double> x;
  std::vector<double> y;
};

// a(t) = Σ c_k exp(-iω_k t + iφ_k); returns X = a + a*, Y = -i(a - a*).
inline Quadratures tone_field(const std::vector<Tone>& tones, double duration, double dt) {
  if (!(dt > 0) || !(duration > 0)) throw Error(ErrorKind::Config, "duration and dt must be positive");
  for (const auto& t : tones)
    if (std::abs(t.omega) >= kPi / dt) throw Error(ErrorKind::Config, "tone frequency aliases (>= Nyquist)");
  const auto n = static_cast<std::size_t>(std::llround(duration / dt));
  Quadratures q{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t j = 0; j < n; ++j) {
    const double t = dt * static_cast<double>(j);
    cplx a = 0.0;
    for (const auto& tone : tones) a += std::polar(tone.amplitude, -tone.omega * t + tone.phase);
    q.x[j] = 2.0 * a.real();
    q.y[j] = 2.0 * a.imag();
  }
  return q;
}

struct RandomWalkDrift {
  double step_std = 0.0;  // rad per sqrt(s)
  double bound = kPi / 4;  // reflected at ±bound
  std::uint64_t seed = 1;
};

struct SynthOptions {
  double pilot = 0.0;                     // coherent carrier field amplitude (current line 2·pilot at Ω)
  std::optional<PhaseDriftSpec> drift;    // overrides cfg.drift when set
  std::optional<RandomWalkDrift> random_walk;
  unsigned workers = 0;                   // 0 = default_workers()
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::size_t kBlock = 4096;

}  // namespace detail

// Complex field a_n of a stationary Gaussian process whose spectra equal the
// model targets on the N-point DFT grid. Circular: the trace is one period.
// Bins are coloured in blocks, each with its own RNG stream derived from
// (seed, block), so output does not depend on the worker count.
inline std::vector<cplx> synth_field(const ExperimentConfig& cfg, std::size_t n, double dt, std::uint64_t seed,
                                     unsigned workers = 0) {
  require_valid(cfg);
  if (n < 2) throw Error(ErrorKind::Config, "need at least 2 samples");
  if (workers == 0) workers = default_workers();
  std::vector<cplx> spec(n);
  const double dw = kTwoPi / (static_cast<double>(n) * dt);
  const double floor = cfg.shot_floor;
  const double root_n = std::sqrt(static_cast<double>(n));
  const std::size_t half = n / 2;  // pairs k = 1..half-1 (plus Nyquist if n even)
  const std::size_t blocks = (half + 1 + detail::kBlock - 1) / detail::kBlock;
  std::vector<std::string> errors(blocks);

  parallel_for(blocks, workers, [&](std::size_t b) {
    std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(b + 1)));
    std::normal_distribution<double> normal(0.0, 1.0);
    analytic::FieldScratch scratch;
    const std::size_t k0 = b * detail::kBlock;
    const std::size_t k1 = std::min(half + 1, k0 + detail::kBlock);
    for (std::size_t k = k0; k < k1; ++k) {
      const double nu = dw * static_cast<double>(k);
      const auto p = analytic::field_point(cfg, nu, scratch);
      if (!analytic::physical(p)) {
        if (errors[b].empty()) errors[b] = analytic::physicality_message(nu, p) + " (bin " + std::to_string(k) + ")";
        continue;
      }
      const bool self_paired = (k == 0) || (n % 2 == 0 && k == half);
      if (self_paired) {
        // A_k must satisfy <|A|²> = N P, <A²> = N S_aa with ν ≡ -ν.
        const double pk = 0.5 * (p.s_aadag + p.s_adaga);
        const double sxx = 0.5 * (pk + p.s_aa.real());
        const double syy = 0.5 * (pk - p.s_aa.real());
        const double sxy = 0.5 * p.s_aa.imag();
        if (sxx < 0 || syy * sxx - sxy * sxy < -1e-9 * pk * pk) {
          if (errors[b].empty()) errors[b] = analytic::physicality_message(nu, p) + " (bin " + std::to_string(k) + ")";
          continue;
        }
        const double l00 = std::sqrt(std::max(sxx, 0.0));
        const double l10 = l00 > 0 ? sxy / l00 : 0.0;
        const double l11 = std::sqrt(std::max(syy - l10 * l10, 0.0));
        const double z0 = normal(rng), z1 = normal(rng);
        const double xr = l00 * z0;
        const double yr = l10 * z0 + l11 * z1;
        const std::size_t idx = (k == 0) ? 0 : half;
        spec[idx] = root_n * cplx(xr, yr);
        continue;
      }
      // v = (A_k, conj(A_-k)) with covariance N [[P(ν), S_aa],[conj S_aa, P(-ν)]].
      const double p_plus = p.s_aadag - 0.5 * floor;
      const double p_minus = p.s_adaga + 0.5 * floor;
      const double l00 = std::sqrt(p_plus);
      const cplx l10 = std::conj(p.s_aa) / l00;
      const double rem = p_minus - std::norm(l10);
      if (rem < -1e-9 * p_minus) {
        if (errors[b].empty()) errors[b] = analytic::physicality_message(nu, p) + " (bin " + std::to_string(k) + ")";
        continue;
      }
      const double l11 = std::sqrt(std::max(rem, 0.0));
      const cplx z0(normal(rng) * M_SQRT1_2, normal(rng) * M_SQRT1_2);
      const cplx z1(normal(rng) * M_SQRT1_2, normal(rng) * M_SQRT1_2);
      const cplx v0 = l00 * z0;
      const cplx v1 = l10 * z0 + l11 * z1;
      spec[k] = root_n * v0;
      spec[n - k] = root_n * std::conj(v1);
    }
  });
  for (const auto& e : errors)
    if (!e.empty()) throw Error(ErrorKind::Physicality, "covariance not positive semidefinite: " + e);

  std::vector<cplx> field(n);
  fft::backward(spec, field);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (auto& v : field) v *= inv_n;
  return field;
}

// LO phase θ(t) used for synthesis: θ0 plus sinusoidal drift, or a reflected
// random walk when requested.
inline std::function<double(double)> theta_function(const ExperimentConfig& cfg, const SynthOptions& opts,
                                                    double duration) {
  const double theta0 = cfg.theta0;
  if (opts.random_walk) {
    const auto rw = *opts.random_walk;
    const double step_t = 1e-3;
    const auto steps = static_cast<std::size_t>(std::ceil(duration / step_t)) + 2;
    PhaseSeries ps;
    ps.times.resize(steps);
    ps.theta.resize(steps);
    std::mt19937_64 rng(detail::splitmix64(rw.seed));
    std::normal_distribution<double> normal(0.0, rw.step_std * std::sqrt(step_t));
    double x = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
      ps.times[k] = step_t * static_cast<double>(k);
      ps.theta[k] = theta0 + x;
      x += normal(rng);
      if (x > rw.bound) x = 2 * rw.bound - x;
      if (x < -rw.bound) x = -2 * rw.bound - x;
    }
    return [ps = std::move(ps)](double t) { return ps.at(t); };
  }
  const PhaseDriftSpec d = opts.drift ? *opts.drift : cfg.drift;
  return [theta0, d](double t) { return phase_drift(t, theta0, d.amplitude, d.freq); };
}

// Stationary Gaussian photocurrent whose field spectra match the analytic
// targets, modulated at Ω with θ(t) = θ0 + drift. Deterministic given seed.
inline TimeTrace synth_gaussian_trace(const ExperimentConfig& cfg, double duration, double dt, std::uint64_t seed,
                                      const SynthOptions& opts = {}) {
  if (!(duration > 0)) throw Error(ErrorKind::Usage, "duration must be positive");
  if (!(dt > 0)) throw Error(ErrorKind::Usage, "dt must be positive");
  ExperimentConfig c = cfg;
  c.dt = dt;
  require_valid(c);
  const auto n = static_cast<std::size_t>(std::llround(duration / dt));
  auto field = synth_field(c, n, dt, seed, opts.workers);
  std::vector<double> x(n), y(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx a = field[j] + opts.pilot;
    x[j] = 2.0 * a.real();
    y[j] = 2.0 * a.imag();
  }
  field.clear();
  field.shrink_to_fit();
  auto theta = theta_function(c, opts, duration);
  auto tr = modulate_current(x, y, c.omega_beat, theta, dt);
  tr.theta_nominal = c.theta0;
  std::ostringstream label;
  label << "synthetic seed=" << seed;
  tr.label = label.str();
  return tr;
}

}  // namespace rhet::synth
