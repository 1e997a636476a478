#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rhet {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using cplx = std::complex<double>;

inline double hz_to_rad(double hz) { return kTwoPi * hz; }
inline double rad_to_hz(double rad) { return rad / kTwoPi; }

// Wraps an angle into [-pi, pi).
inline double wrap_pi(double a) {
  double w = std::fmod(a + kPi, kTwoPi);
  if (w < 0) w += kTwoPi;
  return w - kPi;
}

enum class ErrorKind { Config, Physicality, Grid, Signal, Io, Format, Usage };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Recovered or injected LO phase on a strictly increasing time grid.
struct PhaseSeries {
  std::vector<double> times;  // s
  std::vector<double> theta;  // rad, unwrapped

  bool empty() const { return times.empty(); }

  // Linear interpolation, clamped at the ends.
  double at(double t) const {
    if (times.empty()) return 0.0;
    if (t <= times.front()) return theta.front();
    if (t >= times.back()) return theta.back();
    const double step = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    // Grids produced here are uniform; fall back to bisection otherwise.
    auto k = static_cast<std::size_t>((t - times.front()) / step);
    if (k + 1 >= times.size() || times[k] > t || times[k + 1] < t) {
      std::size_t lo = 0, hi = times.size() - 1;
      while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        (times[mid] <= t ? lo : hi) = mid;
      }
      k = lo;
    }
    const double f = (t - times[k]) / (times[k + 1] - times[k]);
    return theta[k] + f * (theta[k + 1] - theta[k]);
  }

  void validate() const {
    if (times.size() != theta.size()) throw Error(ErrorKind::Format, "phase series: size mismatch");
    for (std::size_t k = 1; k < times.size(); ++k) {
      if (!(times[k] > times[k - 1])) throw Error(ErrorKind::Format, "phase series: times not increasing");
      if (std::abs(theta[k] - theta[k - 1]) >= kPi)
        throw Error(ErrorKind::Format, "phase series: jump >= pi between adjacent samples");
    }
  }
};

// Uniformly sampled real photocurrent, shot-noise normalised.
struct TimeTrace {
  std::vector<double> samples;
  double dt = 0.0;             // s
  double omega_beat = 0.0;     // rad/s
  double theta_nominal = 0.0;  // rad
  std::string label;

  std::size_t size() const { return samples.size(); }
  double duration() const { return dt * static_cast<double>(samples.size()); }
  double nyquist() const { return kPi / dt; }

  void validate() const {
    if (!(dt > 0)) throw Error(ErrorKind::Format, "trace: dt must be positive");
    if (samples.size() < 2) throw Error(ErrorKind::Format, "trace: need at least 2 samples");
    for (double v : samples)
      if (!std::isfinite(v)) throw Error(ErrorKind::Format, "trace: non-finite sample");
  }
};

struct MechMode {
  double omega_m = 0.0;  // rad/s
  double gamma = 0.0;    // rad/s, total damping
  double mass = 0.0;     // kg
  double nbar = 0.0;
  double coupling = 0.0;  // rad/s, linearised transduction rate g
};

struct PhaseDriftSpec {
  double amplitude = 0.0;  // rad
  double freq = 25.0;      // Hz
};

struct ExperimentConfig {
  double kappa = 0.0;      // rad/s, half-linewidth
  double detuning = 0.0;   // rad/s, drive minus cavity
  std::vector<MechMode> modes;
  double omega_beat = 0.0;  // rad/s
  double theta0 = 0.0;
  PhaseDriftSpec drift;
  double shot_floor = 1.0;
  double backaction_weight = 0.0;
  double dt = 0.2e-6;  // s, synthesis sampling step
};

enum class Severity { Warning, Error };

struct Diagnostic {
  Severity severity;
  std::string message;
};

// Returns every violated invariant. Sign violations are errors, regime
// bounds (5Γ <= Ω <= ω_M/5) are warnings.
inline std::vector<Diagnostic> validate_config(const ExperimentConfig& cfg) {
  std::vector<Diagnostic> out;
  auto err = [&](std::string m) { out.push_back({Severity::Error, std::move(m)}); };
  auto warn = [&](std::string m) { out.push_back({Severity::Warning, std::move(m)}); };
  if (!(cfg.kappa > 0)) err("nonpositive cavity half-linewidth kappa");
  if (!(cfg.omega_beat >= 0)) err("negative beat frequency");
  if (!(cfg.dt > 0)) err("nonpositive sampling step dt");
  if (!(cfg.shot_floor > 0)) err("nonpositive shot floor");
  if (!(cfg.backaction_weight >= 0)) err("negative backaction weight");
  if (!(cfg.drift.amplitude >= 0)) err("negative drift amplitude");
  if (cfg.modes.empty()) warn("no mechanical modes");
  for (std::size_t k = 0; k < cfg.modes.size(); ++k) {
    const auto& m = cfg.modes[k];
    const std::string tag = "mode " + std::to_string(k) + ": ";
    if (!(m.gamma > 0)) err(tag + "nonpositive linewidth");
    if (!(m.omega_m > m.gamma)) err(tag + "resonance must exceed linewidth");
    if (!(m.mass > 0)) err(tag + "nonpositive mass");
    if (!(m.nbar >= 0)) err(tag + "negative occupancy");
    if (!(m.gamma > 0 && m.omega_m > 0)) continue;
    if (cfg.omega_beat < 5.0 * m.gamma)
      warn(tag + "outside paper regime: beat frequency below 5 linewidths");
    if (cfg.omega_beat > m.omega_m / 5.0)
      warn(tag + "outside paper regime: beat frequency above omega_m/5");
    if (cfg.dt > 0 && cfg.omega_beat + m.omega_m + 10.0 * m.gamma >= kPi / cfg.dt)
      err(tag + "sidebands exceed Nyquist frequency");
  }
  return out;
}

inline bool has_errors(const std::vector<Diagnostic>& d) {
  for (const auto& x : d)
    if (x.severity == Severity::Error) return true;
  return false;
}

inline void require_valid(const ExperimentConfig& cfg) {
  for (const auto& d : validate_config(cfg))
    if (d.severity == Severity::Error) throw Error(ErrorKind::Config, "invalid config: " + d.message);
}

// Parameters of the membrane-in-the-middle experiment: κ/2π = 1.3 MHz,
// Ω/2π = 10 kHz, (1,1) mode 378.16 kHz / 4.56 kHz / 300 ng and (0,2) mode
// 544.78 kHz / 8.44 kHz / 180 ng. Detuning, coupling and occupancy are not
// published; the values below give a red-detuned thermal regime with
// sidebands ~30x above the shot floor.
inline ExperimentConfig experiment_preset() {
  ExperimentConfig c;
  c.kappa = hz_to_rad(1.3e6);
  c.detuning = hz_to_rad(-300e3);
  c.omega_beat = hz_to_rad(10e3);
  c.modes = {
      {hz_to_rad(378.16e3), hz_to_rad(4.56e3), 300e-12, 1e5, hz_to_rad(500.0)},
      {hz_to_rad(544.78e3), hz_to_rad(8.44e3), 180e-12, 1e5, hz_to_rad(500.0)},
  };
  return c;
}

struct FilterSpec {
  double epsilon = 1.0;
  double omega_beat = 0.0;
  double phase_offset = 0.0;              // φ0, rad
  std::optional<PhaseSeries> dynamic_offset;  // extra filter phase dyn(t), rad

  void validate() const {
    if (!(std::abs(epsilon) <= 1.0)) throw Error(ErrorKind::Config, "filter: |epsilon| must be <= 1");
  }
};

enum class Variant { T0, TBar };

inline const char* to_string(Variant v) { return v == Variant::T0 ? "t0" : "tbar"; }

inline Variant parse_variant(const std::string& s) {
  if (s == "t0") return Variant::T0;
  if (s == "tbar") return Variant::TBar;
  throw Error(ErrorKind::Usage, "unknown variant '" + s + "' (expected t0|tbar)");
}

struct SpectrumMeta {
  double epsilon = 1.0;
  double theta = 0.0;
  std::string variant = "welch";
  std::size_t segments = 1;
  bool lockin = false;
};

// Two-sided spectrum on a uniform angular-frequency grid (rad/s).
struct Spectrum {
  std::vector<double> freqs;
  std::vector<double> values;
  std::vector<double> variance;  // per-bin variance of the segment mean; may be empty
  SpectrumMeta meta;

  std::size_t size() const { return freqs.size(); }
  double step() const { return freqs.size() > 1 ? freqs[1] - freqs[0] : 0.0; }
  std::size_t nearest(double omega) const {
    if (freqs.empty()) throw Error(ErrorKind::Grid, "empty spectrum");
    const double s = step();
    if (s <= 0) return 0;
    double k = std::round((omega - freqs.front()) / s);
    if (k < 0) k = 0;
    if (k > static_cast<double>(freqs.size() - 1)) k = static_cast<double>(freqs.size() - 1);
    return static_cast<std::size_t>(k);
  }
};

struct ThetaMap {
  std::vector<double> thetas;
  std::vector<double> freqs;
  std::vector<double> values;  // row-major, thetas.size() x freqs.size()
  double normalization = 1.0;

  std::size_t rows() const { return thetas.size(); }
  std::size_t cols() const { return freqs.size(); }
  double at(std::size_t r, std::size_t c) const { return values[r * freqs.size() + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * freqs.size() + c]; }
};

}  // namespace rhet
