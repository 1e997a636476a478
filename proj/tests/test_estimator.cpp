#include <gtest/gtest.h>

#include <random>

#include "rhet/rhet.hpp"

using namespace rhet;
using estimator::EstimatorOptions;

namespace {

TimeTrace white_trace(std::size_t n, std::uint64_t seed) {
  TimeTrace tr;
  tr.dt = 0.2e-6;
  tr.omega_beat = hz_to_rad(10e3);
  tr.samples.resize(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto& v : tr.samples) v = g(rng);
  return tr;
}

// cos((Ω+ω_M)t) + cos((Ω-ω_M)t) with integer periods over N = 10⁴.
TimeTrace two_tone(double& wm) {
  TimeTrace tr;
  tr.dt = 1.0;
  tr.omega_beat = kTwoPi * 1037.0 / 1e4;
  wm = kTwoPi * 3781.0 / 1e4;
  tr.samples.resize(10000);
  for (std::size_t n = 0; n < tr.size(); ++n) {
    const double t = static_cast<double>(n);
    tr.samples[n] = std::cos((tr.omega_beat + wm) * t) + std::cos((tr.omega_beat - wm) * t);
  }
  return tr;
}

double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 0.0, d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    scale = std::max(scale, std::abs(b[i]));
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d / scale;
}

ExperimentConfig resonant() {
  auto c = experiment_preset();
  c.detuning = 0.0;
  return c;
}

}  // namespace

TEST(Filter, WindowIsClosedHalfCycle) {
  FilterSpec f;
  f.epsilon = -0.3;
  f.omega_beat = 1.0;
  EXPECT_DOUBLE_EQ(estimator::eval_filter(f, 0.0), 1.0);
  // 2Ωt = π/2 exactly on the edge: inside.
  EXPECT_DOUBLE_EQ(estimator::eval_filter(f, kPi / 4), 1.0);
  EXPECT_DOUBLE_EQ(estimator::eval_filter(f, kPi / 4 + 1e-9), -0.3);
  EXPECT_DOUBLE_EQ(estimator::eval_filter(f, kPi / 2), -0.3);
  f.phase_offset = kPi;
  EXPECT_DOUBLE_EQ(estimator::eval_filter(f, kPi / 2), 1.0);
  EXPECT_DOUBLE_EQ(estimator::eval_filter(f, 0.0), -0.3);
}

TEST(Filter, EpsilonOneIsIdentityAndRangeChecked) {
  FilterSpec f;
  f.epsilon = 1.0;
  f.omega_beat = 3.0;
  for (double t : {0.0, 0.1, 0.7, 2.5}) EXPECT_DOUBLE_EQ(estimator::eval_filter(f, t), 1.0);
  f.epsilon = 1.5;
  EXPECT_THROW(f.validate(), Error);
}

TEST(Filter, WindowHarmonics) {
  EXPECT_DOUBLE_EQ(estimator::window_harmonic(0), 0.5);
  EXPECT_NEAR(estimator::window_harmonic(1), 1.0 / kPi, 1e-15);
  EXPECT_NEAR(estimator::window_harmonic(2), 0.0, 1e-15);
  EXPECT_NEAR(estimator::window_harmonic(3), -1.0 / (3 * kPi), 1e-15);
  EXPECT_NEAR(estimator::window_harmonic(-1), 1.0 / kPi, 1e-15);
}

TEST(Estimator, PlusOneEqualsWelch) {
  const auto tr = white_trace(1 << 16, 1);
  for (std::size_t segs : {1u, 4u, 16u}) {
    const auto w = estimator::standard_psd(tr, segs);
    for (auto v : {Variant::T0, Variant::TBar}) {
      EstimatorOptions o;
      o.segments = segs;
      const auto r = estimator::rhet_spectrum(tr, 1.0, 0.8, v, o);
      ASSERT_EQ(r.freqs, w.freqs);
      EXPECT_LT(max_rel(r.values, w.values), 1e-10);
    }
  }
}

TEST(Estimator, AffineInEpsilon) {
  const auto tr = white_trace(1 << 15, 2);
  EstimatorOptions o;
  o.segments = 8;
  for (auto v : {Variant::T0, Variant::TBar}) {
    const auto p = estimator::rhet_spectrum(tr, 1.0, 0.3, v, o);
    const auto m = estimator::rhet_spectrum(tr, -1.0, 0.3, v, o);
    for (double eps : {-0.5, 0.0, 0.5}) {
      const auto e = estimator::rhet_spectrum(tr, eps, 0.3, v, o);
      std::vector<double> want(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) want[i] = 0.5 * (1 + eps) * p.values[i] + 0.5 * (1 - eps) * m.values[i];
      EXPECT_LT(max_rel(e.values, want), 1e-12);
    }
  }
}

TEST(Estimator, PeriodicInTheta) {
  const auto tr = white_trace(1 << 14, 3);
  EstimatorOptions o;
  o.segments = 4;
  for (auto v : {Variant::T0, Variant::TBar}) {
    const auto a = estimator::rhet_spectrum(tr, -1.0, 0.4, v, o);
    const auto b = estimator::rhet_spectrum(tr, -1.0, 0.4 + kPi, v, o);
    EXPECT_LT(max_rel(a.values, b.values), 1e-9);
  }
}

TEST(Estimator, DeterministicAcrossWorkers) {
  const auto tr = white_trace(1 << 16, 4);
  EstimatorOptions a, b;
  a.segments = b.segments = 32;
  a.workers = 1;
  b.workers = 5;
  for (auto v : {Variant::T0, Variant::TBar}) {
    const auto x = estimator::rhet_spectrum(tr, -0.4, 0.2, v, a);
    const auto y = estimator::rhet_spectrum(tr, -0.4, 0.2, v, b);
    EXPECT_EQ(x.values, y.values);
    EXPECT_EQ(x.variance, y.variance);
  }
}

TEST(Estimator, WhiteNoiseFloorAndStandardError) {
  const auto tr = white_trace(1 << 18, 5);
  const auto w = estimator::standard_psd(tr, 64);
  double mean = 0.0, se = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    mean += w.values[i];
    se += std::sqrt(w.variance[i]);
  }
  mean /= static_cast<double>(w.size());
  se /= static_cast<double>(w.size());
  EXPECT_NEAR(mean, 1.0, 0.01);
  // Periodogram bins are exponential: sd 1 per segment.
  EXPECT_NEAR(se, 1.0 / 8.0, 0.02);
  const auto h = estimator::standard_psd(tr, 64, estimator::DataWindow::Hann);
  double mh = 0.0;
  for (double v : h.values) mh += v;
  EXPECT_NEAR(mh / static_cast<double>(h.size()), 1.0, 0.01);
}

TEST(Estimator, MinusOneRemovesWhiteFloor) {
  const auto tr = white_trace(1 << 18, 6);
  EstimatorOptions o;
  o.segments = 64;
  for (auto v : {Variant::T0, Variant::TBar}) {
    const auto s = estimator::rhet_spectrum(tr, -1.0, 0.0, v, o);
    double mean = 0.0, var = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      mean += s.values[i];
      var += s.variance[i];
    }
    const auto n = static_cast<double>(s.size());
    mean /= n;
    // Bins are close to independent; standard error of the band mean.
    const double se = std::sqrt(var) / n;
    EXPECT_LT(std::abs(mean), 3.0 * se + 1e-12) << to_string(v);
  }
}

TEST(Estimator, AutocorrelationRoundTripsToSpectrum) {
  const auto tr = white_trace(4096, 7);
  FilterSpec f;
  f.epsilon = -0.2;
  f.omega_beat = tr.omega_beat;
  f.phase_offset = 0.6;
  for (auto v : {Variant::T0, Variant::TBar}) {
    const auto a = estimator::filtered_autocorr(tr, f, 0, v);
    EXPECT_EQ(a.values.size(), 2049u);
    const auto s = estimator::psd_from_autocorr(a);
    const auto direct = estimator::filtered_spectrum(tr, f, v);
    EXPECT_LT(max_rel(s.values, direct.values), 1e-9);
  }
}

TEST(Estimator, TwoToneOracle) {
  double wm = 0.0;
  const auto tr = two_tone(wm);
  FilterSpec f;
  f.epsilon = -1.0;
  f.omega_beat = tr.omega_beat;
  for (auto mode : {estimator::TbarMode::Harmonic, estimator::TbarMode::Exact}) {
    EstimatorOptions o;
    o.tbar_mode = mode;
    const auto a = estimator::filtered_autocorr(tr, f, 64, Variant::TBar, o);
    double err = 0.0;
    for (std::size_t m = 0; m < a.values.size(); ++m)
      err = std::max(err, std::abs(a.values[m] - 2.0 / kPi * std::cos(wm * a.lags[m])));
    EXPECT_LT(err, 1e-3) << (mode == estimator::TbarMode::Exact ? "exact" : "harmonic");
  }
}

TEST(Estimator, LinearWrapKeepsFloor) {
  const auto tr = white_trace(1 << 16, 8);
  EstimatorOptions o;
  o.segments = 8;
  o.wrap = estimator::Wrap::Linear;
  const auto s = estimator::rhet_spectrum(tr, 1.0, 0.0, Variant::TBar, o);
  EXPECT_EQ(s.size(), 2u * (tr.size() / 8));
  // The bin average is the zero lag, i.e. the sample variance.
  double mean = 0.0, ss = 0.0;
  for (double v : s.values) mean += v;
  for (double v : tr.samples) ss += v * v;
  EXPECT_NEAR(mean / static_cast<double>(s.size()), ss / static_cast<double>(tr.size()), 1e-12);
}

TEST(Estimator, LagWindowAppliedIdentically) {
  const auto tr = white_trace(1 << 14, 9);
  EstimatorOptions o;
  o.segments = 4;
  o.max_lag = 256;
  o.window = estimator::LagWindow::Bartlett;
  const auto a = estimator::rhet_spectrum(tr, 1.0, 0.0, Variant::T0, o);
  const auto b = estimator::rhet_spectrum(tr, 1.0, 1.0, Variant::TBar, o);
  EXPECT_LT(max_rel(a.values, b.values), 1e-10);
}

TEST(Estimator, ArgumentErrors) {
  const auto tr = white_trace(1024, 10);
  EstimatorOptions o;
  o.max_lag = 4096;
  EXPECT_THROW(estimator::rhet_spectrum(tr, -1.0, 0.0, Variant::TBar, o), Error);
  o = {};
  o.segments = 1000;
  EXPECT_THROW(estimator::rhet_spectrum(tr, -1.0, 0.0, Variant::TBar, o), Error);
  o = {};
  o.segments = 0;
  EXPECT_THROW(estimator::rhet_spectrum(tr, -1.0, 0.0, Variant::TBar, o), Error);
  EXPECT_THROW(estimator::rhet_spectrum(tr, -2.0, 0.0, Variant::TBar), Error);
  EXPECT_THROW(estimator::parse_lag_window("triangle"), Error);
}

TEST(Correlation, PartsReproduceFilteredSpectra) {
  const auto c = resonant();
  const auto tr = synth::synth_gaussian_trace(c, 0.05, c.dt, 21);
  EstimatorOptions o;
  o.segments = 8;
  const auto parts = estimator::correlation_parts(tr, tr.omega_beat, true, true, o);
  const auto welch = estimator::standard_psd(tr, 8);
  EXPECT_LT(max_rel(parts.s1, welch.values), 1e-12);
  for (double th : {0.0, 0.9}) {
    const auto s = estimator::rhet_spectrum(tr, -1.0, th, Variant::TBar, o);
    const cplx rot = std::polar(1.0, -2.0 * th);
    std::vector<double> cc(parts.freqs.size());
    for (std::size_t i = 0; i < cc.size(); ++i) cc[i] = 2.0 / kPi * 2.0 * std::real(rot * parts.corr[i]);
    EXPECT_LT(max_rel(cc, s.values), 1e-9);
  }
}

TEST(Correlation, FeaturePlacementByVariant) {
  auto c = resonant();
  c.modes.resize(1);
  const auto tr = synth::synth_gaussian_trace(c, 0.4, c.dt, 22);
  EstimatorOptions o;
  o.segments = 16;
  const double wm = c.modes[0].omega_m, g = c.modes[0].gamma, wb = c.omega_beat;
  mapper::PeakOptions po;
  po.signed_extremum = true;
  po.fit_bins = 8;
  const auto tbar = estimator::rhet_spectrum(tr, -1.0, kPi / 2, Variant::TBar, o);
  const auto pt = mapper::find_peak(tbar.freqs, tbar.values, wm, 0.8 * wb, po);
  EXPECT_NEAR(pt.location, wm, g / 4);
  const auto t0 = estimator::rhet_spectrum(tr, -1.0, kPi / 2, Variant::T0, o);
  const auto lo = mapper::find_peak(t0.freqs, t0.values, wm - wb, 0.4 * wb, po);
  const auto hi = mapper::find_peak(t0.freqs, t0.values, wm + wb, 0.4 * wb, po);
  EXPECT_NEAR(lo.location, wm - wb, g / 4);
  EXPECT_NEAR(hi.location, wm + wb, g / 4);
  // Nothing comparable at ω_M in t0.
  EXPECT_LT(std::abs(t0.values[t0.nearest(wm)]), 0.3 * std::abs(lo.value));
}
