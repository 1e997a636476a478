#include <gtest/gtest.h>

#include "rhet/rhet.hpp"

using namespace rhet;

namespace {

ExperimentConfig resonant_single() {
  auto c = experiment_preset();
  c.detuning = 0.0;
  c.modes.resize(1);
  return c;
}

std::vector<double> around(double center, double halfwidth, int n) {
  std::vector<double> f(static_cast<std::size_t>(2 * n + 1));
  for (int k = -n; k <= n; ++k) f[static_cast<std::size_t>(k + n)] = center + halfwidth * k / n;
  return f;
}

mapper::MapOptions map_options(std::size_t segments, double lo, double hi) {
  mapper::MapOptions o;
  o.est.segments = segments;
  o.band_lo = lo;
  o.band_hi = hi;
  return o;
}

}  // namespace

TEST(ThetaGrid, HalfOpenOverPi) {
  const auto t = mapper::theta_grid(4);
  ASSERT_EQ(t.size(), 4u);
  EXPECT_DOUBLE_EQ(t[0], 0.0);
  EXPECT_DOUBLE_EQ(t[2], kPi / 2);
  EXPECT_LT(t.back(), kPi);
  EXPECT_THROW(mapper::theta_grid(1), Error);
}

TEST(ThetaMap, FastEqualsExactForTbar) {
  const auto c = resonant_single();
  const auto tr = synth::synth_gaussian_trace(c, 0.02, c.dt, 3);
  const auto o = map_options(4, hz_to_rad(350e3), hz_to_rad(400e3));
  const auto fast = mapper::theta_map_fast(tr, -1.0, 8, Variant::TBar, o);
  const auto exact = mapper::theta_map_exact(tr, -1.0, 8, Variant::TBar, o);
  ASSERT_EQ(fast.freqs, exact.freqs);
  ASSERT_EQ(fast.values.size(), exact.values.size());
  double scale = 0.0;
  for (double v : exact.values) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < fast.values.size(); ++i) EXPECT_NEAR(fast.values[i], exact.values[i], 1e-9 * scale);
}

TEST(ThetaMap, FastTracksExactForT0) {
  const auto c = resonant_single();
  const auto tr = synth::synth_gaussian_trace(c, 0.4, c.dt, 3);
  const auto o = map_options(128, hz_to_rad(350e3), hz_to_rad(400e3));
  const auto fast = mapper::theta_map_fast(tr, -1.0, 8, Variant::T0, o);
  const auto exact = mapper::theta_map_exact(tr, -1.0, 8, Variant::T0, o);
  ASSERT_EQ(fast.values.size(), exact.values.size());
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < fast.values.size(); ++i) {
    diff += (fast.values[i] - exact.values[i]) * (fast.values[i] - exact.values[i]);
    ref += exact.values[i] * exact.values[i];
  }
  // The fast path keeps only the fundamental window harmonic. The dropped
  // harmonics have zero mean but add noise falling as ~0.18/sqrt(segments).
  EXPECT_LT(std::sqrt(diff / ref), 0.02);
}

TEST(ThetaMap, EpsilonOneRowsAreIdentical) {
  const auto c = resonant_single();
  const auto tr = synth::synth_gaussian_trace(c, 0.01, c.dt, 4);
  const auto m = mapper::theta_map_fast(tr, 1.0, 6, Variant::TBar, map_options(2, 0.0, hz_to_rad(1e6)));
  for (std::size_t r = 1; r < m.rows(); ++r)
    for (std::size_t j = 0; j < m.cols(); ++j) EXPECT_EQ(m.at(r, j), m.at(0, j));
}

TEST(ThetaMap, EmptyBandIsAGridError) {
  const auto c = resonant_single();
  const auto tr = synth::synth_gaussian_trace(c, 0.005, c.dt, 4);
  try {
    mapper::theta_map_fast(tr, -1.0, 4, Variant::TBar, map_options(1, 1.0, 1.0 + 1e-9));
    FAIL() << "expected Grid";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Grid);
  }
}

TEST(Normalize, DividesAndRecordsReference) {
  ThetaMap m;
  m.thetas = {0.0, 1.0};
  m.freqs = {1.0, 2.0};
  m.values = {2.0, 4.0, -6.0, 8.0};
  const auto n = mapper::normalize_map(m, 2.0);
  EXPECT_EQ(n.values, (std::vector<double>{1.0, 2.0, -3.0, 4.0}));
  EXPECT_DOUBLE_EQ(n.normalization, 2.0);
  EXPECT_THROW(mapper::normalize_map(m, 0.0), Error);
  EXPECT_DOUBLE_EQ(mapper::reference_for(mapper::Normalization::None, 5.0, -1.0), 1.0);
  EXPECT_DOUBLE_EQ(mapper::reference_for(mapper::Normalization::Het, 5.0, -1.0), 5.0);
  EXPECT_DOUBLE_EQ(mapper::reference_for(mapper::Normalization::HetGain, 5.0, 0.0), 2.5);
  EXPECT_EQ(mapper::parse_normalization("het-gain"), mapper::Normalization::HetGain);
  EXPECT_THROW(mapper::parse_normalization("max"), Error);
}

TEST(FindPeak, QuadraticFitIsExactOnAParabola) {
  std::vector<double> f, v;
  for (int k = 0; k <= 100; ++k) {
    f.push_back(k);
    v.push_back(7.0 - 0.01 * (k - 42.3) * (k - 42.3));
  }
  mapper::PeakOptions o;
  o.fit_bins = 4;
  const auto p = mapper::find_peak(f, v, 50.0, 20.0, o);
  EXPECT_NEAR(p.value, 7.0, 1e-9);
  EXPECT_NEAR(p.location, 42.3, 1e-9);
  EXPECT_THROW(mapper::find_peak(f, v, 95.0, 20.0, o), Error);
}

TEST(FindPeak, SignedExtremumKeepsTheSign) {
  std::vector<double> f, v;
  for (int k = 0; k <= 100; ++k) {
    f.push_back(k);
    v.push_back(-5.0 + 0.02 * (k - 60.0) * (k - 60.0));
  }
  mapper::PeakOptions o;
  o.signed_extremum = true;
  o.fit_bins = 3;
  const auto p = mapper::find_peak(f, v, 60.0, 10.0, o);
  EXPECT_NEAR(p.value, -5.0, 1e-9);
  EXPECT_NEAR(p.location, 60.0, 1e-9);
}

TEST(ZeroContour, ThermalContourIsVertical) {
  auto c = experiment_preset();
  c.detuning = 0.0;
  const auto& m0 = c.modes[0];
  const auto f = around(m0.omega_m, m0.gamma, 40);
  const auto m = mapper::analytic_map(c, f, -1.0, 400, Variant::TBar);
  const auto z = mapper::zero_contour(m, m0.omega_m - m0.gamma / 2, m0.omega_m + m0.gamma / 2);
  EXPECT_GT(z.omega.size(), 10u);
  EXPECT_LT(z.delta_theta, 1.0 * kPi / 180);
}

TEST(ZeroContour, BackactionRotatesTheContour) {
  auto c = experiment_preset();
  c.detuning = 0.0;
  c.modes.resize(1);
  c.modes[0].nbar = 0.0;
  c.modes[0].coupling = hz_to_rad(20e3);
  c.backaction_weight = 1.0;
  const auto& m0 = c.modes[0];
  const auto f = around(m0.omega_m, m0.gamma, 40);
  const auto m = mapper::analytic_map(c, f, -1.0, 400, Variant::TBar);
  const auto z = mapper::zero_contour(m, m0.omega_m - m0.gamma / 2, m0.omega_m + m0.gamma / 2);
  EXPECT_GT(z.delta_theta, 10.0 * kPi / 180);
  EXPECT_NE(z.slope, 0.0);
}

TEST(ZeroContour, FlatMapHasNoSignChange) {
  ThetaMap m;
  m.thetas = mapper::theta_grid(8);
  m.freqs = {1.0, 2.0, 3.0};
  m.values.assign(24, 1.0);
  try {
    mapper::zero_contour(m, 0.0, 4.0);
    FAIL() << "expected Signal";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("no sign change in band"), std::string::npos);
  }
}

TEST(AnalyticMap, RowsMatchPrediction) {
  const auto c = resonant_single();
  const auto& m0 = c.modes[0];
  const auto f = around(m0.omega_m, 2 * m0.gamma, 20);
  const auto m = mapper::analytic_map(c, f, -0.5, 8, Variant::T0);
  for (std::size_t r = 0; r < m.rows(); r += 3) {
    const auto p = analytic::rhet_prediction(c, f, m.thetas[r], -0.5, Variant::T0);
    for (std::size_t j = 0; j < f.size(); ++j) EXPECT_NEAR(m.at(r, j), p.values[j], 1e-9 * std::abs(p.values[j]) + 1e-12);
  }
}
