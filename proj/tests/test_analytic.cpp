#include <gtest/gtest.h>

#include <algorithm>

#include "rhet/rhet.hpp"

using namespace rhet;
using namespace rhet::analytic;

namespace {

ExperimentConfig resonant_thermal() {
  auto c = experiment_preset();
  c.detuning = 0.0;
  return c;
}

// Detuned, weakly thermal, with radiation-pressure backaction: squeezes.
ExperimentConfig squeezing_config() {
  auto c = experiment_preset();
  c.modes.resize(1);
  c.modes[0].nbar = 10.0;
  c.modes[0].coupling = hz_to_rad(20e3);
  c.backaction_weight = 1.0;
  return c;
}

std::vector<double> around(double center, double halfwidth, int n) {
  std::vector<double> f(static_cast<std::size_t>(2 * n + 1));
  for (int k = -n; k <= n; ++k) f[static_cast<std::size_t>(k + n)] = center + halfwidth * k / n;
  return f;
}

}  // namespace

TEST(Susceptibility, MechanicalClosedForms) {
  const auto m = experiment_preset().modes[0];
  const cplx c0 = mech_susceptibility(0.0, m);
  EXPECT_NEAR(c0.imag(), 0.0, 1e-30);
  EXPECT_DOUBLE_EQ(c0.real(), 1.0 / (m.mass * m.omega_m * m.omega_m));
  const cplx cr = mech_susceptibility(m.omega_m, m);
  EXPECT_NEAR(std::arg(cr), kPi / 2, 1e-12);
  EXPECT_NEAR(std::abs(cr), 1.0 / (m.mass * m.gamma * m.omega_m), 1e-12 * std::abs(cr));
  EXPECT_NEAR(std::abs(cr) / std::abs(c0), 378.16 / 4.56, 1e-9);
  EXPECT_NEAR(std::abs(cr) / std::abs(c0), 82.93, 0.01);
}

TEST(Susceptibility, CavityClosedForms) {
  const double k = hz_to_rad(1.3e6);
  EXPECT_NEAR(std::abs(cavity_susceptibility(0.0, k, 0.0) - 1.0 / k), 0.0, 1e-20);
  const cplx c = cavity_susceptibility(k, k, 0.0);
  // [κ - iκ]^{-1} = (1 + i)/(2κ).
  EXPECT_NEAR(std::abs(std::arg(c)), kPi / 4, 1e-12);
  EXPECT_NEAR(std::arg(c), kPi / 4, 1e-12);
  EXPECT_NEAR(std::abs(c), 1.0 / (std::sqrt(2.0) * k), 1e-18);
  // Half power at Δ + ω = ±κ, for any detuning.
  const double d = hz_to_rad(-300e3);
  EXPECT_NEAR(std::norm(cavity_susceptibility(k - d, k, d)) * k * k, 0.5, 1e-12);
}

TEST(FieldSpectra, DecoupledIsVacuum) {
  auto c = experiment_preset();
  for (auto& m : c.modes) m.coupling = 0.0;
  const auto f = around(0.0, hz_to_rad(2e6), 400);
  const auto fs = field_spectra(c, f);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    EXPECT_NEAR(fs.s_aadag[i], 1.0, 1e-14);
    EXPECT_NEAR(fs.s_adaga[i], 0.0, 1e-14);
    EXPECT_NEAR(std::abs(fs.s_aa[i]), 0.0, 1e-14);
  }
  const auto het = heterodyne_psd(c, f);
  for (double v : het.values) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(FieldSpectra, StokesAntiStokesRatio) {
  auto c = resonant_thermal();
  c.modes.resize(1);
  const double wm = c.modes[0].omega_m;
  for (double nbar : {1.0, 10.0, 1e5}) {
    c.modes[0].nbar = nbar;
    const auto fs = field_spectra(c, {-wm, wm});
    // S_a†a(-ω_M) is the Stokes line (n̄+1), S_a†a(+ω_M) anti-Stokes (n̄).
    EXPECT_NEAR(fs.s_adaga[0] / fs.s_adaga[1], (nbar + 1.0) / nbar, 1e-9 * (nbar + 1.0) / nbar);
  }
}

TEST(FieldSpectra, GroundStateHasNoAntiStokes) {
  auto c = resonant_thermal();
  c.modes.resize(1);
  c.modes[0].nbar = 0.0;
  const double wm = c.modes[0].omega_m;
  FieldScratch scratch;
  EXPECT_GT(field_point(c, -wm, scratch).s_adaga, 1e-6);
  EXPECT_EQ(field_point(c, wm, scratch).s_adaga, 0.0);
  // Without backaction the symmetrised S_aa stays finite where S_a†a is
  // exactly zero, so the bound is broken and the config is refused.
  EXPECT_THROW(field_spectra(c, {-wm, wm}), Error);
  c.backaction_weight = 1.0;
  c.modes[0].coupling = hz_to_rad(20e3);
  EXPECT_NO_THROW(field_spectra(c, {-wm, wm}));
}

TEST(FieldSpectra, PhysicalityHoldsAcrossRegimes) {
  for (double det : {-300e3, 0.0, 300e3})
    for (double w : {0.0, 1.0})
      for (double nbar : {1.0, 1e3, 1e5}) {
        auto c = experiment_preset();
        c.detuning = hz_to_rad(det);
        c.backaction_weight = w;
        for (auto& m : c.modes) m.nbar = nbar;
        const auto f = analytic_grid(c, 4);
        FieldScratch scratch;
        for (double nu : f) ASSERT_TRUE(physical(field_point(c, nu, scratch))) << det << " " << w << " " << nbar;
      }
}

TEST(FieldSpectra, UnphysicalModelIsReported) {
  // Detuned pure-state backaction: the linearised model overshoots the
  // Cauchy-Schwarz bound slightly and must be refused, not synthesised.
  auto c = experiment_preset();
  c.modes.resize(1);
  c.modes[0].nbar = 0.0;
  c.modes[0].coupling = hz_to_rad(20e3);
  c.backaction_weight = 1.0;
  try {
    field_spectra(c, around(c.modes[0].omega_m, 20 * c.modes[0].gamma, 400));
    FAIL() << "expected Physicality";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Physicality);
    EXPECT_NE(std::string(e.what()).find("physicality violated at"), std::string::npos);
  }
}

TEST(Homodyne, PeriodicInThetaAndFlatWithoutCorrelations) {
  const auto c = experiment_preset();
  const auto fs = field_spectra(c, around(c.modes[0].omega_m, 10 * c.modes[0].gamma, 200));
  for (double th : {0.0, 0.3, 1.1}) {
    const auto a = homodyne_psd(fs, th);
    const auto b = homodyne_psd(fs, th + kPi);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-9 * std::abs(a.values[i]));
  }
  auto z = fs;
  std::fill(z.s_aa.begin(), z.s_aa.end(), cplx(0.0));
  const auto a = homodyne_psd(z, 0.0), b = homodyne_psd(z, 1.0);
  EXPECT_EQ(a.values, b.values);
}

TEST(Homodyne, ThermalNeverBelowFloor) {
  const auto c = experiment_preset();
  const auto fs = field_spectra(c, analytic_grid(c, 4));
  for (int t = 0; t < 36; ++t)
    for (double v : homodyne_psd(fs, kPi * t / 36).values) EXPECT_GE(v, 1.0 - 1e-12);
}

TEST(Homodyne, BackactionSqueezesBelowShotNoise) {
  const auto c = squeezing_config();
  const auto fs = field_spectra(c, around(c.modes[0].omega_m, 4 * c.modes[0].gamma, 400));
  double mn = 1e300;
  for (int t = 0; t < 180; ++t)
    for (double v : homodyne_psd(fs, kPi * t / 180).values) mn = std::min(mn, v);
  EXPECT_LT(mn, 0.995);
}

TEST(Heterodyne, SymmetricInFrequency) {
  for (auto c : {experiment_preset(), resonant_thermal(), squeezing_config()}) {
    const auto f = analytic_grid(c, 10);
    const auto s = heterodyne_psd(c, f);
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(s.values[i], s.values[n - 1 - i], 1e-9 * s.values[i]);
  }
}

TEST(Heterodyne, GridAndGridFreeAgree) {
  const auto c = experiment_preset();
  const auto f = analytic_grid(c, 10);
  const auto grid = heterodyne_psd(field_spectra(c, f), c.omega_beat);
  const auto direct = heterodyne_psd(c, grid.freqs);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(grid.values[i], direct.values[i], 1e-9 * direct.values[i]);
}

TEST(Heterodyne, FloorApproachedFarFromSidebands) {
  const auto c = experiment_preset();
  std::vector<double> f;
  for (double hz = 1.0e6; hz <= 2.2e6; hz += 10e3) f.push_back(hz_to_rad(hz));
  const auto s = heterodyne_psd(c, f);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_GT(s.values[i], 1.0);
    EXPECT_LT(s.values[i] - 1.0, 3e-3);
    if (i > 0) {
      EXPECT_LT(s.values[i], s.values[i - 1]);
    }
  }
  EXPECT_LT(s.values.back() - 1.0, 1e-4);
}

TEST(Heterodyne, CombinedSidebandsAreHalfTheHomodyneMaximum) {
  auto c = resonant_thermal();
  c.modes.resize(1);
  const double wm = c.modes[0].omega_m;
  const auto f = around(wm, 10 * c.modes[0].gamma, 2000);
  const auto fs = field_spectra(c, f);
  double homo_max = 0.0;
  for (int t = 0; t < 720; ++t)
    for (double v : homodyne_psd(fs, kPi * t / 720).values) homo_max = std::max(homo_max, v - 1.0);
  // Sideband heights are the two terms of the heterodyne sum above floor.
  double up = 0.0, down = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    up = std::max(up, fs.s_aadag[i] - 1.0);
    down = std::max(down, fs.s_adaga[i]);
  }
  EXPECT_NEAR((up + down) / homo_max, 0.5, 1e-6);
}

TEST(Filter, Coefficients) {
  EXPECT_DOUBLE_EQ(filter_coefficient(1.0, 0), 1.0);
  EXPECT_DOUBLE_EQ(filter_coefficient(1.0, 1), 0.0);
  EXPECT_DOUBLE_EQ(filter_coefficient(-1.0, 0), 0.0);
  EXPECT_DOUBLE_EQ(filter_coefficient(-1.0, 1), 2.0 / kPi);
  EXPECT_DOUBLE_EQ(filter_coefficient(0.0, 0), 0.5);
  EXPECT_DOUBLE_EQ(filter_coefficient(0.0, 1), 1.0 / kPi);
  EXPECT_DOUBLE_EQ(filter_coefficient(-1.0, 2), 0.0);
  EXPECT_DOUBLE_EQ(filter_coefficient(-1.0, 3), -2.0 / (3.0 * kPi));
  EXPECT_THROW(filter_coefficient(0.0, -1), Error);
}

TEST(Prediction, PlusOneIsHeterodyne) {
  const auto c = experiment_preset();
  const auto f = analytic_grid(c, 10);
  const auto het = heterodyne_psd(c, f);
  for (auto v : {Variant::T0, Variant::TBar}) {
    const auto r = rhet_prediction(c, f, 0.7, 1.0, v);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_DOUBLE_EQ(r.values[i], het.values[i]);
  }
}

TEST(Prediction, MinusOneHasNoFloor) {
  auto c = experiment_preset();
  std::vector<double> f;
  for (double hz = 1.0e6; hz <= 2.2e6; hz += 50e3) f.push_back(hz_to_rad(hz));
  const auto het = heterodyne_psd(c, f);
  for (auto v : {Variant::T0, Variant::TBar})
    for (double th : {0.0, 0.7, kPi / 2}) {
      const auto r = rhet_prediction(c, f, th, -1.0, v);
      // Only the sideband tails survive; the unit floor is gone.
      for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LT(std::abs(r.values[i]), het.values[i] - 1.0);
    }
  for (auto& m : c.modes) m.coupling = 0.0;
  for (auto v : {Variant::T0, Variant::TBar})
    for (double x : rhet_prediction(c, f, 0.3, -1.0, v).values) EXPECT_EQ(x, 0.0);
}

TEST(Prediction, AffineInEpsilon) {
  const auto c = experiment_preset();
  const auto f = analytic_grid(c, 10);
  for (auto v : {Variant::T0, Variant::TBar}) {
    const auto p = rhet_prediction(c, f, 0.4, 1.0, v);
    const auto m = rhet_prediction(c, f, 0.4, -1.0, v);
    for (double eps : {-0.5, 0.0, 0.5}) {
      const auto e = rhet_prediction(c, f, 0.4, eps, v);
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double want = 0.5 * (1 + eps) * p.values[i] + 0.5 * (1 - eps) * m.values[i];
        EXPECT_NEAR(e.values[i], want, 1e-12 * std::max(1.0, std::abs(want)));
      }
    }
  }
}

TEST(Prediction, TbarAtMechanicalFrequencyT0AtSidebands) {
  auto c = resonant_thermal();
  c.modes.resize(1);
  const double wm = c.modes[0].omega_m, wb = c.omega_beat;
  const auto f = around(wm, 3 * wb, 3000);
  auto argmax = [&](const Spectrum& s) {
    std::size_t b = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (std::abs(s.values[i]) > std::abs(s.values[b])) b = i;
    return s.freqs[b];
  };
  const auto tbar = rhet_prediction(c, f, kPi / 2, -1.0, Variant::TBar);
  EXPECT_NEAR(argmax(tbar), wm, c.modes[0].gamma / 4);
  const auto t0 = rhet_prediction(c, f, kPi / 2, -1.0, Variant::T0);
  const double loc = argmax(t0);
  EXPECT_NEAR(std::min(std::abs(loc - (wm - wb)), std::abs(loc - (wm + wb))), 0.0, c.modes[0].gamma / 4);
}

TEST(SignConvention, TwoToneOracleMatchesDocumentedConvention) {
  const auto cal = sign_convention_calibration();
  EXPECT_EQ(cal.theta_sense, kSignCalibration.theta_sense);
  EXPECT_EQ(cal.corr_sign, kSignCalibration.corr_sign);
}

TEST(SignConvention, ZeroPhaseToneMaximisesAtZero) {
  const auto r = two_tone_response(0.0, 0.0, 90);
  EXPECT_NEAR(std::abs(wrap_pi(2 * r.theta_max)) / 2, 0.0, kPi / 90 + 1e-12);
  EXPECT_GT(r.peak, 0.0);
}
