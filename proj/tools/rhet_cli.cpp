// rhet: synthesis, filtered spectra, θ maps, analytic predictions and
// comparison reports. Exit codes: 0 ok, 1 compare failed, 2 usage/config,
// 3 io/format, 4 signal (e.g. no beat note for the lock-in).
#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "rhet/rhet.hpp"

namespace {

using namespace rhet;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Io:
    case ErrorKind::Format: return 3;
    case ErrorKind::Signal: return 4;
    default: return 2;
  }
}

// "LO:HI" in Hz -> rad/s.
std::pair<double, double> parse_band(const std::string& s) {
  const auto c = s.find(':');
  if (c == std::string::npos) throw Error(ErrorKind::Usage, "band must be LO:HI in Hz, got '" + s + "'");
  double lo, hi;
  try {
    lo = std::stod(s.substr(0, c));
    hi = std::stod(s.substr(c + 1));
  } catch (const std::exception&) {
    throw Error(ErrorKind::Usage, "band must be LO:HI in Hz, got '" + s + "'");
  }
  if (!(lo < hi)) throw Error(ErrorKind::Usage, "band must satisfy LO < HI");
  return {hz_to_rad(lo), hz_to_rad(hi)};
}

struct EstFlags {
  std::size_t segments = 64;
  std::size_t max_lag = 0;
  std::string lag_window = "rect";
  std::string wrap = "circular";
  int harmonics = 1;
  bool exact_tbar = false;
  unsigned workers = 0;

  void add(CLI::App* c) {
    c->add_option("--segments", segments, "Welch segments")->check(CLI::PositiveNumber);
    c->add_option("--max-lag", max_lag, "lag truncation in samples (0 = default)");
    c->add_option("--lag-window", lag_window, "rect|bartlett|hann");
    c->add_option("--wrap", wrap, "circular|linear");
    c->add_option("--harmonics", harmonics, "highest odd window harmonic kept (tbar)");
    c->add_flag("--exact-tbar", exact_tbar, "evaluate the tbar lag sums literally");
    c->add_option("--workers", workers, "worker threads (0 = RHET_THREADS or all cores)");
  }

  estimator::EstimatorOptions options() const {
    estimator::EstimatorOptions o;
    o.segments = segments;
    o.max_lag = max_lag;
    o.window = estimator::parse_lag_window(lag_window);
    if (wrap == "circular") o.wrap = estimator::Wrap::Circular;
    else if (wrap == "linear") o.wrap = estimator::Wrap::Linear;
    else throw Error(ErrorKind::Usage, "unknown wrap '" + wrap + "' (expected circular|linear)");
    o.harmonics = harmonics;
    o.tbar_mode = exact_tbar ? estimator::TbarMode::Exact : estimator::TbarMode::Harmonic;
    o.workers = workers;
    return o;
  }
};

std::string summary_line(const TimeTrace& tr, const ExperimentConfig& cfg) {
  double ss = 0.0;
  for (double v : tr.samples) ss += v * v;
  std::ostringstream os;
  os << "{\"modes\": " << cfg.modes.size() << ", \"omega_beat_hz\": " << rad_to_hz(tr.omega_beat)
     << ", \"n_samples\": " << tr.size() << ", \"dt\": " << tr.dt
     << ", \"rms\": " << std::sqrt(ss / static_cast<double>(std::max<std::size_t>(1, tr.size()))) << "}";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rhet: rotating-filter heterodyne spectra"};
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", std::string("rhet ") + io::kToolVersion + " (config schema " +
                                        std::to_string(io::kConfigSchemaVersion) + ", trace format " +
                                        std::to_string(io::kTraceVersion) + ")");

  // synth
  auto* synth = app.add_subcommand("synth", "synthesize a seeded Gaussian photocurrent trace");
  std::string s_config, s_out;
  std::uint64_t s_seed = 0;
  double s_duration = 0.0, s_pilot = 0.0;
  std::optional<double> s_drift_amp, s_drift_freq;
  synth->add_option("--config", s_config, "experiment config (JSON)")->required();
  synth->add_option("--out", s_out, "output trace file")->required();
  synth->add_option("--seed", s_seed, "RNG seed")->required();
  synth->add_option("--duration", s_duration, "seconds")->required();
  synth->add_option("--drift-amp", s_drift_amp, "LO phase drift amplitude, rad");
  synth->add_option("--drift-freq", s_drift_freq, "LO phase drift frequency, Hz");
  synth->add_option("--pilot", s_pilot, "coherent carrier field amplitude (enables the lock-in)");

  // spectrum
  auto* spec = app.add_subcommand("spectrum", "Welch or filtered spectrum of a trace");
  std::string p_in, p_out, p_mode = "rhet", p_variant = "tbar", p_data_window = "rect";
  double p_eps = 1.0, p_theta = 0.0, p_bw = 200.0;
  bool p_lockin = false;
  EstFlags p_est;
  spec->add_option("--in", p_in, "input trace")->required();
  spec->add_option("--out", p_out, "output CSV")->required();
  spec->add_option("--mode", p_mode, "welch|rhet");
  spec->add_option("--epsilon", p_eps, "filter epsilon in [-1, 1]");
  spec->add_option("--theta", p_theta, "filter quadrature, rad");
  spec->add_option("--variant", p_variant, "t0|tbar");
  spec->add_option("--data-window", p_data_window, "rect|hann (welch mode)");
  spec->add_flag("--lockin", p_lockin, "correct LO phase drift with the numerical lock-in");
  spec->add_option("--lockin-bw", p_bw, "lock-in bandwidth, Hz");
  p_est.add(spec);

  // map
  auto* map = app.add_subcommand("map", "theta-resolved filtered spectra");
  std::string m_in, m_out, m_variant = "tbar", m_norm = "none", m_band = "0:1e6", m_format = "csv";
  double m_eps = -1.0, m_ref_hz = 378.16e3, m_ref_halfwidth_hz = 15e3, m_fit_hz = 1100.0;
  std::size_t m_thetas = mapper::kDefaultThetas;
  bool m_fast = false, m_exact = false;
  EstFlags m_est;
  map->add_option("--in", m_in, "input trace")->required();
  map->add_option("--out", m_out, "output map")->required();
  map->add_option("--epsilon", m_eps, "filter epsilon in [-1, 1]");
  map->add_option("--thetas", m_thetas, "number of theta rows over [0, pi)");
  map->add_option("--variant", m_variant, "t0|tbar");
  auto* fast_flag = map->add_flag("--fast", m_fast, "one pass + per-row combination (default)");
  map->add_flag("--exact", m_exact, "one full estimator run per row")->excludes(fast_flag);
  map->add_option("--normalize", m_norm, "none|het|het-gain");
  map->add_option("--ref-hz", m_ref_hz, "heterodyne reference peak used by --normalize, Hz");
  map->add_option("--ref-halfwidth-hz", m_ref_halfwidth_hz, "search half-width around --ref-hz");
  map->add_option("--fit-hz", m_fit_hz, "half-width of the peak fit, Hz");
  map->add_option("--band", m_band, "LO:HI frequency band, Hz");
  map->add_option("--format", m_format, "csv|bin");
  m_est.add(map);

  // analytic
  auto* ana = app.add_subcommand("analytic", "analytic homodyne/heterodyne/filtered spectra");
  std::string a_config, a_out, a_what = "het", a_variant = "tbar";
  double a_theta = 0.0, a_eps = 1.0;
  int a_bins = 20;
  ana->add_option("--config", a_config, "experiment config (JSON)")->required();
  ana->add_option("--out", a_out, "output CSV")->required();
  ana->add_option("--what", a_what, "homo|het|rhet");
  ana->add_option("--theta", a_theta, "quadrature, rad");
  ana->add_option("--epsilon", a_eps, "filter epsilon (rhet)");
  ana->add_option("--variant", a_variant, "t0|tbar (rhet)");
  ana->add_option("--bins-per-gamma", a_bins, "grid density")->check(CLI::PositiveNumber);

  // compare
  auto* cmp = app.add_subcommand("compare", "compare two spectra over a band");
  std::string c_a, c_b, c_band, c_report;
  io::CompareThresholds c_th;
  cmp->add_option("--a", c_a, "spectrum CSV under test")->required();
  cmp->add_option("--b", c_b, "reference spectrum CSV")->required();
  cmp->add_option("--band", c_band, "LO:HI, Hz")->required();
  cmp->add_option("--report", c_report, "JSON report path (stdout if omitted)");
  cmp->add_option("--min-correlation", c_th.min_correlation, "pass threshold on Pearson correlation");
  cmp->add_option("--max-peak-error", c_th.max_peak_error, "pass threshold on relative peak error");

  // lockin
  auto* lock = app.add_subcommand("lockin", "recover the LO phase from the beat note");
  std::string l_in, l_out;
  double l_bw = 200.0;
  lock->add_option("--in", l_in, "input trace")->required();
  lock->add_option("--out", l_out, "output phase CSV")->required();
  lock->add_option("--bw", l_bw, "bandwidth, Hz");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*synth) {
      auto cfg = io::read_config(s_config);
      synth::SynthOptions o;
      o.pilot = s_pilot;
      if (s_drift_amp || s_drift_freq) {
        PhaseDriftSpec d = cfg.drift;
        if (s_drift_amp) d.amplitude = *s_drift_amp;
        if (s_drift_freq) d.freq = *s_drift_freq;
        o.drift = d;
      }
      const auto tr = synth::synth_gaussian_trace(cfg, s_duration, cfg.dt, s_seed, o);
      io::write_trace(s_out, tr);
      std::cout << summary_line(tr, cfg) << "\n";
    } else if (*spec) {
      const auto tr = io::read_trace(p_in);
      Spectrum s;
      if (p_mode == "welch") {
        if (p_lockin) throw Error(ErrorKind::Usage, "--lockin applies to --mode rhet only");
        s = estimator::standard_psd(tr, p_est.segments, estimator::parse_data_window(p_data_window), p_est.workers);
      } else if (p_mode == "rhet") {
        const auto v = parse_variant(p_variant);
        const auto o = p_est.options();
        if (p_lockin) {
          lockin::LockinOptions lo;
          lo.bandwidth_hz = p_bw;
          const auto d = lockin::demodulate_full(tr, tr.omega_beat, lo);
          s = lockin::correct_and_estimate(tr, d.phase, p_eps, p_theta, v, o);
        } else {
          s = estimator::rhet_spectrum(tr, p_eps, p_theta, v, o);
        }
      } else {
        throw Error(ErrorKind::Usage, "unknown mode '" + p_mode + "' (expected welch|rhet)");
      }
      io::write_spectrum(p_out, s);
    } else if (*map) {
      const auto tr = io::read_trace(m_in);
      const auto v = parse_variant(m_variant);
      const auto norm = mapper::parse_normalization(m_norm);
      if (m_format != "csv" && m_format != "bin") throw Error(ErrorKind::Usage, "unknown format (expected csv|bin)");
      mapper::MapOptions o;
      o.est = m_est.options();
      std::tie(o.band_lo, o.band_hi) = parse_band(m_band);
      ThetaMap m;
      double het_peak = 0.0;
      auto het_of = [&](const std::vector<double>& f, const std::vector<double>& s) {
        mapper::PeakOptions po;
        const double df = f.size() > 1 ? f[1] - f[0] : 1.0;
        po.fit_bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(hz_to_rad(m_fit_hz) / df)));
        return mapper::find_peak(f, s, hz_to_rad(m_ref_hz), hz_to_rad(m_ref_halfwidth_hz), po).value;
      };
      if (m_exact) {
        m = mapper::theta_map_exact(tr, m_eps, m_thetas, v, o);
        if (norm != mapper::Normalization::None) {
          const auto w = estimator::rhet_spectrum(tr, 1.0, 0.0, v, o.est);
          het_peak = het_of(w.freqs, w.values);
        }
      } else {
        const auto parts =
            estimator::correlation_parts(tr, tr.omega_beat, v == Variant::TBar, v == Variant::T0, o.est);
        m = mapper::theta_map_from_parts(parts, m_eps, m_thetas, v, o.band_lo, o.band_hi, o.est.workers);
        if (norm != mapper::Normalization::None) het_peak = het_of(parts.freqs, parts.s1);
      }
      if (norm != mapper::Normalization::None) m = mapper::normalize_map(m, mapper::reference_for(norm, het_peak, m_eps));
      if (m_format == "bin") {
        io::write_atomic(m_out, io::encode_map_binary(m));
      } else {
        std::ostringstream h;
        h << "# epsilon: " << io::detail::fmt(m_eps) << "\n# variant: " << to_string(v) << "\n# path: "
          << (m_exact ? "exact" : "fast") << "\n# normalize: " << m_norm << "\n# segments: " << o.est.segments << "\n";
        io::write_map(m_out, m, h.str());
      }
    } else if (*ana) {
      auto cfg = io::read_config(a_config);
      require_valid(cfg);
      const auto grid = analytic::analytic_grid(cfg, a_bins);
      Spectrum s;
      if (a_what == "homo") {
        s = analytic::homodyne_psd(cfg, grid, a_theta);
      } else if (a_what == "het") {
        s = analytic::heterodyne_psd(cfg, grid);
      } else if (a_what == "rhet") {
        s = analytic::rhet_prediction(cfg, grid, a_theta, a_eps, parse_variant(a_variant));
      } else {
        throw Error(ErrorKind::Usage, "unknown --what '" + a_what + "' (expected homo|het|rhet)");
      }
      io::write_spectrum(a_out, s);
    } else if (*cmp) {
      const auto a = io::read_spectrum(c_a);
      const auto b = io::read_spectrum(c_b);
      const auto [lo, hi] = parse_band(c_band);
      const auto r = io::compare_spectra(a, b, lo, hi, c_th);
      const auto text = io::report_json(r, c_th).dump(2) + "\n";
      if (c_report.empty()) std::cout << text;
      else io::write_atomic(c_report, text);
      return r.pass ? 0 : 1;
    } else if (*lock) {
      const auto tr = io::read_trace(l_in);
      lockin::LockinOptions lo;
      lo.bandwidth_hz = l_bw;
      const auto d = lockin::demodulate_full(tr, tr.omega_beat, lo);
      io::write_phase(l_out, d.phase);
      std::cout << "{\"snr\": " << d.snr << ", \"samples\": " << d.phase.times.size() << "}\n";
    } else {
      std::cout << app.help();
      return 2;
    }
  } catch (const Error& e) {
    std::cerr << "rhet: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "rhet: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
