#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rhet/types.hpp"

namespace rhet::io {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kConfigSchemaVersion = 1;
inline constexpr std::uint32_t kTraceVersion = 1;
inline constexpr std::size_t kTraceHeaderBytes = 72;

// Writes via a sibling temporary file and rename, so readers never see a
// partial file.
inline void write_atomic(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot rename into place: " + path);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- binary trace -------------------------------------------------------

namespace detail {

template <typename T>
void put_le(std::string& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  out.append(reinterpret_cast<const char*>(b), sizeof(T));
}

template <typename T>
T get_le(const char* p) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace detail

inline std::string encode_trace(const TimeTrace& tr) {
  std::string out;
  out.reserve(kTraceHeaderBytes + 8 * tr.size());
  out.append("RHTR", 4);
  detail::put_le<std::uint32_t>(out, kTraceVersion);
  detail::put_le<double>(out, tr.dt);
  detail::put_le<double>(out, tr.omega_beat);
  detail::put_le<double>(out, tr.theta_nominal);
  detail::put_le<std::uint64_t>(out, tr.size());
  out.append(32, '\0');
  if constexpr (std::endian::native == std::endian::little) {
    out.append(reinterpret_cast<const char*>(tr.samples.data()), 8 * tr.size());
  } else {
    for (double v : tr.samples) detail::put_le<double>(out, v);
  }
  return out;
}

inline TimeTrace decode_trace(const std::string& bytes, const std::string& name = "trace") {
  if (bytes.size() < kTraceHeaderBytes) throw Error(ErrorKind::Format, name + ": truncated header");
  if (bytes.compare(0, 4, "RHTR") != 0) throw Error(ErrorKind::Format, name + ": bad magic (expected RHTR)");
  const char* p = bytes.data();
  const auto version = detail::get_le<std::uint32_t>(p + 4);
  if (version != kTraceVersion) throw Error(ErrorKind::Format, name + ": unsupported version " + std::to_string(version));
  TimeTrace tr;
  tr.dt = detail::get_le<double>(p + 8);
  tr.omega_beat = detail::get_le<double>(p + 16);
  tr.theta_nominal = detail::get_le<double>(p + 24);
  const auto n = detail::get_le<std::uint64_t>(p + 32);
  if (bytes.size() - kTraceHeaderBytes != 8 * n)
    throw Error(ErrorKind::Format, name + ": declared sample count does not match payload");
  tr.samples.resize(n);
  const char* data = p + kTraceHeaderBytes;
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(tr.samples.data(), data, 8 * n);
  } else {
    for (std::uint64_t k = 0; k < n; ++k) tr.samples[k] = detail::get_le<double>(data + 8 * k);
  }
  tr.validate();
  return tr;
}

inline void write_trace(const std::string& path, const TimeTrace& tr) { write_atomic(path, encode_trace(tr)); }

inline TimeTrace read_trace(const std::string& path) { return decode_trace(read_file(path), path); }

// ---- config JSON ------------------------------------------------------------

namespace detail {

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::Config, where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw Error(ErrorKind::Config, where + ": unknown key '" + it.key() + "'");
  }
}

inline double number(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw Error(ErrorKind::Config, where + ": missing required key '" + key + "'");
  if (!j.at(key).is_number()) throw Error(ErrorKind::Config, where + ": key '" + key + "' must be a number");
  return j.at(key).get<double>();
}

inline double number_or(const nlohmann::json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

}  // namespace detail

// Frequencies in Hz (converted to rad/s), masses in ng.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  detail::reject_unknown(j,
                         {"schema_version", "kappa_hz", "detuning_hz", "omega_beat_hz", "theta0", "drift",
                          "shot_floor", "backaction_weight", "sample_rate_hz", "modes"},
                         "config");
  const double schema = detail::number(j, "schema_version", "config");
  if (schema != kConfigSchemaVersion)
    throw Error(ErrorKind::Config, "config: unsupported schema_version " + std::to_string(schema));
  ExperimentConfig c;
  c.kappa = hz_to_rad(detail::number(j, "kappa_hz", "config"));
  c.detuning = hz_to_rad(detail::number(j, "detuning_hz", "config"));
  c.omega_beat = hz_to_rad(detail::number(j, "omega_beat_hz", "config"));
  c.theta0 = detail::number_or(j, "theta0", 0.0, "config");
  c.shot_floor = detail::number_or(j, "shot_floor", 1.0, "config");
  c.backaction_weight = detail::number_or(j, "backaction_weight", 0.0, "config");
  const double rate = detail::number_or(j, "sample_rate_hz", 5e6, "config");
  if (!(rate > 0)) throw Error(ErrorKind::Config, "config: sample_rate_hz must be positive");
  c.dt = 1.0 / rate;
  if (j.contains("drift")) {
    const auto& d = j.at("drift");
    detail::reject_unknown(d, {"amplitude", "freq_hz"}, "config.drift");
    c.drift.amplitude = detail::number(d, "amplitude", "config.drift");
    c.drift.freq = detail::number_or(d, "freq_hz", 25.0, "config.drift");
  }
  if (!j.contains("modes") || !j.at("modes").is_array())
    throw Error(ErrorKind::Config, "config: missing required key 'modes' (array)");
  std::size_t k = 0;
  for (const auto& m : j.at("modes")) {
    const std::string where = "config.modes[" + std::to_string(k++) + "]";
    detail::reject_unknown(m, {"freq_hz", "linewidth_hz", "mass_ng", "nbar", "coupling_hz"}, where);
    MechMode mm;
    mm.omega_m = hz_to_rad(detail::number(m, "freq_hz", where));
    mm.gamma = hz_to_rad(detail::number(m, "linewidth_hz", where));
    mm.mass = detail::number(m, "mass_ng", where) * 1e-12;
    mm.nbar = detail::number(m, "nbar", where);
    mm.coupling = hz_to_rad(detail::number(m, "coupling_hz", where));
    c.modes.push_back(mm);
  }
  return c;
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["kappa_hz"] = rad_to_hz(c.kappa);
  j["detuning_hz"] = rad_to_hz(c.detuning);
  j["omega_beat_hz"] = rad_to_hz(c.omega_beat);
  j["theta0"] = c.theta0;
  j["drift"] = {{"amplitude", c.drift.amplitude}, {"freq_hz", c.drift.freq}};
  j["shot_floor"] = c.shot_floor;
  j["backaction_weight"] = c.backaction_weight;
  j["sample_rate_hz"] = 1.0 / c.dt;
  j["modes"] = nlohmann::json::array();
  for (const auto& m : c.modes)
    j["modes"].push_back({{"freq_hz", rad_to_hz(m.omega_m)},
                          {"linewidth_hz", rad_to_hz(m.gamma)},
                          {"mass_ng", m.mass * 1e12},
                          {"nbar", m.nbar},
                          {"coupling_hz", rad_to_hz(m.coupling)}});
  return j;
}

inline ExperimentConfig read_config(const std::string& path) {
  const auto text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Config, path + ": invalid JSON: " + e.what());
  }
  return config_from_json(j);
}

inline void write_config(const std::string& path, const ExperimentConfig& c) {
  write_atomic(path, config_to_json(c).dump(2) + "\n");
}

// ---- CSV ----------------------------------------------------------------

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw Error(ErrorKind::Format, where + ": not a number: '" + s + "'");
  }
}

inline std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t a = 0;
  while (a < s.size() && s[a] == ' ') ++a;
  return s.substr(a);
}

}  // namespace detail

// Provenance lines written as "# key: value".
inline std::string spectrum_header(const SpectrumMeta& m) {
  std::ostringstream os;
  os << "# tool: rhet " << kToolVersion << "\n";
  os << "# epsilon: " << detail::fmt(m.epsilon) << "\n";
  os << "# theta: " << detail::fmt(m.theta) << "\n";
  os << "# variant: " << m.variant << "\n";
  os << "# segments: " << m.segments << "\n";
  os << "# lockin: " << (m.lockin ? "on" : "off") << "\n";
  return os.str();
}

inline std::string encode_spectrum(const Spectrum& s) {
  std::ostringstream os;
  os << spectrum_header(s.meta);
  os << "freq_hz,psd,stderr\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    os << detail::fmt(rad_to_hz(s.freqs[k])) << ',' << detail::fmt(s.values[k]) << ',';
    if (!s.variance.empty()) os << detail::fmt(std::sqrt(s.variance[k]));
    os << '\n';
  }
  return os.str();
}

inline void write_spectrum(const std::string& path, const Spectrum& s) { write_atomic(path, encode_spectrum(s)); }

inline Spectrum decode_spectrum(const std::string& text, const std::string& name = "spectrum") {
  Spectrum s;
  std::istringstream is(text);
  std::string line;
  bool header = false, any_err = false, all_err = true;
  std::vector<double> se;
  while (std::getline(is, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto c = line.find(':');
      if (c == std::string::npos) continue;
      const auto key = detail::trim(line.substr(1, c - 1));
      const auto val = detail::trim(line.substr(c + 1));
      if (key == "epsilon") s.meta.epsilon = detail::parse_double(val, name);
      else if (key == "theta") s.meta.theta = detail::parse_double(val, name);
      else if (key == "variant") s.meta.variant = val;
      else if (key == "segments") s.meta.segments = static_cast<std::size_t>(detail::parse_double(val, name));
      else if (key == "lockin") s.meta.lockin = val == "on";
      continue;
    }
    if (!header) {
      if (line.rfind("freq_hz", 0) != 0) throw Error(ErrorKind::Format, name + ": missing CSV header");
      header = true;
      continue;
    }
    const auto cols = detail::split(line);
    if (cols.size() < 2) throw Error(ErrorKind::Format, name + ": short row");
    s.freqs.push_back(hz_to_rad(detail::parse_double(cols[0], name)));
    s.values.push_back(detail::parse_double(cols[1], name));
    if (cols.size() >= 3 && !detail::trim(cols[2]).empty()) {
      const double e = detail::parse_double(cols[2], name);
      se.push_back(e * e);
      any_err = true;
    } else {
      se.push_back(0.0);
      all_err = false;
    }
  }
  if (!header) throw Error(ErrorKind::Format, name + ": missing CSV header");
  if (any_err && all_err) s.variance = std::move(se);
  return s;
}

inline Spectrum read_spectrum(const std::string& path) { return decode_spectrum(read_file(path), path); }

inline std::string encode_complex_spectrum(const std::vector<double>& freqs, const std::vector<cplx>& values,
                                           const std::string& comment) {
  std::ostringstream os;
  os << "# tool: rhet " << kToolVersion << "\n# " << comment << "\nfreq_hz,re,im\n";
  for (std::size_t k = 0; k < freqs.size(); ++k)
    os << detail::fmt(rad_to_hz(freqs[k])) << ',' << detail::fmt(values[k].real()) << ','
       << detail::fmt(values[k].imag()) << '\n';
  return os.str();
}

// First row: "theta_rad\freq_hz" then frequencies; each further row: θ then values.
inline std::string encode_map(const ThetaMap& m, const std::string& extra_header = "") {
  std::ostringstream os;
  os << "# tool: rhet " << kToolVersion << "\n";
  os << "# normalization: " << detail::fmt(m.normalization) << "\n";
  if (!extra_header.empty()) os << extra_header;
  os << "theta_rad\\freq_hz";
  for (double f : m.freqs) os << ',' << detail::fmt(rad_to_hz(f));
  os << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << detail::fmt(m.thetas[r]);
    for (std::size_t c = 0; c < m.cols(); ++c) os << ',' << detail::fmt(m.at(r, c));
    os << '\n';
  }
  return os.str();
}

inline void write_map(const std::string& path, const ThetaMap& m, const std::string& extra_header = "") {
  write_atomic(path, encode_map(m, extra_header));
}

inline ThetaMap decode_map(const std::string& text, const std::string& name = "map") {
  ThetaMap m;
  std::istringstream is(text);
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto c = line.find(':');
      if (c != std::string::npos && detail::trim(line.substr(1, c - 1)) == "normalization")
        m.normalization = detail::parse_double(detail::trim(line.substr(c + 1)), name);
      continue;
    }
    const auto cols = detail::split(line);
    if (!header) {
      for (std::size_t k = 1; k < cols.size(); ++k) m.freqs.push_back(hz_to_rad(detail::parse_double(cols[k], name)));
      header = true;
      continue;
    }
    if (cols.size() != m.freqs.size() + 1) throw Error(ErrorKind::Format, name + ": ragged map row");
    m.thetas.push_back(detail::parse_double(cols[0], name));
    for (std::size_t k = 1; k < cols.size(); ++k) m.values.push_back(detail::parse_double(cols[k], name));
  }
  if (!header) throw Error(ErrorKind::Format, name + ": empty map");
  return m;
}

inline ThetaMap read_map(const std::string& path) { return decode_map(read_file(path), path); }

// Binary sibling of the map CSV: "RHMP", version u32, rows u64, cols u64,
// normalization f64, then thetas (rad), freqs (Hz), values row-major; all
// little-endian f64.
inline std::string encode_map_binary(const ThetaMap& m) {
  std::string out;
  out.reserve(32 + 8 * (m.rows() + m.cols() + m.values.size()));
  out.append("RHMP", 4);
  detail::put_le<std::uint32_t>(out, 1);
  detail::put_le<std::uint64_t>(out, m.rows());
  detail::put_le<std::uint64_t>(out, m.cols());
  detail::put_le<double>(out, m.normalization);
  for (double t : m.thetas) detail::put_le<double>(out, t);
  for (double f : m.freqs) detail::put_le<double>(out, rad_to_hz(f));
  for (double v : m.values) detail::put_le<double>(out, v);
  return out;
}

inline ThetaMap decode_map_binary(const std::string& bytes, const std::string& name = "map") {
  if (bytes.size() < 32 || bytes.compare(0, 4, "RHMP") != 0) throw Error(ErrorKind::Format, name + ": bad map header");
  const char* p = bytes.data();
  if (detail::get_le<std::uint32_t>(p + 4) != 1) throw Error(ErrorKind::Format, name + ": unsupported map version");
  const auto rows = detail::get_le<std::uint64_t>(p + 8);
  const auto cols = detail::get_le<std::uint64_t>(p + 16);
  if (cols != 0 && rows > (bytes.size() / 8) / cols) throw Error(ErrorKind::Format, name + ": map size mismatch");
  if (bytes.size() != 32 + 8 * (rows + cols + rows * cols)) throw Error(ErrorKind::Format, name + ": map size mismatch");
  ThetaMap m;
  m.normalization = detail::get_le<double>(p + 24);
  const char* q = p + 32;
  for (std::uint64_t k = 0; k < rows; ++k, q += 8) m.thetas.push_back(detail::get_le<double>(q));
  for (std::uint64_t k = 0; k < cols; ++k, q += 8) m.freqs.push_back(hz_to_rad(detail::get_le<double>(q)));
  m.values.resize(rows * cols);
  for (auto& v : m.values) {
    v = detail::get_le<double>(q);
    q += 8;
  }
  return m;
}

inline std::string encode_phase(const PhaseSeries& p) {
  std::ostringstream os;
  os << "# tool: rhet " << kToolVersion << "\ntime_s,theta_rad\n";
  for (std::size_t k = 0; k < p.times.size(); ++k) os << detail::fmt(p.times[k]) << ',' << detail::fmt(p.theta[k]) << '\n';
  return os.str();
}

inline void write_phase(const std::string& path, const PhaseSeries& p) { write_atomic(path, encode_phase(p)); }

inline PhaseSeries decode_phase(const std::string& text, const std::string& name = "phase") {
  PhaseSeries p;
  std::istringstream is(text);
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    const auto cols = detail::split(line);
    if (cols.size() != 2) throw Error(ErrorKind::Format, name + ": expected time_s,theta_rad");
    p.times.push_back(detail::parse_double(cols[0], name));
    p.theta.push_back(detail::parse_double(cols[1], name));
  }
  p.validate();
  return p;
}

inline PhaseSeries read_phase(const std::string& path) { return decode_phase(read_file(path), path); }

// ---- comparison -----------------------------------------------------------

struct CompareThresholds {
  double min_correlation = 0.95;
  double max_peak_error = 0.5;
};

struct CompareResult {
  double peak_a = 0, peak_b = 0;
  double loc_a = 0, loc_b = 0;  // rad/s
  double peak_rel_error = 0;
  double max_rel_deviation = 0;  // max|a-b| / max|b|
  double rms_rel_deviation = 0;
  double correlation = 0;
  std::size_t bins = 0;
  bool pass = false;
};

inline double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
  const auto it = std::lower_bound(x.begin(), x.end(), at);
  if (it == x.begin()) return y.front();
  if (it == x.end()) return y.back();
  const auto k = static_cast<std::size_t>(it - x.begin());
  const double f = (at - x[k - 1]) / (x[k] - x[k - 1]);
  return y[k - 1] + f * (y[k] - y[k - 1]);
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  if (saa == 0 || sbb == 0) return a == b ? 1.0 : 0.0;
  return sab / std::sqrt(saa * sbb);
}

// Compares a against reference b over [lo, hi] rad/s on a's grid (b is
// linearly interpolated when the grids differ).
inline CompareResult compare_spectra(const Spectrum& a, const Spectrum& b, double lo, double hi,
                                     const CompareThresholds& th = {}) {
  if (a.size() < 2 || b.size() < 2) throw Error(ErrorKind::Usage, "incompatible inputs: empty spectrum");
  if (!(lo < hi)) throw Error(ErrorKind::Usage, "band must satisfy lo < hi");
  const double cover_lo = std::max({lo, a.freqs.front(), b.freqs.front()});
  const double cover_hi = std::min({hi, a.freqs.back(), b.freqs.back()});
  if (!(cover_lo < cover_hi)) throw Error(ErrorKind::Usage, "incompatible inputs: grids do not overlap in the band");
  std::vector<double> va, vb, fx;
  const bool same = a.freqs == b.freqs;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a.freqs[k] < cover_lo || a.freqs[k] > cover_hi) continue;
    fx.push_back(a.freqs[k]);
    va.push_back(a.values[k]);
    vb.push_back(same ? b.values[k] : interpolate(b.freqs, b.values, a.freqs[k]));
  }
  if (va.size() < 2) throw Error(ErrorKind::Usage, "incompatible inputs: fewer than 2 common bins in the band");
  CompareResult r;
  r.bins = va.size();
  auto peak = [&](const std::vector<double>& v, double& val, double& loc) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < v.size(); ++k)
      if (std::abs(v[k]) > std::abs(v[best])) best = k;
    val = v[best];
    loc = fx[best];
  };
  peak(va, r.peak_a, r.loc_a);
  peak(vb, r.peak_b, r.loc_b);
  r.peak_rel_error = r.peak_b != 0 ? std::abs(r.peak_a - r.peak_b) / std::abs(r.peak_b)
                                   : (r.peak_a == 0 ? 0.0 : std::numeric_limits<double>::infinity());
  double maxb = 0, maxd = 0, sd = 0, sb = 0;
  for (std::size_t k = 0; k < va.size(); ++k) {
    maxb = std::max(maxb, std::abs(vb[k]));
    maxd = std::max(maxd, std::abs(va[k] - vb[k]));
    sd += (va[k] - vb[k]) * (va[k] - vb[k]);
    sb += vb[k] * vb[k];
  }
  r.max_rel_deviation = maxb > 0 ? maxd / maxb : (maxd == 0 ? 0.0 : std::numeric_limits<double>::infinity());
  r.rms_rel_deviation = sb > 0 ? std::sqrt(sd / sb) : (sd == 0 ? 0.0 : std::numeric_limits<double>::infinity());
  r.correlation = pearson(va, vb);
  r.pass = r.correlation >= th.min_correlation && r.peak_rel_error <= th.max_peak_error;
  return r;
}

inline nlohmann::json report_json(const CompareResult& r, const CompareThresholds& th) {
  nlohmann::json j;
  j["tool"] = std::string("rhet ") + kToolVersion;
  j["bins"] = r.bins;
  j["peak_a"] = {{"amplitude", r.peak_a}, {"freq_hz", rad_to_hz(r.loc_a)}};
  j["peak_b"] = {{"amplitude", r.peak_b}, {"freq_hz", rad_to_hz(r.loc_b)}};
  j["peak_rel_error"] = r.peak_rel_error;
  j["max_rel_deviation"] = r.max_rel_deviation;
  j["rms_rel_deviation"] = r.rms_rel_deviation;
  j["pearson"] = r.correlation;
  j["thresholds"] = {{"min_correlation", th.min_correlation}, {"max_peak_error", th.max_peak_error}};
  j["pass"] = r.pass;
  return j;
}

}  // namespace rhet::io
