#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "rhet/types.hpp"

namespace rhet::fft {

// FFTW plans are created once per (size, kind) under a global lock and then
// executed through the new-array interface, which is thread-safe.
namespace detail {

enum class Kind { Forward, Backward };

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanPtr = std::unique_ptr<fftw_plan_s, PlanDeleter>;

inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

inline fftw_plan plan_c2c(std::size_t n, Kind kind) {
  static std::map<std::pair<std::size_t, Kind>, PlanPtr> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto key = std::make_pair(n, kind);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second.get();
  std::vector<std::complex<double>> a(n), b(n);
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(a.data()),
                                 reinterpret_cast<fftw_complex*>(b.data()),
                                 kind == Kind::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, PlanPtr(p));
  return p;
}

inline fftw_plan plan_r2c(std::size_t n) {
  static std::map<std::size_t, PlanPtr> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second.get();
  std::vector<double> a(n);
  std::vector<std::complex<double>> b(n / 2 + 1);
  fftw_plan p = fftw_plan_dft_r2c_1d(static_cast<int>(n), a.data(), reinterpret_cast<fftw_complex*>(b.data()),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(n, PlanPtr(p));
  return p;
}

}  // namespace detail

// Unnormalised forward DFT, X[k] = sum_n x[n] exp(-2 pi i k n / N).
inline void forward(std::span<const cplx> in, std::span<cplx> out) {
  fftw_plan p = detail::plan_c2c(in.size(), detail::Kind::Forward);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

// Unnormalised inverse DFT (no 1/N).
inline void backward(std::span<const cplx> in, std::span<cplx> out) {
  fftw_plan p = detail::plan_c2c(in.size(), detail::Kind::Backward);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

// Full N-point spectrum of a real input (Hermitian half mirrored).
inline void forward_real(std::span<const double> in, std::span<cplx> out) {
  const std::size_t n = in.size();
  fftw_plan p = detail::plan_r2c(n);
  fftw_execute_dft_r2c(p, const_cast<double*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
  for (std::size_t k = n / 2 + 1; k < n; ++k) out[k] = std::conj(out[n - k]);
}

inline std::vector<cplx> forward(std::span<const cplx> in) {
  std::vector<cplx> out(in.size());
  forward(in, out);
  return out;
}

inline std::vector<cplx> forward_real(std::span<const double> in) {
  std::vector<cplx> out(in.size());
  forward_real(in, out);
  return out;
}

// Signed index of DFT bin k: 0..N/2-1 map to themselves, the rest to k-N.
inline long signed_bin(std::size_t k, std::size_t n) {
  return k < (n + 1) / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

// Position of bin k in the fftshifted (ascending frequency) ordering.
inline std::size_t shifted_pos(std::size_t k, std::size_t n) {
  return (k + n / 2) % n;
}

// Ascending two-sided angular frequency grid for an N-point DFT with step dt.
inline std::vector<double> two_sided_grid(std::size_t n, double dt) {
  std::vector<double> f(n);
  const double dw = kTwoPi / (static_cast<double>(n) * dt);
  const long first = -static_cast<long>(n / 2);
  for (std::size_t j = 0; j < n; ++j) f[j] = dw * static_cast<double>(first + static_cast<long>(j));
  return f;
}

}  // namespace rhet::fft
