#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "collapse/constants.hpp"
#include "collapse/errors.hpp"

// Iterative radix-2 FFT.  Grids in this library are power-of-two by
// construction, so a general-length transform would be dead weight; keeping
// it here also keeps results bit-reproducible across machines.  All twiddle
// factors come straight from std::polar (no recurrences), so the transform
// stays unitary to ~1 ulp per stage, which matters for long norm-drift runs.

namespace collapse::fft {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

struct Plan {
  std::size_t n = 0;
  std::vector<std::size_t> bitrev;
  // Twiddles for each stage, concatenated: for stage length `len`
  // (2, 4, ..., n) the block holds exp(-i 2 pi j / len), j < len/2.
  std::vector<cplx> twiddle;

  explicit Plan(std::size_t size) : n(size) {
    if (!is_pow2(n)) fail(Errc::invalid_argument, "fft: length must be a power of two");
    bitrev.resize(n);
    std::size_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < log2n; ++b) r |= ((i >> b) & 1u) << (log2n - 1 - b);
      bitrev[i] = r;
    }
    twiddle.reserve(n > 1 ? n - 1 : 0);
    for (std::size_t len = 2; len <= n; len <<= 1)
      for (std::size_t j = 0; j < len / 2; ++j)
        twiddle.push_back(std::polar(1.0, -2.0 * constants::pi * static_cast<double>(j) /
                                              static_cast<double>(len)));
  }
};

inline const Plan& plan_for(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<Plan>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Plan>(n);
  return *slot;
}

namespace detail {

template <bool Inverse>
inline void transform(std::span<cplx> a, const Plan& p) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = p.bitrev[i];
    if (i < j) std::swap(a[i], a[j]);
  }
  std::size_t tw_base = 0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        cplx w = p.twiddle[tw_base + j];
        if constexpr (Inverse) w = std::conj(w);
        cplx u = a[start + j];
        cplx v = a[start + j + half] * w;
        a[start + j] = u + v;
        a[start + j + half] = u - v;
      }
    }
    tw_base += half;
  }
  if constexpr (Inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= scale;
  }
}

}  // namespace detail

// In-place unscaled forward DFT: X_k = sum_j x_j exp(-2 pi i j k / n).
inline void forward(std::span<cplx> a) { detail::transform<false>(a, plan_for(a.size())); }

// In-place inverse with 1/n scaling; inverse(forward(x)) == x.
inline void inverse(std::span<cplx> a) { detail::transform<true>(a, plan_for(a.size())); }

// Row-major n1 x n2 array: transform along both axes.
inline void forward_2d(std::span<cplx> a, std::size_t n1, std::size_t n2) {
  if (a.size() != n1 * n2) fail(Errc::invalid_argument, "fft: 2d size mismatch");
  for (std::size_t r = 0; r < n1; ++r) forward(a.subspan(r * n2, n2));
  std::vector<cplx> col(n1);
  for (std::size_t c = 0; c < n2; ++c) {
    for (std::size_t r = 0; r < n1; ++r) col[r] = a[r * n2 + c];
    forward(col);
    for (std::size_t r = 0; r < n1; ++r) a[r * n2 + c] = col[r];
  }
}

inline void inverse_2d(std::span<cplx> a, std::size_t n1, std::size_t n2) {
  if (a.size() != n1 * n2) fail(Errc::invalid_argument, "fft: 2d size mismatch");
  for (std::size_t r = 0; r < n1; ++r) inverse(a.subspan(r * n2, n2));
  std::vector<cplx> col(n1);
  for (std::size_t c = 0; c < n2; ++c) {
    for (std::size_t r = 0; r < n1; ++r) col[r] = a[r * n2 + c];
    inverse(col);
    for (std::size_t r = 0; r < n1; ++r) a[r * n2 + c] = col[r];
  }
}

}  // namespace collapse::fft
