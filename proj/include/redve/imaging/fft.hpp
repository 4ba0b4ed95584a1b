// Copyright (c) 2026 The redve Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REDVE_IMAGING_FFT_HPP_
#define REDVE_IMAGING_FFT_HPP_

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "redve/errors.hpp"
#include "redve/imaging/image.hpp"
#include "redve/linalg.hpp"

namespace redve::imaging {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Spectrum of a width x height image, row-major like Image.
struct Spectrum {
  int width = 0;
  int height = 0;
  ComplexVector bins;
};

namespace detail {

// The FFTW planner is not thread-safe; execution with new arrays is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!ptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* ptr;
};

struct FftwPlans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~FftwPlans() {
    std::lock_guard lock(fftw_planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

}  // namespace detail

/**
 * Unitary 2-D DFT of fixed size backed by FFTW.
 *
 * Both directions scale by 1/sqrt(width*height), so inverse(forward(x)) = x
 * and Parseval holds without extra factors. Plans are immutable after
 * construction and every call uses its own scratch buffer, so a const Fft2d
 * may be shared between threads.
 */
class Fft2d {
 public:
  Fft2d(int width, int height) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw InvalidArgument("Fft2d: dimensions must be positive");
    detail::FftwBuffer scratch(size());
    auto plans = std::make_shared<detail::FftwPlans>();
    std::lock_guard lock(detail::fftw_planner_mutex());
    plans->forward = fftw_plan_dft_2d(height, width, scratch.ptr, scratch.ptr, FFTW_FORWARD, FFTW_ESTIMATE);
    plans->backward = fftw_plan_dft_2d(height, width, scratch.ptr, scratch.ptr, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plans->forward || !plans->backward) throw Error("Fft2d: FFTW planning failed");
    plans_ = std::move(plans);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return static_cast<std::size_t>(width_) * height_; }

  ComplexVector forward(std::span<const double> x) const {
    if (x.size() != size()) throw ShapeMismatch("Fft2d::forward: size mismatch");
    detail::FftwBuffer buf(size());
    for (std::size_t i = 0; i < size(); ++i) {
      buf.ptr[i][0] = x[i];
      buf.ptr[i][1] = 0.0;
    }
    fftw_execute_dft(plans_->forward, buf.ptr, buf.ptr);
    return collect(buf);
  }

  ComplexVector forward(std::span<const Complex> x) const {
    if (x.size() != size()) throw ShapeMismatch("Fft2d::forward: size mismatch");
    detail::FftwBuffer buf(size());
    std::memcpy(buf.ptr, x.data(), sizeof(fftw_complex) * size());
    fftw_execute_dft(plans_->forward, buf.ptr, buf.ptr);
    return collect(buf);
  }

  ComplexVector inverse(std::span<const Complex> spectrum) const {
    if (spectrum.size() != size()) throw ShapeMismatch("Fft2d::inverse: size mismatch");
    detail::FftwBuffer buf(size());
    std::memcpy(buf.ptr, spectrum.data(), sizeof(fftw_complex) * size());
    fftw_execute_dft(plans_->backward, buf.ptr, buf.ptr);
    return collect(buf);
  }

  /// Real part of the inverse transform.
  Vector inverse_real(std::span<const Complex> spectrum) const {
    const ComplexVector z = inverse(spectrum);
    Vector out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = z[i].real();
    return out;
  }

 private:
  ComplexVector collect(const detail::FftwBuffer& buf) const {
    const double s = 1.0 / std::sqrt(static_cast<double>(size()));
    ComplexVector out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = Complex(buf.ptr[i][0] * s, buf.ptr[i][1] * s);
    return out;
  }

  int width_;
  int height_;
  std::shared_ptr<const detail::FftwPlans> plans_;
};

inline Spectrum dft2(const Image& img) {
  return {img.width, img.height, Fft2d(img.width, img.height).forward(img.pixels)};
}

inline Image idft2(const Spectrum& s) {
  return Image(s.width, s.height, Fft2d(s.width, s.height).inverse_real(s.bins));
}

}  // namespace redve::imaging

#endif  // REDVE_IMAGING_FFT_HPP_
