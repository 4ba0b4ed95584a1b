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

#ifndef REDVE_IMAGING_OPERATOR_HPP_
#define REDVE_IMAGING_OPERATOR_HPP_

#include <cmath>
#include <complex>
#include <span>

#include "redve/errors.hpp"
#include "redve/imaging/fft.hpp"
#include "redve/imaging/image.hpp"
#include "redve/imaging/psf.hpp"
#include "redve/linalg.hpp"

namespace redve::imaging {

class KernelTooLarge : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/**
 * Unnormalized DFT of the PSF zero-padded to width x height with its center
 * tap moved to (0, 0). With the unitary Fft2d, circular convolution is
 * inverse(forward(x) * transfer).
 */
inline ComplexVector psf_transfer(const Psf& psf, const Fft2d& fft) {
  const int w = fft.width(), h = fft.height();
  if (psf.size > w || psf.size > h) throw KernelTooLarge("PSF larger than the image");
  ComplexVector padded(fft.size(), Complex(0.0, 0.0));
  const int r = psf.radius();
  for (int dr = -r; dr <= r; ++dr)
    for (int dc = -r; dc <= r; ++dc) {
      const int row = ((dr % h) + h) % h, col = ((dc % w) + w) % w;
      padded[static_cast<std::size_t>(row) * w + col] += psf.tap(dr, dc);
    }
  ComplexVector t = fft.forward(std::span<const Complex>(padded));
  const double s = std::sqrt(static_cast<double>(fft.size()));
  for (Complex& v : t) v *= s;
  return t;
}

namespace detail {

inline Vector filter(const Fft2d& fft, const ComplexVector& transfer, std::span<const double> x,
                     bool conjugate) {
  ComplexVector spec = fft.forward(x);
  for (std::size_t i = 0; i < spec.size(); ++i)
    spec[i] *= conjugate ? std::conj(transfer[i]) : transfer[i];
  return fft.inverse_real(spec);
}

}  // namespace detail

/// Periodic-boundary convolution: out(r,c) = sum_{a,b} k(a,b) x(r-a, c-b).
inline Image convolve_circular(const Image& img, const Psf& psf) {
  const Fft2d fft(img.width, img.height);
  return Image(img.width, img.height, detail::filter(fft, psf_transfer(psf, fft), img.pixels, false));
}

/// Adjoint of convolve_circular (correlation with the same kernel).
inline Image correlate_circular(const Image& img, const Psf& psf) {
  const Fft2d fft(img.width, img.height);
  return Image(img.width, img.height, detail::filter(fft, psf_transfer(psf, fft), img.pixels, true));
}

/**
 * Degradation operator H: circular blur, optionally followed by keeping the
 * pixels whose row and column indices are multiples of `factor`.
 */
class LinearOperator {
 public:
  enum class Kind { Blur, BlurDownsample };

  static LinearOperator blur(const Psf& psf, int width, int height) {
    return LinearOperator(Kind::Blur, psf, 1, width, height);
  }

  static LinearOperator blur_downsample(const Psf& psf, int factor, int width, int height) {
    if (factor < 1) throw InvalidArgument("blur_downsample: factor must be >= 1");
    return LinearOperator(Kind::BlurDownsample, psf, factor, width, height);
  }

  Kind kind() const { return kind_; }
  const Psf& psf() const { return psf_; }
  int factor() const { return factor_; }
  int input_width() const { return width_; }
  int input_height() const { return height_; }
  int output_width() const { return (width_ + factor_ - 1) / factor_; }
  int output_height() const { return (height_ + factor_ - 1) / factor_; }
  std::size_t input_size() const { return static_cast<std::size_t>(width_) * height_; }
  std::size_t output_size() const {
    return static_cast<std::size_t>(output_width()) * output_height();
  }

  /// True when H itself is diagonalized by the DFT.
  bool circulant() const { return kind_ == Kind::Blur || factor_ == 1; }

  const Fft2d& fft() const { return fft_; }
  const ComplexVector& transfer() const { return transfer_; }

  Vector apply(std::span<const double> x) const {
    if (x.size() != input_size()) throw ShapeMismatch("apply_H: input size mismatch");
    Vector blurred = blur(x, false);
    if (factor_ == 1) return blurred;
    Vector out(output_size());
    const int ow = output_width(), oh = output_height();
    for (int r = 0; r < oh; ++r)
      for (int c = 0; c < ow; ++c)
        out[static_cast<std::size_t>(r) * ow + c] =
            blurred[static_cast<std::size_t>(r * factor_) * width_ + c * factor_];
    return out;
  }

  Vector adjoint(std::span<const double> z) const {
    if (z.size() != output_size()) throw ShapeMismatch("apply_Ht: input size mismatch");
    if (factor_ == 1) return blur(z, true);
    Vector up(input_size(), 0.0);
    const int ow = output_width(), oh = output_height();
    for (int r = 0; r < oh; ++r)
      for (int c = 0; c < ow; ++c)
        up[static_cast<std::size_t>(r * factor_) * width_ + c * factor_] =
            z[static_cast<std::size_t>(r) * ow + c];
    return blur(up, true);
  }

  Image apply(const Image& x) const {
    check_input(x);
    return Image(output_width(), output_height(), apply(std::span<const double>(x.pixels)));
  }

  Image adjoint(const Image& z) const {
    if (z.width != output_width() || z.height != output_height())
      throw ShapeMismatch("apply_Ht: image shape does not match operator output");
    return Image(width_, height_, adjoint(std::span<const double>(z.pixels)));
  }

 private:
  LinearOperator(Kind kind, const Psf& psf, int factor, int width, int height)
      : kind_(kind), psf_(psf), factor_(factor), width_(width), height_(height), fft_(width, height),
        transfer_(psf_transfer(psf, fft_)) {}

  // A 1x1 kernel is exactly the identity; skip the transform round trip.
  Vector blur(std::span<const double> x, bool conjugate) const {
    if (psf_.size == 1) return Vector(x.begin(), x.end());
    return detail::filter(fft_, transfer_, x, conjugate);
  }

  void check_input(const Image& x) const {
    if (x.width != width_ || x.height != height_)
      throw ShapeMismatch("apply_H: image shape does not match operator input");
  }

  Kind kind_;
  Psf psf_;
  int factor_;
  int width_;
  int height_;
  Fft2d fft_;
  ComplexVector transfer_;
};

}  // namespace redve::imaging

#endif  // REDVE_IMAGING_OPERATOR_HPP_
