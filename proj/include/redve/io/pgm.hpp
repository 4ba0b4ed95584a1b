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

#ifndef REDVE_IO_PGM_HPP_
#define REDVE_IO_PGM_HPP_

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "redve/errors.hpp"
#include "redve/imaging/image.hpp"

namespace redve::io {

namespace detail {

// Next whitespace-delimited token of a PNM header, skipping '#' comments.
inline std::string header_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n' && ch != '\r') {
      }
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

inline long header_number(std::istream& in, const char* what) {
  const std::string tok = header_token(in);
  if (tok.empty()) throw MalformedHeader(std::string("PGM: missing ") + what);
  for (char c : tok)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw MalformedHeader(std::string("PGM: bad ") + what + " '" + tok + "'");
  if (tok.size() > 9) throw MalformedHeader(std::string("PGM: ") + what + " out of range");
  return std::stol(tok);
}

}  // namespace detail

/**
 * Reads a binary (P5) or ASCII (P2) graymap with maxval <= 255. Samples are
 * rescaled to 0..255 when maxval is smaller, so intensities stay comparable.
 */
inline imaging::Image read_pgm(std::istream& in) {
  const std::string magic = detail::header_token(in);
  if (magic != "P5" && magic != "P2") throw MalformedHeader("PGM: expected magic P5 or P2, got '" + magic + "'");
  const long width = detail::header_number(in, "width");
  const long height = detail::header_number(in, "height");
  const long maxval = detail::header_number(in, "maxval");
  if (width < 1 || height < 1) throw MalformedHeader("PGM: dimensions must be positive");
  if (maxval < 1) throw MalformedHeader("PGM: maxval must be positive");
  if (maxval > 255) throw UnsupportedMaxval("PGM: maxval " + std::to_string(maxval) + " > 255 not supported");

  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  Vector pixels(n);
  const double rescale = maxval == 255 ? 1.0 : 255.0 / static_cast<double>(maxval);
  if (magic == "P5") {
    // header_token consumed exactly one whitespace byte after maxval.
    std::vector<unsigned char> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) throw IoFailure("PGM: truncated pixel data");
    for (std::size_t i = 0; i < n; ++i) {
      if (raw[i] > maxval) throw MalformedHeader("PGM: sample exceeds maxval");
      pixels[i] = raw[i] * rescale;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const std::string tok = detail::header_token(in);
      if (tok.empty()) throw IoFailure("PGM: truncated pixel data");
      for (char c : tok)
        if (!std::isdigit(static_cast<unsigned char>(c))) throw MalformedHeader("PGM: bad sample '" + tok + "'");
      const long v = tok.size() > 9 ? maxval + 1 : std::stol(tok);
      if (v > maxval) throw MalformedHeader("PGM: sample exceeds maxval");
      pixels[i] = static_cast<double>(v) * rescale;
    }
  }
  return imaging::Image(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

inline imaging::Image read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open '" + path + "' for reading");
  return read_pgm(in);
}

/// Nearest 8-bit sample: clipped to [0, 255], halves rounded away from zero.
inline std::uint8_t to_byte(double v) {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::round(v));
}

inline void write_pgm(std::ostream& out, const imaging::Image& img) {
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  std::vector<unsigned char> raw(img.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = to_byte(img.pixels[i]);
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

inline void write_pgm(const std::string& path, const imaging::Image& img) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open '" + path + "' for writing");
  write_pgm(out, img);
  out.flush();
  if (!out) throw IoFailure("write to '" + path + "' failed");
}

}  // namespace redve::io

#endif  // REDVE_IO_PGM_HPP_
