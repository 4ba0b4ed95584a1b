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

#ifndef REDVE_IO_TRACE_CSV_HPP_
#define REDVE_IO_TRACE_CSV_HPP_

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include "redve/errors.hpp"
#include "redve/solvers/trace.hpp"

namespace redve::io {

inline constexpr const char* kTraceCsvHeader = "iter,cost,psnr,step_norm,gamma_abs_sum,elapsed_s";

/// Round-trippable decimal (printf %.17g; C locale, so no grouping).
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_field(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

inline std::string format_trace_row(const solvers::TraceRecord& r) {
  char elapsed[32];
  std::snprintf(elapsed, sizeof elapsed, "%.6f", r.elapsed_s);
  return std::to_string(r.iter) + ',' + format_field(r.cost) + ',' + format_field(r.psnr) + ',' +
         format_real(r.step_norm) + ',' + format_field(r.gamma_abs_sum) + ',' + elapsed;
}

inline void write_trace_csv(std::ostream& out, const solvers::IterationTrace& trace) {
  if (trace.empty()) throw InvalidArgument("write_trace_csv: empty trace");
  out << kTraceCsvHeader << '\n';
  for (const solvers::TraceRecord& r : trace) out << format_trace_row(r) << '\n';
}

inline void write_trace_csv(const std::string& path, const solvers::IterationTrace& trace) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot open '" + path + "' for writing");
  write_trace_csv(out, trace);
  out.flush();
  if (!out) throw IoFailure("write to '" + path + "' failed");
}

}  // namespace redve::io

#endif  // REDVE_IO_TRACE_CSV_HPP_
