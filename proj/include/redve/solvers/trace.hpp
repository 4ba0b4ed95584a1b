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

#ifndef REDVE_SOLVERS_TRACE_HPP_
#define REDVE_SOLVERS_TRACE_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "redve/errors.hpp"

namespace redve::solvers {

struct TraceRecord {
  int iter = 0;  // baseline-map evaluations so far
  std::optional<double> cost;
  std::optional<double> psnr;
  double step_norm = 0.0;  // ||x_{k+1} - x_k|| / ||x_k||
  std::optional<double> gamma_abs_sum;  // set on cycle boundaries
  double elapsed_s = 0.0;
};

class IterationTrace {
 public:
  void push(TraceRecord r) {
    if (!records_.empty() && r.iter <= records_.back().iter)
      throw InvalidArgument("IterationTrace: iteration indices must increase");
    records_.push_back(std::move(r));
  }

  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }
  const TraceRecord& back() const { return records_.back(); }
  TraceRecord& back() { return records_.back(); }
  const TraceRecord& operator[](std::size_t i) const { return records_[i]; }
  const std::vector<TraceRecord>& records() const { return records_; }
  int inner_steps() const { return records_.empty() ? 0 : records_.back().iter; }

  auto begin() const { return records_.begin(); }
  auto end() const { return records_.end(); }

 private:
  std::vector<TraceRecord> records_;
};

enum class Termination { Continue, Converged, Budget };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::Continue: return "continue";
    case Termination::Converged: return "converged";
    case Termination::Budget: return "budget";
  }
  return "?";
}

inline Termination check_termination(const IterationTrace& trace, double tol, int budget) {
  if (trace.empty()) throw InvalidArgument("check_termination: empty trace");
  if (trace.back().step_norm <= tol) return Termination::Converged;
  if (trace.inner_steps() >= budget) return Termination::Budget;
  return Termination::Continue;
}

/// An iterate went NaN/Inf; the trace up to that point is attached.
class NonFiniteIterate : public NumericalError {
 public:
  NonFiniteIterate(int iter, IterationTrace trace)
      : NumericalError("non-finite iterate at inner step " + std::to_string(iter)),
        iter(iter),
        trace(std::move(trace)) {}
  int iter;
  IterationTrace trace;
};

}  // namespace redve::solvers

#endif  // REDVE_SOLVERS_TRACE_HPP_
