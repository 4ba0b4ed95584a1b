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

#ifndef REDVE_ERRORS_HPP_
#define REDVE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace redve {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input rejected by a precondition check (bad shapes, bad parameters).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Numerical breakdown: the caller may recover or must abort with exit code 4.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// First difference vector is (numerically) zero: the sequence is stationary.
class ZeroFirstColumn : public NumericalError {
 public:
  ZeroFirstColumn() : NumericalError("first difference vector vanishes; sequence is stationary") {}
};

/// Normalizing sum of the raw MPE / SVD-MPE coefficients vanishes.
class DegenerateSum : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RankDeficient : public NumericalError {
 public:
  RankDeficient(int effective_rank, int required)
      : NumericalError("difference matrix has effective rank " + std::to_string(effective_rank) +
                       ", need " + std::to_string(required)),
        effective_rank(effective_rank) {}
  int effective_rank;
};

class NoConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CgNoConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotLinear : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Bad command line; the message lists the valid flags.
class UsageError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// File could not be read or written.
class IoFailure : public Error {
 public:
  using Error::Error;
};

class MalformedHeader : public IoFailure {
 public:
  using IoFailure::IoFailure;
};

class UnsupportedMaxval : public IoFailure {
 public:
  using IoFailure::IoFailure;
};

}  // namespace redve

#endif  // REDVE_ERRORS_HPP_
