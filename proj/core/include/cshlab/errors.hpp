// Copyright 2026 The cshlab Authors.
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

#ifndef CSHLAB_ERRORS_HPP_
#define CSHLAB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cshlab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CSHLAB_DEFINE_ERROR(Name)      \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

CSHLAB_DEFINE_ERROR(InvalidGrid);
CSHLAB_DEFINE_ERROR(GridMismatch);
CSHLAB_DEFINE_ERROR(RepresentationMismatch);
CSHLAB_DEFINE_ERROR(SingularSymbol);
CSHLAB_DEFINE_ERROR(BandOutOfRange);
CSHLAB_DEFINE_ERROR(EmptyTrajectory);
CSHLAB_DEFINE_ERROR(IndexOutOfRange);
CSHLAB_DEFINE_ERROR(AlphaUnset);
CSHLAB_DEFINE_ERROR(InadmissibleParameters);
CSHLAB_DEFINE_ERROR(NotFound);
CSHLAB_DEFINE_ERROR(ConfigError);
CSHLAB_DEFINE_ERROR(FormatError);
CSHLAB_DEFINE_ERROR(InvalidArgument);

#undef CSHLAB_DEFINE_ERROR

// Raised when the inner fixed-point iteration of a step stops contracting.
class PicardDivergence : public Error {
 public:
  PicardDivergence(const std::string& what, long step, int iterations)
      : Error(what), step_(step), iterations_(iterations) {}
  long step() const { return step_; }
  int iterations() const { return iterations_; }

 private:
  long step_;
  int iterations_;
};

// Raised when a NaN or Inf appears in any evolved field.
class NonFinite : public Error {
 public:
  NonFinite(const std::string& what, long step) : Error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

}  // namespace cshlab

#endif  // CSHLAB_ERRORS_HPP_
