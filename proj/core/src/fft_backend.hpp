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

#ifndef CSHLAB_SRC_FFT_BACKEND_HPP_
#define CSHLAB_SRC_FFT_BACKEND_HPP_

#include <complex>

namespace cshlab::detail {

// Unnormalized 2D DFT of an n0 x n1 row-major array (last index fastest).
// sign = -1 is the forward transform, +1 the backward one. in and out must
// not alias.
void fft2d(int n0, int n1, const std::complex<double>* in,
           std::complex<double>* out, int sign);

}  // namespace cshlab::detail

#endif  // CSHLAB_SRC_FFT_BACKEND_HPP_
