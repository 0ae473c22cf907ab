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

#include "fft_backend.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace cshlab::detail {
namespace {

// Plans are created once per shape and direction. Planning is not thread
// safe in FFTW, execution of an existing plan on new arrays is.
class PlanCache {
 public:
  fftw_plan get(int n0, int n1, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_tuple(n0, n1, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<fftw_complex> a(static_cast<std::size_t>(n0) * n1);
    std::vector<fftw_complex> b(a.size());
    fftw_plan p = fftw_plan_dft_2d(n0, n1, a.data(), b.data(),
                                   sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void fft2d(int n0, int n1, const std::complex<double>* in,
           std::complex<double>* out, int sign) {
  fftw_plan p = cache().get(n0, n1, sign);
  // FFTW does not modify the input of an out-of-place complex transform.
  auto* src = reinterpret_cast<fftw_complex*>(
      const_cast<std::complex<double>*>(in));
  fftw_execute_dft(p, src, reinterpret_cast<fftw_complex*>(out));
}

}  // namespace cshlab::detail
