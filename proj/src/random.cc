// Copyright 2026 The WProj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wproj/random.h"

#include "boost/random/gamma_distribution.hpp"

namespace wproj {

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64::At(seed ^ 0x5851f42d4c957f2dULL, stream);
}

std::vector<double> SampleDirichlet(int k, double concentration,
                                    SplitMix64& rng) {
  boost::random::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> x(k);
  double total = 0.0;
  // A draw underflowing to all zeros has probability far below 2^-64 for the
  // concentrations used here; redraw rather than divide by zero.
  while (total <= 0.0) {
    total = 0.0;
    for (double& xi : x) {
      xi = gamma(rng);
      total += xi;
    }
  }
  for (double& xi : x) xi /= total;
  return x;
}

}  // namespace wproj
