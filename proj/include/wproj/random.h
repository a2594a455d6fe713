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

// Counter-based random numbers. Draw n of stream `seed` is a pure function of
// (seed, n), so results do not depend on the standard library in use.

#ifndef WPROJ_RANDOM_H_
#define WPROJ_RANDOM_H_

#include <cstdint>
#include <limits>
#include <vector>

namespace wproj {

inline constexpr char kRngName[] = "splitmix64-counter";

// SplitMix64 finalizer applied to seed + counter * golden gamma. Satisfies
// UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  static std::uint64_t At(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  result_type operator()() { return At(seed_, counter_++); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

// Independent stream for a sub-task, e.g. one input draw of an experiment.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

// Dirichlet(concentration * 1) on k points via normalized Gamma draws.
std::vector<double> SampleDirichlet(int k, double concentration,
                                    SplitMix64& rng);

}  // namespace wproj

#endif  // WPROJ_RANDOM_H_
