// Copyright 2026 The dpufl Authors.
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

#ifndef DPUFL_RANDOM_H_
#define DPUFL_RANDOM_H_

#include <cstdint>
#include <random>

namespace dpufl {

// Seeded random source. Every draw is derived from the 64-bit Mersenne
// Twister output with fixed bit manipulation, so a seed reproduces the same
// stream on every standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(seed) {}

  uint64_t seed() const { return seed_; }

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [0, bound). bound must be positive.
  uint64_t UniformInt(uint64_t bound);

  bool Bernoulli(double p) { return Uniform01() < p; }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer applied to (master, index); used to give independent
// trials their own seeds.
uint64_t DeriveSeed(uint64_t master, uint64_t index);

}  // namespace dpufl

#endif  // DPUFL_RANDOM_H_
