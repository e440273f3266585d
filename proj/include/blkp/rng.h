// Copyright 2026 The BLKP Authors
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

#ifndef BLKP_RNG_H_
#define BLKP_RNG_H_

#include <cstdint>
#include <random>

namespace blkp {

// Every random draw in the library goes through this wrapper. The engine is
// std::mt19937_64, whose output sequence is fixed by the C++ standard; the
// integer and real mappings below are written out by hand because the
// <random> distributions are implementation-defined. Together they make
// seeded results identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform integer in [lo, hi] by rejection of the biased tail.
  int64_t UniformInt(int64_t lo, int64_t hi) {
    const uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
    if (range == 0) return static_cast<int64_t>(NextU64());
    const uint64_t limit = UINT64_MAX - (UINT64_MAX % range + 1) % range;
    uint64_t draw = NextU64();
    while (draw > limit) draw = NextU64();
    return lo + static_cast<int64_t>(draw % range);
  }

  // Uniform double in [0, 1) built from the top 53 bits.
  double UniformUnit() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * UniformUnit(); }

  bool Bernoulli(double p) { return UniformUnit() < p; }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; derives independent per-item seeds from one base.
inline uint64_t MixSeed(uint64_t base, uint64_t index) {
  uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace blkp

#endif  // BLKP_RNG_H_
