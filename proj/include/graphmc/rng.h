// Copyright 2026 The graphmc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRAPHMC_RNG_H_
#define GRAPHMC_RNG_H_

#include <cstdint>
#include <random>
#include <vector>

namespace graphmc {

// Seedable random source with bit-reproducible output on every platform.
//
// Bits come from std::mt19937_64, whose output sequence is fixed by the
// standard. The distribution transforms below are written out explicitly
// because the std:: distributions are implementation-defined:
//   uniform01   (bits >> 11) * 2^-53
//   uniform_int rejection sampling on the raw 64-bit draw
//   normal      Marsaglia polar method
// A (seed, stream) pair selects an independent substream so that separate
// generators (data, noise, masks, initialization) do not share state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform01();

  // Uniform integer on the closed range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  double normal();

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniformly random permutation of {0, ..., n-1} (Fisher-Yates).
  std::vector<int> permutation(int n);

  // k distinct indices drawn uniformly from {0, ..., n-1}, in draw order.
  std::vector<std::int64_t> sample_without_replacement(std::int64_t n,
                                                       std::int64_t k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// Substream identifiers used across the library.
namespace streams {
inline constexpr std::uint64_t kData = 1;
inline constexpr std::uint64_t kNoise = 2;
inline constexpr std::uint64_t kOutliers = 3;
inline constexpr std::uint64_t kMask = 4;
inline constexpr std::uint64_t kInit = 5;
inline constexpr std::uint64_t kPermutation = 6;
}  // namespace streams

}  // namespace graphmc

#endif  // GRAPHMC_RNG_H_
