// Copyright 2026 The batchlab Authors
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

#ifndef BATCHLAB_RNG_HPP_
#define BATCHLAB_RNG_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

namespace batchlab {

// Deterministic pseudo-random stream. All sampling primitives are implemented
// by hand (rather than via std:: distributions, whose output is not pinned by
// the standard) so that a given seed produces the same stream on every
// platform and toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform integer in [0, n). n must be > 0. Unbiased (rejection sampling).
  std::uint64_t below(std::uint64_t n);

  // Uniform double in [0, 1) with 53 random bits.
  double unit();

  // Standard normal via the polar Box-Muller method.
  double normal();

  // Bernoulli(p).
  bool bernoulli(double p) { return unit() < p; }

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_[4];
};

// One-step mix used for seeding and for deriving independent sub-streams.
std::uint64_t splitmix64(std::uint64_t& state);

// Derives the seed of a named sub-stream, e.g. derive_seed(root, "sampler",
// epoch, step). Different tags or indices give statistically independent
// streams.
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                          std::uint64_t a = 0, std::uint64_t b = 0);

}  // namespace batchlab

#endif  // BATCHLAB_RNG_HPP_
