/*
 * Copyright (C) 2026 The cpsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#ifndef CPSIM__RNG_HPP
#define CPSIM__RNG_HPP

#include <cstdint>
#include <random>

namespace cpsim {

/// One SplitMix64 step. Used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of stream `index` under `root`: the SplitMix64 output after seeding
/// the state with root + index * 0x9e3779b97f4a7c15.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

/// 64-bit Mersenne Twister (std::mt19937_64, whose output sequence is fixed
/// by the C++ standard) with its own bounded sampling, since the standard
/// distributions differ between library vendors.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : _engine(seed) {}

  std::uint64_t next() { return _engine(); }

  /// Uniform in [0, n). Rejection sampling, so there is no modulo bias.
  std::uint64_t below(std::uint64_t n);

  /// Uniform in [lo, hi].
  int between(int lo, int hi);

private:
  std::mt19937_64 _engine;
};

} // namespace cpsim

#endif // CPSIM__RNG_HPP
