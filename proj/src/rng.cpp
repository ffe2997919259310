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

#include <cpsim/rng.hpp>

#include <stdexcept>

namespace cpsim {

//==============================================================================
std::uint64_t splitmix64(std::uint64_t& state)
{
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

//==============================================================================
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index)
{
  std::uint64_t state = root + index * 0x9e3779b97f4a7c15ULL;
  return splitmix64(state);
}

//==============================================================================
std::uint64_t Rng::below(std::uint64_t n)
{
  if (n == 0)
    throw std::invalid_argument("Rng::below needs n > 0");

  // Values below `threshold` would over-represent the low residues.
  const std::uint64_t threshold = (0 - n) % n;
  while (true)
  {
    const std::uint64_t x = _engine();
    if (x >= threshold)
      return x % n;
  }
}

//==============================================================================
int Rng::between(int lo, int hi)
{
  if (hi < lo)
    throw std::invalid_argument("Rng::between needs lo <= hi");

  const auto span = static_cast<std::uint64_t>(
    static_cast<std::int64_t>(hi) - static_cast<std::int64_t>(lo) + 1);
  return static_cast<int>(lo + static_cast<std::int64_t>(below(span)));
}

} // namespace cpsim
