// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "bpop/config.hpp"

namespace bpop
{

// 64-bit LCG; uniform() takes the top 53 bits of the advanced state.
class Lcg64
{
public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next()
  {
    state_ = config::lcgMultiplier * state_ + config::lcgIncrement;
    return state_;
  }

  // [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // [-1, 1)
  double symmetric() { return 2.0 * uniform() - 1.0; }

private:
  std::uint64_t state_;
};

}  // namespace bpop
