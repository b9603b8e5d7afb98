// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <stdexcept>

#include "bdc/harness.hpp"

namespace bdc {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

long SplitMix64::uniform(long lo, long hi) {
  if (lo > hi) throw std::invalid_argument("SplitMix64::uniform: empty range");
  const std::uint64_t range =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (range == 0) return static_cast<long>(next());
  // Reject the low 2^64 mod range values so every residue is equally likely.
  const std::uint64_t threshold = (0 - range) % range;
  std::uint64_t v = next();
  while (v < threshold) v = next();
  return static_cast<long>(static_cast<std::uint64_t>(lo) + v % range);
}

}  // namespace bdc
