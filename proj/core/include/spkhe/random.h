/*
 * Copyright 2026 The spkhe Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SPKHE_RANDOM_H_
#define SPKHE_RANDOM_H_

#include <cstdint>
#include <memory>

#include <gmpxx.h>

namespace spkhe {

// Source of randomness for key generation, encryption nonces and synthetic
// data. Instances are not thread-safe; give each task its own (see Fork).
// Seeded instances are fully deterministic, which the protocol simulator
// relies on for reproducible transcripts.
class RandomSource {
 public:
  static RandomSource FromSeed(std::uint64_t seed);
  static RandomSource FromEntropy();

  RandomSource(RandomSource&&) noexcept;
  RandomSource& operator=(RandomSource&&) noexcept;
  ~RandomSource();

  // Uniform integer in [0, bound). bound must be positive.
  mpz_class UniformBelow(const mpz_class& bound);
  // Uniform integer with `bits` random bits.
  mpz_class RandomBits(unsigned long bits);
  std::uint64_t NextU64();

  // Independent deterministic child stream; used to derive per-trial
  // generators from a master seed.
  RandomSource Fork(std::uint64_t stream);

 private:
  explicit RandomSource(std::uint64_t seed);

  std::unique_ptr<gmp_randclass> state_;
};

}  // namespace spkhe

#endif  // SPKHE_RANDOM_H_
