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

#include "spkhe/random.h"

#include <random>

#include "spkhe/error.h"

namespace spkhe {
namespace {

// splitmix64 finalizer, used to decorrelate forked stream seeds.
std::uint64_t Mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed)
    : state_(std::make_unique<gmp_randclass>(gmp_randinit_mt)) {
  mpz_class s;
  mpz_import(s.get_mpz_t(), 1, 1, sizeof(seed), 0, 0, &seed);
  state_->seed(s);
}

RandomSource RandomSource::FromSeed(std::uint64_t seed) {
  return RandomSource(seed);
}

RandomSource RandomSource::FromEntropy() {
  std::random_device device;
  std::uint64_t seed = (static_cast<std::uint64_t>(device()) << 32) ^ device();
  return RandomSource(seed);
}

RandomSource::RandomSource(RandomSource&&) noexcept = default;
RandomSource& RandomSource::operator=(RandomSource&&) noexcept = default;
RandomSource::~RandomSource() = default;

mpz_class RandomSource::UniformBelow(const mpz_class& bound) {
  if (bound <= 0) {
    throw Error(ErrorCode::kParameter, "random bound must be positive");
  }
  return state_->get_z_range(bound);
}

mpz_class RandomSource::RandomBits(unsigned long bits) {
  return state_->get_z_bits(bits);
}

std::uint64_t RandomSource::NextU64() {
  mpz_class v = state_->get_z_bits(64);
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

RandomSource RandomSource::Fork(std::uint64_t stream) {
  return RandomSource(Mix(NextU64() ^ Mix(stream)));
}

}  // namespace spkhe
