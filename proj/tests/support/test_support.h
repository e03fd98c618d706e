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

#ifndef SPKHE_TESTS_SUPPORT_TEST_SUPPORT_H_
#define SPKHE_TESTS_SUPPORT_TEST_SUPPORT_H_

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>

#include "spkhe/error.h"
#include "spkhe/paillier.h"

namespace spkhe::testing {

// Keygen is cheap at these sizes, but tests share pairs per seed so the
// fixtures stay identical across suites.
inline const PaillierKeyPair& TestKey(std::size_t bits, std::uint64_t seed) {
  static std::map<std::pair<std::size_t, std::uint64_t>, PaillierKeyPair>
      cache;
  auto it = cache.find({bits, seed});
  if (it == cache.end()) {
    it = cache.emplace(std::make_pair(bits, seed),
                       GenerateKeyPair(bits, std::optional<std::uint64_t>(seed)))
             .first;
  }
  return it->second;
}

inline const PaillierKeyPair& Key512(std::uint64_t seed = 1) {
  return TestKey(512, seed);
}

inline double RelativeError(double got, double want) {
  return std::fabs(got - want) /
         std::max(std::fabs(want), std::numeric_limits<double>::min());
}

// ErrorCode thrown by `fn`, or nullopt when it returns normally.
template <typename Fn>
std::optional<ErrorCode> CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace spkhe::testing

#endif  // SPKHE_TESTS_SUPPORT_TEST_SUPPORT_H_
