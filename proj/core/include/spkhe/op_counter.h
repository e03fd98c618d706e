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

#ifndef SPKHE_OP_COUNTER_H_
#define SPKHE_OP_COUNTER_H_

#include <cstdint>

namespace spkhe {

// Tallies of encrypted-domain and plaintext-side work. Exponent alignment
// rescales inside the float codec are not counted; they are an artifact of
// the encoding, not of the comparator.
struct OpCounter {
  std::uint64_t encryptions = 0;
  std::uint64_t decryptions = 0;
  std::uint64_t ciphertext_products = 0;
  std::uint64_t exponentiations = 0;
  std::uint64_t plain_additions = 0;
  std::uint64_t plain_products = 0;

  OpCounter& operator+=(const OpCounter& other) {
    encryptions += other.encryptions;
    decryptions += other.decryptions;
    ciphertext_products += other.ciphertext_products;
    exponentiations += other.exponentiations;
    plain_additions += other.plain_additions;
    plain_products += other.plain_products;
    return *this;
  }

  friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

}  // namespace spkhe

#endif  // SPKHE_OP_COUNTER_H_
