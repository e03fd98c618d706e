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

#ifndef SPKHE_PAILLIER_H_
#define SPKHE_PAILLIER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <gmpxx.h>

#include "spkhe/random.h"

namespace spkhe {

using BigInt = mpz_class;

// Keys below this size are accepted but flagged insecure.
inline constexpr std::size_t kMinSecureKeyBits = 512;
inline constexpr std::size_t kMinKeyBits = 16;
// Miller-Rabin rounds used while searching for p and q.
inline constexpr int kPrimalityRounds = 64;

struct PaillierPublicKey {
  BigInt n;
  BigInt g;
  BigInt n_squared;
  std::size_t bit_length = 0;
  // Fingerprint of (n, g); every ciphertext carries the id of its key.
  std::string key_id;

  bool insecure() const { return bit_length < kMinSecureKeyBits; }
};

struct PaillierSecretKey {
  BigInt lambda;
  BigInt mu;
  BigInt p;
  BigInt q;
  std::string key_id;
};

struct PaillierKeyPair {
  PaillierPublicKey public_key;
  PaillierSecretKey secret_key;
};

struct Ciphertext {
  BigInt value;
  std::string key_id;
  // True when a fresh random nonce has been applied to this value.
  bool obfuscated = false;
};

std::string KeyFingerprint(const BigInt& n, const BigInt& g);

// Builds a public key from (n, g), validating gcd(g, n^2) = 1.
PaillierPublicKey MakePublicKey(const BigInt& n, const BigInt& g);

// Derives lambda and mu from the primes. Throws kParameter when the primes
// violate gcd(pq, (p-1)(q-1)) = 1 or g is not invertible.
PaillierSecretKey MakeSecretKey(const PaillierPublicKey& pk, const BigInt& p,
                                const BigInt& q);

// Generates a key pair with an n of exactly `bit_length` bits and g = n + 1.
PaillierKeyPair GenerateKeyPair(std::size_t bit_length, RandomSource& rng);
PaillierKeyPair GenerateKeyPair(std::size_t bit_length,
                                std::optional<std::uint64_t> seed = {});

// Test hook: key pair from fixed primes, bypassing the size check. g
// defaults to n + 1.
PaillierKeyPair KeyPairFromPrimes(const BigInt& p, const BigInt& q,
                                  std::optional<BigInt> g = {});

// L(x) = (x - 1) / n.
BigInt PaillierL(const BigInt& x, const BigInt& n);

// Draws s uniformly from Z*_n, resampling when gcd(s, n) != 1.
BigInt SampleNonce(const PaillierPublicKey& pk, RandomSource& rng);

// c = g^m s^n mod n^2 with an explicit nonce s.
Ciphertext EncryptWithNonce(const PaillierPublicKey& pk, const BigInt& m,
                            const BigInt& s);
Ciphertext Encrypt(const PaillierPublicKey& pk, const BigInt& m,
                   RandomSource& rng);

// m = L(c^lambda mod n^2) mu mod n.
BigInt Decrypt(const PaillierSecretKey& sk, const PaillierPublicKey& pk,
               const Ciphertext& c);

// Plaintext sum: c1 c2 mod n^2.
Ciphertext AddCiphertexts(const PaillierPublicKey& pk, const Ciphertext& c1,
                          const Ciphertext& c2);

// Plaintext scaling: c^l mod n^2. Negative l inverts c first.
Ciphertext MultiplyByConstant(const PaillierPublicKey& pk, const Ciphertext& c,
                              const BigInt& l);

// Multiplies by a fresh encryption of zero.
Ciphertext Rerandomize(const PaillierPublicKey& pk, const Ciphertext& c,
                       RandomSource& rng);

// Throws kKeyMismatch unless the ciphertext was produced under pk.
void CheckKey(const PaillierPublicKey& pk, const Ciphertext& c);

}  // namespace spkhe

#endif  // SPKHE_PAILLIER_H_
