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

#include "spkhe/paillier.h"

#include <string>

#include "spkhe/error.h"
#include "spkhe/hash.h"

namespace spkhe {
namespace {

constexpr int kMaxPrimeCandidates = 1 << 20;
constexpr int kMaxPrimePairs = 64;

// Random prime with exactly `bits` bits and the top two bits set, so that
// the product of two such primes has exactly 2 * bits bits.
BigInt RandomPrime(unsigned long bits, RandomSource& rng) {
  for (int attempt = 0; attempt < kMaxPrimeCandidates; ++attempt) {
    BigInt candidate = rng.RandomBits(bits);
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (mpz_probab_prime_p(candidate.get_mpz_t(), kPrimalityRounds) > 0) {
      return candidate;
    }
  }
  throw Error(ErrorCode::kGeneration,
              "prime generation failed for " + std::to_string(bits) + " bits");
}

BigInt Gcd(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

BigInt PowMod(const BigInt& base, const BigInt& exponent, const BigInt& mod) {
  BigInt r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(),
           mod.get_mpz_t());
  return r;
}

}  // namespace

std::string KeyFingerprint(const BigInt& n, const BigInt& g) {
  return Sha256Hex(n.get_str(16) + ":" + g.get_str(16)).substr(0, 16);
}

PaillierPublicKey MakePublicKey(const BigInt& n, const BigInt& g) {
  if (n <= 1) throw Error(ErrorCode::kParameter, "modulus must exceed 1");
  PaillierPublicKey pk;
  pk.n = n;
  pk.n_squared = n * n;
  pk.g = g % pk.n_squared;
  if (pk.g <= 0 || Gcd(pk.g, pk.n_squared) != 1) {
    throw Error(ErrorCode::kParameter, "g is not invertible modulo n^2");
  }
  pk.bit_length = mpz_sizeinbase(n.get_mpz_t(), 2);
  pk.key_id = KeyFingerprint(pk.n, pk.g);
  return pk;
}

BigInt PaillierL(const BigInt& x, const BigInt& n) { return (x - 1) / n; }

PaillierSecretKey MakeSecretKey(const PaillierPublicKey& pk, const BigInt& p,
                                const BigInt& q) {
  if (p * q != pk.n) {
    throw Error(ErrorCode::kParameter, "p * q does not match the modulus");
  }
  const BigInt p1 = p - 1;
  const BigInt q1 = q - 1;
  if (Gcd(pk.n, p1 * q1) != 1) {
    throw Error(ErrorCode::kParameter, "gcd(pq, (p-1)(q-1)) != 1");
  }
  PaillierSecretKey sk;
  sk.p = p;
  sk.q = q;
  mpz_lcm(sk.lambda.get_mpz_t(), p1.get_mpz_t(), q1.get_mpz_t());
  const BigInt rho = PaillierL(PowMod(pk.g, sk.lambda, pk.n_squared), pk.n);
  if (mpz_invert(sk.mu.get_mpz_t(), rho.get_mpz_t(), pk.n.get_mpz_t()) == 0) {
    throw Error(ErrorCode::kParameter,
                "L(g^lambda mod n^2) is not invertible modulo n");
  }
  sk.key_id = pk.key_id;
  return sk;
}

PaillierKeyPair GenerateKeyPair(std::size_t bit_length, RandomSource& rng) {
  if (bit_length < kMinKeyBits) {
    throw Error(ErrorCode::kParameter,
                "key size must be at least " + std::to_string(kMinKeyBits) +
                    " bits, got " + std::to_string(bit_length));
  }
  const unsigned long p_bits = (bit_length + 1) / 2;
  const unsigned long q_bits = bit_length - p_bits;
  for (int attempt = 0; attempt < kMaxPrimePairs; ++attempt) {
    BigInt p = RandomPrime(p_bits, rng);
    BigInt q = RandomPrime(q_bits, rng);
    if (p == q) continue;
    const BigInt n = p * q;
    if (mpz_sizeinbase(n.get_mpz_t(), 2) != bit_length) continue;
    if (Gcd(n, (p - 1) * (q - 1)) != 1) continue;
    PaillierKeyPair pair;
    pair.public_key = MakePublicKey(n, n + 1);
    pair.secret_key = MakeSecretKey(pair.public_key, p, q);
    return pair;
  }
  throw Error(ErrorCode::kGeneration, "could not find a suitable prime pair");
}

PaillierKeyPair GenerateKeyPair(std::size_t bit_length,
                                std::optional<std::uint64_t> seed) {
  RandomSource rng =
      seed ? RandomSource::FromSeed(*seed) : RandomSource::FromEntropy();
  return GenerateKeyPair(bit_length, rng);
}

PaillierKeyPair KeyPairFromPrimes(const BigInt& p, const BigInt& q,
                                  std::optional<BigInt> g) {
  const BigInt n = p * q;
  PaillierKeyPair pair;
  pair.public_key = MakePublicKey(n, g.value_or(n + 1));
  pair.secret_key = MakeSecretKey(pair.public_key, p, q);
  return pair;
}

BigInt SampleNonce(const PaillierPublicKey& pk, RandomSource& rng) {
  for (;;) {
    BigInt s = rng.UniformBelow(pk.n);
    if (s != 0 && Gcd(s, pk.n) == 1) return s;
  }
}

Ciphertext EncryptWithNonce(const PaillierPublicKey& pk, const BigInt& m,
                            const BigInt& s) {
  if (m < 0 || m >= pk.n) {
    throw Error(ErrorCode::kRange, "plaintext outside [0, n)");
  }
  if (s <= 0 || s >= pk.n || Gcd(s, pk.n) != 1) {
    throw Error(ErrorCode::kParameter, "nonce is not a unit modulo n");
  }
  BigInt gm;
  if (pk.g == pk.n + 1) {
    // (n + 1)^m = 1 + m n (mod n^2).
    gm = (1 + m * pk.n) % pk.n_squared;
  } else {
    gm = PowMod(pk.g, m, pk.n_squared);
  }
  Ciphertext c;
  c.value = (gm * PowMod(s, pk.n, pk.n_squared)) % pk.n_squared;
  c.key_id = pk.key_id;
  c.obfuscated = true;
  return c;
}

Ciphertext Encrypt(const PaillierPublicKey& pk, const BigInt& m,
                   RandomSource& rng) {
  return EncryptWithNonce(pk, m, SampleNonce(pk, rng));
}

void CheckKey(const PaillierPublicKey& pk, const Ciphertext& c) {
  if (c.key_id != pk.key_id) {
    throw Error(ErrorCode::kKeyMismatch, "ciphertext under key " + c.key_id +
                                             " used with key " + pk.key_id);
  }
}

BigInt Decrypt(const PaillierSecretKey& sk, const PaillierPublicKey& pk,
               const Ciphertext& c) {
  CheckKey(pk, c);
  if (sk.key_id != pk.key_id) {
    throw Error(ErrorCode::kKeyMismatch, "secret key " + sk.key_id +
                                             " does not match " + pk.key_id);
  }
  if (c.value < 0 || c.value >= pk.n_squared) {
    throw Error(ErrorCode::kRange, "ciphertext outside [0, n^2)");
  }
  BigInt m = PaillierL(PowMod(c.value, sk.lambda, pk.n_squared), pk.n);
  m = (m * sk.mu) % pk.n;
  return m;
}

Ciphertext AddCiphertexts(const PaillierPublicKey& pk, const Ciphertext& c1,
                          const Ciphertext& c2) {
  CheckKey(pk, c1);
  CheckKey(pk, c2);
  Ciphertext out;
  out.value = (c1.value * c2.value) % pk.n_squared;
  out.key_id = pk.key_id;
  out.obfuscated = false;
  return out;
}

Ciphertext MultiplyByConstant(const PaillierPublicKey& pk, const Ciphertext& c,
                              const BigInt& l) {
  CheckKey(pk, c);
  Ciphertext out;
  out.key_id = pk.key_id;
  out.obfuscated = false;
  if (l >= 0) {
    out.value = PowMod(c.value, l, pk.n_squared);
    return out;
  }
  BigInt inverse;
  if (mpz_invert(inverse.get_mpz_t(), c.value.get_mpz_t(),
                 pk.n_squared.get_mpz_t()) == 0) {
    throw Error(ErrorCode::kArithmetic,
                "ciphertext is not invertible modulo n^2");
  }
  out.value = PowMod(inverse, -l, pk.n_squared);
  return out;
}

Ciphertext Rerandomize(const PaillierPublicKey& pk, const Ciphertext& c,
                       RandomSource& rng) {
  CheckKey(pk, c);
  const BigInt s = SampleNonce(pk, rng);
  Ciphertext out;
  out.value = (c.value * PowMod(s, pk.n, pk.n_squared)) % pk.n_squared;
  out.key_id = pk.key_id;
  out.obfuscated = true;
  return out;
}

}  // namespace spkhe
