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

#ifndef SPKHE_FLOAT_CODEC_H_
#define SPKHE_FLOAT_CODEC_H_

#include <string>
#include <utility>

#include "spkhe/paillier.h"

namespace spkhe {

// Reals are carried as mantissa * 16^exponent. The mantissa lives in the
// Paillier plaintext space [0, n), split into bands:
//   [0, floor(n/3))            positive values
//   [floor(n/3), n - floor(n/3)) overflow (never produced by Encode)
//   [n - floor(n/3), n)        negative values, stored as n - |m|
inline constexpr int kEncodingBase = 16;
inline constexpr int kBitsPerDigit = 4;

struct CodecOptions {
  // Smallest exponent Encode may choose; finer significands are rounded to
  // nearest-even at 16^min_exponent granularity.
  int min_exponent = -14;
  // Largest exponent gap AlignExponents will bridge.
  int max_alignment_digits = 64;
};

struct EncodedNumber {
  BigInt mantissa;
  int exponent = 0;
  std::string key_id;
};

// The mantissa is encrypted; the exponent travels alongside in plaintext.
struct EncryptedNumber {
  Ciphertext ciphertext;
  int exponent = 0;

  const std::string& key_id() const { return ciphertext.key_id; }
};

// floor(n / 3): upper bound (exclusive) of the positive band.
BigInt PositiveBandLimit(const PaillierPublicKey& pk);
// n - floor(n / 3): lower bound (inclusive) of the negative band.
BigInt NegativeBandStart(const PaillierPublicKey& pk);

EncodedNumber Encode(const PaillierPublicKey& pk, double x,
                     const CodecOptions& options = {});
// Encodes a signed integer mantissa at the given exponent.
EncodedNumber EncodeSigned(const PaillierPublicKey& pk, const BigInt& mantissa,
                           int exponent);

// Signed mantissa of an encoding. Throws kOverflow for the middle band.
BigInt SignedMantissa(const PaillierPublicKey& pk, const EncodedNumber& e);
double Decode(const PaillierPublicKey& pk, const EncodedNumber& e);

EncryptedNumber EncryptEncoded(const PaillierPublicKey& pk,
                               const EncodedNumber& e, RandomSource& rng);
EncryptedNumber EncryptValue(const PaillierPublicKey& pk, double x,
                             RandomSource& rng,
                             const CodecOptions& options = {});
EncodedNumber DecryptEncoded(const PaillierSecretKey& sk,
                             const PaillierPublicKey& pk,
                             const EncryptedNumber& c);
double DecryptValue(const PaillierSecretKey& sk, const PaillierPublicKey& pk,
                    const EncryptedNumber& c);

// Lowers the exponent of `a` to `exponent` by raising its ciphertext to
// 16^delta. Throws kPrecisionOverflow past options.max_alignment_digits.
EncryptedNumber LowerExponent(const PaillierPublicKey& pk,
                              const EncryptedNumber& a, int exponent,
                              const CodecOptions& options = {});

std::pair<EncryptedNumber, EncryptedNumber> AlignExponents(
    const PaillierPublicKey& pk, const EncryptedNumber& a,
    const EncryptedNumber& b, const CodecOptions& options = {});

EncryptedNumber AddEncrypted(const PaillierPublicKey& pk,
                             const EncryptedNumber& a, const EncryptedNumber& b,
                             const CodecOptions& options = {});

// Multiplies by an already encoded plaintext factor.
EncryptedNumber MultiplyEncoded(const PaillierPublicKey& pk,
                                const EncryptedNumber& a,
                                const EncodedNumber& k);
EncryptedNumber MultiplyPlain(const PaillierPublicKey& pk,
                              const EncryptedNumber& a, double k,
                              const CodecOptions& options = {});

}  // namespace spkhe

#endif  // SPKHE_FLOAT_CODEC_H_
