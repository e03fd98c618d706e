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

#include "spkhe/float_codec.h"

#include <cmath>
#include <cstdint>
#include <string>

#include "spkhe/error.h"

namespace spkhe {
namespace {

int FloorDiv(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Shifts right by `shift` bits rounding half to even.
BigInt ShiftRightNearestEven(const BigInt& value, unsigned long shift) {
  if (shift == 0) return value;
  BigInt q;
  mpz_fdiv_q_2exp(q.get_mpz_t(), value.get_mpz_t(), shift);
  BigInt r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), value.get_mpz_t(), shift);
  BigInt half;
  mpz_setbit(half.get_mpz_t(), shift - 1);
  if (r > half || (r == half && mpz_odd_p(q.get_mpz_t()))) ++q;
  return q;
}

// value * 2^exp2 correctly rounded to double.
double ScaleToDouble(const BigInt& value, long exp2) {
  if (value == 0) return 0.0;
  const bool negative = value < 0;
  BigInt magnitude = abs(value);
  const std::size_t bits = mpz_sizeinbase(magnitude.get_mpz_t(), 2);
  if (bits > 53) {
    const unsigned long shift = bits - 53;
    magnitude = ShiftRightNearestEven(magnitude, shift);
    exp2 += static_cast<long>(shift);
  }
  const double result = std::ldexp(magnitude.get_d(), static_cast<int>(exp2));
  return negative ? -result : result;
}

BigInt Pow16(int digits) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), kEncodingBase, digits);
  return r;
}

}  // namespace

BigInt PositiveBandLimit(const PaillierPublicKey& pk) { return pk.n / 3; }

BigInt NegativeBandStart(const PaillierPublicKey& pk) {
  return pk.n - pk.n / 3;
}

EncodedNumber EncodeSigned(const PaillierPublicKey& pk, const BigInt& mantissa,
                           int exponent) {
  if (abs(mantissa) >= PositiveBandLimit(pk)) {
    throw Error(ErrorCode::kMagnitude,
                "mantissa magnitude exceeds the encodable band");
  }
  EncodedNumber e;
  e.mantissa = mantissa >= 0 ? mantissa : pk.n + mantissa;
  e.exponent = exponent;
  e.key_id = pk.key_id;
  return e;
}

EncodedNumber Encode(const PaillierPublicKey& pk, double x,
                     const CodecOptions& options) {
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::kDomain, "cannot encode a non-finite value");
  }
  if (x == 0.0) return EncodeSigned(pk, 0, 0);

  // |x| = significand * 2^twos with an odd integer significand.
  int frexp_exponent = 0;
  const double fraction = std::frexp(std::fabs(x), &frexp_exponent);
  std::uint64_t significand =
      static_cast<std::uint64_t>(std::ldexp(fraction, 53));
  int twos = frexp_exponent - 53;
  while ((significand & 1u) == 0) {
    significand >>= 1;
    ++twos;
  }

  BigInt mantissa(static_cast<unsigned long>(significand));
  int exponent = FloorDiv(twos, kBitsPerDigit);
  if (exponent < options.min_exponent) {
    exponent = options.min_exponent;
    mantissa = ShiftRightNearestEven(
        mantissa, static_cast<unsigned long>(kBitsPerDigit * exponent - twos));
    if (mantissa == 0) return EncodeSigned(pk, 0, 0);
  } else {
    mantissa <<= static_cast<unsigned long>(twos - kBitsPerDigit * exponent);
  }
  if (x < 0) mantissa = -mantissa;
  try {
    return EncodeSigned(pk, mantissa, exponent);
  } catch (const Error&) {
    throw Error(ErrorCode::kMagnitude,
                "value " + std::to_string(x) + " is too large for the key");
  }
}

BigInt SignedMantissa(const PaillierPublicKey& pk, const EncodedNumber& e) {
  if (e.mantissa < 0 || e.mantissa >= pk.n) {
    throw Error(ErrorCode::kRange, "mantissa outside [0, n)");
  }
  if (e.mantissa < PositiveBandLimit(pk)) return e.mantissa;
  if (e.mantissa >= NegativeBandStart(pk)) return e.mantissa - pk.n;
  throw Error(ErrorCode::kOverflow,
              "mantissa in the overflow band; homomorphic result out of range");
}

double Decode(const PaillierPublicKey& pk, const EncodedNumber& e) {
  return ScaleToDouble(SignedMantissa(pk, e),
                       static_cast<long>(kBitsPerDigit) * e.exponent);
}

EncryptedNumber EncryptEncoded(const PaillierPublicKey& pk,
                               const EncodedNumber& e, RandomSource& rng) {
  return EncryptedNumber{Encrypt(pk, e.mantissa, rng), e.exponent};
}

EncryptedNumber EncryptValue(const PaillierPublicKey& pk, double x,
                             RandomSource& rng, const CodecOptions& options) {
  return EncryptEncoded(pk, Encode(pk, x, options), rng);
}

EncodedNumber DecryptEncoded(const PaillierSecretKey& sk,
                             const PaillierPublicKey& pk,
                             const EncryptedNumber& c) {
  return EncodedNumber{Decrypt(sk, pk, c.ciphertext), c.exponent, pk.key_id};
}

double DecryptValue(const PaillierSecretKey& sk, const PaillierPublicKey& pk,
                    const EncryptedNumber& c) {
  return Decode(pk, DecryptEncoded(sk, pk, c));
}

EncryptedNumber LowerExponent(const PaillierPublicKey& pk,
                              const EncryptedNumber& a, int exponent,
                              const CodecOptions& options) {
  if (exponent > a.exponent) {
    throw Error(ErrorCode::kParameter, "cannot raise an exponent exactly");
  }
  const int delta = a.exponent - exponent;
  if (delta == 0) return a;
  if (delta > options.max_alignment_digits) {
    throw Error(ErrorCode::kPrecisionOverflow,
                "exponent gap of " + std::to_string(delta) +
                    " digits exceeds the alignment cap of " +
                    std::to_string(options.max_alignment_digits));
  }
  return EncryptedNumber{MultiplyByConstant(pk, a.ciphertext, Pow16(delta)),
                         exponent};
}

std::pair<EncryptedNumber, EncryptedNumber> AlignExponents(
    const PaillierPublicKey& pk, const EncryptedNumber& a,
    const EncryptedNumber& b, const CodecOptions& options) {
  CheckKey(pk, a.ciphertext);
  CheckKey(pk, b.ciphertext);
  const int target = std::min(a.exponent, b.exponent);
  return {LowerExponent(pk, a, target, options),
          LowerExponent(pk, b, target, options)};
}

EncryptedNumber AddEncrypted(const PaillierPublicKey& pk,
                             const EncryptedNumber& a, const EncryptedNumber& b,
                             const CodecOptions& options) {
  auto [lhs, rhs] = AlignExponents(pk, a, b, options);
  return EncryptedNumber{AddCiphertexts(pk, lhs.ciphertext, rhs.ciphertext),
                         lhs.exponent};
}

EncryptedNumber MultiplyEncoded(const PaillierPublicKey& pk,
                                const EncryptedNumber& a,
                                const EncodedNumber& k) {
  if (k.key_id != pk.key_id) {
    throw Error(ErrorCode::kKeyMismatch, "factor encoded under another key");
  }
  return EncryptedNumber{
      MultiplyByConstant(pk, a.ciphertext, SignedMantissa(pk, k)),
      a.exponent + k.exponent};
}

EncryptedNumber MultiplyPlain(const PaillierPublicKey& pk,
                              const EncryptedNumber& a, double k,
                              const CodecOptions& options) {
  return MultiplyEncoded(pk, a, Encode(pk, k, options));
}

}  // namespace spkhe
