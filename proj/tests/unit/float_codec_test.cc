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
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "spkhe/error.h"
#include "test_support.h"

namespace spkhe {
namespace {

using ::spkhe::testing::CodeOf;
using ::spkhe::testing::Key512;

// m * 2^e with |m| < 2^bits: always exact as a double and, with e >= -56,
// exactly encodable at the default precision floor.
double RandomDyadic(std::mt19937_64& gen, int bits, int min_e, int max_e) {
  std::uniform_int_distribution<std::int64_t> mant(-(std::int64_t{1} << bits) + 1,
                                                   (std::int64_t{1} << bits) - 1);
  std::uniform_int_distribution<int> exp(min_e, max_e);
  return std::ldexp(static_cast<double>(mant(gen)), exp(gen));
}

class FloatCodecTest : public ::testing::Test {
 protected:
  const PaillierKeyPair& keys_ = Key512();
  const PaillierPublicKey& pk() const { return keys_.public_key; }
  const PaillierSecretKey& sk() const { return keys_.secret_key; }
  EncryptedNumber Enc(double x) { return EncryptValue(pk(), x, rng_); }
  double Dec(const EncryptedNumber& e) { return DecryptValue(sk(), pk(), e); }

  RandomSource rng_ = RandomSource::FromSeed(9);
};

TEST_F(FloatCodecTest, EncodesReferenceValues) {
  const EncodedNumber zero = Encode(pk(), 0.0);
  EXPECT_EQ(zero.mantissa, 0);
  EXPECT_EQ(zero.exponent, 0);

  const EncodedNumber two_half = Encode(pk(), 2.5);
  EXPECT_EQ(two_half.mantissa, 40);
  EXPECT_EQ(two_half.exponent, -1);

  const EncodedNumber minus_one = Encode(pk(), -1.0);
  EXPECT_EQ(minus_one.mantissa, pk().n - 1);
  EXPECT_EQ(minus_one.exponent, 0);
  EXPECT_GE(3 * minus_one.mantissa, 2 * pk().n);

  const EncodedNumber sixteen = Encode(pk(), 16.0);
  EXPECT_EQ(sixteen.mantissa, 1);
  EXPECT_EQ(sixteen.exponent, 1);
}

TEST_F(FloatCodecTest, DecodesSignedBands) {
  for (double x : {0.0, 1.0, -1.0, 2.5, -3.25}) {
    EXPECT_EQ(Decode(pk(), Encode(pk(), x)), x);
  }
  EXPECT_EQ(Decode(pk(), EncodedNumber{pk().n - 16, 0, pk().key_id}), -16.0);
  EXPECT_EQ(CodeOf([&] {
              Decode(pk(), EncodedNumber{pk().n / 2, 3, pk().key_id});
            }),
            ErrorCode::kOverflow);
}

TEST_F(FloatCodecTest, RoundsBelowPrecisionFloorToNearestEven) {
  const double unit = std::ldexp(1.0, -56);  // 16^-14
  EXPECT_EQ(Decode(pk(), Encode(pk(), 0.5 * unit)), 0.0);
  EXPECT_EQ(Decode(pk(), Encode(pk(), 1.5 * unit)), 2 * unit);
  EXPECT_EQ(Decode(pk(), Encode(pk(), 2.5 * unit)), 2 * unit);
  EXPECT_EQ(Encode(pk(), 1.5 * unit).exponent, -14);
}

TEST_F(FloatCodecTest, RejectsUnencodableValues) {
  EXPECT_EQ(CodeOf([&] { Encode(pk(), std::nan("")); }), ErrorCode::kDomain);
  EXPECT_EQ(CodeOf([&] {
              Encode(pk(), std::numeric_limits<double>::infinity());
            }),
            ErrorCode::kDomain);
  // A 16-bit key has n < 2^16; 2^20 has mantissa 1 at exponent 5 and fits,
  // while an odd 20-bit integer does not.
  const PaillierPublicKey& small = spkhe::testing::TestKey(16, 3).public_key;
  EXPECT_NO_THROW(Encode(small, std::ldexp(1.0, 20)));
  EXPECT_EQ(CodeOf([&] { Encode(small, 1048575.0); }), ErrorCode::kMagnitude);
}

TEST_F(FloatCodecTest, RandomRoundTripIsExact) {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 10000; ++i) {
    const double x = RandomDyadic(gen, 52, -56, 8);
    const EncodedNumber e = Encode(pk(), x);
    ASSERT_EQ(Decode(pk(), e), x);
    const bool middle = e.mantissa >= PositiveBandLimit(pk()) &&
                        e.mantissa < NegativeBandStart(pk());
    ASSERT_FALSE(middle);
    if (x < 0) ASSERT_GE(e.mantissa, NegativeBandStart(pk()));
  }
}

TEST_F(FloatCodecTest, AlignmentScalesHigherExponent) {
  const EncryptedNumber a = Enc(1.0);
  const EncryptedNumber b = Enc(0.5);
  ASSERT_EQ(a.exponent, 0);
  ASSERT_EQ(b.exponent, -1);
  auto [la, lb] = AlignExponents(pk(), a, b);
  EXPECT_EQ(la.exponent, -1);
  EXPECT_EQ(lb.exponent, -1);
  EXPECT_EQ(DecryptEncoded(sk(), pk(), la).mantissa, 16);
  EXPECT_EQ(lb.ciphertext.value, b.ciphertext.value);
  EXPECT_EQ(Dec(AddEncrypted(pk(), a, b)), 1.5);

  auto [same_a, same_b] = AlignExponents(pk(), a, Enc(2.0));
  EXPECT_EQ(same_a.ciphertext.value, a.ciphertext.value);
}

TEST_F(FloatCodecTest, AlignmentCapIsEnforced) {
  EncryptedNumber big = Enc(1.0);
  big.exponent = 70;
  EXPECT_EQ(CodeOf([&] { AlignExponents(pk(), big, Enc(1.0)); }),
            ErrorCode::kPrecisionOverflow);
  CodecOptions loose;
  loose.max_alignment_digits = 80;
  EXPECT_NO_THROW(AlignExponents(pk(), big, Enc(1.0), loose));
}

TEST_F(FloatCodecTest, AdditionExamples) {
  EXPECT_EQ(Dec(AddEncrypted(pk(), Enc(2.5), Enc(-2.5))), 0.0);
  std::mt19937_64 gen(2);
  double plain = 0.0;
  EncryptedNumber acc = Enc(0.0);
  for (int i = 0; i < 100; ++i) {
    // 30-bit significands over a 16-bit exponent range keep the running
    // sum exact in double.
    const double x = RandomDyadic(gen, 30, -20, -4);
    plain += x;
    acc = AddEncrypted(pk(), acc, Enc(x));
  }
  EXPECT_EQ(Dec(acc), plain);
}

TEST_F(FloatCodecTest, PlainMultiplicationExamples) {
  const double x = 3.125;
  EXPECT_EQ(Dec(MultiplyPlain(pk(), Enc(x), 1.0)), x);
  EXPECT_EQ(Dec(MultiplyPlain(pk(), Enc(2.5), -2.0)), -5.0);
  for (double k : {0.0, -7.75, 1e6, 123.456}) {
    EXPECT_EQ(Dec(MultiplyPlain(pk(), Enc(0.0), k)), 0.0);
  }
}

TEST_F(FloatCodecTest, RandomHomomorphicPairsAreExact) {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 200; ++i) {
    const double a = RandomDyadic(gen, 40, -40, -30);
    const double b = RandomDyadic(gen, 40, -40, -30);
    ASSERT_EQ(Dec(AddEncrypted(pk(), Enc(a), Enc(b))), a + b);
    const double c = RandomDyadic(gen, 26, -30, 4);
    const double d = RandomDyadic(gen, 26, -30, 4);
    ASSERT_EQ(Dec(MultiplyPlain(pk(), Enc(c), d)), c * d);
  }
}

TEST_F(FloatCodecTest, ForcedMiddleBandRaisesOverflow) {
  const EncryptedNumber e =
      EncryptEncoded(pk(), EncodedNumber{pk().n / 2, 0, pk().key_id}, rng_);
  EXPECT_EQ(CodeOf([&] { Dec(e); }), ErrorCode::kOverflow);
}

TEST_F(FloatCodecTest, KeyMismatchOnForeignFactor) {
  const EncodedNumber k = Encode(Key512(2).public_key, 2.0);
  EXPECT_EQ(CodeOf([&] { MultiplyEncoded(pk(), Enc(1.0), k); }),
            ErrorCode::kKeyMismatch);
}

}  // namespace
}  // namespace spkhe
