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

#include "spkhe/comparators.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "spkhe/error.h"
#include "spkhe/synthetic.h"
#include "test_support.h"

namespace spkhe {
namespace {

using ::spkhe::testing::CodeOf;
using ::spkhe::testing::Key512;
using ::spkhe::testing::RelativeError;

TwoCovModel IdentityModel(int dim) {
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dim, dim);
  return DeriveHyperparameters(I, I, Eigen::VectorXd::Zero(dim));
}

TwoCovModel RandomModel(int dim, int seed) {
  return DeriveHyperparameters(RandomSpdMatrix(dim, 0.5, 2.0, seed),
                               RandomSpdMatrix(dim, 0.5, 2.0, seed + 1),
                               RandomGaussianVector(dim, seed + 2));
}

Eigen::VectorXd Vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

class ComparatorsTest : public ::testing::Test {
 protected:
  const PaillierKeyPair& keys_ = Key512();
  const PaillierKeyPair& keys2_ = Key512(2);
  OpCounter counter_;
  LinalgContext ctx_{keys_.public_key, &counter_};
  LinalgContext ctx2_{keys2_.public_key, nullptr};
  RandomSource rng_ = RandomSource::FromSeed(77);

  double Dec(const EncryptedNumber& e) {
    return DecryptValue(keys_.secret_key, keys_.public_key, e);
  }
  double Dec2(const EncryptedNumber& e) {
    return DecryptValue(keys2_.secret_key, keys2_.public_key, e);
  }
  double Vendor(const TwoCovModel& model, const Eigen::VectorXd& x,
                const Eigen::VectorXd& y) {
    const ProtectedReferenceTwoCovVendor ref =
        EnrollTwoCovVendor(ctx_, y, rng_);
    const EncryptedModel enc_model = EncryptModel(ctx2_, model, rng_);
    const VendorClientMessage msg = ClientComputeVendor(ctx_, ref, x, rng_);
    return Dec2(OperatorCombineVendor(keys_.public_key, keys_.secret_key,
                                      keys2_.public_key, enc_model, msg));
  }
};

TEST_F(ComparatorsTest, NamesRoundTrip) {
  for (ComparatorKind k :
       {ComparatorKind::kEuclidean, ComparatorKind::kCosine,
        ComparatorKind::kTwoCovSubject, ComparatorKind::kTwoCovVendor}) {
    EXPECT_EQ(ParseComparator(ComparatorName(k)), k);
  }
  EXPECT_EQ(CodeOf([] { ParseComparator("plda"); }), ErrorCode::kUsage);
}

TEST_F(ComparatorsTest, EnrolmentCiphertextCounts) {
  const Eigen::VectorXd y = LengthNormalize(RandomGaussianVector(5, 1));
  const TwoCovModel m = IdentityModel(5);
  EXPECT_EQ(EnrollEuclidean(ctx_, y, rng_).ciphertext_count(), 6u);
  EXPECT_EQ(EnrollCosine(ctx_, y, rng_).ciphertext_count(), 5u);
  EXPECT_EQ(EnrollTwoCovSubject(ctx_, m.Gamma, y, rng_).ciphertext_count(), 6u);
  EXPECT_EQ(EnrollTwoCovVendor(ctx_, y, rng_).ciphertext_count(), 30u);
  EXPECT_EQ(EncryptModel(ctx2_, m, rng_).ciphertext_count(), 50u);
}

TEST_F(ComparatorsTest, EnrolmentDecryptsToComponents) {
  const Eigen::VectorXd y = Vec2(0.75, -1.5);
  const ProtectedReferenceEuclidean euc = EnrollEuclidean(ctx_, y, rng_);
  EXPECT_EQ(Dec(euc.sum_sq), y.squaredNorm());
  EXPECT_EQ(DecryptVector(ctx_, keys_.secret_key, euc.elements), y);
  const ProtectedReferenceTwoCovVendor v = EnrollTwoCovVendor(ctx_, y, rng_);
  EXPECT_EQ(DecryptMatrix(ctx_, keys_.secret_key, v.gram), y * y.transpose());
  const ProtectedReferenceTwoCovSubject s = EnrollTwoCovSubject(
      ctx_, IdentityModel(2).Gamma, Eigen::VectorXd::Zero(2), rng_);
  EXPECT_EQ(Dec(s.quad_term), 0.0);
}

TEST_F(ComparatorsTest, CosineRequiresUnitReference) {
  EXPECT_EQ(CodeOf([&] { EnrollCosine(ctx_, Vec2(1, 1), rng_); }),
            ErrorCode::kNormalization);
}

TEST_F(ComparatorsTest, EuclideanExamples) {
  const ProtectedReferenceEuclidean ref = EnrollEuclidean(ctx_, Vec2(3, 4), rng_);
  counter_ = {};
  EXPECT_EQ(Dec(ScoreEuclideanEncrypted(ctx_, ref, Vec2(1, 2), rng_)), 8.0);
  EXPECT_EQ(counter_.encryptions, 1u);
  EXPECT_EQ(counter_.exponentiations, 2u);
  EXPECT_NEAR(Dec(ScoreEuclideanEncrypted(ctx_, ref, Vec2(3, 4), rng_)), 0.0,
              1e-9);
  EXPECT_EQ(CodeOf([&] {
              ScoreEuclideanEncrypted(ctx_, ref, Eigen::VectorXd::Ones(3),
                                      rng_);
            }),
            ErrorCode::kShape);
  for (int seed = 0; seed < 20; ++seed) {
    const Eigen::VectorXd x = RandomGaussianVector(16, seed);
    const Eigen::VectorXd y = RandomGaussianVector(16, 500 + seed);
    const double got =
        Dec(ScoreEuclideanEncrypted(ctx_, EnrollEuclidean(ctx_, y, rng_), x,
                                    rng_));
    ASSERT_LE(RelativeError(got, PlainEuclidean(x, y)), 1e-6);
  }
}

TEST_F(ComparatorsTest, CosineExamples) {
  const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(3, 0);
  const Eigen::VectorXd e2 = Eigen::VectorXd::Unit(3, 1);
  const ProtectedReferenceCosine ref = EnrollCosine(ctx_, e1, rng_);
  counter_ = {};
  EXPECT_NEAR(Dec(ScoreCosineEncrypted(ctx_, ref, e1)), 1.0, 1e-9);
  EXPECT_NEAR(Dec(ScoreCosineEncrypted(ctx_, ref, e2)), 0.0, 1e-9);
  EXPECT_EQ(counter_.encryptions, 0u);
  EXPECT_EQ(CodeOf([&] {
              ScoreCosineEncrypted(ctx_, ref, Eigen::VectorXd::Zero(3));
            }),
            ErrorCode::kNormalization);
  // Unnormalized probes are normalized on the way in.
  EXPECT_NEAR(Dec(ScoreCosineEncrypted(ctx_, ref, 5.0 * e1)), 1.0, 1e-9);
  for (int seed = 0; seed < 20; ++seed) {
    const Eigen::VectorXd x = LengthNormalize(RandomGaussianVector(16, seed));
    const Eigen::VectorXd y =
        LengthNormalize(RandomGaussianVector(16, 900 + seed));
    const double got =
        Dec(ScoreCosineEncrypted(ctx_, EnrollCosine(ctx_, y, rng_), x));
    ASSERT_LE(RelativeError(got, PlainCosine(x, y)), 1e-6);
  }
}

TEST_F(ComparatorsTest, SubjectExamples) {
  const TwoCovModel m = IdentityModel(2);
  const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(2, 0);
  const ProtectedReferenceTwoCovSubject ref =
      EnrollTwoCovSubject(ctx_, m.Gamma, e1, rng_);
  counter_ = {};
  EXPECT_NEAR(Dec(ScoreTwoCovSubjectEncrypted(ctx_, ref, e1, m.Lambda,
                                              m.Gamma, rng_)),
              1.0 / 6.0, 1e-6);
  EXPECT_EQ(counter_.encryptions, 1u);
  EXPECT_EQ(counter_.exponentiations, 4u);
  EXPECT_EQ(counter_.ciphertext_products, 2u + 3u);

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  EXPECT_EQ(Dec(ScoreTwoCovSubjectEncrypted(
                ctx_, EnrollTwoCovSubject(ctx_, m.Gamma, zero, rng_), zero,
                m.Lambda, m.Gamma, rng_)),
            0.0);
}

TEST_F(ComparatorsTest, SubjectMatchesPlaintext) {
  const TwoCovModel m = RandomModel(16, 40);
  for (int seed = 0; seed < 100; ++seed) {
    const Eigen::VectorXd x = RandomGaussianVector(16, seed);
    const Eigen::VectorXd y = RandomGaussianVector(16, 300 + seed);
    const double got = Dec(ScoreTwoCovSubjectEncrypted(
        ctx_, EnrollTwoCovSubject(ctx_, m.Gamma, y, rng_), x, m.Lambda,
        m.Gamma, rng_));
    ASSERT_LE(RelativeError(got, ScoreDiscriminative(m, x, y)), 1e-6);
  }
}

TEST_F(ComparatorsTest, ClientVendorMessages) {
  const Eigen::VectorXd y = Vec2(0, 1);
  const ProtectedReferenceTwoCovVendor ref = EnrollTwoCovVendor(ctx_, y, rng_);
  counter_ = {};
  const VendorClientMessage msg =
      ClientComputeVendor(ctx_, ref, Vec2(1, 0), rng_);
  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  EXPECT_EQ(DecryptMatrix(ctx_, keys_.secret_key, msg.c1), swap);
  EXPECT_EQ(counter_.encryptions, 4u);
  EXPECT_EQ(counter_.exponentiations, 8u);

  const VendorClientMessage zero =
      ClientComputeVendor(ctx_, ref, Eigen::VectorXd::Zero(2), rng_);
  EXPECT_EQ(DecryptMatrix(ctx_, keys_.secret_key, zero.c1),
            Eigen::MatrixXd::Zero(2, 2));
  EXPECT_EQ(DecryptMatrix(ctx_, keys_.secret_key, zero.c23), y * y.transpose());

  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> d(-64, 64);
  Eigen::VectorXd x4(4), y4(4);
  for (int i = 0; i < 4; ++i) {
    x4[i] = d(gen) / 8.0;
    y4[i] = d(gen) / 8.0;
  }
  const VendorClientMessage m4 = ClientComputeVendor(
      ctx_, EnrollTwoCovVendor(ctx_, y4, rng_), x4, rng_);
  EXPECT_EQ(DecryptMatrix(ctx_, keys_.secret_key, m4.c23),
            x4 * x4.transpose() + y4 * y4.transpose());
  EXPECT_EQ(DecryptMatrix(ctx_, keys_.secret_key, m4.c1),
            x4 * y4.transpose() + y4 * x4.transpose());
}

TEST_F(ComparatorsTest, VendorExamples) {
  const TwoCovModel m = IdentityModel(2);
  const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(2, 0);
  EXPECT_NEAR(Vendor(m, e1, e1), 1.0 / 6.0, 1e-6);
  EXPECT_EQ(Vendor(m, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2)), 0.0);
}

TEST_F(ComparatorsTest, VendorCountsAndKeys) {
  const TwoCovModel m = RandomModel(3, 60);
  const ProtectedReferenceTwoCovVendor ref =
      EnrollTwoCovVendor(ctx_, RandomGaussianVector(3, 1), rng_);
  const EncryptedModel enc_model = EncryptModel(ctx2_, m, rng_);
  const VendorClientMessage msg =
      ClientComputeVendor(ctx_, ref, RandomGaussianVector(3, 2), rng_);
  OpCounter op;
  const EncryptedNumber s =
      OperatorCombineVendor(keys_.public_key, keys_.secret_key,
                            keys2_.public_key, enc_model, msg, &op);
  EXPECT_EQ(s.key_id(), keys2_.public_key.key_id);
  EXPECT_EQ(op.decryptions, 18u);
  EXPECT_EQ(op.exponentiations, 18u);
  EXPECT_EQ(op.ciphertext_products, 2u * 8u + 1u);
  // A model under the reference key cannot be combined by an operator
  // expecting pk2.
  const EncryptedModel wrong = EncryptModel(ctx_, m, rng_);
  EXPECT_EQ(CodeOf([&] {
              OperatorCombineVendor(keys_.public_key, keys_.secret_key,
                                    keys2_.public_key, wrong, msg);
            }),
            ErrorCode::kKeyMismatch);
}

TEST_F(ComparatorsTest, SubjectAndVendorRoutesAgree) {
  const TwoCovModel m = RandomModel(4, 80);
  for (int seed = 0; seed < 20; ++seed) {
    const Eigen::VectorXd x = RandomGaussianVector(4, seed);
    const Eigen::VectorXd y = RandomGaussianVector(4, 50 + seed);
    const double subject = Dec(ScoreTwoCovSubjectEncrypted(
        ctx_, EnrollTwoCovSubject(ctx_, m.Gamma, y, rng_), x, m.Lambda,
        m.Gamma, rng_));
    ASSERT_LE(RelativeError(Vendor(m, x, y), subject), 1e-6);
  }
}

TEST_F(ComparatorsTest, CalibrationOffset) {
  const TwoCovModel identity = IdentityModel(2);
  EXPECT_NEAR(AddCalibrationOffset(0.0, identity), 2.0 * std::log(0.75),
              1e-15);
  TwoCovModel flat = identity;
  flat.k = 0.0;
  EXPECT_EQ(AddCalibrationOffset(0.3, flat), 0.3);

  const TwoCovModel m = RandomModel(5, 90);
  for (int seed = 0; seed < 20; ++seed) {
    const Eigen::VectorXd x = RandomGaussianVector(5, seed);
    const Eigen::VectorXd y = RandomGaussianVector(5, 70 + seed);
    ASSERT_NEAR(
        AddCalibrationOffset(ScoreDiscriminative(m, x, y), m,
                             Eigen::VectorXd(x + y)),
        ScoreFull(m, x, y), 1e-12);
  }
  EXPECT_EQ(CodeOf([&] {
              AddCalibrationOffset(0.0, m, Eigen::VectorXd::Zero(2));
            }),
            ErrorCode::kShape);
}

TEST_F(ComparatorsTest, EnrolmentsAreUnlinkable) {
  const Eigen::VectorXd y = RandomGaussianVector(6, 3);
  const ProtectedReferenceEuclidean a = EnrollEuclidean(ctx_, y, rng_);
  const ProtectedReferenceEuclidean b = EnrollEuclidean(ctx_, y, rng_);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    EXPECT_NE(a.elements[i].ciphertext.value, b.elements[i].ciphertext.value);
  }
  EXPECT_NE(a.sum_sq.ciphertext.value, b.sum_sq.ciphertext.value);
}

TEST_F(ComparatorsTest, RenewedKeysRejectOldProbes) {
  const Eigen::VectorXd y = LengthNormalize(RandomGaussianVector(4, 5));
  const ProtectedReferenceCosine renewed = EnrollCosine(ctx2_, y, rng_);
  EXPECT_EQ(CodeOf([&] { ScoreCosineEncrypted(ctx_, renewed, y); }),
            ErrorCode::kKeyMismatch);
}

}  // namespace
}  // namespace spkhe
