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

#include "spkhe/protocol.h"

#include <algorithm>
#include <limits>

#include <gtest/gtest.h>

#include "spkhe/complexity.h"
#include "spkhe/error.h"
#include "spkhe/synthetic.h"
#include "test_support.h"

namespace spkhe {
namespace {

using ::spkhe::testing::CodeOf;
using ::spkhe::testing::Key512;

TwoCovModel Model(int dim, int seed) {
  return DeriveHyperparameters(RandomSpdMatrix(dim, 0.5, 2.0, seed),
                               RandomSpdMatrix(dim, 0.5, 2.0, seed + 1),
                               RandomGaussianVector(dim, seed + 2));
}

struct Fixture {
  int dim;
  TwoCovModel model;
  Eigen::VectorXd ref_vec;
  Eigen::VectorXd probe;
};

Fixture MakeFixture(int dim) {
  return {dim, Model(dim, 10 * dim),
          LengthNormalize(RandomGaussianVector(dim, 1000 + dim)),
          LengthNormalize(RandomGaussianVector(dim, 2000 + dim))};
}

RunResult RunKind(ComparatorKind kind, const Fixture& fx, double eta,
                  std::uint64_t seed, const RunOptions& opts = {}) {
  const PaillierKeyPair& k1 = Key512(1);
  const PaillierKeyPair& k2 = Key512(2);
  RandomSource rng = RandomSource::FromSeed(seed);
  const LinalgContext ctx{k1.public_key};
  switch (kind) {
    case ComparatorKind::kCosine: {
      ReferenceDb<ProtectedReferenceCosine> db;
      db.emplace("alice", EnrollCosine(ctx, fx.ref_vec, rng));
      return RunCosine(k1, db, "alice", fx.probe, eta, rng, opts);
    }
    case ComparatorKind::kEuclidean: {
      ReferenceDb<ProtectedReferenceEuclidean> db;
      db.emplace("alice", EnrollEuclidean(ctx, fx.ref_vec, rng));
      return RunEuclidean(k1, db, "alice", fx.probe, eta, rng, opts);
    }
    case ComparatorKind::kTwoCovSubject: {
      ReferenceDb<ProtectedReferenceTwoCovSubject> db;
      db.emplace("alice",
                 EnrollTwoCovSubject(ctx, fx.model.Gamma, fx.ref_vec, rng));
      return RunTwoCovSubject(k1, fx.model, db, "alice", fx.probe, eta, rng,
                              opts);
    }
    case ComparatorKind::kTwoCovVendor: {
      ReferenceDb<ProtectedReferenceTwoCovVendor> db;
      db.emplace("alice", EnrollTwoCovVendor(ctx, fx.ref_vec, rng));
      const EncryptedModel em =
          EncryptModel(LinalgContext{k2.public_key}, fx.model, rng);
      return RunTwoCovVendor(k1, k2, em, db, "alice", fx.probe, eta, rng,
                             opts);
    }
  }
  return {};
}

constexpr ComparatorKind kAllKinds[] = {
    ComparatorKind::kEuclidean, ComparatorKind::kCosine,
    ComparatorKind::kTwoCovSubject, ComparatorKind::kTwoCovVendor};

TEST(ProtocolTest, RoleAndSlotNames) {
  EXPECT_EQ(RoleName(Role::kAsOperator), "ASOperator");
  EXPECT_EQ(RoleName(Role::kDbController), "DBController");
  EXPECT_TRUE(IsSecret(KeySlot::kSk2));
  EXPECT_FALSE(IsSecret(KeySlot::kPk1));
}

TEST(ProtocolTest, DecideIsInclusive) {
  EXPECT_TRUE(Decide(0.5, 0.5).accepted);
  EXPECT_FALSE(Decide(0.49, 0.5).accepted);
  EXPECT_TRUE(Decide(-1e300, -std::numeric_limits<double>::infinity()).accepted);
  EXPECT_FALSE(Decide(1e300, std::numeric_limits<double>::infinity()).accepted);
}

TEST(ProtocolTest, LedgerMatchesClosedFormPerChannel) {
  for (int dim : {2, 4, 16}) {
    const Fixture fx = MakeFixture(dim);
    for (ComparatorKind kind : kAllKinds) {
      SCOPED_TRACE(std::string(ComparatorName(kind)) + " F=" +
                   std::to_string(dim));
      const RunResult r = RunKind(kind, fx, 0.0, 5);
      const auto expected = ExpectedChannelCiphertexts(kind, dim);
      ASSERT_EQ(r.ledger.channels().size(), expected.size());
      std::uint64_t total = 0;
      for (const auto& [channel, count] : expected) {
        EXPECT_EQ(r.ledger.channel(channel.first, channel.second).ciphertexts,
                  count);
        total += count;
      }
      EXPECT_EQ(r.ledger.total_ciphertexts(), total);
      EXPECT_EQ(r.ledger.total_protected_bytes(), total * 128u);
      EXPECT_EQ(r.ledger.total_metadata_bytes(), total * 4u);
    }
  }
}

TEST(ProtocolTest, VendorTotalIsFiveFSquaredPlusFPlusOne) {
  const Fixture fx = MakeFixture(4);
  const RunResult r = RunKind(ComparatorKind::kTwoCovVendor, fx, 0.0, 6);
  EXPECT_EQ(r.ledger.total_ciphertexts(), 5u * 16u + 4u + 1u);
  EXPECT_EQ(r.ledger.channel(Role::kDbVendor, Role::kAsOperator).ciphertexts,
            32u);
  EXPECT_EQ(r.ledger.channel(Role::kAsOperator, Role::kAsVendor).ciphertexts,
            1u);
}

TEST(ProtocolTest, OperationCountsAtSixteen) {
  const Fixture fx = MakeFixture(16);
  const RunResult cos = RunKind(ComparatorKind::kCosine, fx, 0.0, 7);
  EXPECT_EQ(cos.totals.encryptions, 0u);
  EXPECT_EQ(cos.totals.decryptions, 1u);
  EXPECT_EQ(cos.totals.exponentiations, 16u);

  const RunResult euc = RunKind(ComparatorKind::kEuclidean, fx, 0.0, 7);
  EXPECT_EQ(euc.totals.encryptions, 1u);
  EXPECT_EQ(euc.totals.decryptions, 1u);

  const RunResult sub = RunKind(ComparatorKind::kTwoCovSubject, fx, 0.0, 7);
  EXPECT_EQ(sub.totals.encryptions, 1u);
  EXPECT_EQ(sub.totals.decryptions, 1u);
  EXPECT_EQ(sub.totals.exponentiations, 32u);

  const RunResult ven = RunKind(ComparatorKind::kTwoCovVendor, fx, 0.0, 7);
  EXPECT_EQ(ven.totals.encryptions, 256u);
  EXPECT_EQ(ven.totals.decryptions, 513u);
  EXPECT_EQ(ven.totals.exponentiations, 1024u);
  EXPECT_EQ(ven.totals.ciphertext_products, 1023u);
  EXPECT_EQ(ven.entities.at(Role::kAsVendor).counter.decryptions, 1u);
  EXPECT_EQ(ven.entities.at(Role::kClient).counter.decryptions, 0u);
}

TEST(ProtocolTest, DecisionsMatchPlaintext) {
  const Fixture fx = MakeFixture(8);
  const double cos = PlainCosine(fx.probe, fx.ref_vec);
  EXPECT_NEAR(RunKind(ComparatorKind::kCosine, fx, 0.0, 8).decision.score, cos,
              1e-9);
  EXPECT_NEAR(RunKind(ComparatorKind::kEuclidean, fx, 0.0, 8).decision.score,
              -PlainEuclidean(fx.probe, fx.ref_vec), 1e-9);
  const double disc = ScoreDiscriminative(fx.model, fx.probe, fx.ref_vec);
  EXPECT_NEAR(
      RunKind(ComparatorKind::kTwoCovSubject, fx, 0.0, 8).decision.score,
      disc, 1e-6 * std::max(1.0, std::abs(disc)));
  EXPECT_NEAR(RunKind(ComparatorKind::kTwoCovVendor, fx, 0.0, 8).decision.score,
              disc, 1e-6 * std::max(1.0, std::abs(disc)));
  RunOptions opts;
  opts.score_offset = fx.model.k;
  EXPECT_NEAR(
      RunKind(ComparatorKind::kTwoCovSubject, fx, 0.0, 8, opts).decision.score,
      disc + fx.model.k, 1e-6 * std::max(1.0, std::abs(disc)));
}

TEST(ProtocolTest, ThresholdExtremes) {
  const Fixture fx = MakeFixture(4);
  const double inf = std::numeric_limits<double>::infinity();
  for (ComparatorKind kind : kAllKinds) {
    EXPECT_TRUE(RunKind(kind, fx, -inf, 9).decision.accepted);
    EXPECT_FALSE(RunKind(kind, fx, inf, 9).decision.accepted);
  }
  const double s = RunKind(ComparatorKind::kCosine, fx, 0.0, 9).decision.score;
  EXPECT_TRUE(RunKind(ComparatorKind::kCosine, fx, s - 1e-9, 9).decision.accepted);
}

TEST(ProtocolTest, SeededRunsAreReproducible) {
  const Fixture fx = MakeFixture(4);
  for (ComparatorKind kind : kAllKinds) {
    const RunResult a = RunKind(kind, fx, 0.0, 11);
    const RunResult b = RunKind(kind, fx, 0.0, 11);
    const RunResult c = RunKind(kind, fx, 0.0, 12);
    EXPECT_EQ(TranscriptToJsonLines(a.transcript),
              TranscriptToJsonLines(b.transcript));
    EXPECT_NE(TranscriptToJsonLines(a.transcript),
              TranscriptToJsonLines(c.transcript));
  }
}

TEST(ProtocolTest, TranscriptFields) {
  const RunResult r = RunKind(ComparatorKind::kCosine, MakeFixture(2), 0.0, 3);
  ASSERT_EQ(r.transcript.size(), 2u);
  EXPECT_EQ(r.transcript[0].step, "2");
  EXPECT_EQ(r.transcript[1].step, "4");
  EXPECT_EQ(r.transcript[0].payload_hash.size(), 64u);
  const std::string lines = TranscriptToJsonLines(r.transcript);
  EXPECT_NE(lines.find("\"from\":\"DBController\""), std::string::npos);
  EXPECT_EQ(std::count(lines.begin(), lines.end(), '\n'), 2);
  EXPECT_EQ(r.entities.at(Role::kClient).received.size(), 1u);
}

TEST(ProtocolTest, MissingSubjectAndShapeErrors) {
  const PaillierKeyPair& keys = Key512();
  RandomSource rng = RandomSource::FromSeed(1);
  ReferenceDb<ProtectedReferenceCosine> db;
  db.emplace("alice", EnrollCosine(LinalgContext{keys.public_key},
                                   Eigen::VectorXd::Unit(3, 0), rng));
  EXPECT_EQ(CodeOf([&] {
              RunCosine(keys, db, "bob", Eigen::VectorXd::Unit(3, 0), 0.0, rng);
            }),
            ErrorCode::kLookup);
  EXPECT_EQ(CodeOf([&] {
              RunCosine(keys, db, "alice", Eigen::VectorXd::Unit(4, 0), 0.0,
                        rng);
            }),
            ErrorCode::kShape);
}

TEST(ProtocolTest, PlacementRules) {
  for (ComparatorKind kind : kAllKinds) {
    EXPECT_NO_THROW(ValidatePlacement(kind, DefaultPlacement(kind)));
  }
  KeyPlacement leaky = DefaultPlacement(ComparatorKind::kCosine);
  leaky[Role::kClient].insert(KeySlot::kSk);
  EXPECT_EQ(CodeOf([&] { ValidatePlacement(ComparatorKind::kCosine, leaky); }),
            ErrorCode::kConfiguration);

  KeyPlacement foreign = DefaultPlacement(ComparatorKind::kCosine);
  foreign[Role::kAsOperator].insert(KeySlot::kPk2);
  EXPECT_EQ(
      CodeOf([&] { ValidatePlacement(ComparatorKind::kCosine, foreign); }),
      ErrorCode::kConfiguration);

  KeyPlacement vendor = DefaultPlacement(ComparatorKind::kTwoCovVendor);
  vendor[Role::kAsOperator].insert(KeySlot::kSk2);
  EXPECT_EQ(CodeOf([&] {
              ValidatePlacement(ComparatorKind::kTwoCovVendor, vendor);
            }),
            ErrorCode::kConfiguration);

  KeyPlacement missing = DefaultPlacement(ComparatorKind::kTwoCovVendor);
  missing[Role::kAsVendor].erase(KeySlot::kSk2);
  EXPECT_EQ(CodeOf([&] {
              ValidatePlacement(ComparatorKind::kTwoCovVendor, missing);
            }),
            ErrorCode::kConfiguration);

  RunOptions opts;
  opts.placement = leaky;
  EXPECT_EQ(CodeOf([&] {
              RunKind(ComparatorKind::kCosine, MakeFixture(2), 0.0, 1, opts);
            }),
            ErrorCode::kConfiguration);
}

TEST(ProtocolTest, AuditPassesOnDefaultRuns) {
  const Fixture fx = MakeFixture(4);
  AuditSecrets secrets;
  secrets.secret_keys = {Key512(1).secret_key, Key512(2).secret_key};
  secrets.public_keys = {Key512(1).public_key, Key512(2).public_key};
  secrets.plaintext_vectors = {fx.ref_vec, fx.probe};
  for (ComparatorKind kind : kAllKinds) {
    const AuditReport report = AuditRun(RunKind(kind, fx, 0.0, 13), secrets);
    EXPECT_TRUE(report.ok) << ComparatorName(kind) << ": "
                           << (report.violations.empty()
                                   ? ""
                                   : report.violations.front());
  }
}

TEST(ProtocolTest, AuditFlagsLeakedSecret) {
  const Fixture fx = MakeFixture(2);
  RunResult r = RunKind(ComparatorKind::kCosine, fx, 0.0, 14);
  // Smuggle lambda into the transcript as if it were a ciphertext.
  r.transcript[1].payload[0].ciphertext.value = Key512(1).secret_key.lambda;
  AuditSecrets secrets;
  secrets.secret_keys = {Key512(1).secret_key};
  EXPECT_FALSE(AuditRun(r, secrets).ok);

  RunResult sent_back = RunKind(ComparatorKind::kCosine, fx, 0.0, 14);
  sent_back.transcript[0].receiver = Role::kAsOperator;
  EXPECT_FALSE(AuditRun(sent_back, AuditSecrets{}).ok);
}

}  // namespace
}  // namespace spkhe
