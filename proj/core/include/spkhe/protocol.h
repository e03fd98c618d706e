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

#ifndef SPKHE_PROTOCOL_H_
#define SPKHE_PROTOCOL_H_

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spkhe/comparators.h"

namespace spkhe {

enum class Role { kClient, kDbController, kAsOperator, kDbVendor, kAsVendor };
std::string_view RoleName(Role role);

enum class KeySlot { kPk, kSk, kPk1, kSk1, kPk2, kSk2 };
std::string_view KeySlotName(KeySlot slot);
bool IsSecret(KeySlot slot);

// What a message carries; the key-hygiene audit uses it to decide who may
// receive a payload.
enum class PayloadClass { kReference, kModel, kIntermediate, kScore };
std::string_view PayloadClassName(PayloadClass c);

struct Message {
  std::string step;
  Role sender = Role::kClient;
  Role receiver = Role::kClient;
  PayloadClass payload_class = PayloadClass::kReference;
  std::vector<EncryptedNumber> payload;
  std::uint64_t ciphertext_count = 0;
  std::uint64_t protected_bytes = 0;
  std::uint64_t metadata_bytes = 0;
  std::string payload_hash;
};

// Canonical text form of a payload: "<hex>:<exponent>;" per element.
std::string SerializePayload(const std::vector<EncryptedNumber>& payload);

// One JSON object per line, in delivery order.
std::string TranscriptToJsonLines(const std::vector<Message>& transcript);

struct ChannelTotals {
  std::uint64_t messages = 0;
  std::uint64_t ciphertexts = 0;
  std::uint64_t protected_bytes = 0;
  std::uint64_t metadata_bytes = 0;
};

using Channel = std::pair<Role, Role>;

// Per-channel traffic. Protected bytes count ciphertexts only, each nu =
// 2 * bits(n) / 8 bytes; plaintext exponents are tracked separately.
class ChannelLedger {
 public:
  ChannelLedger() = default;
  explicit ChannelLedger(std::uint64_t nu_bytes) : nu_bytes_(nu_bytes) {}

  void Record(const Message& message);

  std::uint64_t nu_bytes() const { return nu_bytes_; }
  const std::map<Channel, ChannelTotals>& channels() const { return channels_; }
  ChannelTotals channel(Role from, Role to) const;
  std::uint64_t total_ciphertexts() const;
  std::uint64_t total_protected_bytes() const;
  std::uint64_t total_metadata_bytes() const;

  std::string ToJson() const;

 private:
  std::uint64_t nu_bytes_ = 0;
  std::map<Channel, ChannelTotals> channels_;
};

struct Decision {
  double score = 0.0;
  double threshold = 0.0;
  bool accepted = false;
};

// accepted = (threshold <= score).
Decision Decide(double score, double threshold);

struct Entity {
  Role role = Role::kClient;
  std::set<KeySlot> held_keys;
  std::deque<Message> received;
  OpCounter counter;
};

using KeyPlacement = std::map<Role, std::set<KeySlot>>;

// Key placement of each architecture: the operator holds (pk, sk) in the
// single-key schemes; in the vendor scheme it holds (pk1, sk1, pk2) and the
// vendor server holds (pk2, sk2). The client never holds a secret key.
KeyPlacement DefaultPlacement(ComparatorKind kind);
// Throws kConfiguration when a placement breaks those rules.
void ValidatePlacement(ComparatorKind kind, const KeyPlacement& placement);

struct RunOptions {
  std::optional<KeyPlacement> placement;
  CodecOptions codec;
  // Added by the decrypting server before the decision (e.g. the 2Cov k).
  double score_offset = 0.0;
};

struct RunResult {
  ComparatorKind kind = ComparatorKind::kCosine;
  Decision decision;
  ChannelLedger ledger;
  OpCounter totals;
  std::map<Role, Entity> entities;
  std::vector<Message> transcript;
  // key_id -> secret slot able to decrypt it.
  std::map<std::string, KeySlot> secret_slot_of_key;
};

template <typename Reference>
using ReferenceDb = std::map<std::string, Reference>;

// Single-key layout with a cosine reference. Steps 2 (reference to client) and
// 4 (encrypted score to operator).
RunResult RunCosine(const PaillierKeyPair& keys,
                    const ReferenceDb<ProtectedReferenceCosine>& db,
                    const std::string& subject, const Eigen::VectorXd& probe,
                    double eta, RandomSource& rng,
                    const RunOptions& options = {});

// Same layout with the Euclidean reference. The decision score is the
// negated squared distance so that larger still means more similar.
RunResult RunEuclidean(const PaillierKeyPair& keys,
                       const ReferenceDb<ProtectedReferenceEuclidean>& db,
                       const std::string& subject,
                       const Eigen::VectorXd& probe, double eta,
                       RandomSource& rng, const RunOptions& options = {});

// Subject-protecting 2Cov: steps 1a-8. The client is provisioned with
// plaintext Lambda and Gamma from `model`.
RunResult RunTwoCovSubject(
    const PaillierKeyPair& keys, const TwoCovModel& model,
    const ReferenceDb<ProtectedReferenceTwoCovSubject>& db,
    const std::string& subject, const Eigen::VectorXd& probe, double eta,
    RandomSource& rng, const RunOptions& options = {});

// Subject- and vendor-protecting 2Cov: steps 1a-12. References are under
// pair1, the vendor model under pair2.
RunResult RunTwoCovVendor(
    const PaillierKeyPair& pair1, const PaillierKeyPair& pair2,
    const EncryptedModel& vendor_model,
    const ReferenceDb<ProtectedReferenceTwoCovVendor>& db,
    const std::string& subject, const Eigen::VectorXd& probe, double eta,
    RandomSource& rng, const RunOptions& options = {});

// Material the key-hygiene audit searches for in channel payloads.
struct AuditSecrets {
  std::vector<PaillierSecretKey> secret_keys;
  std::vector<PaillierPublicKey> public_keys;
  std::vector<Eigen::VectorXd> plaintext_vectors;
};

struct AuditReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Checks that no secret key material or plaintext biometric vector crossed
// a channel, that the client holds no secret key, and that references and
// model parameters never reached a party able to decrypt them.
AuditReport AuditRun(const RunResult& result, const AuditSecrets& secrets);

}  // namespace spkhe

#endif  // SPKHE_PROTOCOL_H_
