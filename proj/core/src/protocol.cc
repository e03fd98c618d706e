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
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "spkhe/error.h"
#include "spkhe/hash.h"

namespace spkhe {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::uint64_t kExponentMetadataBytes = 4;
// Shorter hex strings match ciphertext text by chance too often to be
// evidence of a leak.
constexpr std::size_t kMinLeakHexChars = 12;

std::uint64_t NuBytes(const PaillierPublicKey& pk) {
  return (2 * static_cast<std::uint64_t>(pk.bit_length) + 7) / 8;
}

// Keys a run can hand out, indexed by slot.
struct KeyRing {
  std::map<KeySlot, const PaillierPublicKey*> public_keys;
  std::map<KeySlot, const PaillierSecretKey*> secret_keys;
};

KeyRing SingleKeyRing(const PaillierKeyPair& keys) {
  KeyRing ring;
  ring.public_keys[KeySlot::kPk] = &keys.public_key;
  ring.secret_keys[KeySlot::kSk] = &keys.secret_key;
  return ring;
}

class Session {
 public:
  Session(ComparatorKind kind, const KeyPlacement& placement, KeyRing ring,
          std::uint64_t nu_bytes)
      : ring_(std::move(ring)) {
    ValidatePlacement(kind, placement);
    result_.kind = kind;
    result_.ledger = ChannelLedger(nu_bytes);
    for (const auto& [role, slots] : placement) {
      Entity entity;
      entity.role = role;
      entity.held_keys = slots;
      result_.entities.emplace(role, std::move(entity));
    }
  }

  Entity& entity(Role role) {
    auto it = result_.entities.find(role);
    if (it == result_.entities.end()) {
      Entity e;
      e.role = role;
      it = result_.entities.emplace(role, std::move(e)).first;
    }
    return it->second;
  }

  OpCounter* counter(Role role) { return &entity(role).counter; }

  const PaillierPublicKey& PublicKey(Role role, KeySlot slot) {
    RequireHeld(role, slot);
    return *ring_.public_keys.at(slot);
  }

  const PaillierSecretKey& SecretKey(Role role, KeySlot slot) {
    RequireHeld(role, slot);
    return *ring_.secret_keys.at(slot);
  }

  void Send(std::string step, Role from, Role to, PayloadClass payload_class,
            std::vector<EncryptedNumber> payload, std::uint64_t nu_bytes) {
    Message m;
    m.step = std::move(step);
    m.sender = from;
    m.receiver = to;
    m.payload_class = payload_class;
    m.ciphertext_count = payload.size();
    m.protected_bytes = m.ciphertext_count * nu_bytes;
    m.metadata_bytes = m.ciphertext_count * kExponentMetadataBytes;
    m.payload_hash = Sha256Hex(SerializePayload(payload));
    m.payload = std::move(payload);
    queue_.push_back(std::move(m));
  }

  // Delivers the next queued message, which must be `step` addressed to
  // `to`.
  const Message& Receive(Role to, std::string_view step) {
    if (queue_.empty() || queue_.front().receiver != to ||
        queue_.front().step != step) {
      throw Error(ErrorCode::kConfiguration,
                  std::string(RoleName(to)) + " expected step " +
                      std::string(step) + " but the queue disagrees");
    }
    Message m = std::move(queue_.front());
    queue_.pop_front();
    result_.ledger.Record(m);
    result_.transcript.push_back(m);
    Entity& receiver = entity(to);
    receiver.received.push_back(std::move(m));
    return receiver.received.back();
  }

  RunResult Finish(Decision decision) {
    if (!queue_.empty()) {
      throw Error(ErrorCode::kConfiguration,
                  "undelivered message at step " + queue_.front().step);
    }
    result_.decision = decision;
    for (const auto& [role, e] : result_.entities) result_.totals += e.counter;
    for (const auto& [slot, sk] : ring_.secret_keys) {
      result_.secret_slot_of_key[sk->key_id] = slot;
    }
    return std::move(result_);
  }

 private:
  void RequireHeld(Role role, KeySlot slot) {
    const Entity& e = entity(role);
    if (e.held_keys.count(slot) == 0) {
      throw Error(ErrorCode::kConfiguration,
                  std::string(RoleName(role)) + " does not hold " +
                      std::string(KeySlotName(slot)));
    }
  }

  KeyRing ring_;
  std::deque<Message> queue_;
  RunResult result_;
};

std::vector<EncryptedNumber> Concat(std::vector<EncryptedNumber> a,
                                    const std::vector<EncryptedNumber>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

EncryptedVector Slice(const std::vector<EncryptedNumber>& payload,
                      std::size_t begin, std::size_t count) {
  return EncryptedVector(std::vector<EncryptedNumber>(
      payload.begin() + static_cast<std::ptrdiff_t>(begin),
      payload.begin() + static_cast<std::ptrdiff_t>(begin + count)));
}

EncryptedMatrix AsMatrix(const Message& m, std::size_t dim) {
  return EncryptedMatrix(dim, m.payload);
}

template <typename Reference>
const Reference& Lookup(const ReferenceDb<Reference>& db,
                        const std::string& subject) {
  auto it = db.find(subject);
  if (it == db.end()) {
    throw Error(ErrorCode::kLookup, "no reference enrolled for '" + subject +
                                        "'");
  }
  return it->second;
}

double DecryptScore(Session& session, Role role, KeySlot pk_slot,
                    KeySlot sk_slot, const EncryptedNumber& score) {
  const double value =
      DecryptValue(session.SecretKey(role, sk_slot),
                   session.PublicKey(role, pk_slot), score);
  ++session.counter(role)->decryptions;
  return value;
}

const KeyPlacement& PlacementFor(ComparatorKind kind,
                                 const RunOptions& options,
                                 KeyPlacement& storage) {
  if (options.placement) return *options.placement;
  storage = DefaultPlacement(kind);
  return storage;
}

void CheckProbeDim(std::size_t expected, const Eigen::VectorXd& probe) {
  if (static_cast<Eigen::Index>(expected) != probe.size()) {
    throw Error(ErrorCode::kShape,
                "probe has dimension " + std::to_string(probe.size()) +
                    ", reference has " + std::to_string(expected));
  }
}

std::string Hex(const BigInt& v) { return v.get_str(16); }

}  // namespace

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kClient: return "Client";
    case Role::kDbController: return "DBController";
    case Role::kAsOperator: return "ASOperator";
    case Role::kDbVendor: return "DBVendor";
    case Role::kAsVendor: return "ASVendor";
  }
  return "unknown";
}

std::string_view KeySlotName(KeySlot slot) {
  switch (slot) {
    case KeySlot::kPk: return "pk";
    case KeySlot::kSk: return "sk";
    case KeySlot::kPk1: return "pk1";
    case KeySlot::kSk1: return "sk1";
    case KeySlot::kPk2: return "pk2";
    case KeySlot::kSk2: return "sk2";
  }
  return "unknown";
}

bool IsSecret(KeySlot slot) {
  return slot == KeySlot::kSk || slot == KeySlot::kSk1 ||
         slot == KeySlot::kSk2;
}

std::string_view PayloadClassName(PayloadClass c) {
  switch (c) {
    case PayloadClass::kReference: return "reference";
    case PayloadClass::kModel: return "model";
    case PayloadClass::kIntermediate: return "intermediate";
    case PayloadClass::kScore: return "score";
  }
  return "unknown";
}

std::string SerializePayload(const std::vector<EncryptedNumber>& payload) {
  std::string out;
  for (const EncryptedNumber& e : payload) {
    out += Hex(e.ciphertext.value);
    out += ':';
    out += std::to_string(e.exponent);
    out += ';';
  }
  return out;
}

std::string TranscriptToJsonLines(const std::vector<Message>& transcript) {
  std::string out;
  for (const Message& m : transcript) {
    Json line;
    line["step"] = m.step;
    line["from"] = RoleName(m.sender);
    line["to"] = RoleName(m.receiver);
    line["class"] = PayloadClassName(m.payload_class);
    line["ciphertexts"] = m.ciphertext_count;
    line["protected_bytes"] = m.protected_bytes;
    line["metadata_bytes"] = m.metadata_bytes;
    line["payload_sha256"] = m.payload_hash;
    out += line.dump();
    out += '\n';
  }
  return out;
}

void ChannelLedger::Record(const Message& message) {
  ChannelTotals& t = channels_[{message.sender, message.receiver}];
  ++t.messages;
  t.ciphertexts += message.ciphertext_count;
  t.protected_bytes += message.protected_bytes;
  t.metadata_bytes += message.metadata_bytes;
}

ChannelTotals ChannelLedger::channel(Role from, Role to) const {
  auto it = channels_.find({from, to});
  return it == channels_.end() ? ChannelTotals{} : it->second;
}

std::uint64_t ChannelLedger::total_ciphertexts() const {
  std::uint64_t sum = 0;
  for (const auto& [ch, t] : channels_) sum += t.ciphertexts;
  return sum;
}

std::uint64_t ChannelLedger::total_protected_bytes() const {
  std::uint64_t sum = 0;
  for (const auto& [ch, t] : channels_) sum += t.protected_bytes;
  return sum;
}

std::uint64_t ChannelLedger::total_metadata_bytes() const {
  std::uint64_t sum = 0;
  for (const auto& [ch, t] : channels_) sum += t.metadata_bytes;
  return sum;
}

std::string ChannelLedger::ToJson() const {
  Json doc;
  doc["nu_bytes"] = nu_bytes_;
  Json channels = Json::array();
  for (const auto& [ch, t] : channels_) {
    Json row;
    row["from"] = RoleName(ch.first);
    row["to"] = RoleName(ch.second);
    row["messages"] = t.messages;
    row["ciphertexts"] = t.ciphertexts;
    row["protected_bytes"] = t.protected_bytes;
    row["metadata_bytes"] = t.metadata_bytes;
    channels.push_back(std::move(row));
  }
  doc["channels"] = std::move(channels);
  doc["total_ciphertexts"] = total_ciphertexts();
  doc["total_protected_bytes"] = total_protected_bytes();
  doc["total_metadata_bytes"] = total_metadata_bytes();
  return doc.dump(2);
}

Decision Decide(double score, double threshold) {
  return Decision{score, threshold, threshold <= score};
}

KeyPlacement DefaultPlacement(ComparatorKind kind) {
  if (kind == ComparatorKind::kTwoCovVendor) {
    return {
        {Role::kClient, {KeySlot::kPk1}},
        {Role::kDbController, {KeySlot::kPk1}},
        {Role::kAsOperator, {KeySlot::kPk1, KeySlot::kSk1, KeySlot::kPk2}},
        {Role::kDbVendor, {KeySlot::kPk2}},
        {Role::kAsVendor, {KeySlot::kPk2, KeySlot::kSk2}},
    };
  }
  return {
      {Role::kClient, {KeySlot::kPk}},
      {Role::kDbController, {KeySlot::kPk}},
      {Role::kAsOperator, {KeySlot::kPk, KeySlot::kSk}},
  };
}

void ValidatePlacement(ComparatorKind kind, const KeyPlacement& placement) {
  const bool vendor = kind == ComparatorKind::kTwoCovVendor;
  // Each secret key has exactly one legitimate holder.
  const std::map<KeySlot, Role> owner =
      vendor ? std::map<KeySlot, Role>{{KeySlot::kSk1, Role::kAsOperator},
                                       {KeySlot::kSk2, Role::kAsVendor}}
             : std::map<KeySlot, Role>{{KeySlot::kSk, Role::kAsOperator}};
  const std::set<KeySlot> usable =
      vendor ? std::set<KeySlot>{KeySlot::kPk1, KeySlot::kSk1, KeySlot::kPk2,
                                 KeySlot::kSk2}
             : std::set<KeySlot>{KeySlot::kPk, KeySlot::kSk};

  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kConfiguration, "key placement: " + what);
  };
  for (const auto& [role, slots] : placement) {
    for (KeySlot slot : slots) {
      if (usable.count(slot) == 0) {
        fail(std::string(RoleName(role)) + " holds " +
             std::string(KeySlotName(slot)) + ", which this scheme lacks");
      }
      if (IsSecret(slot) && owner.at(slot) != role) {
        fail(std::string(RoleName(role)) + " must not hold " +
             std::string(KeySlotName(slot)));
      }
    }
  }
  auto require = [&](Role role, KeySlot slot) {
    auto it = placement.find(role);
    if (it == placement.end() || it->second.count(slot) == 0) {
      fail(std::string(RoleName(role)) + " needs " +
           std::string(KeySlotName(slot)));
    }
  };
  if (vendor) {
    require(Role::kClient, KeySlot::kPk1);
    require(Role::kAsOperator, KeySlot::kPk1);
    require(Role::kAsOperator, KeySlot::kSk1);
    require(Role::kAsOperator, KeySlot::kPk2);
    require(Role::kAsVendor, KeySlot::kPk2);
    require(Role::kAsVendor, KeySlot::kSk2);
  } else {
    require(Role::kClient, KeySlot::kPk);
    require(Role::kAsOperator, KeySlot::kPk);
    require(Role::kAsOperator, KeySlot::kSk);
  }
}

RunResult RunCosine(const PaillierKeyPair& keys,
                    const ReferenceDb<ProtectedReferenceCosine>& db,
                    const std::string& subject, const Eigen::VectorXd& probe,
                    double eta, RandomSource& /*rng*/,
                    const RunOptions& options) {
  KeyPlacement storage;
  Session s(ComparatorKind::kCosine,
            PlacementFor(ComparatorKind::kCosine, options, storage),
            SingleKeyRing(keys), NuBytes(keys.public_key));
  const std::uint64_t nu = NuBytes(keys.public_key);

  const ProtectedReferenceCosine& ref = Lookup(db, subject);
  CheckProbeDim(ref.dim(), probe);
  s.Send("2", Role::kDbController, Role::kClient, PayloadClass::kReference,
         ref.elements.elements(), nu);

  const Message& m2 = s.Receive(Role::kClient, "2");
  const LinalgContext client{s.PublicKey(Role::kClient, KeySlot::kPk),
                             s.counter(Role::kClient), options.codec};
  const ProtectedReferenceCosine received{
      Slice(m2.payload, 0, m2.payload.size())};
  const EncryptedNumber score = ScoreCosineEncrypted(client, received, probe);
  s.Send("4", Role::kClient, Role::kAsOperator, PayloadClass::kScore, {score},
         nu);

  const Message& m4 = s.Receive(Role::kAsOperator, "4");
  const double value = DecryptScore(s, Role::kAsOperator, KeySlot::kPk,
                                    KeySlot::kSk, m4.payload.front());
  return s.Finish(Decide(value + options.score_offset, eta));
}

RunResult RunEuclidean(const PaillierKeyPair& keys,
                       const ReferenceDb<ProtectedReferenceEuclidean>& db,
                       const std::string& subject,
                       const Eigen::VectorXd& probe, double eta,
                       RandomSource& rng, const RunOptions& options) {
  KeyPlacement storage;
  Session s(ComparatorKind::kEuclidean,
            PlacementFor(ComparatorKind::kEuclidean, options, storage),
            SingleKeyRing(keys), NuBytes(keys.public_key));
  const std::uint64_t nu = NuBytes(keys.public_key);

  const ProtectedReferenceEuclidean& ref = Lookup(db, subject);
  CheckProbeDim(ref.dim(), probe);
  s.Send("2", Role::kDbController, Role::kClient, PayloadClass::kReference,
         Concat(ref.elements.elements(), {ref.sum_sq}), nu);

  const Message& m2 = s.Receive(Role::kClient, "2");
  const std::size_t dim = m2.payload.size() - 1;
  const LinalgContext client{s.PublicKey(Role::kClient, KeySlot::kPk),
                             s.counter(Role::kClient), options.codec};
  const ProtectedReferenceEuclidean received{m2.payload.back(),
                                             Slice(m2.payload, 0, dim)};
  const EncryptedNumber score =
      ScoreEuclideanEncrypted(client, received, probe, rng);
  s.Send("4", Role::kClient, Role::kAsOperator, PayloadClass::kScore, {score},
         nu);

  const Message& m4 = s.Receive(Role::kAsOperator, "4");
  const double distance = DecryptScore(s, Role::kAsOperator, KeySlot::kPk,
                                       KeySlot::kSk, m4.payload.front());
  return s.Finish(Decide(-distance + options.score_offset, eta));
}

RunResult RunTwoCovSubject(
    const PaillierKeyPair& keys, const TwoCovModel& model,
    const ReferenceDb<ProtectedReferenceTwoCovSubject>& db,
    const std::string& subject, const Eigen::VectorXd& probe, double eta,
    RandomSource& rng, const RunOptions& options) {
  KeyPlacement storage;
  Session s(ComparatorKind::kTwoCovSubject,
            PlacementFor(ComparatorKind::kTwoCovSubject, options, storage),
            SingleKeyRing(keys), NuBytes(keys.public_key));
  const std::uint64_t nu = NuBytes(keys.public_key);

  const ProtectedReferenceTwoCovSubject& ref = Lookup(db, subject);
  CheckProbeDim(ref.dim(), probe);
  s.Send("2a", Role::kDbController, Role::kClient, PayloadClass::kReference,
         ref.elements.elements(), nu);
  s.Send("2b", Role::kDbController, Role::kClient, PayloadClass::kReference,
         {ref.quad_term}, nu);

  const Message& m2a = s.Receive(Role::kClient, "2a");
  const Message& m2b = s.Receive(Role::kClient, "2b");
  const LinalgContext client{s.PublicKey(Role::kClient, KeySlot::kPk),
                             s.counter(Role::kClient), options.codec};
  const ProtectedReferenceTwoCovSubject received{
      Slice(m2a.payload, 0, m2a.payload.size()), m2b.payload.front()};
  const EncryptedNumber score = ScoreTwoCovSubjectEncrypted(
      client, received, probe, model.Lambda, model.Gamma, rng);
  s.Send("6", Role::kClient, Role::kAsOperator, PayloadClass::kScore, {score},
         nu);

  const Message& m6 = s.Receive(Role::kAsOperator, "6");
  const double value = DecryptScore(s, Role::kAsOperator, KeySlot::kPk,
                                    KeySlot::kSk, m6.payload.front());
  return s.Finish(Decide(value + options.score_offset, eta));
}

RunResult RunTwoCovVendor(
    const PaillierKeyPair& pair1, const PaillierKeyPair& pair2,
    const EncryptedModel& vendor_model,
    const ReferenceDb<ProtectedReferenceTwoCovVendor>& db,
    const std::string& subject, const Eigen::VectorXd& probe, double eta,
    RandomSource& rng, const RunOptions& options) {
  KeyRing ring;
  ring.public_keys[KeySlot::kPk1] = &pair1.public_key;
  ring.public_keys[KeySlot::kPk2] = &pair2.public_key;
  ring.secret_keys[KeySlot::kSk1] = &pair1.secret_key;
  ring.secret_keys[KeySlot::kSk2] = &pair2.secret_key;
  const std::uint64_t nu1 = NuBytes(pair1.public_key);
  const std::uint64_t nu2 = NuBytes(pair2.public_key);

  KeyPlacement storage;
  Session s(ComparatorKind::kTwoCovVendor,
            PlacementFor(ComparatorKind::kTwoCovVendor, options, storage),
            std::move(ring), nu1);

  const ProtectedReferenceTwoCovVendor& ref = Lookup(db, subject);
  CheckProbeDim(ref.dim(), probe);
  if (vendor_model.dim() != ref.dim()) {
    throw Error(ErrorCode::kShape, "vendor model and reference differ in "
                                   "dimension");
  }
  const std::size_t dim = ref.dim();
  s.Send("2a", Role::kDbController, Role::kClient, PayloadClass::kReference,
         ref.elements.elements(), nu1);
  s.Send("2b", Role::kDbController, Role::kClient, PayloadClass::kReference,
         ref.gram.row_major(), nu1);

  const Message& m2a = s.Receive(Role::kClient, "2a");
  const Message& m2b = s.Receive(Role::kClient, "2b");
  const LinalgContext client{s.PublicKey(Role::kClient, KeySlot::kPk1),
                             s.counter(Role::kClient), options.codec};
  const ProtectedReferenceTwoCovVendor received{
      Slice(m2a.payload, 0, m2a.payload.size()), AsMatrix(m2b, dim)};
  VendorClientMessage msg = ClientComputeVendor(client, received, probe, rng);
  s.Send("5a", Role::kClient, Role::kAsOperator, PayloadClass::kIntermediate,
         msg.c1.row_major(), nu1);
  s.Send("5b", Role::kClient, Role::kAsOperator, PayloadClass::kIntermediate,
         msg.c23.row_major(), nu1);
  s.Send("6a", Role::kDbVendor, Role::kAsOperator, PayloadClass::kModel,
         vendor_model.lambda.row_major(), nu2);
  s.Send("6b", Role::kDbVendor, Role::kAsOperator, PayloadClass::kModel,
         vendor_model.gamma.row_major(), nu2);

  const Message& m5a = s.Receive(Role::kAsOperator, "5a");
  const Message& m5b = s.Receive(Role::kAsOperator, "5b");
  const Message& m6a = s.Receive(Role::kAsOperator, "6a");
  const Message& m6b = s.Receive(Role::kAsOperator, "6b");
  const VendorClientMessage operator_msg{AsMatrix(m5a, dim),
                                         AsMatrix(m5b, dim)};
  const EncryptedModel operator_model{AsMatrix(m6a, dim), AsMatrix(m6b, dim)};
  const EncryptedNumber score = OperatorCombineVendor(
      s.PublicKey(Role::kAsOperator, KeySlot::kPk1),
      s.SecretKey(Role::kAsOperator, KeySlot::kSk1),
      s.PublicKey(Role::kAsOperator, KeySlot::kPk2), operator_model,
      operator_msg, s.counter(Role::kAsOperator), options.codec);
  s.Send("10", Role::kAsOperator, Role::kAsVendor, PayloadClass::kScore,
         {score}, nu2);

  const Message& m10 = s.Receive(Role::kAsVendor, "10");
  const double value = DecryptScore(s, Role::kAsVendor, KeySlot::kPk2,
                                    KeySlot::kSk2, m10.payload.front());
  return s.Finish(Decide(value + options.score_offset, eta));
}

AuditReport AuditRun(const RunResult& result, const AuditSecrets& secrets) {
  AuditReport report;
  auto flag = [&report](std::string what) {
    report.ok = false;
    report.violations.push_back(std::move(what));
  };

  try {
    KeyPlacement placement;
    for (const auto& [role, e] : result.entities) {
      placement[role] = e.held_keys;
    }
    ValidatePlacement(result.kind, placement);
  } catch (const Error& e) {
    flag(e.what());
  }
  if (auto it = result.entities.find(Role::kClient);
      it != result.entities.end()) {
    for (KeySlot slot : it->second.held_keys) {
      if (IsSecret(slot)) flag("client holds a secret key");
    }
  }

  std::vector<std::pair<std::string, std::string>> needles;
  for (const PaillierSecretKey& sk : secrets.secret_keys) {
    needles.emplace_back("secret lambda", Hex(sk.lambda));
    needles.emplace_back("secret mu", Hex(sk.mu));
    needles.emplace_back("secret prime p", Hex(sk.p));
    needles.emplace_back("secret prime q", Hex(sk.q));
  }
  for (const PaillierPublicKey& pk : secrets.public_keys) {
    for (std::size_t v = 0; v < secrets.plaintext_vectors.size(); ++v) {
      const Eigen::VectorXd& vec = secrets.plaintext_vectors[v];
      for (Eigen::Index i = 0; i < vec.size(); ++i) {
        if (!std::isfinite(vec[i]) || vec[i] == 0.0) continue;
        const EncodedNumber enc = Encode(pk, vec[i]);
        needles.emplace_back(
            "plaintext vector " + std::to_string(v) + " element " +
                std::to_string(i),
            Hex(enc.mantissa));
      }
    }
  }

  for (const Message& m : result.transcript) {
    const std::string where = "step " + m.step + " (" +
                              std::string(RoleName(m.sender)) + " -> " +
                              std::string(RoleName(m.receiver)) + ")";
    if (m.ciphertext_count != m.payload.size()) {
      flag(where + ": ciphertext count disagrees with payload");
    }
    const std::string text = SerializePayload(m.payload);
    for (const auto& [label, hex] : needles) {
      if (hex.size() >= kMinLeakHexChars &&
          text.find(hex) != std::string::npos) {
        flag(where + ": payload contains " + label);
      }
    }
    if (m.payload_class != PayloadClass::kReference &&
        m.payload_class != PayloadClass::kModel) {
      continue;
    }
    auto receiver = result.entities.find(m.receiver);
    if (receiver == result.entities.end()) continue;
    for (const EncryptedNumber& e : m.payload) {
      auto slot = result.secret_slot_of_key.find(e.key_id());
      if (slot != result.secret_slot_of_key.end() &&
          receiver->second.held_keys.count(slot->second) != 0) {
        flag(where + ": " + std::string(PayloadClassName(m.payload_class)) +
             " reached the holder of " +
             std::string(KeySlotName(slot->second)));
        break;
      }
    }
  }
  return report;
}

}  // namespace spkhe
