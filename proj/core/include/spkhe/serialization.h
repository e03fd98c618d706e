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

#ifndef SPKHE_SERIALIZATION_H_
#define SPKHE_SERIALIZATION_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spkhe/comparators.h"
#include "spkhe/error.h"
#include "spkhe/metrics.h"
#include "spkhe/protocol.h"

namespace spkhe {

// Every JSON document carries "format" and "version" ("<major>.<minor>");
// readers reject other formats and unknown majors with kFormat.
inline constexpr int kFormatMajor = 1;

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, std::string_view contents);

std::string PublicKeyToJson(const PaillierPublicKey& pk);
PaillierPublicKey PublicKeyFromJson(std::string_view text);
std::string SecretKeyToJson(const PaillierSecretKey& sk);
// Rebuilds the pair and checks that the secret key belongs to `pk`.
PaillierKeyPair KeyPairFromJson(const PaillierPublicKey& pk,
                                std::string_view secret_text);

// Stores W, B and mu; derived hyper-parameters are recomputed on load.
std::string ModelToJson(const TwoCovModel& model);
TwoCovModel ModelFromJson(std::string_view text);

using ProtectedReference =
    std::variant<ProtectedReferenceEuclidean, ProtectedReferenceCosine,
                 ProtectedReferenceTwoCovSubject,
                 ProtectedReferenceTwoCovVendor>;

struct TemplateStore {
  ComparatorKind kind = ComparatorKind::kCosine;
  std::size_t dim = 0;
  std::string key_id;
  std::map<std::string, ProtectedReference> references;
};

std::string TemplateStoreToJson(const TemplateStore& store);
// Throws kKeyMismatch when the store was written under another key.
TemplateStore TemplateStoreFromJson(std::string_view text,
                                    const PaillierPublicKey& pk);

template <typename Reference>
ReferenceDb<Reference> ReferencesOf(const TemplateStore& store) {
  ReferenceDb<Reference> db;
  for (const auto& [subject, ref] : store.references) {
    const Reference* typed = std::get_if<Reference>(&ref);
    if (typed == nullptr) {
      throw Error(ErrorCode::kFormat, "template store holds " +
                                          std::string(ComparatorName(
                                              store.kind)) +
                                          " references");
    }
    db.emplace(subject, *typed);
  }
  return db;
}

std::string EncryptedModelToJson(const EncryptedModel& model);
EncryptedModel EncryptedModelFromJson(std::string_view text,
                                      const PaillierPublicKey& pk);

// "speaker,x0,...,x{F-1}" header, one row per vector.
std::string CorpusToCsv(const LabeledCorpus& corpus);
LabeledCorpus CorpusFromCsv(std::string_view text);

struct ScoredTrial {
  std::string trial_id;
  bool target = false;
  double score = 0.0;
};

// "trial_id,label,score" with label "target" or "nontarget"; a leading
// "#format=spkhe-scores/<major>" line is optional.
std::string ScoresToCsv(const std::vector<ScoredTrial>& trials);
std::vector<ScoredTrial> ScoresFromCsv(std::string_view text);
ScoreSet ToScoreSet(const std::vector<ScoredTrial>& trials);

std::string DetCurveToCsv(const std::vector<DetPoint>& points);

}  // namespace spkhe

#endif  // SPKHE_SERIALIZATION_H_
