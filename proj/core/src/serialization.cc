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

#include "spkhe/serialization.h"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace spkhe {
namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0";
constexpr const char* kPublicKeyFormat = "spkhe-paillier-public";
constexpr const char* kSecretKeyFormat = "spkhe-paillier-secret";
constexpr const char* kModelFormat = "spkhe-2cov-model";
constexpr const char* kTemplateFormat = "spkhe-templates";
constexpr const char* kEncryptedModelFormat = "spkhe-encrypted-model";
constexpr const char* kScoresHeader = "#format=spkhe-scores/";

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorCode::kFormat, what);
}

Json Header(const char* format) {
  Json doc;
  doc["format"] = format;
  doc["version"] = kVersion;
  return doc;
}

Json Parse(std::string_view text, const char* format) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    Malformed(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != format) {
    Malformed(std::string("expected a ") + format + " document");
  }
  const std::string version = doc.value("version", "");
  const auto dot = version.find('.');
  int major = -1;
  try {
    major = std::stoi(version.substr(0, dot));
  } catch (const std::exception&) {
    Malformed("unreadable version '" + version + "'");
  }
  if (major != kFormatMajor) {
    Malformed("unsupported " + std::string(format) + " version " + version);
  }
  return doc;
}

template <typename T>
T Field(const Json& doc, const char* name) {
  if (!doc.contains(name)) Malformed(std::string("missing field '") + name + "'");
  try {
    return doc.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    Malformed(std::string("field '") + name + "' has the wrong type");
  }
}

std::string Hex(const BigInt& v) { return v.get_str(16); }

BigInt FromHex(const std::string& s, const char* what) {
  BigInt v;
  if (s.empty() || v.set_str(s, 16) != 0 || v < 0) {
    Malformed(std::string("field '") + what + "' is not a hex integer");
  }
  return v;
}

Json MatrixJson(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd MatrixFrom(const Json& doc, const char* name) {
  const auto rows = Field<std::vector<std::vector<double>>>(doc, name);
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n) {
      Malformed(std::string("matrix '") + name + "' is not square");
    }
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Json CipherJson(const EncryptedNumber& e) {
  return Json::array({Hex(e.ciphertext.value), e.exponent});
}

Json CipherListJson(const std::vector<EncryptedNumber>& list) {
  Json out = Json::array();
  for (const EncryptedNumber& e : list) out.push_back(CipherJson(e));
  return out;
}

EncryptedNumber CipherFrom(const Json& item, const PaillierPublicKey& pk) {
  if (!item.is_array() || item.size() != 2 || !item[0].is_string() ||
      !item[1].is_number_integer()) {
    Malformed("ciphertext entries must be [hex, exponent]");
  }
  EncryptedNumber e;
  e.ciphertext.value = FromHex(item[0].get<std::string>(), "ciphertext");
  if (e.ciphertext.value >= pk.n_squared) {
    Malformed("ciphertext exceeds n^2 of the supplied key");
  }
  e.ciphertext.key_id = pk.key_id;
  e.ciphertext.obfuscated = true;
  e.exponent = item[1].get<int>();
  return e;
}

std::vector<EncryptedNumber> CipherListFrom(const Json& doc, const char* name,
                                            const PaillierPublicKey& pk,
                                            std::size_t expected) {
  if (!doc.contains(name) || !doc.at(name).is_array()) {
    Malformed(std::string("missing ciphertext list '") + name + "'");
  }
  const Json& list = doc.at(name);
  if (list.size() != expected) {
    Malformed(std::string("'") + name + "' holds " +
              std::to_string(list.size()) + " ciphertexts, expected " +
              std::to_string(expected));
  }
  std::vector<EncryptedNumber> out;
  out.reserve(list.size());
  for (const Json& item : list) out.push_back(CipherFrom(item, pk));
  return out;
}

void RequireKey(const Json& doc, const PaillierPublicKey& pk) {
  const auto key_id = Field<std::string>(doc, "key_id");
  if (key_id != pk.key_id) {
    throw Error(ErrorCode::kKeyMismatch,
                "data was encrypted under key " + key_id +
                    ", supplied key is " + pk.key_id);
  }
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (std::string& cell : out) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) {
      cell.pop_back();
    }
  }
  return out;
}

double ParseDouble(const std::string& cell, std::size_t line_no) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size() || errno == ERANGE) {
    throw Error(ErrorCode::kInput, "line " + std::to_string(line_no) +
                                       ": '" + cell + "' is not a number");
  }
  return v;
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

}  // namespace

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot read " + path + ": " +
                                    std::strerror(errno));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteTextFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path + ": " +
                                    std::strerror(errno));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path);
}

std::string PublicKeyToJson(const PaillierPublicKey& pk) {
  Json doc = Header(kPublicKeyFormat);
  doc["bits"] = pk.bit_length;
  doc["insecure"] = pk.insecure();
  doc["n"] = Hex(pk.n);
  doc["g"] = Hex(pk.g);
  doc["key_id"] = pk.key_id;
  return doc.dump(2) + "\n";
}

PaillierPublicKey PublicKeyFromJson(std::string_view text) {
  const Json doc = Parse(text, kPublicKeyFormat);
  const PaillierPublicKey pk =
      MakePublicKey(FromHex(Field<std::string>(doc, "n"), "n"),
                    FromHex(Field<std::string>(doc, "g"), "g"));
  if (pk.key_id != Field<std::string>(doc, "key_id")) {
    Malformed("public key fingerprint does not match (n, g)");
  }
  return pk;
}

std::string SecretKeyToJson(const PaillierSecretKey& sk) {
  Json doc = Header(kSecretKeyFormat);
  doc["lambda"] = Hex(sk.lambda);
  doc["mu"] = Hex(sk.mu);
  doc["p"] = Hex(sk.p);
  doc["q"] = Hex(sk.q);
  doc["key_id"] = sk.key_id;
  return doc.dump(2) + "\n";
}

PaillierKeyPair KeyPairFromJson(const PaillierPublicKey& pk,
                                std::string_view secret_text) {
  const Json doc = Parse(secret_text, kSecretKeyFormat);
  RequireKey(doc, pk);
  PaillierSecretKey sk =
      MakeSecretKey(pk, FromHex(Field<std::string>(doc, "p"), "p"),
                    FromHex(Field<std::string>(doc, "q"), "q"));
  if (sk.lambda != FromHex(Field<std::string>(doc, "lambda"), "lambda") ||
      sk.mu != FromHex(Field<std::string>(doc, "mu"), "mu")) {
    Malformed("secret key fields are inconsistent with p and q");
  }
  return PaillierKeyPair{pk, std::move(sk)};
}

std::string ModelToJson(const TwoCovModel& model) {
  Json doc = Header(kModelFormat);
  doc["F"] = model.dim();
  doc["W"] = MatrixJson(model.W);
  doc["B"] = MatrixJson(model.B);
  doc["mu"] = std::vector<double>(model.mu.data(),
                                  model.mu.data() + model.mu.size());
  Json derived;
  derived["Lambda"] = MatrixJson(model.Lambda);
  derived["Gamma"] = MatrixJson(model.Gamma);
  derived["c"] = std::vector<double>(model.c.data(),
                                     model.c.data() + model.c.size());
  derived["k"] = model.k;
  doc["derived"] = std::move(derived);
  return doc.dump(2) + "\n";
}

TwoCovModel ModelFromJson(std::string_view text) {
  const Json doc = Parse(text, kModelFormat);
  const auto dim = Field<std::size_t>(doc, "F");
  const Eigen::MatrixXd W = MatrixFrom(doc, "W");
  const Eigen::MatrixXd B = MatrixFrom(doc, "B");
  const auto mu_list = Field<std::vector<double>>(doc, "mu");
  if (static_cast<std::size_t>(W.rows()) != dim ||
      static_cast<std::size_t>(B.rows()) != dim || mu_list.size() != dim) {
    throw Error(ErrorCode::kShape,
                "model declares F=" + std::to_string(dim) + " but W is " +
                    std::to_string(W.rows()) + ", B is " +
                    std::to_string(B.rows()) + ", mu is " +
                    std::to_string(mu_list.size()));
  }
  const Eigen::VectorXd mu =
      Eigen::Map<const Eigen::VectorXd>(mu_list.data(),
                                        static_cast<Eigen::Index>(dim));
  return DeriveHyperparameters(W, B, mu);
}

std::string TemplateStoreToJson(const TemplateStore& store) {
  Json doc = Header(kTemplateFormat);
  doc["comparator"] = ComparatorName(store.kind);
  doc["F"] = store.dim;
  doc["key_id"] = store.key_id;
  Json list = Json::array();
  for (const auto& [subject, ref] : store.references) {
    Json item;
    item["subject"] = subject;
    std::visit(
        [&item](const auto& r) {
          using T = std::decay_t<decltype(r)>;
          item["elements"] = CipherListJson(r.elements.elements());
          if constexpr (std::is_same_v<T, ProtectedReferenceEuclidean>) {
            item["sum_sq"] = CipherJson(r.sum_sq);
          } else if constexpr (std::is_same_v<
                                   T, ProtectedReferenceTwoCovSubject>) {
            item["quad_term"] = CipherJson(r.quad_term);
          } else if constexpr (std::is_same_v<
                                   T, ProtectedReferenceTwoCovVendor>) {
            item["gram"] = CipherListJson(r.gram.row_major());
          }
        },
        ref);
    list.push_back(std::move(item));
  }
  doc["templates"] = std::move(list);
  return doc.dump(1) + "\n";
}

TemplateStore TemplateStoreFromJson(std::string_view text,
                                    const PaillierPublicKey& pk) {
  const Json doc = Parse(text, kTemplateFormat);
  RequireKey(doc, pk);
  TemplateStore store;
  try {
    store.kind = ParseComparator(Field<std::string>(doc, "comparator"));
  } catch (const Error& e) {
    Malformed(e.what());
  }
  store.dim = Field<std::size_t>(doc, "F");
  store.key_id = pk.key_id;
  if (!doc.contains("templates") || !doc.at("templates").is_array()) {
    Malformed("missing 'templates'");
  }
  for (const Json& item : doc.at("templates")) {
    const auto subject = Field<std::string>(item, "subject");
    EncryptedVector elements(CipherListFrom(item, "elements", pk, store.dim));
    ProtectedReference ref;
    auto single = [&](const char* name) {
      if (!item.contains(name)) {
        Malformed("template '" + subject + "' lacks '" + name + "'");
      }
      return CipherFrom(item.at(name), pk);
    };
    switch (store.kind) {
      case ComparatorKind::kEuclidean:
        ref = ProtectedReferenceEuclidean{single("sum_sq"),
                                          std::move(elements)};
        break;
      case ComparatorKind::kCosine:
        ref = ProtectedReferenceCosine{std::move(elements)};
        break;
      case ComparatorKind::kTwoCovSubject:
        ref = ProtectedReferenceTwoCovSubject{std::move(elements),
                                              single("quad_term")};
        break;
      case ComparatorKind::kTwoCovVendor:
        ref = ProtectedReferenceTwoCovVendor{
            std::move(elements),
            EncryptedMatrix(store.dim,
                            CipherListFrom(item, "gram", pk,
                                           store.dim * store.dim))};
        break;
    }
    if (!store.references.emplace(subject, std::move(ref)).second) {
      Malformed("duplicate template for '" + subject + "'");
    }
  }
  return store;
}

std::string EncryptedModelToJson(const EncryptedModel& model) {
  Json doc = Header(kEncryptedModelFormat);
  doc["F"] = model.dim();
  doc["key_id"] = model.key_id();
  doc["lambda"] = CipherListJson(model.lambda.row_major());
  doc["gamma"] = CipherListJson(model.gamma.row_major());
  return doc.dump(1) + "\n";
}

EncryptedModel EncryptedModelFromJson(std::string_view text,
                                      const PaillierPublicKey& pk) {
  const Json doc = Parse(text, kEncryptedModelFormat);
  RequireKey(doc, pk);
  const auto dim = Field<std::size_t>(doc, "F");
  return EncryptedModel{
      EncryptedMatrix(dim, CipherListFrom(doc, "lambda", pk, dim * dim)),
      EncryptedMatrix(dim, CipherListFrom(doc, "gamma", pk, dim * dim))};
}

std::string CorpusToCsv(const LabeledCorpus& corpus) {
  std::string out = "speaker";
  for (Eigen::Index j = 0; j < corpus.dim(); ++j) {
    out += ",x" + std::to_string(j);
  }
  out += '\n';
  for (Eigen::Index i = 0; i < corpus.size(); ++i) {
    out += corpus.speaker_ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < corpus.dim(); ++j) {
      out += ',';
      out += FormatDouble(corpus.vectors(i, j));
    }
    out += '\n';
  }
  return out;
}

LabeledCorpus CorpusFromCsv(std::string_view text) {
  const auto lines = Lines(text);
  if (lines.empty()) throw Error(ErrorCode::kInput, "corpus file is empty");
  const auto header = SplitCsvLine(lines[0]);
  if (header.size() < 2 || header[0] != "speaker") {
    throw Error(ErrorCode::kInput,
                "corpus header must be speaker,x0,...,x{F-1}");
  }
  const std::size_t dim = header.size() - 1;
  LabeledCorpus corpus;
  corpus.vectors.resize(static_cast<Eigen::Index>(lines.size() - 1),
                        static_cast<Eigen::Index>(dim));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = SplitCsvLine(lines[i]);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kShape,
                  "line " + std::to_string(i + 1) + " has " +
                      std::to_string(cells.size() - 1) +
                      " features, header has " + std::to_string(dim));
    }
    corpus.speaker_ids.push_back(cells[0]);
    for (std::size_t j = 0; j < dim; ++j) {
      corpus.vectors(static_cast<Eigen::Index>(i - 1),
                     static_cast<Eigen::Index>(j)) =
          ParseDouble(cells[j + 1], i + 1);
    }
  }
  return corpus;
}

std::string ScoresToCsv(const std::vector<ScoredTrial>& trials) {
  std::string out = std::string(kScoresHeader) +
                    std::to_string(kFormatMajor) + "\ntrial_id,label,score\n";
  for (const ScoredTrial& t : trials) {
    out += t.trial_id;
    out += t.target ? ",target," : ",nontarget,";
    out += FormatDouble(t.score);
    out += '\n';
  }
  return out;
}

std::vector<ScoredTrial> ScoresFromCsv(std::string_view text) {
  auto lines = Lines(text);
  std::size_t first = 0;
  if (!lines.empty() && lines[0].rfind(kScoresHeader, 0) == 0) {
    const std::string major(lines[0].substr(std::strlen(kScoresHeader)));
    if (major != std::to_string(kFormatMajor)) {
      Malformed("unsupported score file version " + major);
    }
    first = 1;
  }
  if (lines.size() <= first ||
      SplitCsvLine(lines[first]) !=
          std::vector<std::string>{"trial_id", "label", "score"}) {
    throw Error(ErrorCode::kInput, "score header must be trial_id,label,score");
  }
  std::vector<ScoredTrial> trials;
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    const auto cells = SplitCsvLine(lines[i]);
    if (cells.size() != 3) {
      throw Error(ErrorCode::kInput,
                  "line " + std::to_string(i + 1) + " needs 3 columns");
    }
    ScoredTrial t;
    t.trial_id = cells[0];
    if (cells[1] == "target") {
      t.target = true;
    } else if (cells[1] != "nontarget") {
      throw Error(ErrorCode::kInput, "line " + std::to_string(i + 1) +
                                         ": label must be target or "
                                         "nontarget");
    }
    t.score = ParseDouble(cells[2], i + 1);
    trials.push_back(std::move(t));
  }
  return trials;
}

ScoreSet ToScoreSet(const std::vector<ScoredTrial>& trials) {
  ScoreSet s;
  for (const ScoredTrial& t : trials) {
    (t.target ? s.target_scores : s.nontarget_scores).push_back(t.score);
  }
  return s;
}

std::string DetCurveToCsv(const std::vector<DetPoint>& points) {
  std::string out = "threshold,fnmr,fmr\n";
  for (const DetPoint& p : points) {
    out += FormatDouble(p.threshold) + "," + FormatDouble(p.fnmr) + "," +
           FormatDouble(p.fmr) + "\n";
  }
  return out;
}

}  // namespace spkhe
