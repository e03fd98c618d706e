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

#include "commands.h"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "spkhe/comparators.h"
#include "spkhe/complexity.h"
#include "spkhe/error.h"
#include "spkhe/hash.h"
#include "spkhe/metrics.h"
#include "spkhe/protocol.h"
#include "spkhe/serialization.h"
#include "spkhe/speaker_model.h"
#include "spkhe/synthetic.h"

namespace spkhe::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string InDir(const CommonOptions& common, const std::string& name) {
  if (fs::path(name).is_absolute()) return name;
  fs::create_directories(common.out_dir);
  return (fs::path(common.out_dir) / name).string();
}

RandomSource MakeRng(const CommonOptions& common) {
  return common.seed ? RandomSource::FromSeed(*common.seed)
                     : RandomSource::FromEntropy();
}

void Require(const std::string& value, const char* flag) {
  if (value.empty()) {
    throw Error(ErrorCode::kUsage, std::string(flag) + " is required");
  }
}

PaillierPublicKey LoadPublic(const std::string& path) {
  return PublicKeyFromJson(ReadTextFile(path));
}

PaillierKeyPair LoadPair(const std::string& pub, const std::string& sec) {
  return KeyPairFromJson(LoadPublic(pub), ReadTextFile(sec));
}

void CheckDim(std::size_t got, std::size_t want, const std::string& what,
              const std::string& against) {
  if (got != want) {
    throw Error(ErrorCode::kShape, what + " has F=" + std::to_string(got) +
                                       " but " + against + " has F=" +
                                       std::to_string(want));
  }
}

Eigen::VectorXd ParseProbe(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInput, "bad probe element '" + item + "'");
    }
  }
  if (values.empty()) throw Error(ErrorCode::kInput, "empty probe");
  return Eigen::Map<Eigen::VectorXd>(values.data(), values.size());
}

Json CounterJson(const OpCounter& c) {
  Json j;
  j["encryptions"] = c.encryptions;
  j["decryptions"] = c.decryptions;
  j["ciphertext_products"] = c.ciphertext_products;
  j["exponentiations"] = c.exponentiations;
  j["plain_additions"] = c.plain_additions;
  j["plain_products"] = c.plain_products;
  return j;
}

Json RunJson(const RunResult& r) {
  Json j;
  j["comparator"] = ComparatorName(r.kind);
  j["score"] = r.decision.score;
  j["threshold"] = r.decision.threshold;
  j["accepted"] = r.decision.accepted;
  j["ledger"] = Json::parse(r.ledger.ToJson());
  j["counters"] = CounterJson(r.totals);
  Json per_role;
  for (const auto& [role, e] : r.entities) {
    per_role[std::string(RoleName(role))] = CounterJson(e.counter);
  }
  j["counters_by_role"] = std::move(per_role);
  j["transcript_sha256"] = Sha256Hex(TranscriptToJsonLines(r.transcript));
  return j;
}

// Enrolment vector of each speaker: its mean, unit length for cosine.
std::vector<std::pair<std::string, Eigen::VectorXd>> EnrolmentVectors(
    const LabeledCorpus& corpus, ComparatorKind kind) {
  const SpeakerMeans means = ComputeSpeakerMeans(corpus);
  std::vector<std::pair<std::string, Eigen::VectorXd>> out;
  for (std::size_t i = 0; i < means.speaker_ids.size(); ++i) {
    Eigen::VectorXd v = means.means.row(i).transpose();
    if (kind == ComparatorKind::kCosine) v = LengthNormalize(v);
    out.emplace_back(means.speaker_ids[i], std::move(v));
  }
  return out;
}

ProtectedReference Enroll(ComparatorKind kind, const LinalgContext& ctx,
                          const std::optional<TwoCovModel>& model,
                          const Eigen::VectorXd& y, RandomSource& rng) {
  switch (kind) {
    case ComparatorKind::kEuclidean:
      return EnrollEuclidean(ctx, y, rng);
    case ComparatorKind::kCosine:
      return EnrollCosine(ctx, y, rng);
    case ComparatorKind::kTwoCovSubject:
      return EnrollTwoCovSubject(ctx, model->Gamma, y, rng);
    case ComparatorKind::kTwoCovVendor:
      return EnrollTwoCovVendor(ctx, y, rng);
  }
  throw Error(ErrorCode::kUsage, "unknown comparator");
}

// One verification against `store`; pair2 and enc_model only for vendor.
RunResult Verify(ComparatorKind kind, const PaillierKeyPair& pair1,
                 const PaillierKeyPair* pair2, const TemplateStore& store,
                 const std::optional<TwoCovModel>& model,
                 const EncryptedModel* enc_model, const std::string& subject,
                 const Eigen::VectorXd& probe, double eta, RandomSource& rng,
                 const RunOptions& run_opts) {
  switch (kind) {
    case ComparatorKind::kEuclidean:
      return RunEuclidean(pair1, ReferencesOf<ProtectedReferenceEuclidean>(store),
                          subject, probe, eta, rng, run_opts);
    case ComparatorKind::kCosine:
      return RunCosine(pair1, ReferencesOf<ProtectedReferenceCosine>(store),
                       subject, probe, eta, rng, run_opts);
    case ComparatorKind::kTwoCovSubject:
      return RunTwoCovSubject(
          pair1, *model, ReferencesOf<ProtectedReferenceTwoCovSubject>(store),
          subject, probe, eta, rng, run_opts);
    case ComparatorKind::kTwoCovVendor:
      return RunTwoCovVendor(
          pair1, *pair2, *enc_model,
          ReferencesOf<ProtectedReferenceTwoCovVendor>(store), subject, probe,
          eta, rng, run_opts);
  }
  throw Error(ErrorCode::kUsage, "unknown comparator");
}

double PlainScore(ComparatorKind kind, const std::optional<TwoCovModel>& model,
                  const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  switch (kind) {
    case ComparatorKind::kEuclidean:
      return -PlainEuclidean(x, y);
    case ComparatorKind::kCosine:
      return PlainCosine(LengthNormalize(x), y);
    default:
      return ScoreDiscriminative(*model, x, y);
  }
}

Json MetricsJson(const ScoreSet& s, const DcfParams& params) {
  return Json::parse(MetricReportToJson(ComputeMetrics(s, params)));
}

}  // namespace

void RunKeygen(const CommonOptions& common, const KeygenOptions& opts) {
  const PaillierKeyPair keys = GenerateKeyPair(opts.bits, common.seed);
  const std::string pub = InDir(common, opts.name + ".pub.json");
  const std::string sec = InDir(common, opts.name + ".sec.json");
  WriteTextFile(pub, PublicKeyToJson(keys.public_key));
  WriteTextFile(sec, SecretKeyToJson(keys.secret_key));
  Json out;
  out["key_id"] = keys.public_key.key_id;
  out["bits"] = keys.public_key.bit_length;
  out["insecure"] = keys.public_key.insecure();
  out["public"] = pub;
  out["secret"] = sec;
  std::cout << out.dump(2) << "\n";
}

void RunSynth(const CommonOptions& common, const SynthOptions& opts) {
  if (opts.F < 1 || opts.speakers < 1 || opts.per_speaker < 1) {
    throw Error(ErrorCode::kUsage, "F, speakers and per-speaker must be >= 1");
  }
  const SyntheticCorpusSpec spec =
      IsotropicSpec(opts.F, opts.speakers, opts.per_speaker, opts.between_var,
                    opts.within_var);
  const LabeledCorpus corpus = GenerateCorpus(spec, common.seed.value_or(1));
  const std::string path = InDir(common, opts.out);
  WriteTextFile(path, CorpusToCsv(corpus));
  Json out;
  out["corpus"] = path;
  out["F"] = opts.F;
  out["vectors"] = corpus.size();
  std::cout << out.dump(2) << "\n";
}

void RunTrain(const CommonOptions& common, const TrainOptions& opts) {
  Require(opts.corpus, "--corpus");
  const LabeledCorpus corpus = CorpusFromCsv(ReadTextFile(opts.corpus));
  const CovarianceEstimate est = EstimateCovariances(corpus);
  const TwoCovModel model = DeriveHyperparameters(est.W, est.B, est.mu);
  const std::string path = InDir(common, opts.out);
  WriteTextFile(path, ModelToJson(model));
  Json out;
  out["model"] = path;
  out["F"] = model.dim();
  out["k"] = model.k;
  std::cout << out.dump(2) << "\n";
}

void RunEnroll(const CommonOptions& common, const EnrollOptions& opts) {
  Require(opts.key, "--key");
  Require(opts.corpus, "--corpus");
  const ComparatorKind kind = ParseComparator(opts.comparator);
  const bool two_cov = kind == ComparatorKind::kTwoCovSubject ||
                       kind == ComparatorKind::kTwoCovVendor;
  std::optional<TwoCovModel> model;
  if (two_cov) {
    Require(opts.model, "--model");
    model = ModelFromJson(ReadTextFile(opts.model));
  }
  if (kind == ComparatorKind::kTwoCovVendor) Require(opts.vendor_key, "--vendor-key");

  const PaillierPublicKey pk = LoadPublic(opts.key);
  const LabeledCorpus corpus = CorpusFromCsv(ReadTextFile(opts.corpus));
  if (model) CheckDim(corpus.dim(), model->dim(), "corpus", "model");
  RandomSource rng = MakeRng(common);
  const LinalgContext ctx{pk};

  TemplateStore store;
  store.kind = kind;
  store.dim = corpus.dim();
  store.key_id = pk.key_id;
  for (const auto& [subject, y] : EnrolmentVectors(corpus, kind)) {
    store.references.emplace(subject, Enroll(kind, ctx, model, y, rng));
  }
  const std::string path = InDir(common, opts.out);
  WriteTextFile(path, TemplateStoreToJson(store));
  Json out;
  out["templates"] = path;
  out["subjects"] = store.references.size();
  if (kind == ComparatorKind::kTwoCovVendor) {
    const PaillierPublicKey pk2 = LoadPublic(opts.vendor_key);
    if (pk2.key_id == pk.key_id) {
      throw Error(ErrorCode::kConfiguration,
                  "vendor model and references must use different keys");
    }
    const EncryptedModel em = EncryptModel(LinalgContext{pk2}, *model, rng);
    const std::string model_path = InDir(common, opts.model_out);
    WriteTextFile(model_path, EncryptedModelToJson(em));
    out["encrypted_model"] = model_path;
  }
  std::cout << out.dump(2) << "\n";
}

void RunVerify(const CommonOptions& common, const VerifyOptions& opts) {
  Require(opts.key, "--key");
  Require(opts.secret, "--secret");
  Require(opts.templates, "--templates");
  Require(opts.subject, "--subject");
  const ComparatorKind kind = ParseComparator(opts.comparator);

  Eigen::VectorXd probe;
  if (!opts.probe.empty()) {
    probe = ParseProbe(opts.probe);
  } else if (!opts.probe_corpus.empty()) {
    const LabeledCorpus c = CorpusFromCsv(ReadTextFile(opts.probe_corpus));
    if (opts.probe_row < 0 || opts.probe_row >= c.size()) {
      throw Error(ErrorCode::kInput, "--probe-row out of range");
    }
    probe = c.vectors.row(opts.probe_row).transpose();
  } else {
    throw Error(ErrorCode::kUsage, "--probe or --probe-corpus is required");
  }

  const PaillierKeyPair pair1 = LoadPair(opts.key, opts.secret);
  const TemplateStore store =
      TemplateStoreFromJson(ReadTextFile(opts.templates), pair1.public_key);
  if (store.kind != kind) {
    throw Error(ErrorCode::kConfiguration,
                "templates were enrolled for " +
                    std::string(ComparatorName(store.kind)) + ", not " +
                    opts.comparator);
  }
  CheckDim(probe.size(), store.dim, "probe", "templates");

  std::optional<TwoCovModel> model;
  if (!opts.model.empty()) {
    model = ModelFromJson(ReadTextFile(opts.model));
    CheckDim(model->dim(), store.dim, "model", "templates");
  }
  if (kind == ComparatorKind::kTwoCovSubject) Require(opts.model, "--model");
  if (opts.add_k && !model) Require(opts.model, "--model");

  std::optional<PaillierKeyPair> pair2;
  std::optional<EncryptedModel> enc_model;
  if (kind == ComparatorKind::kTwoCovVendor) {
    Require(opts.vendor_key, "--vendor-key");
    Require(opts.vendor_secret, "--vendor-secret");
    Require(opts.encrypted_model, "--encrypted-model");
    pair2 = LoadPair(opts.vendor_key, opts.vendor_secret);
    enc_model = EncryptedModelFromJson(ReadTextFile(opts.encrypted_model),
                                       pair2->public_key);
    CheckDim(enc_model->dim(), store.dim, "encrypted model", "templates");
  }

  RunOptions run_opts;
  if (opts.add_k) run_opts.score_offset = model->k;
  RandomSource rng = MakeRng(common);
  const RunResult r =
      Verify(kind, pair1, pair2 ? &*pair2 : nullptr, store, model,
             enc_model ? &*enc_model : nullptr, opts.subject, probe, opts.eta,
             rng, run_opts);

  WriteTextFile(InDir(common, "transcript.jsonl"),
                TranscriptToJsonLines(r.transcript));
  Json out = RunJson(r);
  out["subject"] = opts.subject;
  WriteTextFile(InDir(common, "verify.json"), out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
}

void RunSimulate(const CommonOptions& common, const SimulateOptions& opts) {
  const ComparatorKind kind = ParseComparator(opts.comparator);
  if (opts.F < 1 || opts.speakers < 2 || opts.per_speaker < 3 ||
      opts.trials < 1) {
    throw Error(ErrorCode::kUsage,
                "need F >= 1, speakers >= 2, per-speaker >= 3, trials >= 1");
  }
  const std::uint64_t seed = common.seed.value_or(1);
  RandomSource master = RandomSource::FromSeed(seed);

  // Train on one population, verify on another drawn from the same model.
  const SyntheticCorpusSpec spec =
      IsotropicSpec(opts.F, opts.speakers, opts.per_speaker, 1.0, 0.25);
  const LabeledCorpus train = GenerateCorpus(spec, master.NextU64());
  const LabeledCorpus eval = GenerateCorpus(spec, master.NextU64());
  const CovarianceEstimate est = EstimateCovariances(train);
  const std::optional<TwoCovModel> model =
      DeriveHyperparameters(est.W, est.B, est.mu);

  RandomSource key_rng = master.Fork(1);
  const PaillierKeyPair pair1 = GenerateKeyPair(opts.bits, key_rng);
  std::optional<PaillierKeyPair> pair2;
  std::optional<EncryptedModel> enc_model;
  RandomSource enroll_rng = master.Fork(2);
  if (kind == ComparatorKind::kTwoCovVendor) {
    pair2 = GenerateKeyPair(opts.bits, key_rng);
    enc_model = EncryptModel(LinalgContext{pair2->public_key}, *model,
                             enroll_rng);
  }

  // Each evaluation speaker enrols the mean of its first half of vectors;
  // the second half are probes.
  const SpeakerMeans groups = ComputeSpeakerMeans(eval);
  std::map<std::string, std::vector<Eigen::Index>> rows_of;
  for (Eigen::Index i = 0; i < eval.size(); ++i) {
    rows_of[eval.speaker_ids[i]].push_back(i);
  }
  TemplateStore store;
  store.kind = kind;
  store.dim = opts.F;
  store.key_id = pair1.public_key.key_id;
  std::map<std::string, Eigen::VectorXd> enrolled;
  const LinalgContext ctx{pair1.public_key};
  for (const std::string& id : groups.speaker_ids) {
    const auto& rows = rows_of[id];
    const std::size_t half = rows.size() / 2;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(opts.F);
    for (std::size_t i = 0; i < half; ++i) y += eval.vectors.row(rows[i]).transpose();
    y /= static_cast<double>(half);
    if (kind == ComparatorKind::kCosine) y = LengthNormalize(y);
    store.references.emplace(id, Enroll(kind, ctx, model, y, enroll_rng));
    enrolled.emplace(id, std::move(y));
  }

  std::vector<ScoredTrial> encrypted_scores, plain_scores;
  std::string transcript;
  OpCounter totals;
  Json last_ledger;
  double max_abs_diff = 0.0;
  for (int t = 0; t < opts.trials; ++t) {
    RandomSource trial_rng = master.Fork(1000 + t);
    const std::size_t s = trial_rng.NextU64() % groups.speaker_ids.size();
    const bool target = t % 2 == 0;
    std::size_t p = s;
    if (!target) {
      p = (s + 1 + trial_rng.NextU64() % (groups.speaker_ids.size() - 1)) %
          groups.speaker_ids.size();
    }
    const auto& rows = rows_of[groups.speaker_ids[p]];
    const std::size_t half = rows.size() / 2;
    const Eigen::Index row =
        rows[half + trial_rng.NextU64() % (rows.size() - half)];
    const Eigen::VectorXd probe = eval.vectors.row(row).transpose();
    const std::string& subject = groups.speaker_ids[s];

    const RunResult r = Verify(kind, pair1, pair2 ? &*pair2 : nullptr, store,
                               model, enc_model ? &*enc_model : nullptr,
                               subject, probe, opts.eta, trial_rng, {});
    const double plain = PlainScore(kind, model, probe, enrolled.at(subject));
    max_abs_diff = std::max(max_abs_diff, std::abs(r.decision.score - plain));
    const std::string id = "trial" + std::to_string(t);
    encrypted_scores.push_back({id, target, r.decision.score});
    plain_scores.push_back({id, target, plain});
    transcript += TranscriptToJsonLines(r.transcript);
    totals += r.totals;
    last_ledger = Json::parse(r.ledger.ToJson());
  }

  WriteTextFile(InDir(common, "scores.csv"), ScoresToCsv(encrypted_scores));
  WriteTextFile(InDir(common, "plain_scores.csv"), ScoresToCsv(plain_scores));
  WriteTextFile(InDir(common, "transcript.jsonl"), transcript);

  Json out;
  out["comparator"] = ComparatorName(kind);
  out["seed"] = seed;
  out["F"] = opts.F;
  out["bits"] = opts.bits;
  out["trials"] = opts.trials;
  out["ledger_per_trial"] = std::move(last_ledger);
  out["counters_total"] = CounterJson(totals);
  out["max_abs_score_diff"] = max_abs_diff;
  const ScoreSet enc_set = ToScoreSet(encrypted_scores);
  if (!enc_set.target_scores.empty() && !enc_set.nontarget_scores.empty()) {
    out["metrics_encrypted"] = MetricsJson(enc_set, {});
    out["metrics_plain"] = MetricsJson(ToScoreSet(plain_scores), {});
  }
  out["transcript_sha256"] = Sha256Hex(transcript);
  WriteTextFile(InDir(common, "summary.json"), out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
}

void RunComplexity(const ComplexityOptions& opts) {
  const double nu = opts.nu_kib ? *opts.nu_kib * kKiB
                                : 2.0 * static_cast<double>(opts.bits) / 8.0;
  std::vector<ComparatorKind> kinds;
  if (opts.comparator.empty()) {
    kinds = {ComparatorKind::kEuclidean, ComparatorKind::kCosine,
             ComparatorKind::kTwoCovSubject, ComparatorKind::kTwoCovVendor};
  } else {
    kinds = {ParseComparator(opts.comparator)};
  }
  Json all = Json::array();
  for (ComparatorKind kind : kinds) {
    const ComplexityReport report =
        ComputeComplexity(kind, opts.F, nu, opts.p_bits);
    Json j = Json::parse(ComplexityReportToJson(report));
    if (kind == ComparatorKind::kTwoCovVendor) {
      const PreloadReport pre = PreloadAnalysis(opts.F, nu);
      j["preload"] = {
          {"model_preloaded", FormatSize(pre.model_preloaded_bytes)},
          {"model_and_templates_preloaded",
           FormatSize(pre.model_and_templates_preloaded_bytes)}};
    }
    all.push_back(std::move(j));
    if (opts.json) continue;
    std::printf("%s  F=%llu  nu=%g KiB\n",
                std::string(ComparatorName(kind)).c_str(),
                static_cast<unsigned long long>(opts.F), nu / kKiB);
    for (const ComplexityRow& row : report.rows) {
      std::printf("  %-20s %-14s %s\n", row.name.c_str(), row.formula.c_str(),
                  row.display.c_str());
    }
    if (kind == ComparatorKind::kTwoCovVendor) {
      const PreloadReport pre = PreloadAnalysis(opts.F, nu);
      std::printf("  %-20s %-14s %s\n", "channel_model_pre", "nu(3F^2+F+1)",
                  FormatSize(pre.model_preloaded_bytes).c_str());
      std::printf("  %-20s %-14s %s\n", "channel_all_pre", "nu(2F^2+1)",
                  FormatSize(pre.model_and_templates_preloaded_bytes).c_str());
    }
  }
  if (opts.json) std::cout << all.dump(2) << "\n";
}

void RunMetrics(const CommonOptions& common, const MetricsOptions& opts) {
  Require(opts.scores, "--scores");
  const DcfParams params{opts.p_target, opts.c_miss, opts.c_fa};
  const ScoreSet scores = ToScoreSet(ScoresFromCsv(ReadTextFile(opts.scores)));
  Json out;
  out["scores"] = opts.scores;
  out["raw"] = MetricsJson(scores, params);
  if (!opts.dev.empty()) {
    const CalibrationTransform t =
        FitLinearCalibration(ToScoreSet(ScoresFromCsv(ReadTextFile(opts.dev))));
    out["calibration"] = {{"slope", t.slope}, {"offset", t.offset}};
    out["calibrated"] = MetricsJson(t.Apply(scores), params);
  }
  if (!opts.det.empty()) {
    const std::string path = InDir(common, opts.det);
    WriteTextFile(path, DetCurveToCsv(DetCurve(scores)));
    out["det"] = path;
  }
  std::cout << out.dump(2) << "\n";
}

}  // namespace spkhe::cli
