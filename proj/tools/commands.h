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

#ifndef SPKHE_TOOLS_COMMANDS_H_
#define SPKHE_TOOLS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>

namespace spkhe::cli {

struct CommonOptions {
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

struct KeygenOptions {
  std::size_t bits = 2048;
  std::string name = "key";
};

struct SynthOptions {
  int F = 16;
  int speakers = 20;
  int per_speaker = 20;
  double between_var = 1.0;
  double within_var = 0.25;
  std::string out = "corpus.csv";
};

struct TrainOptions {
  std::string corpus;
  std::string out = "model.json";
};

struct EnrollOptions {
  std::string comparator = "cosine";
  std::string key;
  std::string corpus;
  std::string model;
  std::string vendor_key;
  std::string out = "templates.json";
  std::string model_out = "encrypted_model.json";
};

struct VerifyOptions {
  std::string comparator = "cosine";
  std::string key;
  std::string secret;
  std::string vendor_key;
  std::string vendor_secret;
  std::string templates;
  std::string model;
  std::string encrypted_model;
  std::string subject;
  std::string probe;
  std::string probe_corpus;
  int probe_row = -1;
  double eta = 0.0;
  bool add_k = false;
};

struct SimulateOptions {
  std::string comparator = "2cov-subject";
  std::size_t bits = 2048;
  int F = 16;
  int speakers = 20;
  int per_speaker = 20;
  int trials = 20;
  double eta = 0.0;
};

struct ComplexityOptions {
  std::string comparator;
  std::uint64_t F = 250;
  std::optional<double> nu_kib;
  std::size_t bits = 2048;
  std::uint64_t p_bits = 64;
  bool json = false;
};

struct MetricsOptions {
  std::string scores;
  std::string dev;
  std::string det;
  double p_target = 0.01;
  double c_miss = 1.0;
  double c_fa = 1.0;
};

// Each command writes its report to stdout and files under out_dir, and
// throws spkhe::Error on failure.
void RunKeygen(const CommonOptions& common, const KeygenOptions& opts);
void RunSynth(const CommonOptions& common, const SynthOptions& opts);
void RunTrain(const CommonOptions& common, const TrainOptions& opts);
void RunEnroll(const CommonOptions& common, const EnrollOptions& opts);
void RunVerify(const CommonOptions& common, const VerifyOptions& opts);
void RunSimulate(const CommonOptions& common, const SimulateOptions& opts);
void RunComplexity(const ComplexityOptions& opts);
void RunMetrics(const CommonOptions& common, const MetricsOptions& opts);

}  // namespace spkhe::cli

#endif  // SPKHE_TOOLS_COMMANDS_H_
