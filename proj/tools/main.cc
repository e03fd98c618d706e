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

// spkhe: key management, synthetic data, training, enrolment, encrypted
// verification, complexity tables and metrics.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "commands.h"
#include "spkhe/error.h"

namespace {

using namespace spkhe::cli;

int Fail(spkhe::ErrorCode code, const std::string& message) {
  std::cerr << "spkhe: error code=" << spkhe::ErrorCodeName(code) << ": "
            << message << "\n";
  return spkhe::ExitStatusFor(code);
}

// SPKHE_KEY_DIR, else the working directory.
std::string KeyDir() {
  const char* dir = std::getenv("SPKHE_KEY_DIR");
  return dir != nullptr && *dir != '\0' ? dir : ".";
}

std::string KeyPath(const std::string& name) {
  return (std::filesystem::path(KeyDir()) / name).string();
}

void AddCommon(CLI::App* cmd, CommonOptions& common, bool with_out_dir = true) {
  cmd->add_option("--seed", common.seed, "Seed for all randomness");
  if (with_out_dir) {
    cmd->add_option("--out-dir", common.out_dir, "Directory for outputs")
        ->capture_default_str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speaker verification over Paillier-encrypted templates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "spkhe 0.1.0");

  CommonOptions common;

  KeygenOptions keygen;
  CLI::App* keygen_cmd = app.add_subcommand("keygen", "Generate a key pair");
  AddCommon(keygen_cmd, common, false);
  keygen_cmd->add_option("--bits", keygen.bits, "Modulus bit length")
      ->capture_default_str();
  keygen_cmd->add_option("--name", keygen.name, "File stem of the key pair")
      ->capture_default_str();
  keygen_cmd->add_option("--out-dir", common.out_dir,
                         "Directory for the key files (default: key dir)");

  SynthOptions synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Write a synthetic labeled corpus");
  AddCommon(synth_cmd, common);
  synth_cmd->add_option("--F", synth.F, "Vector dimension")->capture_default_str();
  synth_cmd->add_option("--speakers", synth.speakers)->capture_default_str();
  synth_cmd->add_option("--per-speaker", synth.per_speaker)->capture_default_str();
  synth_cmd->add_option("--between-var", synth.between_var,
                        "Between-speaker variance (B^-1 = v I)")
      ->capture_default_str();
  synth_cmd->add_option("--within-var", synth.within_var,
                        "Within-speaker variance (W^-1 = v I)")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Corpus file")->capture_default_str();

  TrainOptions train;
  CLI::App* train_cmd = app.add_subcommand("train", "Fit a 2Cov model");
  AddCommon(train_cmd, common);
  train_cmd->add_option("--corpus", train.corpus, "Training corpus CSV")
      ->required();
  train_cmd->add_option("--out", train.out, "Model file")->capture_default_str();

  EnrollOptions enroll;
  CLI::App* enroll_cmd =
      app.add_subcommand("enroll", "Encrypt one reference per speaker");
  AddCommon(enroll_cmd, common);
  enroll_cmd->add_option("--comparator", enroll.comparator)
      ->check(CLI::IsMember({"euclidean", "cosine", "2cov-subject", "2cov-vendor"}))
      ->capture_default_str();
  enroll_cmd->add_option("--key", enroll.key, "Public key (default: key dir)");
  enroll_cmd->add_option("--corpus", enroll.corpus, "Enrolment corpus CSV")
      ->required();
  enroll_cmd->add_option("--model", enroll.model, "2Cov model (2cov-*)");
  enroll_cmd->add_option("--vendor-key", enroll.vendor_key,
                         "Vendor public key (2cov-vendor)");
  enroll_cmd->add_option("--out", enroll.out)->capture_default_str();
  enroll_cmd->add_option("--model-out", enroll.model_out)->capture_default_str();

  VerifyOptions verify;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Run one encrypted verification");
  AddCommon(verify_cmd, common);
  verify_cmd->add_option("--comparator", verify.comparator)
      ->check(CLI::IsMember({"euclidean", "cosine", "2cov-subject", "2cov-vendor"}))
      ->capture_default_str();
  verify_cmd->add_option("--key", verify.key, "Public key (default: key dir)");
  verify_cmd->add_option("--secret", verify.secret,
                         "Secret key (default: key dir)");
  verify_cmd->add_option("--vendor-key", verify.vendor_key);
  verify_cmd->add_option("--vendor-secret", verify.vendor_secret);
  verify_cmd->add_option("--templates", verify.templates)->required();
  verify_cmd->add_option("--model", verify.model, "Plain 2Cov model");
  verify_cmd->add_option("--encrypted-model", verify.encrypted_model);
  verify_cmd->add_option("--subject", verify.subject)->required();
  verify_cmd->add_option("--probe", verify.probe, "Comma-separated vector");
  verify_cmd->add_option("--probe-corpus", verify.probe_corpus);
  verify_cmd->add_option("--probe-row", verify.probe_row);
  verify_cmd->add_option("--eta", verify.eta, "Decision threshold")
      ->capture_default_str();
  verify_cmd->add_flag("--add-k", verify.add_k,
                       "Add the model's k to the score before deciding");

  SimulateOptions simulate;
  CLI::App* simulate_cmd = app.add_subcommand(
      "simulate", "Seeded end-to-end pipeline over synthetic trials");
  AddCommon(simulate_cmd, common);
  simulate_cmd->add_option("--comparator", simulate.comparator)
      ->check(CLI::IsMember({"euclidean", "cosine", "2cov-subject", "2cov-vendor"}))
      ->capture_default_str();
  simulate_cmd->add_option("--bits", simulate.bits)->capture_default_str();
  simulate_cmd->add_option("--F", simulate.F)->capture_default_str();
  simulate_cmd->add_option("--speakers", simulate.speakers)->capture_default_str();
  simulate_cmd->add_option("--per-speaker", simulate.per_speaker)
      ->capture_default_str();
  simulate_cmd->add_option("--trials", simulate.trials)->capture_default_str();
  simulate_cmd->add_option("--eta", simulate.eta)->capture_default_str();

  ComplexityOptions complexity;
  CLI::App* complexity_cmd =
      app.add_subcommand("complexity", "Closed-form verification costs");
  complexity_cmd->add_option("--comparator", complexity.comparator,
                             "Default: all")
      ->check(CLI::IsMember({"euclidean", "cosine", "2cov-subject", "2cov-vendor"}));
  complexity_cmd->add_option("--F", complexity.F)->capture_default_str();
  complexity_cmd->add_option("--nu-kib", complexity.nu_kib,
                             "Ciphertext size in KiB (default: from --bits)");
  complexity_cmd->add_option("--bits", complexity.bits)->capture_default_str();
  complexity_cmd->add_option("--p-bits", complexity.p_bits,
                             "Bits per plain feature")
      ->capture_default_str();
  complexity_cmd->add_flag("--json", complexity.json);

  MetricsOptions metrics;
  CLI::App* metrics_cmd =
      app.add_subcommand("metrics", "ROCCH-EER, minDCF, Cllr from scores");
  AddCommon(metrics_cmd, common);
  metrics_cmd->add_option("--scores", metrics.scores)->required();
  metrics_cmd->add_option("--dev", metrics.dev,
                          "Fit linear calibration on these scores");
  metrics_cmd->add_option("--det", metrics.det, "Write DET points here");
  metrics_cmd->add_option("--p-target", metrics.p_target)->capture_default_str();
  metrics_cmd->add_option("--c-miss", metrics.c_miss)->capture_default_str();
  metrics_cmd->add_option("--c-fa", metrics.c_fa)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return Fail(spkhe::ErrorCode::kUsage, e.what());
  }

  try {
    if (*keygen_cmd) {
      if (keygen_cmd->count("--out-dir") == 0) common.out_dir = KeyDir();
      RunKeygen(common, keygen);
    } else if (*synth_cmd) {
      RunSynth(common, synth);
    } else if (*train_cmd) {
      RunTrain(common, train);
    } else if (*enroll_cmd) {
      if (enroll.key.empty()) enroll.key = KeyPath("key.pub.json");
      RunEnroll(common, enroll);
    } else if (*verify_cmd) {
      if (verify.key.empty()) verify.key = KeyPath("key.pub.json");
      if (verify.secret.empty()) verify.secret = KeyPath("key.sec.json");
      RunVerify(common, verify);
    } else if (*simulate_cmd) {
      RunSimulate(common, simulate);
    } else if (*complexity_cmd) {
      RunComplexity(complexity);
    } else if (*metrics_cmd) {
      RunMetrics(common, metrics);
    }
  } catch (const spkhe::Error& e) {
    return Fail(e.code(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return Fail(spkhe::ErrorCode::kIo, e.what());
  }
  return 0;
}
