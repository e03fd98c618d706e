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

#ifndef SPKHE_SPEAKER_MODEL_H_
#define SPKHE_SPEAKER_MODEL_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spkhe {

// Labeled training vectors, one row per sample.
struct LabeledCorpus {
  Eigen::MatrixXd vectors;
  std::vector<std::string> speaker_ids;

  Eigen::Index dim() const { return vectors.cols(); }
  Eigen::Index size() const { return vectors.rows(); }
};

// Per-speaker mean vectors, ordered by first appearance.
struct SpeakerMeans {
  std::vector<std::string> speaker_ids;
  Eigen::MatrixXd means;  // one row per speaker
  std::vector<int> counts;
};

SpeakerMeans ComputeSpeakerMeans(const LabeledCorpus& corpus);

// Checks >= 2 speakers with >= 2 vectors each. Throws kEstimation.
void ValidateCorpus(const LabeledCorpus& corpus);

// v / ||v||; throws kNormalization for a zero vector.
Eigen::VectorXd LengthNormalize(const Eigen::VectorXd& v);

struct WhiteningTransform {
  Eigen::VectorXd mean;
  Eigen::MatrixXd transform;  // symmetric C^{-1/2}
};

WhiteningTransform FitWhitening(const LabeledCorpus& corpus);
Eigen::VectorXd ApplyWhitening(const WhiteningTransform& t,
                               const Eigen::VectorXd& v);

// Within- and between-speaker precisions (inverse covariances).
struct CovarianceEstimate {
  Eigen::MatrixXd W;
  Eigen::MatrixXd B;
  Eigen::VectorXd mu;
};

CovarianceEstimate EstimateCovariances(const LabeledCorpus& corpus);

// Two-covariance scoring model. W and B are precisions; everything else is
// derived by DeriveHyperparameters.
struct TwoCovModel {
  Eigen::MatrixXd W;
  Eigen::MatrixXd B;
  Eigen::VectorXd mu;
  Eigen::MatrixXd Lambda;
  Eigen::MatrixXd Gamma;
  Eigen::VectorXd c;
  double k = 0.0;
  double k_tilde = 0.0;
  Eigen::MatrixXd Lambda_tilde;
  Eigen::MatrixXd Gamma_tilde;

  Eigen::Index dim() const { return W.rows(); }
};

TwoCovModel DeriveHyperparameters(const Eigen::MatrixXd& W,
                                  const Eigen::MatrixXd& B,
                                  const Eigen::VectorXd& mu);

// X'LY + Y'LX + X'GX + Y'GY + c'(X + Y) + k
double ScoreFull(const TwoCovModel& model, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& y);
// ScoreFull without the c and k terms.
double ScoreDiscriminative(const TwoCovModel& model, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y);

}  // namespace spkhe

#endif  // SPKHE_SPEAKER_MODEL_H_
