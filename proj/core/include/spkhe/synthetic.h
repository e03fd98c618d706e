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

#ifndef SPKHE_SYNTHETIC_H_
#define SPKHE_SYNTHETIC_H_

#include <cstdint>

#include <Eigen/Dense>

#include "spkhe/speaker_model.h"

namespace spkhe {

// Gaussian speaker population drawn from the two-covariance generative
// model: speaker means ~ N(mu, between_cov), samples ~ N(mean, within_cov).
struct SyntheticCorpusSpec {
  int speakers = 20;
  int vectors_per_speaker = 20;
  Eigen::VectorXd mu;
  Eigen::MatrixXd between_cov;
  Eigen::MatrixXd within_cov;
};

// Isotropic spec: between_cov = between_var * I, within_cov = within_var * I.
SyntheticCorpusSpec IsotropicSpec(int dim, int speakers,
                                  int vectors_per_speaker, double between_var,
                                  double within_var);

LabeledCorpus GenerateCorpus(const SyntheticCorpusSpec& spec,
                             std::uint64_t seed);

// Random symmetric positive definite matrix with eigenvalues in
// [min_eig, max_eig].
Eigen::MatrixXd RandomSpdMatrix(int dim, double min_eig, double max_eig,
                                std::uint64_t seed);

// Standard normal vector.
Eigen::VectorXd RandomGaussianVector(int dim, std::uint64_t seed);

}  // namespace spkhe

#endif  // SPKHE_SYNTHETIC_H_
