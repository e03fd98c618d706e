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

#include "spkhe/synthetic.h"

#include <cstdio>
#include <random>
#include <string>

#include "spkhe/error.h"

namespace spkhe {
namespace {

Eigen::VectorXd Normal(int dim, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = normal(gen);
  return v;
}

Eigen::MatrixXd CholeskyFactor(const Eigen::MatrixXd& cov, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kConditioning,
                std::string(what) + " covariance is not positive definite");
  }
  return llt.matrixL();
}

}  // namespace

SyntheticCorpusSpec IsotropicSpec(int dim, int speakers,
                                  int vectors_per_speaker, double between_var,
                                  double within_var) {
  SyntheticCorpusSpec spec;
  spec.speakers = speakers;
  spec.vectors_per_speaker = vectors_per_speaker;
  spec.mu = Eigen::VectorXd::Zero(dim);
  spec.between_cov = between_var * Eigen::MatrixXd::Identity(dim, dim);
  spec.within_cov = within_var * Eigen::MatrixXd::Identity(dim, dim);
  return spec;
}

LabeledCorpus GenerateCorpus(const SyntheticCorpusSpec& spec,
                             std::uint64_t seed) {
  const auto dim = static_cast<int>(spec.mu.size());
  if (dim < 1 || spec.speakers < 1 || spec.vectors_per_speaker < 1) {
    throw Error(ErrorCode::kParameter, "corpus spec needs F, speakers and "
                                       "vectors per speaker >= 1");
  }
  if (spec.between_cov.rows() != dim || spec.between_cov.cols() != dim ||
      spec.within_cov.rows() != dim || spec.within_cov.cols() != dim) {
    throw Error(ErrorCode::kShape, "covariances must be F x F with F = " +
                                       std::to_string(dim));
  }
  const Eigen::MatrixXd between = CholeskyFactor(spec.between_cov, "between");
  const Eigen::MatrixXd within = CholeskyFactor(spec.within_cov, "within");

  std::mt19937_64 gen(seed);
  LabeledCorpus corpus;
  corpus.vectors.resize(
      static_cast<Eigen::Index>(spec.speakers) * spec.vectors_per_speaker, dim);
  Eigen::Index row = 0;
  for (int s = 0; s < spec.speakers; ++s) {
    char id[16];
    std::snprintf(id, sizeof(id), "spk%03d", s);
    const Eigen::VectorXd mean = spec.mu + between * Normal(dim, gen);
    for (int v = 0; v < spec.vectors_per_speaker; ++v) {
      corpus.vectors.row(row++) = (mean + within * Normal(dim, gen)).transpose();
      corpus.speaker_ids.emplace_back(id);
    }
  }
  return corpus;
}

Eigen::MatrixXd RandomSpdMatrix(int dim, double min_eig, double max_eig,
                                std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Eigen::MatrixXd a(dim, dim);
  for (int j = 0; j < dim; ++j) a.col(j) = Normal(dim, gen);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ();
  std::uniform_real_distribution<double> eig(min_eig, max_eig);
  Eigen::VectorXd values(dim);
  for (int i = 0; i < dim; ++i) values(i) = eig(gen);
  Eigen::MatrixXd m = q * values.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

Eigen::VectorXd RandomGaussianVector(int dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return Normal(dim, gen);
}

}  // namespace spkhe
