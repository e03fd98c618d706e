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

#include "spkhe/speaker_model.h"

#include <cmath>
#include <map>
#include <string>

#include "spkhe/error.h"

namespace spkhe {
namespace {

constexpr double kRegularization = 1e-6;
// Whitening only needs invertibility; a larger ridge would bias the
// whitened covariance away from I.
constexpr double kWhiteningRegularization = 1e-10;
constexpr double kSymmetryTolerance = 1e-9;

void RequireDim(Eigen::Index expected, Eigen::Index actual, const char* what) {
  if (expected != actual) {
    throw Error(ErrorCode::kShape, std::string(what) + " has dimension " +
                                       std::to_string(actual) +
                                       ", model expects " +
                                       std::to_string(expected));
  }
}

// Adds eps = 1e-6 * trace / F to the diagonal and inverts via Cholesky.
// Rank deficiency that regularization cannot repair (a zero scatter) is
// reported with the size of the deficient subspace.
Eigen::MatrixXd RegularizedInverse(const Eigen::MatrixXd& scatter,
                                   const char* what) {
  const Eigen::Index dim = scatter.rows();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scatter);
  const double largest = eig.eigenvalues().cwiseAbs().maxCoeff();
  const double cutoff = std::max(largest, 1.0) * 1e-14;
  Eigen::Index deficient = 0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (eig.eigenvalues()(i) <= cutoff) ++deficient;
  }
  const double eps = kRegularization * scatter.trace() / static_cast<double>(dim);
  if (!(eps > 0.0)) {
    throw Error(ErrorCode::kConditioning,
                std::string(what) + " scatter is singular; deficient subspace "
                                    "dimension " + std::to_string(deficient));
  }
  const Eigen::MatrixXd regularized =
      scatter + eps * Eigen::MatrixXd::Identity(dim, dim);
  Eigen::LLT<Eigen::MatrixXd> llt(regularized);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kConditioning,
                std::string(what) + " scatter is not positive definite; "
                                    "deficient subspace dimension " +
                    std::to_string(deficient));
  }
  Eigen::MatrixXd inverse = llt.solve(Eigen::MatrixXd::Identity(dim, dim));
  return 0.5 * (inverse + inverse.transpose());
}

struct SpdFactor {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double log_det;
};

SpdFactor FactorSpd(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kShape, std::string(what) + " must be square");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw Error(ErrorCode::kConditioning,
                std::string(what) + " is not symmetric");
  }
  SpdFactor f{Eigen::LLT<Eigen::MatrixXd>(m), 0.0};
  if (f.llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kConditioning,
                std::string(what) + " is not positive definite");
  }
  f.log_det = 2.0 * f.llt.matrixLLT().diagonal().array().log().sum();
  return f;
}

}  // namespace

SpeakerMeans ComputeSpeakerMeans(const LabeledCorpus& corpus) {
  if (static_cast<std::size_t>(corpus.size()) != corpus.speaker_ids.size()) {
    throw Error(ErrorCode::kShape, "corpus has " +
                                       std::to_string(corpus.size()) +
                                       " vectors but " +
                                       std::to_string(corpus.speaker_ids.size()) +
                                       " labels");
  }
  std::map<std::string, int> index;
  SpeakerMeans out;
  std::vector<Eigen::VectorXd> sums;
  for (Eigen::Index i = 0; i < corpus.size(); ++i) {
    const std::string& id = corpus.speaker_ids[static_cast<std::size_t>(i)];
    auto [it, inserted] = index.emplace(id, static_cast<int>(sums.size()));
    if (inserted) {
      out.speaker_ids.push_back(id);
      sums.push_back(Eigen::VectorXd::Zero(corpus.dim()));
      out.counts.push_back(0);
    }
    sums[static_cast<std::size_t>(it->second)] += corpus.vectors.row(i).transpose();
    ++out.counts[static_cast<std::size_t>(it->second)];
  }
  out.means.resize(static_cast<Eigen::Index>(sums.size()), corpus.dim());
  for (std::size_t s = 0; s < sums.size(); ++s) {
    out.means.row(static_cast<Eigen::Index>(s)) =
        sums[s].transpose() / static_cast<double>(out.counts[s]);
  }
  return out;
}

void ValidateCorpus(const LabeledCorpus& corpus) {
  if (corpus.dim() < 1) {
    throw Error(ErrorCode::kEstimation, "corpus vectors have no dimensions");
  }
  const SpeakerMeans means = ComputeSpeakerMeans(corpus);
  if (means.speaker_ids.size() < 2) {
    throw Error(ErrorCode::kEstimation,
                "need at least 2 speakers, got " +
                    std::to_string(means.speaker_ids.size()));
  }
  for (std::size_t s = 0; s < means.counts.size(); ++s) {
    if (means.counts[s] < 2) {
      throw Error(ErrorCode::kEstimation,
                  "speaker '" + means.speaker_ids[s] +
                      "' has fewer than 2 vectors");
    }
  }
}

Eigen::VectorXd LengthNormalize(const Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kNormalization, "cannot normalize a zero vector");
  }
  return v / norm;
}

WhiteningTransform FitWhitening(const LabeledCorpus& corpus) {
  if (corpus.size() < 2) {
    throw Error(ErrorCode::kEstimation, "whitening needs at least 2 vectors");
  }
  const double count = static_cast<double>(corpus.size());
  WhiteningTransform t;
  t.mean = corpus.vectors.colwise().mean().transpose();
  const Eigen::MatrixXd centered = corpus.vectors.rowwise() - t.mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / count;
  const Eigen::Index dim = cov.rows();
  const double eps =
      kWhiteningRegularization * cov.trace() / static_cast<double>(dim);
  if (!(eps > 0.0)) {
    throw Error(ErrorCode::kConditioning,
                "sample covariance is zero; deficient subspace dimension " +
                    std::to_string(dim));
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      cov + eps * Eigen::MatrixXd::Identity(dim, dim));
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    throw Error(ErrorCode::kConditioning, "sample covariance is degenerate");
  }
  t.transform = eig.eigenvectors() *
                eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                eig.eigenvectors().transpose();
  return t;
}

Eigen::VectorXd ApplyWhitening(const WhiteningTransform& t,
                               const Eigen::VectorXd& v) {
  RequireDim(t.mean.size(), v.size(), "vector");
  return t.transform * (v - t.mean);
}

CovarianceEstimate EstimateCovariances(const LabeledCorpus& corpus) {
  ValidateCorpus(corpus);
  const SpeakerMeans means = ComputeSpeakerMeans(corpus);
  const Eigen::Index dim = corpus.dim();

  CovarianceEstimate est;
  est.mu = corpus.vectors.colwise().mean().transpose();

  std::map<std::string, Eigen::Index> row_of;
  for (std::size_t s = 0; s < means.speaker_ids.size(); ++s) {
    row_of[means.speaker_ids[s]] = static_cast<Eigen::Index>(s);
  }
  Eigen::MatrixXd within = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < corpus.size(); ++i) {
    const Eigen::Index s = row_of[corpus.speaker_ids[static_cast<std::size_t>(i)]];
    const Eigen::VectorXd d =
        corpus.vectors.row(i).transpose() - means.means.row(s).transpose();
    within.noalias() += d * d.transpose();
  }
  within /= static_cast<double>(corpus.size());

  const Eigen::MatrixXd centered_means =
      means.means.rowwise() - est.mu.transpose();
  const Eigen::MatrixXd between = centered_means.transpose() * centered_means /
                                  static_cast<double>(means.means.rows());

  est.W = RegularizedInverse(within, "within-speaker");
  est.B = RegularizedInverse(between, "between-speaker");
  return est;
}

TwoCovModel DeriveHyperparameters(const Eigen::MatrixXd& W,
                                  const Eigen::MatrixXd& B,
                                  const Eigen::VectorXd& mu) {
  FactorSpd(W, "W");
  const SpdFactor b_factor = FactorSpd(B, "B");
  if (B.rows() != W.rows()) {
    throw Error(ErrorCode::kShape, "W and B dimensions differ");
  }
  RequireDim(W.rows(), mu.size(), "mu");
  const Eigen::Index dim = W.rows();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(dim, dim);

  const SpdFactor b2w = FactorSpd(B + 2.0 * W, "B + 2W");
  const SpdFactor bw = FactorSpd(B + W, "B + W");

  TwoCovModel m;
  m.W = W;
  m.B = B;
  m.mu = mu;
  m.Lambda_tilde = b2w.llt.solve(identity);
  m.Gamma_tilde = bw.llt.solve(identity);
  const Eigen::MatrixXd diff = m.Lambda_tilde - m.Gamma_tilde;
  m.Lambda = 0.5 * W.transpose() * m.Lambda_tilde * W;
  m.Gamma = 0.5 * W.transpose() * diff * W;
  const Eigen::VectorXd b_mu = B * mu;
  m.c = W.transpose() * diff * b_mu;
  // log|inv(A)| = -log|A|.
  const double log_det_gamma_tilde = -bw.log_det;
  const double log_det_lambda_tilde = -b2w.log_det;
  m.k_tilde = 2.0 * log_det_gamma_tilde - log_det_lambda_tilde -
              b_factor.log_det + mu.dot(b_mu);
  m.k = m.k_tilde +
        0.5 * b_mu.dot((m.Lambda_tilde - 2.0 * m.Gamma_tilde) * b_mu);
  return m;
}

double ScoreDiscriminative(const TwoCovModel& model, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y) {
  RequireDim(model.dim(), x.size(), "probe");
  RequireDim(model.dim(), y.size(), "reference");
  // Grouped so that swapping x and y reproduces the same rounding.
  return (x.dot(model.Lambda * y) + y.dot(model.Lambda * x)) +
         (x.dot(model.Gamma * x) + y.dot(model.Gamma * y));
}

double ScoreFull(const TwoCovModel& model, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& y) {
  return ScoreDiscriminative(model, x, y) + model.c.dot(x + y) + model.k;
}

}  // namespace spkhe
