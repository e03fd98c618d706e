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

#include "spkhe/comparators.h"

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "spkhe/error.h"

namespace spkhe {
namespace {

constexpr double kUnitNormTolerance = 1e-9;

void RequireDim(std::size_t expected, Eigen::Index actual, const char* what) {
  if (static_cast<Eigen::Index>(expected) != actual) {
    throw Error(ErrorCode::kShape, std::string(what) + " has dimension " +
                                       std::to_string(actual) +
                                       ", reference has " +
                                       std::to_string(expected));
  }
}

void CountPlain(OpCounter* counter, std::uint64_t products,
                std::uint64_t additions) {
  if (counter == nullptr) return;
  counter->plain_products += products;
  counter->plain_additions += additions;
}

void CountCipher(OpCounter* counter, std::uint64_t products) {
  if (counter != nullptr) counter->ciphertext_products += products;
}

EncryptedNumber Encrypt1(const LinalgContext& ctx, double value,
                         RandomSource& rng) {
  EncryptedNumber e = EncryptValue(ctx.pk, value, rng, ctx.codec);
  if (ctx.counter != nullptr) ++ctx.counter->encryptions;
  return e;
}

EncryptedNumber Multiply(const LinalgContext& ctx, const EncryptedNumber& a,
                         const EncryptedNumber& b) {
  CountCipher(ctx.counter, 1);
  return AddEncrypted(ctx.pk, a, b, ctx.codec);
}

}  // namespace

std::string_view ComparatorName(ComparatorKind kind) {
  switch (kind) {
    case ComparatorKind::kEuclidean: return "euclidean";
    case ComparatorKind::kCosine: return "cosine";
    case ComparatorKind::kTwoCovSubject: return "2cov-subject";
    case ComparatorKind::kTwoCovVendor: return "2cov-vendor";
  }
  return "unknown";
}

ComparatorKind ParseComparator(std::string_view name) {
  for (ComparatorKind kind :
       {ComparatorKind::kEuclidean, ComparatorKind::kCosine,
        ComparatorKind::kTwoCovSubject, ComparatorKind::kTwoCovVendor}) {
    if (ComparatorName(kind) == name) return kind;
  }
  throw Error(ErrorCode::kUsage, "unknown comparator '" + std::string(name) +
                                     "'");
}

ProtectedReferenceEuclidean EnrollEuclidean(const LinalgContext& ctx,
                                            const Eigen::VectorXd& y,
                                            RandomSource& rng) {
  return ProtectedReferenceEuclidean{Encrypt1(ctx, y.squaredNorm(), rng),
                                     EncryptVector(ctx, y, rng)};
}

ProtectedReferenceCosine EnrollCosine(const LinalgContext& ctx,
                                      const Eigen::VectorXd& y,
                                      RandomSource& rng) {
  if (std::fabs(y.norm() - 1.0) > kUnitNormTolerance) {
    throw Error(ErrorCode::kNormalization,
                "cosine references must be length-normalized");
  }
  return ProtectedReferenceCosine{EncryptVector(ctx, y, rng)};
}

ProtectedReferenceTwoCovSubject EnrollTwoCovSubject(
    const LinalgContext& ctx, const Eigen::MatrixXd& gamma,
    const Eigen::VectorXd& y, RandomSource& rng) {
  if (gamma.rows() != y.size() || gamma.cols() != y.size()) {
    throw Error(ErrorCode::kShape, "Gamma is " + std::to_string(gamma.rows()) +
                                       "x" + std::to_string(gamma.cols()) +
                                       ", reference has dimension " +
                                       std::to_string(y.size()));
  }
  EncryptedVector elements = EncryptVector(ctx, y, rng);
  EncryptedNumber quad = Encrypt1(ctx, y.dot(gamma * y), rng);
  return ProtectedReferenceTwoCovSubject{std::move(elements), std::move(quad)};
}

ProtectedReferenceTwoCovVendor EnrollTwoCovVendor(const LinalgContext& ctx,
                                                  const Eigen::VectorXd& y,
                                                  RandomSource& rng) {
  EncryptedVector elements = EncryptVector(ctx, y, rng);
  EncryptedMatrix gram = EncryptMatrix(ctx, y * y.transpose(), rng);
  return ProtectedReferenceTwoCovVendor{std::move(elements), std::move(gram)};
}

EncryptedModel EncryptModel(const LinalgContext& ctx, const TwoCovModel& model,
                            RandomSource& rng) {
  EncryptedMatrix lambda = EncryptMatrix(ctx, model.Lambda, rng);
  EncryptedMatrix gamma = EncryptMatrix(ctx, model.Gamma, rng);
  return EncryptedModel{std::move(lambda), std::move(gamma)};
}

double PlainEuclidean(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kShape, "vectors differ in dimension");
  }
  return x.squaredNorm() + y.squaredNorm() - 2.0 * x.dot(y);
}

double PlainCosine(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kShape, "vectors differ in dimension");
  }
  return LengthNormalize(x).dot(LengthNormalize(y));
}

EncryptedNumber ScoreEuclideanEncrypted(const LinalgContext& ctx,
                                        const ProtectedReferenceEuclidean& ref,
                                        const Eigen::VectorXd& x,
                                        RandomSource& rng) {
  RequireDim(ref.dim(), x.size(), "probe");
  const auto dim = static_cast<std::uint64_t>(x.size());
  CountPlain(ctx.counter, 2 * dim, dim - 1);
  const EncryptedNumber probe_sq = Encrypt1(ctx, x.squaredNorm(), rng);
  const EncryptedNumber cross =
      DotExponentiate(ctx, ref.elements, -2.0 * x);
  return Multiply(ctx, Multiply(ctx, probe_sq, ref.sum_sq), cross);
}

EncryptedNumber ScoreCosineEncrypted(const LinalgContext& ctx,
                                     const ProtectedReferenceCosine& ref,
                                     const Eigen::VectorXd& x) {
  RequireDim(ref.dim(), x.size(), "probe");
  if (std::fabs(x.norm() - 1.0) > kUnitNormTolerance) {
    std::clog << "spkhe: cosine probe is not length-normalized; "
                 "normalizing\n";
    return DotExponentiate(ctx, ref.elements, LengthNormalize(x));
  }
  return DotExponentiate(ctx, ref.elements, x);
}

EncryptedNumber ScoreTwoCovSubjectEncrypted(
    const LinalgContext& ctx, const ProtectedReferenceTwoCovSubject& ref,
    const Eigen::VectorXd& x, const Eigen::MatrixXd& lambda,
    const Eigen::MatrixXd& gamma, RandomSource& rng) {
  RequireDim(ref.dim(), x.size(), "probe");
  RequireDim(ref.dim(), lambda.rows(), "Lambda");
  RequireDim(ref.dim(), gamma.rows(), "Gamma");
  const auto dim = static_cast<std::uint64_t>(x.size());

  // Auxiliary plaintext vectors (X'Lambda)' and Lambda X, and X'Gamma X.
  const Eigen::VectorXd x_lambda = (x.transpose() * lambda).transpose();
  const Eigen::VectorXd lambda_x = lambda * x;
  const double quad = x.dot(gamma * x);
  CountPlain(ctx.counter, 3 * dim * dim + dim, 3 * dim * (dim - 1) + dim - 1);

  const EncryptedNumber probe_quad = Encrypt1(ctx, quad, rng);
  const EncryptedNumber part_lambda_x =
      DotExponentiate(ctx, ref.elements, lambda_x);
  const EncryptedNumber part_x_lambda =
      DotExponentiate(ctx, ref.elements, x_lambda);
  EncryptedNumber score = Multiply(ctx, probe_quad, ref.quad_term);
  score = Multiply(ctx, score, part_lambda_x);
  return Multiply(ctx, score, part_x_lambda);
}

VendorClientMessage ClientComputeVendor(
    const LinalgContext& ctx, const ProtectedReferenceTwoCovVendor& ref,
    const Eigen::VectorXd& x, RandomSource& rng) {
  RequireDim(ref.dim(), x.size(), "probe");
  const auto dim = static_cast<std::uint64_t>(x.size());
  // enc(Y)^{X'} is enc(YX'); enc(Y')^{X} is enc(XY').
  const EncryptedMatrix y_xt = OuterExponentiate(ctx, ref.elements, x);
  const EncryptedMatrix x_yt = OuterExponentiateTransposed(ctx, ref.elements, x);
  EncryptedMatrix c1 = Hadamard(ctx, y_xt, x_yt);

  CountPlain(ctx.counter, dim * dim, 0);
  const EncryptedMatrix x_xt = EncryptMatrix(ctx, x * x.transpose(), rng);
  EncryptedMatrix c23 = Hadamard(ctx, x_xt, ref.gram);
  return VendorClientMessage{std::move(c1), std::move(c23)};
}

EncryptedNumber OperatorCombineVendor(const PaillierPublicKey& pk1,
                                      const PaillierSecretKey& sk1,
                                      const PaillierPublicKey& pk2,
                                      const EncryptedModel& model,
                                      const VendorClientMessage& message,
                                      OpCounter* counter,
                                      const CodecOptions& codec) {
  if (message.c1.dim() != model.dim() || message.c23.dim() != model.dim()) {
    throw Error(ErrorCode::kShape,
                "client matrices are " + std::to_string(message.c1.dim()) +
                    "x" + std::to_string(message.c1.dim()) +
                    ", model is " + std::to_string(model.dim()) + "x" +
                    std::to_string(model.dim()));
  }
  const LinalgContext ctx1{pk1, counter, codec};
  const LinalgContext ctx2{pk2, counter, codec};
  const PlainMatrix c1 = DecryptMatrix(ctx1, sk1, message.c1);
  const PlainMatrix c23 = DecryptMatrix(ctx1, sk1, message.c23);
  const EncryptedNumber lambda_part =
      FrobeniusExponentiate(ctx2, model.lambda, c1);
  const EncryptedNumber gamma_part =
      FrobeniusExponentiate(ctx2, model.gamma, c23);
  return Multiply(ctx2, lambda_part, gamma_part);
}

double AddCalibrationOffset(double score, const TwoCovModel& model,
                            const std::optional<Eigen::VectorXd>& x_plus_y) {
  double out = score + model.k;
  if (x_plus_y) {
    if (x_plus_y->size() != model.c.size()) {
      throw Error(ErrorCode::kShape, "X + Y has the wrong dimension");
    }
    out += model.c.dot(*x_plus_y);
  }
  return out;
}

}  // namespace spkhe
