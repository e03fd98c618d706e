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

#ifndef SPKHE_COMPARATORS_H_
#define SPKHE_COMPARATORS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "spkhe/encrypted_linalg.h"
#include "spkhe/speaker_model.h"

namespace spkhe {

enum class ComparatorKind { kEuclidean, kCosine, kTwoCovSubject, kTwoCovVendor };

// "euclidean", "cosine", "2cov-subject", "2cov-vendor".
std::string_view ComparatorName(ComparatorKind kind);
ComparatorKind ParseComparator(std::string_view name);

// (enc(sum y_f^2), enc(Y)): F + 1 ciphertexts.
struct ProtectedReferenceEuclidean {
  EncryptedNumber sum_sq;
  EncryptedVector elements;

  std::size_t dim() const { return elements.size(); }
  std::size_t ciphertext_count() const { return elements.size() + 1; }
  const std::string& key_id() const { return elements.key_id(); }
};

// enc(Y) of a length-normalized Y: F ciphertexts.
struct ProtectedReferenceCosine {
  EncryptedVector elements;

  std::size_t dim() const { return elements.size(); }
  std::size_t ciphertext_count() const { return elements.size(); }
  const std::string& key_id() const { return elements.key_id(); }
};

// (enc(Y), enc(Y' Gamma Y)): F + 1 ciphertexts under a single key.
struct ProtectedReferenceTwoCovSubject {
  EncryptedVector elements;
  EncryptedNumber quad_term;

  std::size_t dim() const { return elements.size(); }
  std::size_t ciphertext_count() const { return elements.size() + 1; }
  const std::string& key_id() const { return elements.key_id(); }
};

// (enc_pk1(Y), enc_pk1(Y Y')): F^2 + F ciphertexts.
struct ProtectedReferenceTwoCovVendor {
  EncryptedVector elements;
  EncryptedMatrix gram;

  std::size_t dim() const { return elements.size(); }
  std::size_t ciphertext_count() const {
    return elements.size() + gram.ciphertext_count();
  }
  const std::string& key_id() const { return elements.key_id(); }
};

// Vendor hyper-parameters under pk2: 2F^2 ciphertexts.
struct EncryptedModel {
  EncryptedMatrix lambda;
  EncryptedMatrix gamma;

  std::size_t dim() const { return lambda.dim(); }
  std::size_t ciphertext_count() const {
    return lambda.ciphertext_count() + gamma.ciphertext_count();
  }
  const std::string& key_id() const { return lambda.key_id(); }
};

// Client-to-operator payload of the vendor-protecting scheme:
// enc_pk1(XY' + YX') and enc_pk1(XX' + YY').
struct VendorClientMessage {
  EncryptedMatrix c1;
  EncryptedMatrix c23;
};

ProtectedReferenceEuclidean EnrollEuclidean(const LinalgContext& ctx,
                                            const Eigen::VectorXd& y,
                                            RandomSource& rng);
// y must already be length-normalized.
ProtectedReferenceCosine EnrollCosine(const LinalgContext& ctx,
                                      const Eigen::VectorXd& y,
                                      RandomSource& rng);
ProtectedReferenceTwoCovSubject EnrollTwoCovSubject(
    const LinalgContext& ctx, const Eigen::MatrixXd& gamma,
    const Eigen::VectorXd& y, RandomSource& rng);
ProtectedReferenceTwoCovVendor EnrollTwoCovVendor(const LinalgContext& ctx,
                                                  const Eigen::VectorXd& y,
                                                  RandomSource& rng);
EncryptedModel EncryptModel(const LinalgContext& ctx, const TwoCovModel& model,
                            RandomSource& rng);

// Squared Euclidean distance sum x^2 + sum y^2 - 2 x'y.
double PlainEuclidean(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
double PlainCosine(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// enc(sum x^2) enc(sum y^2) prod enc(y_f)^{-2 x_f}; one probe encryption.
EncryptedNumber ScoreEuclideanEncrypted(const LinalgContext& ctx,
                                        const ProtectedReferenceEuclidean& ref,
                                        const Eigen::VectorXd& x,
                                        RandomSource& rng);

// prod enc(y_f)^{x_f}; no probe encryptions. A probe that is not unit
// length is normalized first.
EncryptedNumber ScoreCosineEncrypted(const LinalgContext& ctx,
                                     const ProtectedReferenceCosine& ref,
                                     const Eigen::VectorXd& x);

// enc(X'GX) enc(Y'GY) enc(Y)^{LX} enc(Y)^{X'L}, decrypting to the
// discriminative score. The client holds Lambda and Gamma in plaintext.
EncryptedNumber ScoreTwoCovSubjectEncrypted(
    const LinalgContext& ctx, const ProtectedReferenceTwoCovSubject& ref,
    const Eigen::VectorXd& x, const Eigen::MatrixXd& lambda,
    const Eigen::MatrixXd& gamma, RandomSource& rng);

// Client side of the vendor scheme: F^2 fresh encryptions of XX'.
VendorClientMessage ClientComputeVendor(
    const LinalgContext& ctx, const ProtectedReferenceTwoCovVendor& ref,
    const Eigen::VectorXd& x, RandomSource& rng);

// Operator side: decrypts c1 and c23 under sk1, then
// enc_pk2(Lambda)^<c1> enc_pk2(Gamma)^<c23>. The result is under pk2.
EncryptedNumber OperatorCombineVendor(const PaillierPublicKey& pk1,
                                      const PaillierSecretKey& sk1,
                                      const PaillierPublicKey& pk2,
                                      const EncryptedModel& model,
                                      const VendorClientMessage& message,
                                      OpCounter* counter = nullptr,
                                      const CodecOptions& codec = {});

// Adds k, and c'(X + Y) when the sum is available, to a decrypted
// discriminative score.
double AddCalibrationOffset(
    double score, const TwoCovModel& model,
    const std::optional<Eigen::VectorXd>& x_plus_y = std::nullopt);

}  // namespace spkhe

#endif  // SPKHE_COMPARATORS_H_
