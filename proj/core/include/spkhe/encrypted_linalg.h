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

#ifndef SPKHE_ENCRYPTED_LINALG_H_
#define SPKHE_ENCRYPTED_LINALG_H_

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spkhe/float_codec.h"
#include "spkhe/op_counter.h"

namespace spkhe {

using PlainVector = Eigen::VectorXd;
using PlainMatrix = Eigen::MatrixXd;

class EncryptedVector {
 public:
  EncryptedVector() = default;
  explicit EncryptedVector(std::vector<EncryptedNumber> elements);

  std::size_t size() const { return elements_.size(); }
  const EncryptedNumber& operator[](std::size_t i) const {
    return elements_[i];
  }
  const std::vector<EncryptedNumber>& elements() const { return elements_; }
  const std::string& key_id() const { return key_id_; }

 private:
  std::vector<EncryptedNumber> elements_;
  std::string key_id_;
};

// Square F x F grid of ciphertexts, stored row-major.
class EncryptedMatrix {
 public:
  EncryptedMatrix() = default;
  EncryptedMatrix(std::size_t dim, std::vector<EncryptedNumber> row_major);

  std::size_t dim() const { return dim_; }
  std::size_t ciphertext_count() const { return elements_.size(); }
  const EncryptedNumber& at(std::size_t row, std::size_t col) const {
    return elements_[row * dim_ + col];
  }
  const std::vector<EncryptedNumber>& row_major() const { return elements_; }
  const std::string& key_id() const { return key_id_; }

  // vec(A): columns stacked top to bottom.
  EncryptedVector Vectorize() const;

 private:
  std::size_t dim_ = 0;
  std::vector<EncryptedNumber> elements_;
  std::string key_id_;
};

// Parameters shared by every encrypted linear-algebra call. `counter` may
// be null when tallies are not wanted.
struct LinalgContext {
  const PaillierPublicKey& pk;
  OpCounter* counter = nullptr;
  CodecOptions codec = {};
};

EncryptedVector EncryptVector(const LinalgContext& ctx, const PlainVector& v,
                              RandomSource& rng);
EncryptedMatrix EncryptMatrix(const LinalgContext& ctx, const PlainMatrix& m,
                              RandomSource& rng);
PlainVector DecryptVector(const LinalgContext& ctx, const PaillierSecretKey& sk,
                          const EncryptedVector& v);
PlainMatrix DecryptMatrix(const LinalgContext& ctx, const PaillierSecretKey& sk,
                          const EncryptedMatrix& m);

// Folds `terms` with AddEncrypted from left to right; F - 1 products.
EncryptedNumber SumEncrypted(const LinalgContext& ctx,
                             const std::vector<EncryptedNumber>& terms);

// prod_f enc(y_f)^{x_f} = enc(x'y).
EncryptedNumber DotExponentiate(const LinalgContext& ctx,
                                const EncryptedVector& enc_y,
                                const PlainVector& x);

// Entry (i, j) = enc(y_i)^{x_j} = enc(y x')_{ij}.
EncryptedMatrix OuterExponentiate(const LinalgContext& ctx,
                                  const EncryptedVector& enc_y,
                                  const PlainVector& x);

// Same ciphertexts read as a row: entry (i, j) = enc(y_j)^{x_i} =
// enc(x y')_{ij}.
EncryptedMatrix OuterExponentiateTransposed(const LinalgContext& ctx,
                                            const EncryptedVector& enc_y,
                                            const PlainVector& x);

// Entrywise ciphertext product, i.e. plaintext A + B.
EncryptedMatrix Hadamard(const LinalgContext& ctx, const EncryptedMatrix& a,
                         const EncryptedMatrix& b);

// <A, B> = vec(A)' vec(B), decrypting to sum_ij a_ij b_ij.
EncryptedNumber FrobeniusExponentiate(const LinalgContext& ctx,
                                      const EncryptedMatrix& enc_a,
                                      const PlainMatrix& b);

}  // namespace spkhe

#endif  // SPKHE_ENCRYPTED_LINALG_H_
