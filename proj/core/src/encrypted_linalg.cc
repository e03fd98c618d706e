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

#include "spkhe/encrypted_linalg.h"

#include <string>
#include <utility>

#include "spkhe/error.h"

namespace spkhe {
namespace {

void RequireKey(const LinalgContext& ctx, const std::string& key_id) {
  if (key_id != ctx.pk.key_id) {
    throw Error(ErrorCode::kKeyMismatch, "operand under key " + key_id +
                                             " used with key " +
                                             ctx.pk.key_id);
  }
}

void RequireLength(std::size_t expected, std::size_t actual, const char* op) {
  if (expected != actual) {
    throw Error(ErrorCode::kShape, std::string(op) + ": length " +
                                       std::to_string(actual) +
                                       " does not match " +
                                       std::to_string(expected));
  }
}

void Count(OpCounter* counter, std::uint64_t OpCounter::*field,
           std::uint64_t amount) {
  if (counter != nullptr) counter->*field += amount;
}

EncryptedNumber EncryptEntry(const LinalgContext& ctx, double value,
                             std::size_t index, RandomSource& rng) {
  try {
    return EncryptValue(ctx.pk, value, rng, ctx.codec);
  } catch (const Error& e) {
    throw Error(e.code(),
                std::string(e.what()) + " (element " + std::to_string(index) +
                    ")");
  }
}

EncodedNumber EncodeFactor(const LinalgContext& ctx, double value,
                           std::size_t index) {
  try {
    return Encode(ctx.pk, value, ctx.codec);
  } catch (const Error& e) {
    throw Error(e.code(),
                std::string(e.what()) + " (element " + std::to_string(index) +
                    ")");
  }
}

}  // namespace

EncryptedVector::EncryptedVector(std::vector<EncryptedNumber> elements)
    : elements_(std::move(elements)) {
  if (elements_.empty()) {
    throw Error(ErrorCode::kShape, "encrypted vector must not be empty");
  }
  key_id_ = elements_.front().key_id();
  for (const auto& e : elements_) {
    if (e.key_id() != key_id_) {
      throw Error(ErrorCode::kKeyMismatch, "mixed keys in encrypted vector");
    }
  }
}

EncryptedMatrix::EncryptedMatrix(std::size_t dim,
                                 std::vector<EncryptedNumber> row_major)
    : dim_(dim), elements_(std::move(row_major)) {
  if (dim_ == 0 || elements_.size() != dim_ * dim_) {
    throw Error(ErrorCode::kShape, "encrypted matrix must be square and F>=1");
  }
  key_id_ = elements_.front().key_id();
  for (const auto& e : elements_) {
    if (e.key_id() != key_id_) {
      throw Error(ErrorCode::kKeyMismatch, "mixed keys in encrypted matrix");
    }
  }
}

EncryptedVector EncryptedMatrix::Vectorize() const {
  std::vector<EncryptedNumber> stacked;
  stacked.reserve(elements_.size());
  for (std::size_t col = 0; col < dim_; ++col) {
    for (std::size_t row = 0; row < dim_; ++row) {
      stacked.push_back(at(row, col));
    }
  }
  return EncryptedVector(std::move(stacked));
}

EncryptedVector EncryptVector(const LinalgContext& ctx, const PlainVector& v,
                              RandomSource& rng) {
  std::vector<EncryptedNumber> out;
  out.reserve(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(EncryptEntry(ctx, v(i), static_cast<std::size_t>(i), rng));
  }
  Count(ctx.counter, &OpCounter::encryptions, out.size());
  return EncryptedVector(std::move(out));
}

EncryptedMatrix EncryptMatrix(const LinalgContext& ctx, const PlainMatrix& m,
                              RandomSource& rng) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kShape, "matrix must be square");
  }
  const auto dim = static_cast<std::size_t>(m.rows());
  std::vector<EncryptedNumber> out;
  out.reserve(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      out.push_back(EncryptEntry(ctx, m(i, j), i * dim + j, rng));
    }
  }
  Count(ctx.counter, &OpCounter::encryptions, out.size());
  return EncryptedMatrix(dim, std::move(out));
}

PlainVector DecryptVector(const LinalgContext& ctx, const PaillierSecretKey& sk,
                          const EncryptedVector& v) {
  RequireKey(ctx, v.key_id());
  PlainVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = DecryptValue(sk, ctx.pk, v[i]);
  }
  Count(ctx.counter, &OpCounter::decryptions, v.size());
  return out;
}

PlainMatrix DecryptMatrix(const LinalgContext& ctx, const PaillierSecretKey& sk,
                          const EncryptedMatrix& m) {
  RequireKey(ctx, m.key_id());
  const auto dim = static_cast<Eigen::Index>(m.dim());
  PlainMatrix out(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      out(i, j) = DecryptValue(sk, ctx.pk, m.at(i, j));
    }
  }
  Count(ctx.counter, &OpCounter::decryptions, m.ciphertext_count());
  return out;
}

EncryptedNumber SumEncrypted(const LinalgContext& ctx,
                             const std::vector<EncryptedNumber>& terms) {
  if (terms.empty()) {
    throw Error(ErrorCode::kShape, "cannot sum an empty list");
  }
  EncryptedNumber acc = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) {
    acc = AddEncrypted(ctx.pk, acc, terms[i], ctx.codec);
  }
  Count(ctx.counter, &OpCounter::ciphertext_products, terms.size() - 1);
  return acc;
}

EncryptedNumber DotExponentiate(const LinalgContext& ctx,
                                const EncryptedVector& enc_y,
                                const PlainVector& x) {
  RequireKey(ctx, enc_y.key_id());
  RequireLength(enc_y.size(), static_cast<std::size_t>(x.size()),
                "dot product");
  std::vector<EncryptedNumber> terms;
  terms.reserve(enc_y.size());
  for (std::size_t f = 0; f < enc_y.size(); ++f) {
    terms.push_back(MultiplyEncoded(
        ctx.pk, enc_y[f],
        EncodeFactor(ctx, x(static_cast<Eigen::Index>(f)), f)));
  }
  Count(ctx.counter, &OpCounter::exponentiations, terms.size());
  return SumEncrypted(ctx, terms);
}

EncryptedMatrix OuterExponentiate(const LinalgContext& ctx,
                                  const EncryptedVector& enc_y,
                                  const PlainVector& x) {
  RequireKey(ctx, enc_y.key_id());
  const std::size_t dim = enc_y.size();
  RequireLength(dim, static_cast<std::size_t>(x.size()), "outer product");
  std::vector<EncodedNumber> factors;
  factors.reserve(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    factors.push_back(EncodeFactor(ctx, x(static_cast<Eigen::Index>(j)), j));
  }
  std::vector<EncryptedNumber> out;
  out.reserve(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      out.push_back(MultiplyEncoded(ctx.pk, enc_y[i], factors[j]));
    }
  }
  Count(ctx.counter, &OpCounter::exponentiations, out.size());
  return EncryptedMatrix(dim, std::move(out));
}

EncryptedMatrix OuterExponentiateTransposed(const LinalgContext& ctx,
                                            const EncryptedVector& enc_y,
                                            const PlainVector& x) {
  RequireKey(ctx, enc_y.key_id());
  const std::size_t dim = enc_y.size();
  RequireLength(dim, static_cast<std::size_t>(x.size()), "outer product");
  std::vector<EncodedNumber> factors;
  factors.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    factors.push_back(EncodeFactor(ctx, x(static_cast<Eigen::Index>(i)), i));
  }
  std::vector<EncryptedNumber> out;
  out.reserve(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      out.push_back(MultiplyEncoded(ctx.pk, enc_y[j], factors[i]));
    }
  }
  Count(ctx.counter, &OpCounter::exponentiations, out.size());
  return EncryptedMatrix(dim, std::move(out));
}

EncryptedMatrix Hadamard(const LinalgContext& ctx, const EncryptedMatrix& a,
                         const EncryptedMatrix& b) {
  RequireKey(ctx, a.key_id());
  RequireKey(ctx, b.key_id());
  RequireLength(a.dim(), b.dim(), "hadamard product");
  std::vector<EncryptedNumber> out;
  out.reserve(a.ciphertext_count());
  for (std::size_t k = 0; k < a.ciphertext_count(); ++k) {
    out.push_back(
        AddEncrypted(ctx.pk, a.row_major()[k], b.row_major()[k], ctx.codec));
  }
  Count(ctx.counter, &OpCounter::ciphertext_products, out.size());
  return EncryptedMatrix(a.dim(), std::move(out));
}

EncryptedNumber FrobeniusExponentiate(const LinalgContext& ctx,
                                      const EncryptedMatrix& enc_a,
                                      const PlainMatrix& b) {
  RequireKey(ctx, enc_a.key_id());
  if (b.rows() != b.cols() ||
      static_cast<std::size_t>(b.rows()) != enc_a.dim()) {
    throw Error(ErrorCode::kShape,
                "frobenius product: " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()) + " does not match " +
                    std::to_string(enc_a.dim()) + "x" +
                    std::to_string(enc_a.dim()));
  }
  // Eigen storage is column-major, so the raw data already is vec(B).
  const Eigen::Map<const PlainVector> vec_b(b.data(), b.size());
  return DotExponentiate(ctx, enc_a.Vectorize(), vec_b);
}

}  // namespace spkhe
