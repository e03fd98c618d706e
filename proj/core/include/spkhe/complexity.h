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

#ifndef SPKHE_COMPLEXITY_H_
#define SPKHE_COMPLEXITY_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "spkhe/protocol.h"

namespace spkhe {

inline constexpr double kKiB = 1024.0;
inline constexpr double kMiB = 1024.0 * 1024.0;

enum class QuantityUnit { kCount, kBytes };

struct ComplexityRow {
  std::string name;
  std::string formula;
  double value = 0.0;
  QuantityUnit unit = QuantityUnit::kCount;
  std::string display;
};

struct ComplexityReport {
  ComparatorKind kind = ComparatorKind::kCosine;
  std::uint64_t F = 0;
  double nu_bytes = 0.0;
  std::uint64_t p_bits = 0;
  std::vector<ComplexityRow> rows;

  // Throws kLookup for an unknown row name.
  const ComplexityRow& row(std::string_view name) const;
};

// Closed-form verification cost of one comparator. Row names: encryptions,
// decryptions, additions, products, exponentiations, plain_template,
// protected_template, plain_model, protected_model (2Cov only), channel.
// nu_bytes is the size of one ciphertext, p_bits of one plain feature.
ComplexityReport ComputeComplexity(ComparatorKind kind, std::uint64_t F,
                                   double nu_bytes, std::uint64_t p_bits);

struct PreloadReport {
  double full_bytes = 0.0;
  double model_preloaded_bytes = 0.0;
  double model_and_templates_preloaded_bytes = 0.0;
};

// Vendor-scheme channel volume when the encrypted model, and additionally
// the reference, already sit at the operator.
PreloadReport PreloadAnalysis(std::uint64_t F, double nu_bytes);

// "= 125.5 KiB" / "≈ 152.7 MiB": one decimal, MiB from half a MiB upwards,
// "=" only when one decimal is exact.
std::string FormatSize(double bytes);

// Ciphertexts each channel carries in one verification.
std::map<Channel, std::uint64_t> ExpectedChannelCiphertexts(
    ComparatorKind kind, std::uint64_t F);

std::string ComplexityReportToJson(const ComplexityReport& report);

}  // namespace spkhe

#endif  // SPKHE_COMPLEXITY_H_
