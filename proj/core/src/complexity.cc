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

#include "spkhe/complexity.h"

#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "spkhe/error.h"

namespace spkhe {
namespace {

ComplexityRow Count(std::string name, std::string formula, double value) {
  ComplexityRow row{std::move(name), std::move(formula), value,
                    QuantityUnit::kCount, ""};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.0f", value);
  row.display = buf;
  return row;
}

ComplexityRow Size(std::string name, std::string formula, double bytes) {
  return ComplexityRow{std::move(name), std::move(formula), bytes,
                       QuantityUnit::kBytes, FormatSize(bytes)};
}

}  // namespace

const ComplexityRow& ComplexityReport::row(std::string_view name) const {
  for (const ComplexityRow& r : rows) {
    if (r.name == name) return r;
  }
  throw Error(ErrorCode::kLookup,
              "no complexity row '" + std::string(name) + "'");
}

ComplexityReport ComputeComplexity(ComparatorKind kind, std::uint64_t F,
                                   double nu_bytes, std::uint64_t p_bits) {
  if (!(nu_bytes > 0.0)) {
    throw Error(ErrorCode::kParameter, "ciphertext size must be positive");
  }
  const double f = static_cast<double>(F);
  const double nu = nu_bytes;
  const double p = static_cast<double>(p_bits) / 8.0;

  ComplexityReport report;
  report.kind = kind;
  report.F = F;
  report.nu_bytes = nu_bytes;
  report.p_bits = p_bits;
  auto& rows = report.rows;
  switch (kind) {
    case ComparatorKind::kEuclidean:
      rows = {Count("encryptions", "F", f),
              Count("decryptions", "1", 1),
              Count("additions", "F-1", f - 1),
              Count("products", "2F+4", 2 * f + 4),
              Count("exponentiations", "2F", 2 * f),
              Size("plain_template", "pF", p * f),
              Size("protected_template", "nu(F+1)", nu * (f + 1)),
              Size("channel", "nu(F+2)", nu * (f + 2))};
      break;
    case ComparatorKind::kCosine:
      rows = {Count("encryptions", "0", 0),
              Count("decryptions", "1", 1),
              Count("additions", "0", 0),
              Count("products", "F-1", f - 1),
              Count("exponentiations", "F", f),
              Size("plain_template", "pF", p * f),
              Size("protected_template", "nuF", nu * f),
              Size("channel", "nu(F+1)", nu * (f + 1))};
      break;
    case ComparatorKind::kTwoCovSubject:
      rows = {Count("encryptions", "1", 1),
              Count("decryptions", "1", 1),
              Count("additions", "4F(F-1)", 4 * f * (f - 1)),
              Count("products", "4F^2+2F+1", 4 * f * f + 2 * f + 1),
              Count("exponentiations", "2F", 2 * f),
              Size("plain_template", "pF", p * f),
              Size("protected_template", "nu(F+1)", nu * (f + 1)),
              Size("plain_model", "2pF^2", 2 * p * f * f),
              Size("protected_model", "0", 0),
              Size("channel", "nu(F+2)", nu * (f + 2))};
      break;
    case ComparatorKind::kTwoCovVendor:
      rows = {Count("encryptions", "F^2", f * f),
              Count("decryptions", "2F^2+1", 2 * f * f + 1),
              Count("additions", "0", 0),
              Count("products", "5F^2-1", 5 * f * f - 1),
              Count("exponentiations", "4F^2", 4 * f * f),
              Size("plain_template", "pF", p * f),
              Size("protected_template", "nu(F^2+F)", nu * (f * f + f)),
              Size("plain_model", "2pF^2", 2 * p * f * f),
              Size("protected_model", "2nuF^2", 2 * nu * f * f),
              Size("channel", "nu(5F^2+F+1)", nu * (5 * f * f + f + 1))};
      break;
  }
  return report;
}

PreloadReport PreloadAnalysis(std::uint64_t F, double nu_bytes) {
  if (!(nu_bytes > 0.0)) {
    throw Error(ErrorCode::kParameter, "ciphertext size must be positive");
  }
  const double f = static_cast<double>(F);
  return PreloadReport{nu_bytes * (5 * f * f + f + 1),
                       nu_bytes * (3 * f * f + f + 1),
                       nu_bytes * (2 * f * f + 1)};
}

std::string FormatSize(double bytes) {
  const bool mib = bytes >= 0.5 * kMiB;
  const double value = bytes / (mib ? kMiB : kKiB);
  const double tenths = value * 10.0;
  const bool exact = std::fabs(tenths - std::round(tenths)) < 1e-9;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s %.1f %s", exact ? "=" : "≈",
                std::round(tenths) / 10.0, mib ? "MiB" : "KiB");
  return buf;
}

std::map<Channel, std::uint64_t> ExpectedChannelCiphertexts(
    ComparatorKind kind, std::uint64_t F) {
  const Channel db_client{Role::kDbController, Role::kClient};
  const Channel client_op{Role::kClient, Role::kAsOperator};
  switch (kind) {
    case ComparatorKind::kCosine:
      return {{db_client, F}, {client_op, 1}};
    case ComparatorKind::kEuclidean:
      return {{db_client, F + 1}, {client_op, 1}};
    case ComparatorKind::kTwoCovSubject:
      return {{db_client, F + 1}, {client_op, 1}};
    case ComparatorKind::kTwoCovVendor:
      return {{db_client, F * F + F},
              {client_op, 2 * F * F},
              {{Role::kDbVendor, Role::kAsOperator}, 2 * F * F},
              {{Role::kAsOperator, Role::kAsVendor}, 1}};
  }
  return {};
}

std::string ComplexityReportToJson(const ComplexityReport& report) {
  nlohmann::ordered_json doc;
  doc["comparator"] = ComparatorName(report.kind);
  doc["F"] = report.F;
  doc["nu_bytes"] = report.nu_bytes;
  doc["p_bits"] = report.p_bits;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const ComplexityRow& r : report.rows) {
    nlohmann::ordered_json row;
    row["name"] = r.name;
    row["formula"] = r.formula;
    row["value"] = r.value;
    row["unit"] = r.unit == QuantityUnit::kCount ? "count" : "bytes";
    row["display"] = r.display;
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2);
}

}  // namespace spkhe
