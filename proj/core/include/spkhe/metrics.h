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

#ifndef SPKHE_METRICS_H_
#define SPKHE_METRICS_H_

#include <cstddef>
#include <string>
#include <vector>

namespace spkhe {

struct ScoreSet {
  std::vector<double> target_scores;
  std::vector<double> nontarget_scores;
};

struct CalibrationTransform {
  double slope = 1.0;
  double offset = 0.0;

  double Apply(double score) const { return slope * score + offset; }
  ScoreSet Apply(const ScoreSet& scores) const;
};

struct DcfParams {
  double p_target = 0.01;
  double c_miss = 1.0;
  double c_fa = 1.0;
};

// One operating point: miss rate (FNMR) and false-alarm rate (FMR).
struct OperatingPoint {
  double p_miss = 0.0;
  double p_fa = 0.0;
};

struct DetPoint {
  double threshold = 0.0;
  double fnmr = 0.0;
  double fmr = 0.0;
};

// Vertices of the ROC convex hull from pool-adjacent-violators, ordered by
// rising miss rate.
std::vector<OperatingPoint> RocConvexHull(const ScoreSet& scores);

double RocchEer(const ScoreSet& scores);

// Normalized detection cost at a fixed threshold; a trial is accepted when
// threshold <= score.
double Dcf(const ScoreSet& scores, double threshold,
           const DcfParams& params = {});
double MinDcf(const ScoreSet& scores, const DcfParams& params = {});

// Scores are read as natural-log likelihood ratios.
double Cllr(const ScoreSet& scores);
double MinCllr(const ScoreSet& scores);

// Affine map minimizing Cllr on `dev`, found by damped Newton steps from
// the identity.
CalibrationTransform FitLinearCalibration(const ScoreSet& dev);

// Empirical curve: one point per distinct score plus the reject-all end.
std::vector<DetPoint> DetCurve(const ScoreSet& scores);

struct MetricReport {
  std::size_t targets = 0;
  std::size_t nontargets = 0;
  DcfParams dcf_params;
  double rocch_eer = 0.0;
  double min_dcf = 0.0;
  double cllr = 0.0;
  double min_cllr = 0.0;
};

MetricReport ComputeMetrics(const ScoreSet& scores,
                            const DcfParams& params = {});
std::string MetricReportToJson(const MetricReport& report);

}  // namespace spkhe

#endif  // SPKHE_METRICS_H_
