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

#include "spkhe/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "json.hpp"
#include "spkhe/error.h"

namespace spkhe {
namespace {

void RequireScores(const ScoreSet& s) {
  if (s.target_scores.empty() || s.nontarget_scores.empty()) {
    throw Error(ErrorCode::kInput,
                "need at least one target and one non-target score");
  }
  for (const auto* list : {&s.target_scores, &s.nontarget_scores}) {
    for (double v : *list) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kInput, "scores must be finite");
      }
    }
  }
}

void RequireParams(const DcfParams& p) {
  if (!(p.p_target > 0.0 && p.p_target < 1.0) || !(p.c_miss > 0.0) ||
      !(p.c_fa > 0.0)) {
    throw Error(ErrorCode::kParameter,
                "p_target must lie in (0, 1) and costs must be positive");
  }
}

// log(1 + e^x) without overflow.
double Softplus(double x) {
  if (x == std::numeric_limits<double>::infinity()) return x;
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double Sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

// Labels (1 target, 0 non-target) in ascending score order. Targets come
// first among equal scores so PAV pools every mixed tie.
std::vector<double> SortedLabels(const ScoreSet& s,
                                 std::vector<std::size_t>* order = nullptr) {
  const std::size_t nt = s.target_scores.size();
  const std::size_t n = nt + s.nontarget_scores.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto score = [&](std::size_t i) {
    return i < nt ? s.target_scores[i] : s.nontarget_scores[i - nt];
  };
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return score(a) < score(b);
  });
  std::vector<double> labels(n);
  for (std::size_t k = 0; k < n; ++k) labels[k] = idx[k] < nt ? 1.0 : 0.0;
  if (order != nullptr) *order = std::move(idx);
  return labels;
}

struct PavBlock {
  double sum = 0.0;
  std::size_t width = 0;
  double mean() const { return sum / static_cast<double>(width); }
};

// Non-decreasing least-squares fit of `y`, as a run of constant blocks.
std::vector<PavBlock> Pav(const std::vector<double>& y) {
  std::vector<PavBlock> blocks;
  for (double v : y) {
    blocks.push_back({v, 1});
    while (blocks.size() > 1 &&
           blocks[blocks.size() - 2].mean() >= blocks.back().mean()) {
      PavBlock last = blocks.back();
      blocks.pop_back();
      blocks.back().sum += last.sum;
      blocks.back().width += last.width;
    }
  }
  return blocks;
}

double CllrObjective(const ScoreSet& s, double a, double b) {
  double tar = 0.0;
  for (double v : s.target_scores) tar += Softplus(-(a * v + b));
  double non = 0.0;
  for (double v : s.nontarget_scores) non += Softplus(a * v + b);
  return 0.5 *
         (tar / static_cast<double>(s.target_scores.size()) +
          non / static_cast<double>(s.nontarget_scores.size())) /
         std::log(2.0);
}

}  // namespace

ScoreSet CalibrationTransform::Apply(const ScoreSet& scores) const {
  ScoreSet out;
  out.target_scores.reserve(scores.target_scores.size());
  out.nontarget_scores.reserve(scores.nontarget_scores.size());
  for (double v : scores.target_scores) out.target_scores.push_back(Apply(v));
  for (double v : scores.nontarget_scores) {
    out.nontarget_scores.push_back(Apply(v));
  }
  return out;
}

std::vector<OperatingPoint> RocConvexHull(const ScoreSet& scores) {
  RequireScores(scores);
  const std::vector<double> labels = SortedLabels(scores);
  const std::vector<PavBlock> blocks = Pav(labels);
  const double nt = static_cast<double>(scores.target_scores.size());
  const double nn = static_cast<double>(scores.nontarget_scores.size());

  std::vector<OperatingPoint> hull;
  hull.reserve(blocks.size() + 1);
  double miss = 0.0;
  double fa = nn;
  hull.push_back({0.0, 1.0});
  for (const PavBlock& b : blocks) {
    miss += b.sum;
    fa -= static_cast<double>(b.width) - b.sum;
    hull.push_back({miss / nt, fa / nn});
  }
  return hull;
}

double RocchEer(const ScoreSet& scores) {
  const std::vector<OperatingPoint> hull = RocConvexHull(scores);
  double eer = 0.0;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    // Rows (p_fa, p_miss) of the two segment ends.
    const double a = hull[i].p_fa, b = hull[i].p_miss;
    const double c = hull[i + 1].p_fa, d = hull[i + 1].p_miss;
    if (a == c || b == d) continue;
    const double det = a * d - b * c;
    const double denom = (d - b) + (a - c);
    if (det == 0.0 || denom == 0.0) continue;
    // Intersection of the segment's line with p_miss = p_fa.
    eer = std::max(eer, det / denom);
  }
  return eer;
}

double Dcf(const ScoreSet& scores, double threshold, const DcfParams& params) {
  RequireScores(scores);
  RequireParams(params);
  const auto misses = std::count_if(
      scores.target_scores.begin(), scores.target_scores.end(),
      [&](double v) { return v < threshold; });
  const auto false_alarms = std::count_if(
      scores.nontarget_scores.begin(), scores.nontarget_scores.end(),
      [&](double v) { return threshold <= v; });
  const double p_miss = static_cast<double>(misses) /
                        static_cast<double>(scores.target_scores.size());
  const double p_fa = static_cast<double>(false_alarms) /
                      static_cast<double>(scores.nontarget_scores.size());
  const double w_miss = params.p_target * params.c_miss;
  const double w_fa = (1.0 - params.p_target) * params.c_fa;
  return (w_miss * p_miss + w_fa * p_fa) / std::min(w_miss, w_fa);
}

double MinDcf(const ScoreSet& scores, const DcfParams& params) {
  RequireScores(scores);
  RequireParams(params);
  const double w_miss = params.p_target * params.c_miss;
  const double w_fa = (1.0 - params.p_target) * params.c_fa;
  double best = std::numeric_limits<double>::infinity();
  for (const DetPoint& p : DetCurve(scores)) {
    best = std::min(best, w_miss * p.fnmr + w_fa * p.fmr);
  }
  return best / std::min(w_miss, w_fa);
}

double Cllr(const ScoreSet& scores) {
  RequireScores(scores);
  return CllrObjective(scores, 1.0, 0.0);
}

double MinCllr(const ScoreSet& scores) {
  RequireScores(scores);
  std::vector<std::size_t> order;
  const std::vector<double> labels = SortedLabels(scores, &order);
  const std::vector<PavBlock> blocks = Pav(labels);
  const std::size_t nt = scores.target_scores.size();
  const double prior_log_odds =
      std::log(static_cast<double>(nt) /
               static_cast<double>(scores.nontarget_scores.size()));

  ScoreSet optimal;
  std::size_t k = 0;
  for (const PavBlock& b : blocks) {
    const double p = b.mean();
    double llr;
    if (p <= 0.0) {
      llr = -std::numeric_limits<double>::infinity();
    } else if (p >= 1.0) {
      llr = std::numeric_limits<double>::infinity();
    } else {
      llr = std::log(p) - std::log1p(-p) - prior_log_odds;
    }
    for (std::size_t j = 0; j < b.width; ++j, ++k) {
      (order[k] < nt ? optimal.target_scores : optimal.nontarget_scores)
          .push_back(llr);
    }
  }
  return CllrObjective(optimal, 1.0, 0.0);
}

CalibrationTransform FitLinearCalibration(const ScoreSet& dev) {
  if (dev.target_scores.size() < 2 || dev.nontarget_scores.size() < 2) {
    throw Error(ErrorCode::kFit,
                "calibration needs at least two scores of each class");
  }
  RequireScores(dev);
  const double wt = 0.5 / static_cast<double>(dev.target_scores.size());
  const double wn = 0.5 / static_cast<double>(dev.nontarget_scores.size());

  double a = 1.0, b = 0.0;
  double current = CllrObjective(dev, a, b);
  for (int iter = 0; iter < 100; ++iter) {
    // Gradient and Hessian of the weighted logistic loss in (a, b).
    double ga = 0.0, gb = 0.0, haa = 0.0, hab = 0.0, hbb = 0.0;
    auto accumulate = [&](double s, double label, double w) {
      const double p = Sigmoid(a * s + b);
      const double r = w * (p - label);
      const double h = w * p * (1.0 - p);
      ga += r * s;
      gb += r;
      haa += h * s * s;
      hab += h * s;
      hbb += h;
    };
    for (double s : dev.target_scores) accumulate(s, 1.0, wt);
    for (double s : dev.nontarget_scores) accumulate(s, 0.0, wn);
    if (std::hypot(ga, gb) < 1e-12) break;

    const double ridge = 1e-12 * (haa + hbb) + 1e-300;
    haa += ridge;
    hbb += ridge;
    const double det = haa * hbb - hab * hab;
    double da, db;
    if (det > 0.0) {
      da = -(hbb * ga - hab * gb) / det;
      db = -(haa * gb - hab * ga) / det;
    } else {
      da = -ga;
      db = -gb;
    }
    double step = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
      const double next = CllrObjective(dev, a + step * da, b + step * db);
      if (next < current) {
        a += step * da;
        b += step * db;
        improved = current - next > 1e-15;
        current = next;
        break;
      }
    }
    if (!improved) break;
  }
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::kFit, "calibration diverged");
  }
  return CalibrationTransform{a, b};
}

std::vector<DetPoint> DetCurve(const ScoreSet& scores) {
  RequireScores(scores);
  std::vector<double> tar = scores.target_scores;
  std::vector<double> non = scores.nontarget_scores;
  std::sort(tar.begin(), tar.end());
  std::sort(non.begin(), non.end());
  std::vector<double> thresholds(tar);
  thresholds.insert(thresholds.end(), non.begin(), non.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  const double nt = static_cast<double>(tar.size());
  const double nn = static_cast<double>(non.size());
  std::vector<DetPoint> points;
  points.reserve(thresholds.size() + 1);
  for (double t : thresholds) {
    const auto misses = std::lower_bound(tar.begin(), tar.end(), t) -
                        tar.begin();
    const auto kept = std::lower_bound(non.begin(), non.end(), t) -
                      non.begin();
    points.push_back({t, static_cast<double>(misses) / nt,
                      (nn - static_cast<double>(kept)) / nn});
  }
  points.push_back({std::numeric_limits<double>::infinity(), 1.0, 0.0});
  return points;
}

MetricReport ComputeMetrics(const ScoreSet& scores, const DcfParams& params) {
  MetricReport r;
  r.targets = scores.target_scores.size();
  r.nontargets = scores.nontarget_scores.size();
  r.dcf_params = params;
  r.rocch_eer = RocchEer(scores);
  r.min_dcf = MinDcf(scores, params);
  r.cllr = Cllr(scores);
  r.min_cllr = MinCllr(scores);
  return r;
}

std::string MetricReportToJson(const MetricReport& report) {
  nlohmann::ordered_json doc;
  doc["format"] = "spkhe-metrics";
  doc["version"] = "1.0";
  doc["targets"] = report.targets;
  doc["nontargets"] = report.nontargets;
  doc["p_target"] = report.dcf_params.p_target;
  doc["c_miss"] = report.dcf_params.c_miss;
  doc["c_fa"] = report.dcf_params.c_fa;
  doc["rocch_eer"] = report.rocch_eer;
  doc["min_dcf"] = report.min_dcf;
  doc["cllr"] = report.cllr;
  doc["min_cllr"] = report.min_cllr;
  return doc.dump(2);
}

}  // namespace spkhe
