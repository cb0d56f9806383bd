/*
   Copyright 2026 The fdrlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fdrlab {

// Feature-by-sample matrix with a two-group column labeling.
struct TwoSampleDataset {
  std::vector<std::string> feature_ids;
  std::vector<double> values; // row-major, m rows x n columns
  std::vector<std::uint8_t> group_is_y;
  int n_samples = 0;

  int n_features() const { return static_cast<int>(feature_ids.size()); }
  int n_x() const;
  int n_y() const;
  double at(int feature, int sample) const {
    return values[static_cast<std::size_t>(feature) * n_samples + sample];
  }
};

// Pooled-variance two-sample t statistic per feature, group Y minus group X.
// A feature with zero pooled variance raises, naming the feature.
std::vector<double> t_statistics(const TwoSampleDataset& data);

// p_i = 2 (1 - F0(|t_i|)) under the central Student null with df degrees of
// freedom.
std::vector<double> two_sided_pvalues(std::span<const double> tstats, int df);

struct ResamplingPlan {
  std::vector<double> rates; // in (0, 1]
  int B = 100;
  std::uint64_t seed = 0;
};

// Asymptotic reference for the rejection-fraction curves: a Student mixture
// parameterized by the shared effect size; theta and df are derived per
// sampling rate from the subsampled group sizes.
struct StudentAsymptote {
  double delta = 0.9;
  double pi0 = 0.5;
};

struct RejectionCurveRow {
  double rate = 0.0;
  int replicate = 0;
  double alpha = 0.0;
  double rho = 0.0;
};

struct AsymptoteRow {
  double rate = 0.0;
  double alpha = 0.0;
  double rho_inf = 0.0;
};

struct RejectionCurve {
  std::vector<RejectionCurveRow> rows;
  std::vector<AsymptoteRow> asymptote;
};

// For each rate and replicate: subsample floor(rate * n) columns per group
// without replacement, recompute the t statistics and two-sided p-values,
// and take the step-up rejection fraction across the alpha grid. Subsample
// index sets are determined by (seed, rate index, replicate).
RejectionCurve rejection_curve(const TwoSampleDataset& data,
                               std::span<const double> alpha_grid,
                               const ResamplingPlan& plan,
                               const std::optional<StudentAsymptote>& asym,
                               int threads = 1);

// Synthetic two-group dataset from the Student mixture: round(pi0 * m) null
// features are N(0, sigma^2) in both groups; each alternative feature gets a
// mean shift of delta * sigma in group Y, with a random sign.
TwoSampleDataset synthetic_dataset(double delta, double pi0, int m, int n_x,
                                   int n_y, double sigma, std::uint64_t seed);

// Input CSVs: data has a feature-id first column and one column per sample;
// labels map sample_id -> group in {X, Y}.
TwoSampleDataset load_dataset_csv(const std::string& data_path,
                                  const std::string& labels_path);

// Output CSVs: "rate,replicate,alpha,rho" and "rate,alpha,rho_inf".
void write_rejection_csv(const std::string& path, const RejectionCurve& curve);
void write_asymptote_csv(const std::string& path, const RejectionCurve& curve);

} // namespace fdrlab
