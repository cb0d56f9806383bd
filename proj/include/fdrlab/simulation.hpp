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
#include <string>
#include <vector>

#include "fdrlab/asymptotics.hpp"
#include "fdrlab/pi0.hpp"
#include "fdrlab/pvalues.hpp"

namespace fdrlab {

enum class ProcedureKind { Standard, PlugIn };

// Monte Carlo study of the step-up procedure over an alpha grid. Replicate b
// draws its p-values from the counter-based substream (seed, b), so results
// are bitwise identical for any worker count; the p-value draw is shared
// across the alpha grid within a replicate.
struct SimulationConfig {
  MixtureModel model;
  int m = 1000;
  int B = 1000;
  std::vector<double> alpha_grid;
  ProcedureKind procedure = ProcedureKind::Standard;
  Pi0Estimator estimator; // used when procedure == PlugIn
  std::uint64_t seed = 0;
  std::vector<double> quantiles{0.05, 0.5, 0.95};
  int threads = 1;
  bool bernoulli_labels = false;

  explicit SimulationConfig(MixtureModel model_) : model(std::move(model_)) {}
};

struct AlphaSummary {
  double alpha = 0.0;
  std::vector<double> power_quantiles; // empty when every hypothesis is null
  std::vector<double> fdp_quantiles;
  std::vector<double> rho_quantiles;
  double mean_fdp = 0.0;
  double mean_rho = 0.0;
  std::optional<double> mean_power;
  AsymptoticPrediction asymptotic;
};

struct SimulationSummary {
  std::vector<AlphaSummary> rows;
  std::string seed_rule;
  std::uint64_t seed = 0;
  int m = 0;
  int B = 0;
};

SimulationSummary run(const SimulationConfig& config);

// CSV rows "alpha,metric,q05,q50,q95,mean,asymptotic" (metrics power, fdp,
// rho); requires the default three quantiles.
void write_summary_csv(const std::string& path,
                       const SimulationSummary& summary);

// Empirical law of the FDP of the plug-in procedure across sample sizes:
// mean and variance of the FDP over B replicates per m, the sqrt(m h)-scaled
// variance, the predicted limit and predicted scaled variance, and the
// standardized replicate series for normality checks.
struct FdpLawRow {
  int m = 0;
  double bandwidth = 0.0;
  double mean_fdp = 0.0;
  double var_fdp = 0.0;
  double scaled_variance = 0.0;
  double predicted_limit = 0.0;
  double predicted_scaled_variance = 0.0;
  std::vector<double> standardized;
};

std::vector<FdpLawRow> fdp_law_experiment(const MixtureModel& model,
                                          double alpha,
                                          const Pi0Estimator& estimator,
                                          const std::vector<int>& m_list,
                                          int B, std::uint64_t seed,
                                          int threads = 1);

void write_fdp_law_csv(const std::string& path,
                       const std::vector<FdpLawRow>& rows);

} // namespace fdrlab
