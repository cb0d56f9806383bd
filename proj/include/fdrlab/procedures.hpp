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

// Step-up outcome. tau_hat = effective_level * i_hat / m and the rejection
// set is every index with p <= tau_hat (ties at the threshold rejected).
struct BHOutcome {
  double alpha = 0.0;
  double effective_level = 0.0; // alpha / pi0_hat, clamped to <= 1
  int m = 0;
  int i_hat = 0;
  double tau_hat = 0.0;
  std::vector<int> rejected; // original indices, ascending
  int R = 0;
  double rho = 0.0; // R / m
  // Populated by account() when ground-truth labels are available.
  std::optional<int> V;
  std::optional<double> fdp;
  std::optional<double> power; // absent when every hypothesis is null
};

// Step-up procedure at target level alpha: i_hat is the largest k with
// p_(k) <= alpha k / m.
BHOutcome bh95(std::span<const double> pvalues, double alpha);

// Step-up procedure at level alpha / pi0_hat. The effective level is clamped
// at 1; with strict = true an effective level above 1 raises instead.
BHOutcome plug_in_bh(std::span<const double> pvalues, double alpha,
                     double pi0_hat, bool strict = false);

// Fill in V, FDP = V / max(R, 1), and power = (R - V) / (m - m0).
void account(BHOutcome& outcome, std::span<const std::uint8_t> is_null);

std::string outcome_to_json(const BHOutcome& outcome);
void write_rejections_csv(const std::string& path,
                          std::span<const double> pvalues,
                          const BHOutcome& outcome);

} // namespace fdrlab
