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

#include <functional>
#include <optional>

#include "fdrlab/pvalues.hpp"

namespace fdrlab {

// Large-m limits for the step-up procedure on a mixture model.
struct AsymptoticPrediction {
  double alpha = 0.0;
  double t_star = 0.0;   // rightmost crossing threshold
  double rho_inf = 0.0;  // limiting rejection fraction G(t*)
  double pi_inf = 0.0;   // limiting power G1(t*)
  double fdp_limit = 0.0;
  std::optional<double> fdp_scaled_variance; // plug-in predictions only
  std::optional<double> h_m;                 // bandwidth metadata (plug-in)
};

// Rightmost t in [0, 1] with G(t) >= pi0_ref * t / alpha (0 when no
// positive crossing exists). pi0_ref is 1 for the standard procedure and
// pi0_bar for plug-in procedures.
double t_star(const MixtureModel& model, double alpha, double pi0_ref);

// Standard procedure at level alpha: all-zero prediction at or below the
// critical value, otherwise the crossing quantities and fdp_limit =
// pi0 * alpha.
AsymptoticPrediction predict(const MixtureModel& model, double alpha);

// Plug-in procedure whose pi0 estimate converges to pi0_bar at rate
// sqrt(m h_m): fdp_limit = pi0 alpha / pi0_bar and the variance of the
// sqrt(m h_m)-scaled FDP fluctuation is
// (pi0 alpha / pi0_bar)^2 v(pi0_bar) / pi0_bar^2, with v(x) = x by default.
// Requires alpha > pi0_bar * alpha_star.
AsymptoticPrediction
predict_plug_in(const MixtureModel& model, double alpha, double h_m,
                const std::function<double(double)>& v = {});

// First-order response of (tau, nu, rho) to a pi0-estimator deviation from
// pi0_bar at the asymptotic crossing.
struct TvrDeltas {
  double dtau = 0.0;
  double dnu = 0.0;
  double drho = 0.0;
};
TvrDeltas predict_tvr_deltas(const MixtureModel& model, double alpha,
                             double pi0_hat_minus_bar);

// The plug-in limit law assumes the bandwidth shrinks faster than
// 1 / ln ln m; at a concrete m this is read as h_m * ln ln m <= 1/2.
bool bandwidth_hypothesis_ok(double h_m, int m);

} // namespace fdrlab
