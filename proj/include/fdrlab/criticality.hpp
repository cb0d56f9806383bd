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

#include <string>

#include "fdrlab/pvalues.hpp"

namespace fdrlab {

// Criticality / purity diagnostics of a mixture model. alpha_star is the
// smallest target level at which the step-up procedure keeps asymptotic
// power; alpha_star_intrinsic = pi0 * alpha_star is the procedure-free
// bound; pi0_bar = pi0 + (1 - pi0) g1(1) is the value that estimators of
// the p-value density at 1 actually reach.
struct CriticalityReport {
  double alpha_star = 0.0;
  double alpha_star_intrinsic = 0.0;
  double g1_at_0 = 0.0; // +inf when the likelihood ratio is unbounded
  double g1_at_1 = 0.0;
  double pi0_bar = 0.0;
  bool is_critical = false;
  bool is_pure = false;
};

// Closed-form critical value: 0 for families with unbounded likelihood
// ratio (Gaussian, Subbotin with gamma > 1), 1/(pi0 + (1-pi0) e^theta) and
// 1/(pi0 + (1-pi0) cosh theta) for one-/two-sided Laplace, and the
// Hh_k ratio forms for Student.
double critical_value_closed_form(const MixtureModel& model);

// Numeric route: the infimum of u / G(u) over a geometric grid combined
// with the limiting value 1/g(0+), where g1(0+) is assessed from pointwise
// density ratios on a doubling ladder. Values below 1e-8 are reported as 0
// (non-criticality detected).
double critical_value_numeric(const MixtureModel& model);

CriticalityReport purity_report(const MixtureModel& model);

// Keys: alpha_star, alpha_star_intrinsic, g1_at_0, g1_at_1, pi0_bar,
// is_critical, is_pure. An infinite g1_at_0 is encoded as the string "inf".
std::string report_to_json(const CriticalityReport& report);

} // namespace fdrlab
