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
#include "fdrlab/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fdrlab/math.hpp"

#include "json.hpp"

namespace fdrlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroThreshold = 1e-8;

// g1(0+) as a number (+inf marker when the LR diverges).
double g1_at_zero(const MixtureModel& model) {
  const LrLimit pos = lr_limit(model.family, +1);
  if (model.sidedness == Sidedness::OneSided) {
    return pos.divergent ? kInf : pos.value;
  }
  if (pos.divergent) return kInf;
  const LrLimit neg = lr_limit(model.family, -1);
  return 0.5 * (pos.value + neg.value);
}

double g1_at_one(const MixtureModel& model) {
  if (model.sidedness == Sidedness::OneSided) {
    return lr_limit(model.family, -1).value;
  }
  return likelihood_ratio(model.family, 0.0);
}
} // namespace

double critical_value_closed_form(const MixtureModel& model) {
  if (model.pi0 == 1.0) {
    return 1.0; // G(u) = u, so u/G(u) is identically 1
  }
  const double pi0 = model.pi0;
  const double theta = model.family.theta();
  switch (model.family.kind()) {
  case FamilyKind::Gaussian:
    return 0.0;
  case FamilyKind::Subbotin:
    if (model.family.shape() > 1.0) {
      return 0.0;
    }
    [[fallthrough]]; // gamma = 1 is the Laplace family
  case FamilyKind::Laplace: {
    const double g1_0 = model.sidedness == Sidedness::OneSided
                            ? std::exp(theta)
                            : std::cosh(theta);
    return 1.0 / (pi0 + (1.0 - pi0) * g1_0);
  }
  case FamilyKind::Student: {
    const int k = model.family.df();
    const double h0 = hh_log(k, 0.0);
    const double r_neg = std::exp(hh_log(k, -theta) - h0);
    double g1_0 = r_neg;
    if (model.sidedness == Sidedness::TwoSided) {
      const double r_pos = std::exp(hh_log(k, theta) - h0);
      g1_0 = 0.5 * (r_neg + r_pos);
    }
    return 1.0 / (pi0 + (1.0 - pi0) * g1_0);
  }
  }
  return 0.0;
}

double critical_value_numeric(const MixtureModel& model) {
  if (model.pi0 == 1.0) {
    return 1.0;
  }
  // Grid infimum of u / G(u) over [1e-12, 1], 400 points per decade. Under
  // concavity the map is non-decreasing, so the infimum sits at the small
  // end; the scan plus a golden-section refinement of the best cell guards
  // configurations where that fails.
  const int per_decade = 400;
  const int decades = 12;
  double best = 1.0;
  double best_log_u = 0.0;
  const double step = 1.0 / per_decade;
  for (int i = 0; i <= per_decade * decades; ++i) {
    const double u = std::pow(10.0, -step * i);
    const double g = mixture_cdf(model, u);
    const double r = g > 0.0 ? u / g : 1.0;
    if (r < best) {
      best = r;
      best_log_u = -step * i;
    }
  }
  {
    // Golden-section refinement around the best grid cell (in log u).
    double a = best_log_u - step;
    double b = std::min(best_log_u + step, 0.0);
    auto ratio_at = [&](double log_u) {
      const double u = std::pow(10.0, log_u);
      const double g = mixture_cdf(model, u);
      return g > 0.0 ? u / g : 1.0;
    };
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = ratio_at(x1);
    double f2 = ratio_at(x2);
    for (int it = 0; it < 40; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = ratio_at(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = ratio_at(x2);
      }
    }
    best = std::min(best, std::min(f1, f2));
  }
  // Limiting value at u -> 0 via the density ratio ladder; this is what the
  // grid converges to but cannot resolve within double range when g1(0+)
  // is huge or unbounded.
  const double g1_0 = g1_at_zero(model);
  const double limit_value =
      std::isinf(g1_0) ? 0.0
                       : 1.0 / (model.pi0 + (1.0 - model.pi0) * g1_0);
  best = std::min(best, limit_value);
  return best < kZeroThreshold ? 0.0 : best;
}

CriticalityReport purity_report(const MixtureModel& model) {
  CriticalityReport report;
  report.alpha_star = critical_value_closed_form(model);
  report.alpha_star_intrinsic = model.pi0 * report.alpha_star;
  report.g1_at_0 = g1_at_zero(model);
  report.g1_at_1 = g1_at_one(model);
  report.pi0_bar = model.pi0 + (1.0 - model.pi0) * report.g1_at_1;
  report.is_critical = report.alpha_star > 0.0;
  report.is_pure = report.g1_at_1 == 0.0;
  return report;
}

std::string report_to_json(const CriticalityReport& report) {
  nlohmann::json j;
  j["alpha_star"] = report.alpha_star;
  j["alpha_star_intrinsic"] = report.alpha_star_intrinsic;
  if (std::isinf(report.g1_at_0)) {
    j["g1_at_0"] = "inf";
  } else {
    j["g1_at_0"] = report.g1_at_0;
  }
  j["g1_at_1"] = report.g1_at_1;
  j["pi0_bar"] = report.pi0_bar;
  j["is_critical"] = report.is_critical;
  j["is_pure"] = report.is_pure;
  return j.dump(2);
}

} // namespace fdrlab
