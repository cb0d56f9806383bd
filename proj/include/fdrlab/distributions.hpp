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

#include <memory>
#include <string>

namespace fdrlab {

namespace detail {
struct FamilyCache;
}

enum class FamilyKind { Gaussian, Laplace, Subbotin, Student };

// Test-statistic model for the alternative hypothesis. The null density is
// the family member with theta = 0; location families shift it by theta,
// the Student family moves to the noncentral distribution.
//
// Scale conventions: Gaussian is standard normal, Laplace has density
// exp(-|t|)/2, and Subbotin(gamma) has density exp(-|t|^gamma/gamma)/C_gamma
// with C_gamma = 2 gamma^(1/gamma - 1) Gamma(1/gamma). Subbotin(2) is the
// Gaussian and Subbotin(1) is the Laplace under these conventions.
class AlternativeFamily {
public:
  static AlternativeFamily gaussian(double theta);
  static AlternativeFamily laplace(double theta);
  static AlternativeFamily subbotin(double theta, double gamma);
  static AlternativeFamily student(int df, double theta);

  FamilyKind kind() const { return kind_; }
  double theta() const { return theta_; }
  double shape() const { return gamma_; } // Subbotin exponent
  int df() const { return df_; }          // Student degrees of freedom
  std::string name() const;

private:
  AlternativeFamily() = default;
  FamilyKind kind_ = FamilyKind::Gaussian;
  double theta_ = 0.0;
  double gamma_ = 0.0;
  int df_ = 0;
  std::shared_ptr<const detail::FamilyCache> cache_;

  friend const detail::FamilyCache& family_cache(const AlternativeFamily&);
};

// Two-sample design: theta and the degrees of freedom derived from an effect
// size delta shared by both groups.
struct EffectSpec {
  double delta;
  int n_x;
  int n_y;

  double theta() const;
  int df() const { return n_x + n_y - 2; }
};

// Null / alternative densities and distribution functions.
double f0_pdf(const AlternativeFamily& family, double t);
double f1_pdf(const AlternativeFamily& family, double t);
double f0_cdf(const AlternativeFamily& family, double t);
double f0_sf(const AlternativeFamily& family, double t); // 1 - cdf, tail-stable
double f1_cdf(const AlternativeFamily& family, double t);
double f1_sf(const AlternativeFamily& family, double t);
double f0_quantile(const AlternativeFamily& family, double u); // u in (0,1)

// t >= 0 with S0(t) = tail, for tail in (0, 1/2]. Works in the deep tail
// where going through 1 - u would lose all precision.
double f0_tail_quantile(const AlternativeFamily& family, double tail);

double likelihood_ratio(const AlternativeFamily& family, double t);
double log_likelihood_ratio(const AlternativeFamily& family, double t);

// Limit of the likelihood ratio as t -> +inf (direction = +1) or
// t -> -inf (direction = -1), assessed numerically on a doubling ladder.
// `divergent` marks an unbounded limit.
struct LrLimit {
  double value;
  bool divergent;
};
LrLimit lr_limit(const AlternativeFamily& family, int direction);

// Hh_k(z) = int_0^inf x^k/k! exp(-(x+z)^2/2) dx, for k >= -1.
// Evaluated by forward recurrence for z <= 0 (where it is stable) and by
// peak-scaled quadrature of the defining integral for z > 0.
double hh(int k, double z);
double hh_log(int k, double z);

} // namespace fdrlab
