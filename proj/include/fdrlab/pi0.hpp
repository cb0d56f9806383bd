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

#include <span>
#include <string>
#include <vector>

#include "fdrlab/pvalues.hpp"

namespace fdrlab {

// Bandwidth decay factor eta_m: either (ln m)^(-c) or an explicit constant.
struct EtaRule {
  enum class Kind { PowerLog, Explicit };
  Kind kind = Kind::PowerLog;
  double value = 1.0 / 3.0; // exponent c, or the explicit eta

  static EtaRule power_log(double c) { return {Kind::PowerLog, c}; }
  static EtaRule explicit_eta(double eta) { return {Kind::Explicit, eta}; }
  double eta(int m) const;
};

// h_m(k) = m^(-1/(2k+1)) * eta_m^2
double bandwidth_h(int m, int k, const EtaRule& rule);

struct Pi0Estimator {
  enum class Kind { StoreyFixed, StoreyBandwidth, KernelOrderK };
  Kind kind = Kind::StoreyFixed;
  double lambda = 0.5; // StoreyFixed
  int order = 1;       // StoreyBandwidth / KernelOrderK
  EtaRule eta;

  static Pi0Estimator storey(double lambda) {
    Pi0Estimator e;
    e.kind = Kind::StoreyFixed;
    e.lambda = lambda;
    return e;
  }
  static Pi0Estimator storey_bandwidth(int k, EtaRule eta = {}) {
    Pi0Estimator e;
    e.kind = Kind::StoreyBandwidth;
    e.order = k;
    e.eta = eta;
    return e;
  }
  static Pi0Estimator kernel(int k, EtaRule eta = {}) {
    Pi0Estimator e;
    e.kind = Kind::KernelOrderK;
    e.order = k;
    e.eta = eta;
    return e;
  }
  std::string name() const;
};

struct Pi0Estimate {
  double value_raw = 0.0;     // may exceed 1
  double value_clamped = 0.0; // in [1/m, 1], what plug-in procedures use
  double bandwidth = 0.0;     // 1 - lambda for the fixed estimator
  double asymptotic_se = 0.0;
};

// (1 - ecdf(lambda)) / (1 - lambda); the SE comes from the binomial variance
// of the exceedance count with the empirical cdf plugged in.
Pi0Estimate storey_fixed(std::span<const double> pvalues, double lambda);

// Storey with the shrinking bandwidth h_m(k): storey_fixed at
// lambda = 1 - h_m(k).
Pi0Estimate storey_bandwidth(std::span<const double> pvalues, int k,
                             const EtaRule& eta = {});

// Boundary kernel estimate of the mixture density at 1, with an order-k
// polynomial kernel supported on [-1, 0] and the same bandwidth rule.
Pi0Estimate kernel_pi0(std::span<const double> pvalues, int k,
                       const EtaRule& eta = {});

// Shared core: kernel estimate at an explicit bandwidth. Order 0 is the
// rectangular kernel and reproduces storey_fixed(1 - h) exactly.
Pi0Estimate kernel_estimate_at(std::span<const double> pvalues, int order,
                               double h);

// Coefficients c_0..c_k of the order-k boundary kernel K(u) = sum c_j u^j on
// (-1, 0], solving the moment conditions int K = 1, int u^j K = 0 (j=1..k).
std::vector<double> boundary_kernel_coeffs(int order);

Pi0Estimate estimate_pi0(const Pi0Estimator& estimator,
                         std::span<const double> pvalues);

// Leading-order bias (1-pi0) (-1)^k g1^(k)(1) / (k+1)! h^k of the Storey
// estimator at bandwidth h. The derivative is taken on the model's g1 with
// one-sided Richardson stencils at u = 1. Models whose g1 is not
// differentiable at 1 (one-sided Gaussian, one-sided Subbotin with
// gamma > 1, one-sided Student) raise a domain error.
double predicted_bias(const MixtureModel& model, int k, double h);

std::string estimate_to_json(const Pi0Estimator& estimator,
                             const Pi0Estimate& estimate);

} // namespace fdrlab
