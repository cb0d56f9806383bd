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
#include "fdrlab/pi0.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fdrlab/math.hpp"

#include "json.hpp"

namespace fdrlab {

double EtaRule::eta(int m) const {
  if (kind == Kind::Explicit) {
    return value;
  }
  if (m < 2) {
    throw std::invalid_argument("EtaRule: m must be >= 2 for the log rule");
  }
  return std::pow(std::log(static_cast<double>(m)), -value);
}

double bandwidth_h(int m, int k, const EtaRule& rule) {
  if (m < 2 || k < 0) {
    throw std::invalid_argument("bandwidth_h: need m >= 2 and k >= 0");
  }
  const double e = rule.eta(m);
  return std::pow(static_cast<double>(m), -1.0 / (2.0 * k + 1.0)) * e * e;
}

std::string Pi0Estimator::name() const {
  switch (kind) {
  case Kind::StoreyFixed: return "storey_fixed";
  case Kind::StoreyBandwidth: return "storey_bandwidth";
  case Kind::KernelOrderK: return "kernel";
  }
  return "unknown";
}

namespace {
Pi0Estimate finalize(double raw, double bandwidth, double se, std::size_t m) {
  Pi0Estimate est;
  est.value_raw = raw;
  est.value_clamped =
      std::clamp(raw, 1.0 / static_cast<double>(m), 1.0);
  est.bandwidth = bandwidth;
  est.asymptotic_se = se;
  return est;
}
} // namespace

Pi0Estimate storey_fixed(std::span<const double> pvalues, double lambda) {
  if (pvalues.empty()) {
    throw std::invalid_argument("storey_fixed: empty p-value vector");
  }
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw std::invalid_argument("storey_fixed: lambda must lie in (0, 1)");
  }
  const auto m = static_cast<double>(pvalues.size());
  std::size_t above = 0;
  for (double p : pvalues) {
    above += p > lambda ? 1 : 0;
  }
  const double raw = (static_cast<double>(above) / m) / (1.0 - lambda);
  const double g_hat = 1.0 - static_cast<double>(above) / m; // ecdf(lambda)
  const double se =
      std::sqrt(g_hat * (1.0 - g_hat) / m) / (1.0 - lambda);
  return finalize(raw, 1.0 - lambda, se, pvalues.size());
}

Pi0Estimate storey_bandwidth(std::span<const double> pvalues, int k,
                             const EtaRule& eta) {
  if (pvalues.size() < 2) {
    throw std::invalid_argument("storey_bandwidth: need m >= 2");
  }
  if (k < 1) {
    throw std::invalid_argument("storey_bandwidth: order must be >= 1");
  }
  const int m = static_cast<int>(pvalues.size());
  const double h = bandwidth_h(m, k, eta);
  if (!(h > 0.0 && h < 1.0)) {
    throw std::invalid_argument("storey_bandwidth: bandwidth outside (0, 1)");
  }
  Pi0Estimate est = storey_fixed(pvalues, 1.0 - h);
  est.bandwidth = h;
  est.asymptotic_se = std::sqrt(est.value_clamped / (m * h));
  return est;
}

std::vector<double> boundary_kernel_coeffs(int order) {
  if (order < 0) {
    throw std::invalid_argument("boundary_kernel_coeffs: order must be >= 0");
  }
  // Moments over (-1, 0]: int u^(i+j) du = (-1)^(i+j) / (i+j+1).
  const int n = order + 1;
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a[i][j] = ((i + j) % 2 == 0 ? 1.0 : -1.0) / (i + j + 1.0);
    }
    a[i][n] = i == 0 ? 1.0 : 0.0;
  }
  // Gaussian elimination with partial pivoting; n stays tiny.
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) {
        pivot = row;
      }
    }
    std::swap(a[col], a[pivot]);
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      const double factor = a[row][col] / a[col][col];
      for (int j = col; j <= n; ++j) {
        a[row][j] -= factor * a[col][j];
      }
    }
  }
  std::vector<double> coeffs(n);
  for (int i = 0; i < n; ++i) {
    coeffs[i] = a[i][n] / a[i][i];
  }
  return coeffs;
}

Pi0Estimate kernel_estimate_at(std::span<const double> pvalues, int order,
                               double h) {
  if (pvalues.size() < 2) {
    throw std::invalid_argument("kernel_estimate_at: need m >= 2");
  }
  if (!(h > 0.0 && h < 1.0)) {
    throw std::invalid_argument("kernel_estimate_at: bandwidth outside (0, 1)");
  }
  const auto coeffs = boundary_kernel_coeffs(order);
  const auto m = static_cast<double>(pvalues.size());
  double sum = 0.0;
  for (double p : pvalues) {
    const double u = (p - 1.0) / h;
    if (u <= -1.0 || u > 0.0) {
      continue; // support (-1, 0]: matches the strict count of storey_fixed
    }
    double k_val = 0.0;
    double power = 1.0;
    for (double c : coeffs) {
      k_val += c * power;
      power *= u;
    }
    sum += k_val;
  }
  const double raw = sum / (m * h);
  Pi0Estimate est = finalize(raw, h, 0.0, pvalues.size());
  est.asymptotic_se = std::sqrt(est.value_clamped / (m * h));
  return est;
}

Pi0Estimate kernel_pi0(std::span<const double> pvalues, int k,
                       const EtaRule& eta) {
  if (k < 1) {
    throw std::invalid_argument("kernel_pi0: order must be >= 1");
  }
  const int m = static_cast<int>(pvalues.size());
  const double h = bandwidth_h(m, k, eta);
  return kernel_estimate_at(pvalues, k, h);
}

Pi0Estimate estimate_pi0(const Pi0Estimator& estimator,
                         std::span<const double> pvalues) {
  switch (estimator.kind) {
  case Pi0Estimator::Kind::StoreyFixed:
    return storey_fixed(pvalues, estimator.lambda);
  case Pi0Estimator::Kind::StoreyBandwidth:
    return storey_bandwidth(pvalues, estimator.order, estimator.eta);
  case Pi0Estimator::Kind::KernelOrderK:
    return kernel_pi0(pvalues, estimator.order, estimator.eta);
  }
  throw std::logic_error("estimate_pi0: unknown estimator kind");
}

double predicted_bias(const MixtureModel& model, int k, double h) {
  if (k < 1) {
    throw std::invalid_argument("predicted_bias: order must be >= 1");
  }
  if (!(h > 0.0 && h < 1.0)) {
    throw std::invalid_argument("predicted_bias: bandwidth outside (0, 1)");
  }
  if (model.pi0 == 1.0) {
    return 0.0;
  }
  if (model.sidedness == Sidedness::OneSided) {
    switch (model.family.kind()) {
    case FamilyKind::Laplace:
      return 0.0; // g1 is constant on [1/2, 1]
    case FamilyKind::Subbotin:
      if (model.family.shape() == 1.0) {
        return 0.0;
      }
      [[fallthrough]];
    case FamilyKind::Gaussian:
    case FamilyKind::Student:
      throw std::domain_error(
          "predicted_bias: g1 of this one-sided model is non-differentiable "
          "at 1");
    }
  }
  // k-th left derivative of g1 at 1 by Fornberg stencils on interior nodes,
  // Richardson-extrapolated from steps delta and delta/2.
  auto derivative = [&](double delta) {
    const int n_nodes = k + 3;
    std::vector<double> nodes(n_nodes);
    std::vector<double> values(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
      nodes[i] = 1.0 - delta * i;
      values[i] = g1_pdf(model, nodes[i]);
    }
    const auto w = num::fd_weights(1.0, nodes, k);
    double d = 0.0;
    for (int i = 0; i < n_nodes; ++i) {
      d += w[i] * values[i];
    }
    return d;
  };
  const double delta = 1e-3;
  const double d1 = derivative(delta);
  const double d2 = derivative(0.5 * delta);
  const double order_gain = std::pow(2.0, 3); // stencil truncation is O(d^3)
  const double deriv = (order_gain * d2 - d1) / (order_gain - 1.0);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  double factorial = 1.0;
  for (int j = 2; j <= k + 1; ++j) {
    factorial *= j;
  }
  return (1.0 - model.pi0) * sign * deriv / factorial * std::pow(h, k);
}

std::string estimate_to_json(const Pi0Estimator& estimator,
                             const Pi0Estimate& estimate) {
  nlohmann::json j;
  j["kind"] = estimator.name();
  j["value_raw"] = estimate.value_raw;
  j["value_clamped"] = estimate.value_clamped;
  j["bandwidth"] = estimate.bandwidth;
  j["asymptotic_se"] = estimate.asymptotic_se;
  return j.dump(2);
}

} // namespace fdrlab
