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
#include "fdrlab/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "fdrlab/criticality.hpp"
#include "fdrlab/math.hpp"

namespace fdrlab {

double t_star(const MixtureModel& model, double alpha, double pi0_ref) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("t_star: alpha must lie in (0, 1]");
  }
  if (!(pi0_ref > 0.0 && pi0_ref <= 1.0)) {
    throw std::invalid_argument("t_star: pi0_ref must lie in (0, 1]");
  }
  const double slope = pi0_ref / alpha;
  auto psi = [&](double t) { return mixture_cdf(model, t) - slope * t; };
  if (psi(1.0) >= 0.0) {
    return 1.0; // G(1) = 1 >= pi0_ref / alpha
  }
  // Scan from 1 downward for the first sign change, then bisect. Under
  // concavity the positive crossing, when it exists, is unique. The linear
  // scan hands over to a geometric one so crossings arbitrarily close to 0
  // are still located.
  const int grid = 10000;
  double hi = 1.0;
  double lo = 0.0;
  bool found = false;
  for (int i = 1; i < grid; ++i) {
    const double t = 1.0 - static_cast<double>(i) / grid;
    if (psi(t) >= 0.0) {
      lo = t;
      hi = 1.0 - static_cast<double>(i - 1) / grid;
      found = true;
      break;
    }
  }
  if (!found) {
    double prev = 1.0 / grid;
    for (double t = prev / 10.0; t > 1e-300; t /= 10.0) {
      if (psi(t) >= 0.0) {
        lo = t;
        hi = prev;
        found = true;
        break;
      }
      prev = t;
    }
  }
  if (!found) {
    return 0.0;
  }
  if (psi(lo) == 0.0) {
    return lo;
  }
  return num::find_root(psi, lo, hi, 1e-13 * hi);
}

namespace {
AsymptoticPrediction zero_prediction(double alpha) {
  AsymptoticPrediction pred;
  pred.alpha = alpha;
  return pred;
}
} // namespace

AsymptoticPrediction predict(const MixtureModel& model, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("predict: alpha must lie in (0, 1]");
  }
  const double alpha_star = critical_value_closed_form(model);
  if (alpha <= alpha_star) {
    // At equality the sub-critical branch is reported.
    return zero_prediction(alpha);
  }
  AsymptoticPrediction pred;
  pred.alpha = alpha;
  pred.t_star = t_star(model, alpha, 1.0);
  if (pred.t_star <= 0.0) {
    return zero_prediction(alpha);
  }
  pred.rho_inf = mixture_cdf(model, pred.t_star);
  pred.pi_inf = model.pi0 < 1.0 ? g1_cdf(model, pred.t_star) : 0.0;
  pred.fdp_limit = model.pi0 * alpha;
  return pred;
}

AsymptoticPrediction
predict_plug_in(const MixtureModel& model, double alpha, double h_m,
                const std::function<double(double)>& v) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("predict_plug_in: alpha must lie in (0, 1]");
  }
  const CriticalityReport report = purity_report(model);
  const double pi0_bar = report.pi0_bar;
  if (!(alpha > pi0_bar * report.alpha_star)) {
    throw std::domain_error("predict_plug_in: critical regime (alpha <= "
                            "pi0_bar * alpha_star)");
  }
  AsymptoticPrediction pred;
  pred.alpha = alpha;
  pred.h_m = h_m;
  pred.t_star = t_star(model, alpha, pi0_bar);
  if (pred.t_star > 0.0) {
    pred.rho_inf = mixture_cdf(model, pred.t_star);
    pred.pi_inf = model.pi0 < 1.0 ? g1_cdf(model, pred.t_star) : 0.0;
  }
  const double q = model.pi0 * alpha / pi0_bar;
  pred.fdp_limit = q;
  const double v_at_bar = v ? v(pi0_bar) : pi0_bar;
  pred.fdp_scaled_variance = q * q * v_at_bar / (pi0_bar * pi0_bar);
  return pred;
}

TvrDeltas predict_tvr_deltas(const MixtureModel& model, double alpha,
                             double pi0_hat_minus_bar) {
  const CriticalityReport report = purity_report(model);
  const double pi0_bar = report.pi0_bar;
  if (!(alpha > pi0_bar * report.alpha_star)) {
    throw std::domain_error("predict_tvr_deltas: critical regime");
  }
  const double ts = t_star(model, alpha, pi0_bar);
  if (ts <= 0.0) {
    throw std::domain_error("predict_tvr_deltas: no positive crossing");
  }
  const double g_at = mixture_pdf(model, ts);
  const double denom = g_at - pi0_bar / alpha;
  if (std::abs(denom) < 1e-12) {
    throw std::domain_error(
        "predict_tvr_deltas: degenerate crossing (g(t*) = pi0_bar/alpha)");
  }
  const double scale = (ts / alpha) / denom * pi0_hat_minus_bar;
  return TvrDeltas{scale, scale * model.pi0, scale * g_at};
}

bool bandwidth_hypothesis_ok(double h_m, int m) {
  if (m < 16) {
    return false;
  }
  return h_m * std::log(std::log(static_cast<double>(m))) <= 0.5;
}

} // namespace fdrlab
