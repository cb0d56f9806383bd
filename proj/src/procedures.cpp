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
#include "fdrlab/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fdrlab/io.hpp"

#include "json.hpp"

namespace fdrlab {

namespace {
BHOutcome step_up(std::span<const double> pvalues, double alpha,
                  double effective_level) {
  const std::size_t m = pvalues.size();
  if (m == 0) {
    throw std::invalid_argument("bh95: empty p-value vector");
  }
  for (double p : pvalues) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("bh95: p-value outside [0, 1]");
    }
  }
  // Stable sort by p-value, ties broken by original index.
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return pvalues[a] < pvalues[b]; });

  int i_hat = 0;
  for (int k = static_cast<int>(m); k >= 1; --k) {
    if (pvalues[order[k - 1]] <=
        effective_level * static_cast<double>(k) / static_cast<double>(m)) {
      i_hat = k;
      break;
    }
  }

  BHOutcome out;
  out.alpha = alpha;
  out.effective_level = effective_level;
  out.m = static_cast<int>(m);
  out.i_hat = i_hat;
  out.tau_hat = i_hat > 0 ? effective_level * static_cast<double>(i_hat) /
                                static_cast<double>(m)
                          : 0.0;
  if (i_hat > 0) {
    out.rejected.reserve(i_hat);
    for (std::size_t i = 0; i < m; ++i) {
      if (pvalues[i] <= out.tau_hat) {
        out.rejected.push_back(static_cast<int>(i));
      }
    }
  }
  out.R = static_cast<int>(out.rejected.size());
  out.rho = static_cast<double>(out.R) / static_cast<double>(m);
  return out;
}
} // namespace

BHOutcome bh95(std::span<const double> pvalues, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("bh95: alpha must lie in (0, 1]");
  }
  return step_up(pvalues, alpha, alpha);
}

BHOutcome plug_in_bh(std::span<const double> pvalues, double alpha,
                     double pi0_hat, bool strict) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("plug_in_bh: alpha must lie in (0, 1]");
  }
  if (!(pi0_hat > 0.0 && pi0_hat <= 1.0)) {
    throw std::invalid_argument("plug_in_bh: pi0_hat must lie in (0, 1]");
  }
  double effective = alpha / pi0_hat;
  if (effective > 1.0) {
    if (strict) {
      throw std::invalid_argument("plug_in_bh: alpha / pi0_hat exceeds 1");
    }
    effective = 1.0;
  }
  return step_up(pvalues, alpha, effective);
}

void account(BHOutcome& outcome, std::span<const std::uint8_t> is_null) {
  if (static_cast<int>(is_null.size()) != outcome.m) {
    throw std::invalid_argument("account: label vector length mismatch");
  }
  int m0 = 0;
  for (auto flag : is_null) {
    m0 += flag ? 1 : 0;
  }
  int v = 0;
  for (int idx : outcome.rejected) {
    v += is_null[static_cast<std::size_t>(idx)] ? 1 : 0;
  }
  outcome.V = v;
  outcome.fdp = static_cast<double>(v) / std::max(outcome.R, 1);
  const auto m1 = static_cast<int>(is_null.size()) - m0;
  if (m1 > 0) {
    outcome.power = static_cast<double>(outcome.R - v) / m1;
  } else {
    outcome.power.reset();
  }
}

std::string outcome_to_json(const BHOutcome& outcome) {
  nlohmann::json j;
  j["alpha"] = outcome.alpha;
  j["effective_level"] = outcome.effective_level;
  j["m"] = outcome.m;
  j["i_hat"] = outcome.i_hat;
  j["tau_hat"] = outcome.tau_hat;
  j["R"] = outcome.R;
  j["rho"] = outcome.rho;
  j["rejected"] = outcome.rejected;
  if (outcome.V) j["V"] = *outcome.V;
  if (outcome.fdp) j["fdp"] = *outcome.fdp;
  if (outcome.power) j["power"] = *outcome.power;
  return j.dump(2);
}

void write_rejections_csv(const std::string& path,
                          std::span<const double> pvalues,
                          const BHOutcome& outcome) {
  std::vector<char> rejected(pvalues.size(), 0);
  for (int idx : outcome.rejected) {
    rejected[static_cast<std::size_t>(idx)] = 1;
  }
  std::string body = "index,p_value,rejected\n";
  for (std::size_t i = 0; i < pvalues.size(); ++i) {
    body += std::to_string(i);
    body += ',';
    body += io::format_double(pvalues[i]);
    body += ',';
    body += rejected[i] ? '1' : '0';
    body += '\n';
  }
  io::atomic_write(path, body);
}

} // namespace fdrlab
