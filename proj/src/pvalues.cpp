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
#include "fdrlab/pvalues.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fdrlab/io.hpp"
#include "fdrlab/rng.hpp"

namespace fdrlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// S0^{-1}(u): statistic whose one-sided p-value equals u.
double statistic_of_u(const AlternativeFamily& family, double u) {
  if (u <= 0.5) {
    return f0_tail_quantile(family, u);
  }
  return -f0_tail_quantile(family, 1.0 - u);
}
} // namespace

MixtureModel::MixtureModel(double pi0_, AlternativeFamily family_,
                           Sidedness sidedness_)
    : pi0(pi0_), family(std::move(family_)), sidedness(sidedness_) {
  if (!(pi0 >= 0.0 && pi0 <= 1.0)) {
    throw std::invalid_argument("MixtureModel: pi0 must lie in [0, 1]");
  }
}

double p_value(const MixtureModel& model, double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("p_value: statistic must be finite");
  }
  if (model.sidedness == Sidedness::OneSided) {
    return std::clamp(f0_sf(model.family, x), 0.0, 1.0);
  }
  return std::clamp(2.0 * f0_sf(model.family, std::abs(x)), 0.0, 1.0);
}

double g1_cdf(const MixtureModel& model, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::domain_error("g1_cdf: u must lie in [0, 1]");
  }
  if (u == 0.0) return 0.0;
  if (u == 1.0) return 1.0;
  if (model.sidedness == Sidedness::OneSided) {
    return std::clamp(f1_sf(model.family, statistic_of_u(model.family, u)),
                      0.0, 1.0);
  }
  // Two-sided, from the one-sided primitive at u/2:
  //   G1(u) = S1(t) + F1(-t) with t = S0^{-1}(u/2).
  const double t = f0_tail_quantile(model.family, 0.5 * u);
  return std::clamp(f1_sf(model.family, t) + f1_cdf(model.family, -t), 0.0,
                    1.0);
}

double g1_pdf(const MixtureModel& model, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::domain_error("g1_pdf: u must lie in [0, 1]");
  }
  if (model.sidedness == Sidedness::OneSided) {
    if (u == 0.0) {
      const LrLimit limit = lr_limit(model.family, +1);
      return limit.divergent ? kInf : limit.value;
    }
    if (u == 1.0) {
      const LrLimit limit = lr_limit(model.family, -1);
      return limit.value;
    }
    return likelihood_ratio(model.family, statistic_of_u(model.family, u));
  }
  if (u == 0.0) {
    const LrLimit pos = lr_limit(model.family, +1);
    if (pos.divergent) return kInf;
    const LrLimit neg = lr_limit(model.family, -1);
    return 0.5 * (pos.value + neg.value);
  }
  const double t = f0_tail_quantile(model.family, 0.5 * u);
  return 0.5 * (likelihood_ratio(model.family, t) +
                likelihood_ratio(model.family, -t));
}

double mixture_cdf(const MixtureModel& model, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::domain_error("mixture_cdf: u must lie in [0, 1]");
  }
  if (model.pi0 == 1.0) return u;
  return model.pi0 * u + (1.0 - model.pi0) * g1_cdf(model, u);
}

double mixture_pdf(const MixtureModel& model, double u) {
  if (model.pi0 == 1.0) return 1.0;
  return model.pi0 + (1.0 - model.pi0) * g1_pdf(model, u);
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

namespace {

double sample_alt_statistic(const AlternativeFamily& family,
                            rng::Philox& gen) {
  const double theta = family.theta();
  switch (family.kind()) {
  case FamilyKind::Gaussian:
    return theta + gen.next_normal();
  case FamilyKind::Laplace: {
    const double u = gen.next_double();
    return theta + (u <= 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u)));
  }
  case FamilyKind::Subbotin: {
    const double gamma = family.shape();
    const double mag =
        std::pow(gamma * gen.next_gamma(1.0 / gamma), 1.0 / gamma);
    const double sign = gen.next_double() < 0.5 ? -1.0 : 1.0;
    return theta + sign * mag;
  }
  case FamilyKind::Student: {
    const double z = gen.next_normal() + theta;
    const double u = gen.next_chi2(family.df());
    return z / std::sqrt(u / family.df());
  }
  }
  return 0.0;
}

// Inverse of the one-sided Laplace G1 (three closed-form branches).
double laplace_one_sided_g1_inv(double theta, double v) {
  const double e_m = std::exp(-theta);
  if (v <= 0.5) {
    return v * e_m;
  }
  if (v <= 1.0 - 0.5 * e_m) {
    return 0.25 * e_m / (1.0 - v);
  }
  return 1.0 - (1.0 - v) * std::exp(theta);
}

} // namespace

PvalueSample sample_pvalues(const MixtureModel& model, int m,
                            std::uint64_t seed, std::uint64_t stream,
                            const SampleOptions& options) {
  if (m < 1) {
    throw std::invalid_argument("sample_pvalues: m must be >= 1");
  }
  rng::Philox gen(seed, stream);
  PvalueSample out;
  out.pvalues.resize(m);
  out.is_null.resize(m);

  const bool laplace_closed_form =
      model.family.kind() == FamilyKind::Laplace &&
      model.sidedness == Sidedness::OneSided;

  int null_target =
      static_cast<int>(std::llround(model.pi0 * static_cast<double>(m)));
  int nulls = 0;
  for (int i = 0; i < m; ++i) {
    bool is_null;
    if (options.bernoulli_labels) {
      is_null = gen.next_double() < model.pi0;
    } else {
      is_null = i < null_target;
    }
    out.is_null[i] = is_null ? 1 : 0;
    nulls += is_null ? 1 : 0;
    if (is_null) {
      out.pvalues[i] = gen.next_double();
    } else if (laplace_closed_form) {
      out.pvalues[i] =
          laplace_one_sided_g1_inv(model.family.theta(), gen.next_double());
    } else {
      out.pvalues[i] = p_value(model, sample_alt_statistic(model.family, gen));
    }
  }
  out.null_count = nulls;
  return out;
}

void write_pvalues_csv(const std::string& path, const PvalueSample& sample) {
  std::string body = "index,p_value,is_null\n";
  for (std::size_t i = 0; i < sample.pvalues.size(); ++i) {
    body += std::to_string(i);
    body += ',';
    body += io::format_double(sample.pvalues[i]);
    body += ',';
    body += sample.is_null[i] ? '1' : '0';
    body += '\n';
  }
  io::atomic_write(path, body);
}

} // namespace fdrlab
