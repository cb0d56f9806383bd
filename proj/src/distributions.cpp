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
#include "fdrlab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fdrlab/math.hpp"

namespace fdrlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = std::numbers::sqrt2;
} // namespace

// ===========================================================================
// Hh
// ===========================================================================

namespace {

// log of the integrand x^k/k! exp(-(x+z)^2/2)
double hh_log_integrand(int k, double z, double x) {
  return k * std::log(x) - std::lgamma(k + 1.0) - 0.5 * (x + z) * (x + z);
}

double hh_log_quadrature(int k, double z) {
  // The integrand is log-concave with mode x* and local scale sigma.
  const double xs = 0.5 * (-z + std::sqrt(z * z + 4.0 * k));
  const double sigma = 1.0 / std::sqrt(1.0 + k / (xs * xs));
  const double peak = hh_log_integrand(k, z, xs);
  const double lo = std::max(0.0, xs - 45.0 * sigma);
  const double hi = xs + 45.0 * sigma;
  const double scaled = num::integrate(
      [&](double x) {
        return x <= 0.0 ? 0.0 : std::exp(hh_log_integrand(k, z, x) - peak);
      },
      lo, hi, 1e-14);
  return peak + std::log(scaled);
}

double hh0_log(double z) {
  // Hh_0(z) = sqrt(2 pi) * Phi_bar(z)
  return 0.5 * std::log(2.0 * std::numbers::pi) + num::log_normal_sf(z);
}

} // namespace

double hh_log(int k, double z) {
  if (k < -1) {
    throw std::domain_error("hh: order must be >= -1");
  }
  if (z < -40.0) {
    throw std::domain_error("hh: z below -40 is outside the supported range");
  }
  if (k == -1) {
    return -0.5 * z * z;
  }
  if (k == 0) {
    return hh0_log(z);
  }
  if (z > 0.0) {
    return hh_log_quadrature(k, z);
  }
  // Forward recurrence k Hh_k = Hh_{k-2} - z Hh_{k-1}. For z <= 0 every term
  // is nonnegative, so the recurrence is stable.
  double prev2 = std::exp(-0.5 * z * z);       // Hh_{-1}
  double prev1 = std::exp(hh0_log(z));         // Hh_0
  double cur = prev1;
  for (int j = 1; j <= k; ++j) {
    cur = (prev2 - z * prev1) / j;
    prev2 = prev1;
    prev1 = cur;
  }
  return std::log(cur);
}

double hh(int k, double z) { return std::exp(hh_log(k, z)); }

// ===========================================================================
// Family caches (numeric cdf tables for Subbotin and noncentral Student)
// ===========================================================================

namespace detail {

// Piecewise table of a distribution function, kept accurate in both tails by
// accumulating panel integrals from each end separately. Point queries
// integrate the pdf from the nearest node.
struct TailTable {
  std::vector<double> t;
  std::vector<double> lower; // F(t_i), accumulated from the left anchor
  std::vector<double> upper; // S(t_i), accumulated from the right anchor
};

struct FamilyCache {
  // Subbotin: one-sided table of the null cdf on [0, T] (symmetry covers
  // t < 0); reused for f1 via the location shift.
  TailTable subbotin;
  double subbotin_log_c = 0.0;
  // Student: table of the noncentral cdf.
  TailTable student;
  double student_log_c = 0.0;
};

} // namespace detail

namespace {

using detail::TailTable;

double table_pdf_panel(const std::function<double(double)>& pdf, double a,
                       double b) {
  return num::integrate_fixed(pdf, a, b, 16);
}

TailTable build_table(const std::function<double(double)>& pdf,
                      std::vector<double> nodes, double lower_anchor,
                      double upper_anchor) {
  TailTable table;
  table.t = std::move(nodes);
  const std::size_t n = table.t.size();
  table.lower.resize(n);
  table.upper.resize(n);
  table.lower[0] = lower_anchor;
  for (std::size_t i = 1; i < n; ++i) {
    table.lower[i] =
        table.lower[i - 1] + table_pdf_panel(pdf, table.t[i - 1], table.t[i]);
  }
  table.upper[n - 1] = upper_anchor;
  for (std::size_t i = n - 1; i-- > 0;) {
    table.upper[i] =
        table.upper[i + 1] + table_pdf_panel(pdf, table.t[i], table.t[i + 1]);
  }
  return table;
}

// F(x) and S(x) from the table; `pdf` refines from the nearest node.
double table_cdf(const TailTable& table, const std::function<double(double)>& pdf,
                 double x, bool survival) {
  const auto it = std::lower_bound(table.t.begin(), table.t.end(), x);
  std::size_t idx;
  if (it == table.t.begin()) {
    idx = 0;
  } else if (it == table.t.end()) {
    idx = table.t.size() - 1;
  } else {
    const std::size_t hi = static_cast<std::size_t>(it - table.t.begin());
    idx = (x - table.t[hi - 1] < table.t[hi] - x) ? hi - 1 : hi;
  }
  const double node = table.t[idx];
  const double delta =
      x >= node ? table_pdf_panel(pdf, node, x) : -table_pdf_panel(pdf, x, node);
  if (survival) {
    return std::max(table.upper[idx] - delta, 0.0);
  }
  return std::min(std::max(table.lower[idx] + delta, 0.0), 1.0);
}

// ---------------------------------------------------------------------------
// Subbotin pieces
// ---------------------------------------------------------------------------

double subbotin_log_c(double gamma) {
  return std::log(2.0) + (1.0 / gamma - 1.0) * std::log(gamma) +
         std::lgamma(1.0 / gamma);
}

double subbotin_pdf0(double gamma, double log_c, double t) {
  return std::exp(-std::pow(std::abs(t), gamma) / gamma - log_c);
}

detail::FamilyCache build_subbotin_cache(double gamma) {
  detail::FamilyCache cache;
  cache.subbotin_log_c = subbotin_log_c(gamma);
  const double log_c = cache.subbotin_log_c;
  auto pdf = [gamma, log_c](double t) { return subbotin_pdf0(gamma, log_c, t); };
  // Table reaches the point where the tail mass is ~exp(-60).
  const double t_max = std::pow(60.0 * gamma, 1.0 / gamma);
  const double spacing = 1.0 / 16.0;
  std::vector<double> nodes;
  for (double t = 0.0; t < t_max; t += spacing) {
    nodes.push_back(t);
  }
  nodes.push_back(t_max);
  // Upper anchor: remaining tail out to where the exponent underflows.
  const double t_end = std::pow(760.0 * gamma, 1.0 / gamma);
  const double tail = num::integrate(pdf, t_max, t_end, 1e-14);
  cache.subbotin = build_table(pdf, std::move(nodes), 0.5, tail);
  return cache;
}

// ---------------------------------------------------------------------------
// Student pieces
// ---------------------------------------------------------------------------

double student_log_c(int k) {
  return std::lgamma(k + 1.0) - 0.5 * (k - 1.0) * std::log(2.0) -
         std::lgamma(0.5 * k) - 0.5 * std::log(k * std::numbers::pi);
}

double student_f0_pdf(int k, double t) {
  const double log_pdf = std::lgamma(0.5 * (k + 1.0)) - std::lgamma(0.5 * k) -
                         0.5 * std::log(k * std::numbers::pi) -
                         0.5 * (k + 1.0) * std::log1p(t * t / k);
  return std::exp(log_pdf);
}

double student_f0_sf(int k, double t) {
  const double x = k / (k + t * t);
  const double half_tail = 0.5 * num::inc_beta(0.5 * k, 0.5, x);
  return t >= 0.0 ? half_tail : 1.0 - half_tail;
}

double student_f0_quantile(int k, double u) {
  if (u == 0.5) return 0.0;
  const double tail = u < 0.5 ? u : 1.0 - u;
  const double x = num::inc_beta_inv(0.5 * k, 0.5, 2.0 * tail);
  const double t = std::sqrt(k * (1.0 / x - 1.0));
  return u < 0.5 ? -t : t;
}

double student_log_f1(int k, double theta, double log_c, double t) {
  const double w = 1.0 + t * t / k;
  const double z = -theta * t / std::sqrt(k + t * t);
  return log_c - 0.5 * (k + 1.0) * std::log(w) - 0.5 * theta * theta / w +
         hh_log(k, z);
}

detail::FamilyCache build_student_cache(int k, double theta) {
  detail::FamilyCache cache;
  cache.student_log_c = student_log_c(k);
  const double log_c = cache.student_log_c;
  auto pdf = [k, theta, log_c](double t) {
    return std::exp(student_log_f1(k, theta, log_c, t));
  };
  // Cover central tails down to ~1e-15 plus room for the shift.
  const double reach = -student_f0_quantile(k, 1e-15) + std::abs(theta) + 10.0;
  // Graded nodes: uniform in asinh(t/2).
  const double s_max = std::asinh(reach / 2.0);
  const int half = 300;
  std::vector<double> nodes;
  nodes.reserve(2 * half + 1);
  for (int i = -half; i <= half; ++i) {
    nodes.push_back(2.0 * std::sinh(s_max * i / half));
  }
  // Anchors: the far tails integrated with the substitution t = edge / v,
  // which maps the unbounded polynomial tail onto (0, 1].
  auto tail_beyond = [&pdf](double edge) {
    return num::integrate(
        [&pdf, edge](double v) {
          if (v <= 0.0) return 0.0;
          const double t = edge / v;
          return pdf(t) * std::abs(edge) / (v * v);
        },
        0.0, 1.0, 1e-13);
  };
  const double lower_anchor = tail_beyond(nodes.front());
  const double upper_anchor = tail_beyond(nodes.back());
  cache.student = build_table(pdf, std::move(nodes), lower_anchor, upper_anchor);
  return cache;
}

} // namespace

const detail::FamilyCache& family_cache(const AlternativeFamily& family) {
  return *family.cache_;
}

// ===========================================================================
// AlternativeFamily
// ===========================================================================

AlternativeFamily AlternativeFamily::gaussian(double theta) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("gaussian family: theta must be >= 0");
  }
  AlternativeFamily f;
  f.kind_ = FamilyKind::Gaussian;
  f.theta_ = theta;
  return f;
}

AlternativeFamily AlternativeFamily::laplace(double theta) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("laplace family: theta must be >= 0");
  }
  AlternativeFamily f;
  f.kind_ = FamilyKind::Laplace;
  f.theta_ = theta;
  return f;
}

AlternativeFamily AlternativeFamily::subbotin(double theta, double gamma) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("subbotin family: theta must be >= 0");
  }
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("subbotin family: gamma must be >= 1");
  }
  AlternativeFamily f;
  f.kind_ = FamilyKind::Subbotin;
  f.theta_ = theta;
  f.gamma_ = gamma;
  f.cache_ = std::make_shared<detail::FamilyCache>(build_subbotin_cache(gamma));
  return f;
}

AlternativeFamily AlternativeFamily::student(int df, double theta) {
  if (df < 1) {
    throw std::invalid_argument("student family: df must be >= 1");
  }
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("student family: theta must be >= 0");
  }
  AlternativeFamily f;
  f.kind_ = FamilyKind::Student;
  f.theta_ = theta;
  f.df_ = df;
  f.cache_ = std::make_shared<detail::FamilyCache>(build_student_cache(df, theta));
  return f;
}

std::string AlternativeFamily::name() const {
  switch (kind_) {
  case FamilyKind::Gaussian: return "gaussian";
  case FamilyKind::Laplace: return "laplace";
  case FamilyKind::Subbotin: return "subbotin";
  case FamilyKind::Student: return "student";
  }
  return "unknown";
}

double EffectSpec::theta() const {
  if (n_x < 2 || n_y < 2) {
    throw std::invalid_argument("EffectSpec: group sizes must be >= 2");
  }
  if (!(delta > 0.0)) {
    throw std::invalid_argument("EffectSpec: delta must be positive");
  }
  return delta / std::sqrt(1.0 / n_x + 1.0 / n_y);
}

// ===========================================================================
// Densities / distribution functions
// ===========================================================================

double f0_pdf(const AlternativeFamily& family, double t) {
  switch (family.kind()) {
  case FamilyKind::Gaussian:
    return num::normal_pdf(t);
  case FamilyKind::Laplace:
    return 0.5 * std::exp(-std::abs(t));
  case FamilyKind::Subbotin: {
    const auto& cache = family_cache(family);
    return subbotin_pdf0(family.shape(), cache.subbotin_log_c, t);
  }
  case FamilyKind::Student:
    return student_f0_pdf(family.df(), t);
  }
  return 0.0;
}

double f1_pdf(const AlternativeFamily& family, double t) {
  if (family.kind() == FamilyKind::Student) {
    const auto& cache = family_cache(family);
    return std::exp(
        student_log_f1(family.df(), family.theta(), cache.student_log_c, t));
  }
  return f0_pdf(family, t - family.theta());
}

double f0_sf(const AlternativeFamily& family, double t) {
  switch (family.kind()) {
  case FamilyKind::Gaussian:
    return num::normal_sf(t);
  case FamilyKind::Laplace:
    return t >= 0.0 ? 0.5 * std::exp(-t) : 1.0 - 0.5 * std::exp(t);
  case FamilyKind::Subbotin: {
    const auto& cache = family_cache(family);
    const double log_c = cache.subbotin_log_c;
    const double gamma = family.shape();
    auto pdf = [gamma, log_c](double x) {
      return subbotin_pdf0(gamma, log_c, x);
    };
    const double a = std::abs(t);
    if (a > cache.subbotin.t.back()) {
      // Beyond the table the remaining mass is below 1e-26; integrate it.
      const double t_end = std::pow(760.0 * gamma, 1.0 / gamma);
      const double tail =
          a >= t_end ? 0.0 : num::integrate(pdf, a, t_end, 1e-13);
      return t >= 0.0 ? tail : 1.0 - tail;
    }
    const double tail = table_cdf(cache.subbotin, pdf, a, /*survival=*/true);
    return t >= 0.0 ? tail : 1.0 - tail;
  }
  case FamilyKind::Student:
    return student_f0_sf(family.df(), t);
  }
  return 0.0;
}

double f0_cdf(const AlternativeFamily& family, double t) {
  return f0_sf(family, -t); // null densities are symmetric
}

double f1_sf(const AlternativeFamily& family, double t) {
  if (family.kind() != FamilyKind::Student) {
    return f0_sf(family, t - family.theta());
  }
  const auto& cache = family_cache(family);
  const int k = family.df();
  const double theta = family.theta();
  const double log_c = cache.student_log_c;
  auto pdf = [k, theta, log_c](double x) {
    return std::exp(student_log_f1(k, theta, log_c, x));
  };
  const auto& table = cache.student;
  if (t > table.t.back() || t < table.t.front()) {
    // Far outside the table the noncentral tail tracks the central tail
    // times the limiting likelihood ratio.
    const LrLimit limit = lr_limit(family, t > 0.0 ? +1 : -1);
    const double lr = limit.divergent ? 1.0 : limit.value;
    if (t > 0.0) {
      return student_f0_sf(k, t) * lr;
    }
    return 1.0 - student_f0_sf(k, -t) * lr;
  }
  return table_cdf(table, pdf, t, /*survival=*/true);
}

double f1_cdf(const AlternativeFamily& family, double t) {
  if (family.kind() != FamilyKind::Student) {
    return f0_cdf(family, t - family.theta());
  }
  const auto& cache = family_cache(family);
  const int k = family.df();
  const double theta = family.theta();
  const double log_c = cache.student_log_c;
  auto pdf = [k, theta, log_c](double x) {
    return std::exp(student_log_f1(k, theta, log_c, x));
  };
  const auto& table = cache.student;
  if (t > table.t.back() || t < table.t.front()) {
    return 1.0 - f1_sf(family, t);
  }
  return table_cdf(table, pdf, t, /*survival=*/false);
}

double f0_tail_quantile(const AlternativeFamily& family, double tail) {
  if (!(tail > 0.0 && tail <= 0.5)) {
    throw std::domain_error("f0_tail_quantile: tail must lie in (0, 1/2]");
  }
  switch (family.kind()) {
  case FamilyKind::Gaussian:
    return kSqrt2 * num::inv_erfc(2.0 * tail);
  case FamilyKind::Laplace:
    return -std::log(2.0 * tail);
  case FamilyKind::Subbotin: {
    if (tail == 0.5) return 0.0;
    const auto& cache = family_cache(family);
    const double log_c = cache.subbotin_log_c;
    const double gamma = family.shape();
    auto pdf = [gamma, log_c](double x) {
      return subbotin_pdf0(gamma, log_c, x);
    };
    const auto& table = cache.subbotin;
    // Bracket on the nodes; upper[] decreases along t, so search the
    // reversed (ascending) view.
    auto it = std::lower_bound(table.upper.rbegin(), table.upper.rend(), tail);
    const std::size_t hi_idx =
        table.upper.size() - 1 -
        static_cast<std::size_t>(std::distance(table.upper.rbegin(), it));
    const std::size_t lo_idx = std::min(hi_idx + 1, table.upper.size() - 1);
    double lo = table.t[hi_idx];
    double hi = table.t[lo_idx];
    if (lo > hi) std::swap(lo, hi);
    double t = 0.5 * (lo + hi);
    for (int i = 0; i < 64; ++i) {
      const double err = table_cdf(table, pdf, t, /*survival=*/true) - tail;
      const double step = err / std::max(pdf(t), 1e-300);
      t += step;
      if (!(t >= lo - 1.0 && t <= hi + 1.0)) {
        t = 0.5 * (lo + hi);
      }
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(t))) {
        break;
      }
    }
    return t;
  }
  case FamilyKind::Student: {
    const int k = family.df();
    const double x = num::inc_beta_inv(0.5 * k, 0.5, 2.0 * tail);
    return std::sqrt(k * (1.0 / x - 1.0));
  }
  }
  return 0.0;
}

double f0_quantile(const AlternativeFamily& family, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("f0_quantile: u must lie in (0, 1)");
  }
  if (u == 0.5) return 0.0;
  return u < 0.5 ? -f0_tail_quantile(family, u)
                 : f0_tail_quantile(family, 1.0 - u);
}

// ===========================================================================
// Likelihood ratios
// ===========================================================================

double log_likelihood_ratio(const AlternativeFamily& family, double t) {
  const double theta = family.theta();
  switch (family.kind()) {
  case FamilyKind::Gaussian:
    return -0.5 * theta * theta + theta * t;
  case FamilyKind::Laplace:
    return std::abs(t) - std::abs(t - theta);
  case FamilyKind::Subbotin: {
    const double gamma = family.shape();
    return (std::pow(std::abs(t), gamma) - std::pow(std::abs(t - theta), gamma)) /
           gamma;
  }
  case FamilyKind::Student: {
    const int k = family.df();
    const double w = 1.0 + t * t / k;
    const double z = -theta * t / std::sqrt(k + t * t);
    return -0.5 * theta * theta / w + hh_log(k, z) - hh_log(k, 0.0);
  }
  }
  return 0.0;
}

double likelihood_ratio(const AlternativeFamily& family, double t) {
  return std::exp(log_likelihood_ratio(family, t));
}

LrLimit lr_limit(const AlternativeFamily& family, int direction) {
  if (direction != 1 && direction != -1) {
    throw std::invalid_argument("lr_limit: direction must be +1 or -1");
  }
  const double start = 2.0 * std::max(family.theta(), 1.0);
  double prev = log_likelihood_ratio(family, direction * start);
  for (int j = 1; j <= 60; ++j) {
    const double t = start * std::pow(2.0, j);
    const double cur = log_likelihood_ratio(family, direction * t);
    if (cur > 700.0) {
      return {kInf, true};
    }
    if (cur < -745.0) {
      return {0.0, false};
    }
    if (std::abs(cur - prev) < 1e-11 * std::max(1.0, std::abs(cur))) {
      return {std::exp(cur), false};
    }
    prev = cur;
  }
  // Still drifting after 60 doublings: treat as slow divergence.
  return {kInf, true};
}

} // namespace fdrlab
