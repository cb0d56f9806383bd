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
#include "fdrlab/math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fdrlab::num {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;
} // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double log_normal_sf(double x) {
  if (x < 25.0) {
    return std::log(normal_sf(x));
  }
  // Asymptotic series for the Mills ratio, accurate to ~1e-16 here.
  const double x2 = x * x;
  double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2) +
                  105.0 / (x2 * x2 * x2 * x2);
  return -0.5 * x2 - std::log(x / kInvSqrt2Pi) + std::log(series);
}

double inv_erfc(double y) {
  if (!(y > 0.0 && y < 2.0)) {
    throw std::domain_error("inv_erfc: argument outside (0, 2)");
  }
  if (y > 1.0) {
    return -inv_erfc(2.0 - y);
  }
  // Warm start: linear series near the center, the exp(-x^2)/(x sqrt(pi))
  // asymptote in the tail; then Newton safeguarded by a shrinking bracket.
  double x;
  if (y > 0.4) {
    x = (1.0 - y) * std::sqrt(std::numbers::pi) / 2.0;
  } else {
    x = std::sqrt(-std::log(y));
    for (int i = 0; i < 3; ++i) {
      const double denom = y * x * std::sqrt(std::numbers::pi);
      x = std::sqrt(std::max(-std::log(denom), 0.25));
    }
  }
  double lo = 0.0, hi = 40.0;
  const double two_over_sqrt_pi = 2.0 / std::sqrt(std::numbers::pi);
  for (int i = 0; i < 100; ++i) {
    const double err = std::erfc(x) - y;
    if (err > 0.0) {
      lo = std::max(lo, x); // erfc decreasing: root is above x
    } else {
      hi = std::min(hi, x);
    }
    const double deriv = -two_over_sqrt_pi * std::exp(-x * x);
    double next = deriv < 0.0 ? x - err / deriv : -1.0;
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - x) < 1e-16 * (1.0 + std::abs(next))) {
      return next;
    }
    x = next;
  }
  return x;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile: p outside (0, 1)");
  }
  // Phi(x) = erfc(-x/sqrt(2))/2  =>  x = -sqrt(2) inv_erfc(2p)
  return -kSqrt2 * inv_erfc(2.0 * p);
}

// ---------------------------------------------------------------------------
// Incomplete beta via the standard Lentz continued fraction.
// ---------------------------------------------------------------------------
namespace {
double beta_cf(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 400; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) {
      break;
    }
  }
  return h;
}
} // namespace

double inc_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) {
    throw std::domain_error("inc_beta: a, b must be positive");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                        b * std::log1p(-x) + a * std::log(x)) *
                   beta_cf(b, a, 1.0 - x) / b;
}

double inc_beta_inv(double a, double b, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("inc_beta_inv: p outside [0, 1]");
  }
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  // Warm start: I_x(a,b) ~ x^a / (a B(a,b)) near 0 and the mirrored form
  // near 1; without it Newton needs hundreds of steps for tail arguments.
  double x;
  if (p < 0.25) {
    x = std::exp((std::log(p) + std::log(a) + log_beta) / a);
    x = std::min(x, 0.4);
  } else if (p > 0.75) {
    double y = std::exp((std::log1p(-p) + std::log(b) + log_beta) / b);
    y = std::min(y, 0.4);
    x = 1.0 - y;
  } else {
    x = 0.5;
  }
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double v = inc_beta(a, b, x);
    if (v < p) {
      lo = x;
    } else {
      hi = x;
    }
    const double log_pdf =
        (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta;
    const double deriv = std::exp(log_pdf);
    double next = deriv > 0.0 ? x - (v - p) / deriv : -1.0;
    if (!(next > lo && next < hi)) {
      // Geometric fallback keeps tail brackets shrinking quickly.
      next = lo > 0.0 ? std::sqrt(lo * hi) : 0.1 * hi;
    }
    if (std::abs(next - x) < 1e-16 * (1.0 + std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes by Newton iteration on the Legendre recurrence.
// ---------------------------------------------------------------------------
namespace {
struct GlRule {
  std::vector<double> nodes;   // on (-1, 1)
  std::vector<double> weights;
};

GlRule make_gl_rule(int n) {
  GlRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-based initial guess for the i-th root.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return rule;
}

const GlRule& gl15() {
  static const GlRule rule = make_gl_rule(15);
  return rule;
}

double gl_panel(const std::function<double(double)>& f, double a, double b,
                const GlRule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

void adapt(const std::function<double(double)>& f, double a, double b,
           double whole, double rel_tol, double abs_tol, int depth,
           double& acc) {
  const double mid = 0.5 * (a + b);
  const double left = gl_panel(f, a, mid, gl15());
  const double right = gl_panel(f, mid, b, gl15());
  const double err = std::abs(left + right - whole);
  if (depth >= 40 ||
      err <= abs_tol + rel_tol * std::abs(left + right)) {
    acc += left + right;
    return;
  }
  adapt(f, a, mid, left, rel_tol, 0.5 * abs_tol, depth + 1, acc);
  adapt(f, mid, b, right, rel_tol, 0.5 * abs_tol, depth + 1, acc);
}
} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol) {
  if (a == b) return 0.0;
  // Seed panels keep the adaptive pass from missing narrow features, and
  // their magnitudes set an absolute error budget: panels whose value sits
  // at rounding-noise scale would otherwise never satisfy a purely relative
  // test and recurse forever.
  const int seed_panels = 8;
  std::vector<double> whole(seed_panels);
  double scale = 0.0;
  for (int i = 0; i < seed_panels; ++i) {
    const double lo = a + (b - a) * i / seed_panels;
    const double hi = a + (b - a) * (i + 1) / seed_panels;
    whole[i] = gl_panel(f, lo, hi, gl15());
    scale += std::abs(whole[i]);
  }
  const double budget =
      std::max(abs_tol, rel_tol * std::max(scale, 1e-300)) / seed_panels;
  double acc = 0.0;
  for (int i = 0; i < seed_panels; ++i) {
    const double lo = a + (b - a) * i / seed_panels;
    const double hi = a + (b - a) * (i + 1) / seed_panels;
    adapt(f, lo, hi, whole[i], rel_tol, budget, 0, acc);
  }
  return acc;
}

double integrate_fixed(const std::function<double(double)>& f, double a,
                       double b, int order) {
  static thread_local std::vector<std::pair<int, GlRule>> cache;
  for (const auto& [n, rule] : cache) {
    if (n == order) {
      return gl_panel(f, a, b, rule);
    }
  }
  cache.emplace_back(order, make_gl_rule(order));
  return gl_panel(f, a, b, cache.back().second);
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double xtol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::invalid_argument("find_root: endpoints do not bracket a root");
  }
  for (int i = 0; i < 400 && (hi - lo) > xtol; ++i) {
    // Alternate secant and bisection proposals, keep the bracket valid.
    double x;
    if (i % 2 == 0 && fhi != flo) {
      x = lo - flo * (hi - lo) / (fhi - flo);
      if (!(x > lo && x < hi)) {
        x = 0.5 * (lo + hi);
      }
    } else {
      x = 0.5 * (lo + hi);
    }
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> fd_weights(double x0, std::span<const double> nodes,
                               int order) {
  // Fornberg's recursive algorithm.
  const int n = static_cast<int>(nodes.size()) - 1;
  const int m = order;
  std::vector<std::vector<std::vector<double>>> d(
      n + 1, std::vector<std::vector<double>>(n + 1,
                                              std::vector<double>(m + 1, 0.0)));
  d[0][0][0] = 1.0;
  double c1 = 1.0;
  for (int i = 1; i <= n; ++i) {
    double c2 = 1.0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      for (int k = 0; k <= std::min(i, m); ++k) {
        d[i][j][k] = ((nodes[i] - x0) * d[i - 1][j][k] -
                      (k > 0 ? k * d[i - 1][j][k - 1] : 0.0)) /
                     c3;
      }
    }
    for (int k = 0; k <= std::min(i, m); ++k) {
      d[i][i][k] = (c1 / c2) * ((k > 0 ? k * d[i - 1][i - 1][k - 1] : 0.0) -
                                (nodes[i - 1] - x0) * d[i - 1][i - 1][k]);
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int j = 0; j <= n; ++j) {
    w[j] = d[n][j][m];
  }
  return w;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) {
    throw std::invalid_argument("quantile_sorted: empty sample");
  }
  if (sorted.size() == 1) return sorted[0];
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::clamp(
      std::floor(h), 0.0, static_cast<double>(sorted.size() - 1)));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double lls_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("lls_slope: need two samples of equal size");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

} // namespace fdrlab::num
