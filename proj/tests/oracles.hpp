// Test-side oracles, kept independent of the library's numeric paths:
// a plain adaptive Simpson integrator, closed forms transcribed directly,
// and brute-force reference procedures.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracles {

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature
// ---------------------------------------------------------------------------
inline double simpson_panel(const std::function<double(double)>& f, double a,
                            double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double b, double fa, double fm, double fb,
                          double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_panel(f, a, m, fa, flm, fm);
  const double right = simpson_panel(f, m, b, fm, frm, fb);
  if (depth > 60 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

inline double simpson(const std::function<double(double)>& f, double a,
                      double b, double tol = 1e-12) {
  // Split into a few seed panels so narrow peaks are not missed.
  const int panels = 16;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + (b - a) * i / panels;
    const double hi = a + (b - a) * (i + 1) / panels;
    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    const double whole = simpson_panel(f, lo, hi, fa, fm, fb);
    total += simpson_rec(f, lo, hi, fa, fm, fb, whole, tol / panels, 0);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Normal distribution helpers
// ---------------------------------------------------------------------------
inline double phi(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}
inline double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
inline double Phi_bar(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// Bisection inverse of Phi (plain but fully independent).
inline double Phi_inv(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (Phi(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Chi-square density (for the noncentral-t convolution oracle)
// ---------------------------------------------------------------------------
inline double chi2_pdf(double u, int k) {
  if (u <= 0.0) return 0.0;
  const double half_k = 0.5 * k;
  return std::exp((half_k - 1.0) * std::log(u) - 0.5 * u -
                  half_k * std::numbers::ln2 - std::lgamma(half_k));
}

// Noncentral t density by quadrature of the defining ratio representation
// T = (Z + theta) / sqrt(U / k): f(t) = int sqrt(u/k) phi(t sqrt(u/k) - theta)
// f_chi2(u) du.
inline double nct_pdf_conv(double t, int k, double theta, double tol = 1e-12) {
  auto integrand = [&](double u) {
    const double s = std::sqrt(u / k);
    return s * phi(t * s - theta) * chi2_pdf(u, k);
  };
  // The chi-square factor concentrates around u = k.
  const double hi = k + 40.0 * std::sqrt(2.0 * k) + 200.0;
  return simpson(integrand, 0.0, hi, tol);
}

// Hh_k(z) by adaptive Simpson of the defining integral, scaled by the peak.
inline double hh_quadrature(int k, double z, double tol = 1e-12) {
  if (k == -1) return std::exp(-0.5 * z * z);
  auto log_f = [&](double x) {
    return k * std::log(x) - std::lgamma(k + 1.0) - 0.5 * (x + z) * (x + z);
  };
  const double xs =
      k >= 1 ? 0.5 * (-z + std::sqrt(z * z + 4.0 * k)) : std::max(0.0, -z);
  const double sigma =
      k >= 1 ? 1.0 / std::sqrt(1.0 + k / (xs * xs)) : 1.0;
  const double peak = k >= 1 ? log_f(xs) : -0.5 * z * z * (z > 0 ? 1.0 : 0.0);
  auto scaled = [&](double x) {
    if (x <= 0.0) return k >= 1 ? 0.0 : std::exp(-0.5 * z * z - peak);
    return std::exp(log_f(x) - peak);
  };
  const double lo = std::max(0.0, xs - 50.0 * sigma);
  const double hi = xs + 50.0 * sigma;
  return std::exp(peak) * simpson(scaled, lo, hi, tol);
}

// ---------------------------------------------------------------------------
// Laplace closed forms (one-sided p-value distribution under H1)
// ---------------------------------------------------------------------------
inline double laplace_g1_cdf(double theta, double u) {
  const double e_m = std::exp(-theta);
  if (u <= 0.5 * e_m) return u * std::exp(theta);
  if (u <= 0.5) return 1.0 - 0.25 * e_m / u;
  return 1.0 - (1.0 - u) * e_m;
}

inline double laplace_g1_pdf(double theta, double u) {
  const double e_m = std::exp(-theta);
  if (u <= 0.5 * e_m) return std::exp(theta);
  if (u <= 0.5) return 0.25 * e_m / (u * u);
  return e_m;
}

// ---------------------------------------------------------------------------
// Brute-force step-up reference: try every index k and take the largest
// admissible one, then reject by threshold.
// ---------------------------------------------------------------------------
struct BruteForceBH {
  double tau = 0.0;
  std::vector<int> rejected;
};

inline BruteForceBH brute_force_bh(const std::vector<double>& pvalues,
                                   double level) {
  const int m = static_cast<int>(pvalues.size());
  std::vector<double> sorted(pvalues);
  std::sort(sorted.begin(), sorted.end());
  int best = 0;
  for (int k = 1; k <= m; ++k) {
    if (sorted[k - 1] <= level * k / m) {
      best = k;
    }
  }
  BruteForceBH out;
  out.tau = best > 0 ? level * best / m : 0.0;
  if (best > 0) {
    for (int i = 0; i < m; ++i) {
      if (pvalues[i] <= out.tau) {
        out.rejected.push_back(i);
      }
    }
  }
  return out;
}

// Rightmost ecdf crossing form: sup { p_(k) : ecdf(p_(k)) >= p_(k) / level },
// evaluated at the jump points.
inline BruteForceBH sup_crossing_bh(const std::vector<double>& pvalues,
                                    double level) {
  const int m = static_cast<int>(pvalues.size());
  std::vector<double> sorted(pvalues);
  std::sort(sorted.begin(), sorted.end());
  double tau = 0.0;
  for (int k = 1; k <= m; ++k) {
    const double ecdf = static_cast<double>(k) / m;
    if (ecdf >= sorted[k - 1] / level) {
      tau = std::max(tau, level * k / m);
    }
  }
  BruteForceBH out;
  out.tau = tau;
  if (tau > 0.0) {
    for (int i = 0; i < m; ++i) {
      if (pvalues[i] <= tau) {
        out.rejected.push_back(i);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov distance against a cdf
// ---------------------------------------------------------------------------
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

// Asymptotic KS critical value at level alpha: sqrt(-ln(alpha/2)/2) / sqrt(n)
inline double ks_critical(double alpha, std::size_t n) {
  return std::sqrt(-std::log(alpha / 2.0) / 2.0) /
         std::sqrt(static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// Anderson-Darling normality statistic with estimated mean and variance
// (small-sample modified form). The 1% critical value is 1.092.
// ---------------------------------------------------------------------------
inline double anderson_darling_normal(std::vector<double> sample) {
  const auto n = sample.size();
  if (n < 8) {
    throw std::invalid_argument("anderson_darling_normal: sample too small");
  }
  double mean = 0.0;
  for (double x : sample) mean += x;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double x : sample) var += (x - mean) * (x - mean);
  var /= static_cast<double>(n - 1);
  const double sd = std::sqrt(var);
  std::sort(sample.begin(), sample.end());
  double a2 = -static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = (sample[i] - mean) / sd;
    const double zn = (sample[n - 1 - i] - mean) / sd;
    const double lo = std::max(Phi(zi), 1e-300);
    const double hi = std::max(1.0 - Phi(zn), 1e-300);
    a2 -= (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n) *
          (std::log(lo) + std::log(hi));
  }
  const double nn = static_cast<double>(n);
  return a2 * (1.0 + 0.75 / nn + 2.25 / (nn * nn));
}

constexpr double kAdCritical1pct = 1.092;

} // namespace oracles
