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

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fdrlab::num {

// ---------------------------------------------------------------------------
// Standard normal
// ---------------------------------------------------------------------------
double normal_pdf(double x);
double normal_cdf(double x);
double normal_sf(double x);       // 1 - cdf, tail-stable
double log_normal_sf(double x);   // valid far beyond the erfc underflow point
double normal_quantile(double p); // p in (0,1)

// Inverse of erfc on (0, 2).
double inv_erfc(double y);

// ---------------------------------------------------------------------------
// Regularized incomplete beta I_x(a, b) and its inverse in x
// ---------------------------------------------------------------------------
double inc_beta(double a, double b, double x);
double inc_beta_inv(double a, double b, double p);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------
// Adaptive Gauss-Legendre integration on a finite interval. The rule nodes
// are generated at first use (Newton on the Legendre recurrence), so there
// are no precomputed weight tables to get wrong.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double abs_tol = 0.0);

// Fixed-order Gauss-Legendre rule on [a, b] (no adaptivity).
double integrate_fixed(const std::function<double(double)>& f, double a,
                       double b, int order = 64);

// ---------------------------------------------------------------------------
// Root finding: bisection with secant acceleration on a bracket [lo, hi]
// where f(lo) and f(hi) have opposite signs.
// ---------------------------------------------------------------------------
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double xtol = 1e-14);

// ---------------------------------------------------------------------------
// Finite-difference weights (Fornberg): weights w such that
// f^(order)(x0) ~= sum_i w[i] f(nodes[i]).
// ---------------------------------------------------------------------------
std::vector<double> fd_weights(double x0, std::span<const double> nodes,
                               int order);

// ---------------------------------------------------------------------------
// Order statistics
// ---------------------------------------------------------------------------
// Type-7 quantile (linear interpolation of order statistics) of a sorted
// sample; p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

// Least-squares slope of y against x.
double lls_slope(std::span<const double> x, std::span<const double> y);

} // namespace fdrlab::num
