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

#include <cstdint>
#include <string>
#include <vector>

#include "fdrlab/distributions.hpp"

namespace fdrlab {

enum class Sidedness { OneSided, TwoSided };

// p-value mixture: a fraction pi0 of hypotheses is null (uniform p-values),
// the rest draw their test statistic from the alternative family. The
// two-sided transform relies on the symmetry of the null density, which
// every family here satisfies.
struct MixtureModel {
  double pi0;
  AlternativeFamily family;
  Sidedness sidedness;

  MixtureModel(double pi0_, AlternativeFamily family_, Sidedness sidedness_);
};

// p-value of an observed statistic: one-sided p = S0(x), two-sided
// p = 2 S0(|x|).
double p_value(const MixtureModel& model, double x);

// Distribution of the p-values under the alternative. The two-sided variants
// are composed from the one-sided primitives:
//   G1_2s(u) = G1_1s(u/2) + 1 - G1_1s(1 - u/2)
//   g1_2s(u) = (g1_1s(u/2) + g1_1s(1 - u/2)) / 2
double g1_cdf(const MixtureModel& model, double u);
double g1_pdf(const MixtureModel& model, double u); // u = 0 gives the limit,
                                                    // +inf when unbounded

// Mixture cdf/pdf: G = pi0 u + (1-pi0) G1, g = pi0 + (1-pi0) g1.
double mixture_cdf(const MixtureModel& model, double u);
double mixture_pdf(const MixtureModel& model, double u);

struct PvalueSample {
  std::vector<double> pvalues;
  std::vector<std::uint8_t> is_null;
  int null_count = 0;
};

struct SampleOptions {
  // Default: exactly round(pi0 * m) null hypotheses. With bernoulli_labels
  // each hypothesis is null independently with probability pi0.
  bool bernoulli_labels = false;
};

// Draw m labeled p-values. (seed, stream) addresses an independent
// counter-based substream, so concurrent sampling is deterministic and
// race-free.
PvalueSample sample_pvalues(const MixtureModel& model, int m,
                            std::uint64_t seed, std::uint64_t stream = 0,
                            const SampleOptions& options = {});

// CSV with header "index,p_value,is_null", full double precision.
void write_pvalues_csv(const std::string& path, const PvalueSample& sample);

} // namespace fdrlab
