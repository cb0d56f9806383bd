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
#include "fdrlab/ttest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fdrlab/asymptotics.hpp"
#include "fdrlab/distributions.hpp"
#include "fdrlab/io.hpp"
#include "fdrlab/math.hpp"
#include "fdrlab/pvalues.hpp"
#include "fdrlab/rng.hpp"

namespace fdrlab {

int TwoSampleDataset::n_x() const {
  int n = 0;
  for (auto g : group_is_y) {
    n += g ? 0 : 1;
  }
  return n;
}

int TwoSampleDataset::n_y() const {
  return n_samples - n_x();
}

namespace {
void validate_dataset(const TwoSampleDataset& data) {
  if (data.n_samples <= 0 ||
      data.group_is_y.size() != static_cast<std::size_t>(data.n_samples)) {
    throw std::invalid_argument("dataset: inconsistent sample labeling");
  }
  if (data.values.size() != static_cast<std::size_t>(data.n_features()) *
                                static_cast<std::size_t>(data.n_samples)) {
    throw std::invalid_argument("dataset: matrix shape mismatch");
  }
  if (data.n_x() < 2 || data.n_y() < 2) {
    throw std::invalid_argument("dataset: each group needs >= 2 samples");
  }
  for (double v : data.values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("dataset: missing or non-finite value");
    }
  }
}

// t statistics restricted to a column subset.
std::vector<double> t_statistics_on(const TwoSampleDataset& data,
                                    std::span<const int> columns) {
  int n_x = 0, n_y = 0;
  for (int c : columns) {
    (data.group_is_y[c] ? n_y : n_x) += 1;
  }
  if (n_x < 2 || n_y < 2) {
    throw std::invalid_argument("t_statistics: each group needs >= 2 samples");
  }
  const int df = n_x + n_y - 2;
  const double scale = std::sqrt(1.0 / n_x + 1.0 / n_y);
  const int m = data.n_features();
  std::vector<double> t(m);
  for (int i = 0; i < m; ++i) {
    double sum_x = 0.0, sum_y = 0.0;
    for (int c : columns) {
      (data.group_is_y[c] ? sum_y : sum_x) += data.at(i, c);
    }
    const double mean_x = sum_x / n_x;
    const double mean_y = sum_y / n_y;
    double ss = 0.0;
    for (int c : columns) {
      const double d =
          data.at(i, c) - (data.group_is_y[c] ? mean_y : mean_x);
      ss += d * d;
    }
    const double pooled_var = ss / df;
    if (!(pooled_var > 0.0)) {
      throw std::domain_error("t_statistics: zero pooled variance for feature " +
                              data.feature_ids[i]);
    }
    t[i] = (mean_y - mean_x) / (std::sqrt(pooled_var) * scale);
  }
  return t;
}
} // namespace

std::vector<double> t_statistics(const TwoSampleDataset& data) {
  validate_dataset(data);
  std::vector<int> all(data.n_samples);
  std::iota(all.begin(), all.end(), 0);
  return t_statistics_on(data, all);
}

std::vector<double> two_sided_pvalues(std::span<const double> tstats, int df) {
  if (df < 1) {
    throw std::invalid_argument("two_sided_pvalues: df must be >= 1");
  }
  std::vector<double> p(tstats.size());
  for (std::size_t i = 0; i < tstats.size(); ++i) {
    const double t = std::abs(tstats[i]);
    // 2 (1 - F0(t)) = I_x(df/2, 1/2) at x = df / (df + t^2)
    p[i] = std::min(num::inc_beta(0.5 * df, 0.5, df / (df + t * t)), 1.0);
  }
  return p;
}

namespace {
// Rejection fraction of the step-up procedure across a descending alpha
// sweep (shared sorted order).
void rho_over_grid(std::vector<double>& pvalues,
                   std::span<const double> alpha_grid,
                   std::span<double> rho_out) {
  std::sort(pvalues.begin(), pvalues.end());
  const int m = static_cast<int>(pvalues.size());
  int k = m;
  for (std::size_t ai = alpha_grid.size(); ai-- > 0;) {
    const double alpha = alpha_grid[ai];
    while (k >= 1 && pvalues[k - 1] > alpha * static_cast<double>(k) /
                                          static_cast<double>(m)) {
      --k;
    }
    rho_out[ai] = static_cast<double>(k) / m;
  }
}

// floor(rate * n) columns per group, drawn without replacement by partial
// Fisher-Yates on the group's column list.
std::vector<int> subsample_columns(const TwoSampleDataset& data, double rate,
                                   rng::Philox& gen) {
  std::vector<int> xs, ys;
  for (int c = 0; c < data.n_samples; ++c) {
    (data.group_is_y[c] ? ys : xs).push_back(c);
  }
  auto pick = [&gen](std::vector<int>& pool, int want) {
    for (int i = 0; i < want; ++i) {
      const auto remaining = static_cast<std::uint32_t>(pool.size() - i);
      const auto j =
          i + static_cast<int>(gen.next_u64() % remaining);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(want);
  };
  const int want_x = static_cast<int>(std::floor(rate * xs.size()));
  const int want_y = static_cast<int>(std::floor(rate * ys.size()));
  if (want_x < 2 || want_y < 2) {
    throw std::invalid_argument(
        "rejection_curve: subsample leaves fewer than 2 samples in a group");
  }
  pick(xs, want_x);
  pick(ys, want_y);
  xs.insert(xs.end(), ys.begin(), ys.end());
  std::sort(xs.begin(), xs.end());
  return xs;
}
} // namespace

RejectionCurve rejection_curve(const TwoSampleDataset& data,
                               std::span<const double> alpha_grid,
                               const ResamplingPlan& plan,
                               const std::optional<StudentAsymptote>& asym,
                               int threads) {
  validate_dataset(data);
  if (plan.B < 1 || plan.rates.empty()) {
    throw std::invalid_argument("rejection_curve: empty resampling plan");
  }
  for (double rate : plan.rates) {
    if (!(rate > 0.0 && rate <= 1.0)) {
      throw std::invalid_argument("rejection_curve: rates must lie in (0, 1]");
    }
  }
  const auto n_alpha = alpha_grid.size();
  RejectionCurve curve;
  curve.rows.resize(plan.rates.size() * plan.B * n_alpha);

  for (std::size_t ri = 0; ri < plan.rates.size(); ++ri) {
    const double rate = plan.rates[ri];
    std::atomic<int> next{0};
    auto worker = [&]() {
      std::vector<double> rho(n_alpha);
      for (;;) {
        const int b = next.fetch_add(1);
        if (b >= plan.B) {
          return;
        }
        rng::Philox gen(plan.seed, (static_cast<std::uint64_t>(ri) << 32) |
                                       static_cast<std::uint64_t>(b));
        const auto columns = subsample_columns(data, rate, gen);
        const int df = static_cast<int>(columns.size()) - 2;
        auto t = t_statistics_on(data, columns);
        auto p = two_sided_pvalues(t, df);
        rho_over_grid(p, alpha_grid, rho);
        for (std::size_t ai = 0; ai < n_alpha; ++ai) {
          auto& row =
              curve.rows[(ri * plan.B + static_cast<std::size_t>(b)) * n_alpha +
                         ai];
          row.rate = rate;
          row.replicate = b;
          row.alpha = alpha_grid[ai];
          row.rho = rho[ai];
        }
      }
    };
    const int n_workers = std::max(1, threads);
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back(worker);
    }
    for (auto& th : pool) {
      th.join();
    }

    if (asym) {
      const int sub_x = static_cast<int>(std::floor(rate * data.n_x()));
      const int sub_y = static_cast<int>(std::floor(rate * data.n_y()));
      const EffectSpec effect{asym->delta, sub_x, sub_y};
      MixtureModel model(asym->pi0,
                         AlternativeFamily::student(effect.df(), effect.theta()),
                         Sidedness::TwoSided);
      for (double alpha : alpha_grid) {
        curve.asymptote.push_back(
            {rate, alpha, predict(model, alpha).rho_inf});
      }
    }
  }
  return curve;
}

TwoSampleDataset synthetic_dataset(double delta, double pi0, int m, int n_x,
                                   int n_y, double sigma, std::uint64_t seed) {
  if (m < 1 || n_x < 2 || n_y < 2) {
    throw std::invalid_argument("synthetic_dataset: need m >= 1 and groups >= 2");
  }
  if (!(pi0 >= 0.0 && pi0 <= 1.0) || !(sigma > 0.0) || !(delta >= 0.0)) {
    throw std::invalid_argument("synthetic_dataset: invalid parameters");
  }
  TwoSampleDataset data;
  data.n_samples = n_x + n_y;
  data.group_is_y.assign(n_x, 0);
  data.group_is_y.insert(data.group_is_y.end(), n_y, 1);
  data.feature_ids.resize(m);
  data.values.resize(static_cast<std::size_t>(m) * data.n_samples);
  const int null_count = static_cast<int>(std::llround(pi0 * m));
  rng::Philox gen(seed, 0);
  for (int i = 0; i < m; ++i) {
    data.feature_ids[i] = "f" + std::to_string(i);
    const bool is_null = i < null_count;
    double shift = 0.0;
    if (!is_null) {
      const double sign = gen.next_double() < 0.5 ? -1.0 : 1.0;
      shift = sign * delta * sigma;
    }
    for (int c = 0; c < data.n_samples; ++c) {
      double v = sigma * gen.next_normal();
      if (!is_null && data.group_is_y[c]) {
        v += shift;
      }
      data.values[static_cast<std::size_t>(i) * data.n_samples + c] = v;
    }
  }
  return data;
}

// ---------------------------------------------------------------------------
// CSV input / output
// ---------------------------------------------------------------------------

namespace {
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}
} // namespace

TwoSampleDataset load_dataset_csv(const std::string& data_path,
                                  const std::string& labels_path) {
  std::ifstream labels_in(labels_path);
  if (!labels_in) {
    throw std::runtime_error("cannot open labels file " + labels_path);
  }
  std::map<std::string, bool> group_of;
  std::string line;
  bool first = true;
  while (std::getline(labels_in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (first) {
      first = false;
      if (fields.size() >= 2 && fields[0] == "sample_id") {
        continue; // header
      }
    }
    if (fields.size() != 2) {
      throw std::runtime_error("labels file: expected sample_id,group rows");
    }
    if (fields[1] != "X" && fields[1] != "Y") {
      throw std::runtime_error("labels file: group must be X or Y, got '" +
                               fields[1] + "'");
    }
    group_of[fields[0]] = fields[1] == "Y";
  }

  std::ifstream data_in(data_path);
  if (!data_in) {
    throw std::runtime_error("cannot open data file " + data_path);
  }
  TwoSampleDataset data;
  if (!std::getline(data_in, line)) {
    throw std::runtime_error("data file: missing header");
  }
  const auto header = split_csv_line(line);
  if (header.size() < 3) {
    throw std::runtime_error("data file: need an id column and >= 2 samples");
  }
  data.n_samples = static_cast<int>(header.size()) - 1;
  data.group_is_y.resize(data.n_samples);
  for (int c = 0; c < data.n_samples; ++c) {
    const auto it = group_of.find(header[c + 1]);
    if (it == group_of.end()) {
      throw std::runtime_error("sample '" + header[c + 1] +
                               "' has no group label");
    }
    data.group_is_y[c] = it->second ? 1 : 0;
  }
  while (std::getline(data_in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != data.n_samples + 1) {
      throw std::runtime_error("data file: ragged row for feature '" +
                               (fields.empty() ? std::string() : fields[0]) +
                               "'");
    }
    data.feature_ids.push_back(fields[0]);
    for (int c = 0; c < data.n_samples; ++c) {
      std::size_t pos = 0;
      double v;
      try {
        v = std::stod(fields[c + 1], &pos);
      } catch (const std::exception&) {
        throw std::runtime_error("data file: bad number in feature '" +
                                 fields[0] + "'");
      }
      if (pos != fields[c + 1].size()) {
        throw std::runtime_error("data file: bad number in feature '" +
                                 fields[0] + "'");
      }
      data.values.push_back(v);
    }
  }
  validate_dataset(data);
  return data;
}

void write_rejection_csv(const std::string& path, const RejectionCurve& curve) {
  std::string body = "rate,replicate,alpha,rho\n";
  for (const auto& row : curve.rows) {
    body += io::format_double(row.rate);
    body += ',';
    body += std::to_string(row.replicate);
    body += ',';
    body += io::format_double(row.alpha);
    body += ',';
    body += io::format_double(row.rho);
    body += '\n';
  }
  io::atomic_write(path, body);
}

void write_asymptote_csv(const std::string& path, const RejectionCurve& curve) {
  std::string body = "rate,alpha,rho_inf\n";
  for (const auto& row : curve.asymptote) {
    body += io::format_double(row.rate);
    body += ',';
    body += io::format_double(row.alpha);
    body += ',';
    body += io::format_double(row.rho_inf);
    body += '\n';
  }
  io::atomic_write(path, body);
}

} // namespace fdrlab
