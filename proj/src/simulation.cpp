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
#include "fdrlab/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "fdrlab/io.hpp"
#include "fdrlab/math.hpp"
#include "fdrlab/procedures.hpp"

namespace fdrlab {

namespace {

void validate_grid(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) {
    throw std::invalid_argument(std::string(what) + " must be non-empty");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 1.0 + 1e-15)) {
      throw std::invalid_argument(std::string(what) + " values must lie in (0, 1]");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument(std::string(what) +
                                  " must be strictly increasing");
    }
  }
}

struct ReplicateMetrics {
  double power; // NaN when every hypothesis is null
  double fdp;
  double rho;
};

// One replicate evaluated over the whole (descending) alpha scan. The
// step-up index is monotone in the effective level, so a single backward
// sweep over the sorted p-values serves every alpha.
void replicate_pass(const SimulationConfig& config, int b,
                    std::vector<ReplicateMetrics>& row) {
  const int m = config.m;
  PvalueSample sample =
      sample_pvalues(config.model, m, config.seed, static_cast<std::uint64_t>(b),
                     {.bernoulli_labels = config.bernoulli_labels});

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int c) {
    return sample.pvalues[a] < sample.pvalues[c];
  });
  std::vector<double> sorted(m);
  std::vector<int> null_prefix(m + 1, 0);
  for (int i = 0; i < m; ++i) {
    sorted[i] = sample.pvalues[order[i]];
    null_prefix[i + 1] =
        null_prefix[i] + (sample.is_null[order[i]] ? 1 : 0);
  }
  const int m0 = sample.null_count;
  const int m1 = m - m0;

  double pi0_hat = 1.0;
  if (config.procedure == ProcedureKind::PlugIn) {
    pi0_hat = estimate_pi0(config.estimator, sample.pvalues).value_clamped;
  }

  const auto n_alpha = config.alpha_grid.size();
  int k = m;
  for (std::size_t ai = n_alpha; ai-- > 0;) {
    const double alpha = config.alpha_grid[ai];
    const double effective =
        config.procedure == ProcedureKind::PlugIn
            ? std::min(alpha / pi0_hat, 1.0)
            : alpha;
    while (k >= 1 &&
           sorted[k - 1] > effective * static_cast<double>(k) /
                               static_cast<double>(m)) {
      --k;
    }
    const int r = k;
    const int v = null_prefix[k];
    ReplicateMetrics metrics{};
    metrics.rho = static_cast<double>(r) / m;
    metrics.fdp = static_cast<double>(v) / std::max(r, 1);
    metrics.power = m1 > 0 ? static_cast<double>(r - v) / m1
                           : std::numeric_limits<double>::quiet_NaN();
    row[ai] = metrics;
  }
}

void parallel_for_replicates(int B, int threads,
                             const std::function<void(int)>& body) {
  const int n_workers = std::max(1, threads);
  if (n_workers == 1) {
    for (int b = 0; b < B; ++b) {
      body(b);
    }
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  std::atomic<int> next{0};
  for (int w = 0; w < n_workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int b = next.fetch_add(1);
        if (b >= B) {
          return;
        }
        body(b);
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
}

} // namespace

SimulationSummary run(const SimulationConfig& config) {
  if (config.m < 1 || config.B < 1) {
    throw std::invalid_argument("run: m and B must be >= 1");
  }
  validate_grid(config.alpha_grid, "alpha_grid");
  validate_grid(config.quantiles, "quantiles");

  const auto n_alpha = config.alpha_grid.size();
  const int B = config.B;
  // metrics[b][a]
  std::vector<std::vector<ReplicateMetrics>> metrics(
      B, std::vector<ReplicateMetrics>(n_alpha));
  parallel_for_replicates(B, config.threads, [&](int b) {
    replicate_pass(config, b, metrics[b]);
  });

  SimulationSummary summary;
  summary.seed = config.seed;
  summary.m = config.m;
  summary.B = config.B;
  summary.seed_rule = "replicate b draws from the (seed, b) counter stream";
  summary.rows.resize(n_alpha);

  double plug_in_h = 0.0;
  if (config.procedure == ProcedureKind::PlugIn) {
    plug_in_h = config.estimator.kind == Pi0Estimator::Kind::StoreyFixed
                    ? 1.0 - config.estimator.lambda
                    : bandwidth_h(config.m, config.estimator.order,
                                  config.estimator.eta);
  }

  std::vector<double> column(B);
  for (std::size_t ai = 0; ai < n_alpha; ++ai) {
    AlphaSummary& row = summary.rows[ai];
    row.alpha = config.alpha_grid[ai];

    auto collect = [&](auto proj) {
      for (int b = 0; b < B; ++b) {
        column[b] = proj(metrics[b][ai]);
      }
      std::sort(column.begin(), column.end());
      std::vector<double> qs(config.quantiles.size());
      for (std::size_t qi = 0; qi < config.quantiles.size(); ++qi) {
        qs[qi] = num::quantile_sorted(column, config.quantiles[qi]);
      }
      const double mean =
          std::accumulate(column.begin(), column.end(), 0.0) / B;
      return std::pair{qs, mean};
    };

    auto [fdp_q, fdp_mean] =
        collect([](const ReplicateMetrics& x) { return x.fdp; });
    row.fdp_quantiles = std::move(fdp_q);
    row.mean_fdp = fdp_mean;
    auto [rho_q, rho_mean] =
        collect([](const ReplicateMetrics& x) { return x.rho; });
    row.rho_quantiles = std::move(rho_q);
    row.mean_rho = rho_mean;
    // Power is defined only on replicates holding at least one alternative.
    std::vector<double> powers;
    powers.reserve(B);
    for (int b = 0; b < B; ++b) {
      if (!std::isnan(metrics[b][ai].power)) {
        powers.push_back(metrics[b][ai].power);
      }
    }
    if (!powers.empty()) {
      std::sort(powers.begin(), powers.end());
      row.power_quantiles.resize(config.quantiles.size());
      for (std::size_t qi = 0; qi < config.quantiles.size(); ++qi) {
        row.power_quantiles[qi] =
            num::quantile_sorted(powers, config.quantiles[qi]);
      }
      row.mean_power = std::accumulate(powers.begin(), powers.end(), 0.0) /
                       static_cast<double>(powers.size());
    }

    if (config.procedure == ProcedureKind::Standard) {
      row.asymptotic = predict(config.model, row.alpha);
    } else {
      try {
        row.asymptotic = predict_plug_in(config.model, row.alpha, plug_in_h);
      } catch (const std::domain_error&) {
        row.asymptotic = AsymptoticPrediction{};
        row.asymptotic.alpha = row.alpha;
      }
    }
  }
  return summary;
}

void write_summary_csv(const std::string& path,
                       const SimulationSummary& summary) {
  std::string body = "alpha,metric,q05,q50,q95,mean,asymptotic\n";
  auto emit = [&body](double alpha, const char* metric,
                      const std::vector<double>& qs, double mean,
                      double asym) {
    if (qs.size() != 3) {
      throw std::invalid_argument(
          "write_summary_csv: expects the default three quantiles");
    }
    body += io::format_double(alpha);
    body += ',';
    body += metric;
    for (double q : qs) {
      body += ',';
      body += io::format_double(q);
    }
    body += ',';
    body += io::format_double(mean);
    body += ',';
    body += io::format_double(asym);
    body += '\n';
  };
  for (const auto& row : summary.rows) {
    if (!row.power_quantiles.empty()) {
      emit(row.alpha, "power", row.power_quantiles,
           row.mean_power.value_or(0.0), row.asymptotic.pi_inf);
    }
    emit(row.alpha, "fdp", row.fdp_quantiles, row.mean_fdp,
         row.asymptotic.fdp_limit);
    emit(row.alpha, "rho", row.rho_quantiles, row.mean_rho,
         row.asymptotic.rho_inf);
  }
  io::atomic_write(path, body);
}

std::vector<FdpLawRow> fdp_law_experiment(const MixtureModel& model,
                                          double alpha,
                                          const Pi0Estimator& estimator,
                                          const std::vector<int>& m_list,
                                          int B, std::uint64_t seed,
                                          int threads) {
  if (m_list.empty() || B < 2) {
    throw std::invalid_argument("fdp_law_experiment: need sample sizes and B >= 2");
  }
  std::vector<FdpLawRow> rows;
  rows.reserve(m_list.size());
  for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
    const int m = m_list[mi];
    const double h = estimator.kind == Pi0Estimator::Kind::StoreyFixed
                         ? 1.0 - estimator.lambda
                         : bandwidth_h(m, estimator.order, estimator.eta);
    // Raises in the critical regime (alpha <= pi0_bar alpha_star).
    const AsymptoticPrediction pred = predict_plug_in(model, alpha, h);

    std::vector<double> fdps(B);
    parallel_for_replicates(B, threads, [&](int b) {
      const std::uint64_t stream =
          (static_cast<std::uint64_t>(mi) << 32) | static_cast<std::uint64_t>(b);
      PvalueSample sample = sample_pvalues(model, m, seed, stream);
      const double pi0_hat =
          estimate_pi0(estimator, sample.pvalues).value_clamped;
      BHOutcome outcome = plug_in_bh(sample.pvalues, alpha, pi0_hat);
      account(outcome, sample.is_null);
      fdps[b] = outcome.fdp.value_or(0.0);
    });

    FdpLawRow row;
    row.m = m;
    row.bandwidth = h;
    row.mean_fdp = std::accumulate(fdps.begin(), fdps.end(), 0.0) / B;
    double ss = 0.0;
    for (double f : fdps) {
      ss += (f - row.mean_fdp) * (f - row.mean_fdp);
    }
    row.var_fdp = ss / (B - 1);
    row.scaled_variance = static_cast<double>(m) * h * row.var_fdp;
    row.predicted_limit = pred.fdp_limit;
    row.predicted_scaled_variance = pred.fdp_scaled_variance.value_or(0.0);
    const double sd = std::sqrt(row.var_fdp);
    row.standardized.resize(B);
    for (int b = 0; b < B; ++b) {
      row.standardized[b] = sd > 0.0 ? (fdps[b] - row.mean_fdp) / sd : 0.0;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_fdp_law_csv(const std::string& path,
                       const std::vector<FdpLawRow>& rows) {
  std::string body =
      "m,bandwidth,mean_fdp,var_fdp,scaled_variance,predicted_limit,"
      "predicted_scaled_variance\n";
  for (const auto& row : rows) {
    body += std::to_string(row.m);
    body += ',';
    body += io::format_double(row.bandwidth);
    body += ',';
    body += io::format_double(row.mean_fdp);
    body += ',';
    body += io::format_double(row.var_fdp);
    body += ',';
    body += io::format_double(row.scaled_variance);
    body += ',';
    body += io::format_double(row.predicted_limit);
    body += ',';
    body += io::format_double(row.predicted_scaled_variance);
    body += '\n';
  }
  io::atomic_write(path, body);
}

} // namespace fdrlab
