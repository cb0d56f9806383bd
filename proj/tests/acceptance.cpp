// Acceptance suite: every check below runs at its stated tolerance and
// prints one [PASS]/[FAIL] line per criterion. Exit status is the number of
// failed criteria. Heavy criteria honor --threads.
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <thread>
#include <unistd.h>
#include <sstream>
#include <string>
#include <vector>

#include "fdrlab/asymptotics.hpp"
#include "fdrlab/criticality.hpp"
#include "fdrlab/math.hpp"
#include "fdrlab/pi0.hpp"
#include "fdrlab/procedures.hpp"
#include "fdrlab/pvalues.hpp"
#include "fdrlab/rng.hpp"
#include "fdrlab/simulation.hpp"
#include "fdrlab/ttest.hpp"
#include "oracles.hpp"

using namespace fdrlab;
namespace fs = std::filesystem;

namespace {

int g_threads = 4;
std::string g_cli_path;

struct Checker {
  int failures = 0;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      ++failures;
      detail << "\n    FAILED: " << what;
    }
  }
  void require_close(double got, double want, double tol,
                     const std::string& what) {
    std::ostringstream ss;
    ss << what << " (got " << got << ", want " << want << " +- " << tol << ")";
    require(std::abs(got - want) <= tol, ss.str());
  }
};

// ---------------------------------------------------------------------------
// 1. Critical values: closed form vs numeric infimum across the full matrix
// ---------------------------------------------------------------------------
void criterion_1(Checker& check) {
  struct Variant {
    const char* label;
    std::function<AlternativeFamily(double)> make;
  };
  const std::vector<Variant> variants = {
      {"gaussian", [](double th) { return AlternativeFamily::gaussian(th); }},
      {"laplace", [](double th) { return AlternativeFamily::laplace(th); }},
      {"subbotin(1)",
       [](double th) { return AlternativeFamily::subbotin(th, 1.0); }},
      {"subbotin(1.5)",
       [](double th) { return AlternativeFamily::subbotin(th, 1.5); }},
      {"subbotin(2)",
       [](double th) { return AlternativeFamily::subbotin(th, 2.0); }},
      {"student(9)",
       [](double th) { return AlternativeFamily::student(9, th); }},
      {"student(36)",
       [](double th) { return AlternativeFamily::student(36, th); }},
  };
  for (const auto& variant : variants) {
    for (double theta : {1.0, 2.0, 2.5, 3.0}) {
      const auto family = variant.make(theta);
      for (double pi0 : {0.0, 0.5, 0.75, 0.9}) {
        for (auto sided : {Sidedness::OneSided, Sidedness::TwoSided}) {
          MixtureModel model(pi0, family, sided);
          const double closed = critical_value_closed_form(model);
          const double numeric = critical_value_numeric(model);
          std::ostringstream what;
          what << variant.label << " theta=" << theta << " pi0=" << pi0
               << (sided == Sidedness::OneSided ? " one" : " two")
               << ": closed=" << closed << " numeric=" << numeric;
          check.require(std::abs(closed - numeric) < 1e-6, what.str());
        }
      }
    }
  }
  // Published anchors.
  MixtureModel anchor1(0.75, AlternativeFamily::laplace(2.0),
                       Sidedness::OneSided);
  check.require_close(critical_value_closed_form(anchor1), 0.385, 5e-4,
                      "laplace one-sided theta=2 pi0=0.75 critical value");
  MixtureModel anchor2(0.0, AlternativeFamily::laplace(2.0),
                       Sidedness::OneSided);
  check.require_close(critical_value_closed_form(anchor2), 0.1353, 5e-4,
                      "laplace one-sided theta=2 pi0=0 critical value");
}

// ---------------------------------------------------------------------------
// 2. Hh: recurrence vs quadrature, plus exact anchors
// ---------------------------------------------------------------------------
void criterion_2(Checker& check) {
  for (int k = 2; k <= 50; ++k) {
    for (double z = -10.0; z <= 10.0 + 1e-9; z += 1.0) {
      const double direct = oracles::hh_quadrature(k, z, 1e-13);
      const double recurred = (hh(k - 2, z) - z * hh(k - 1, z)) / k;
      const double rel = std::abs(recurred - direct) / direct;
      if (rel >= 1e-8) {
        std::ostringstream what;
        what << "recurrence vs quadrature at k=" << k << " z=" << z
             << " rel=" << rel;
        check.require(false, what.str());
      }
    }
  }
  check.require_close(hh(0, 0.0), std::sqrt(std::numbers::pi / 2.0), 1e-12,
                      "Hh_0(0)");
  check.require_close(hh(1, 0.0), 1.0, 1e-12, "Hh_1(0)");
}

// ---------------------------------------------------------------------------
// 3. Distribution correctness
// ---------------------------------------------------------------------------
void criterion_3(Checker& check) {
  // Noncentral Student density: unit mass and pointwise agreement with the
  // defining-ratio convolution oracle.
  const auto nct = AlternativeFamily::student(36, 2.5);
  const double mass = oracles::simpson(
      [&](double t) { return f1_pdf(nct, t); }, -80.0, 80.0, 1e-10);
  check.require_close(mass, 1.0, 1e-6, "noncentral Student unit mass");
  for (double t = -10.0; t <= 10.0 + 1e-9; t += 0.5) {
    const double impl = f1_pdf(nct, t);
    const double conv = oracles::nct_pdf_conv(t, 36, 2.5, 1e-13);
    if (std::abs(impl - conv) >= 1e-7) {
      std::ostringstream what;
      what << "noncentral pdf vs convolution oracle at t=" << t << " (impl "
           << impl << ", oracle " << conv << ")";
      check.require(false, what.str());
    }
  }

  // Laplace branch continuity at e^-theta/2 and 1/2.
  for (double theta : {1.0, 2.0, 3.0}) {
    MixtureModel lap(0.5, AlternativeFamily::laplace(theta),
                     Sidedness::OneSided);
    for (double knot : {0.5 * std::exp(-theta), 0.5}) {
      const double eps = 1e-13;
      const double below = g1_cdf(lap, knot - eps);
      const double above = g1_cdf(lap, knot + eps);
      std::ostringstream what;
      what << "laplace g1 branch continuity at theta=" << theta
           << " u=" << knot;
      check.require(std::abs(above - below) < 1e-12 + 1e-11 * eps, what.str());
    }
  }

  // Two-sided composition identity on all families.
  std::vector<AlternativeFamily> families = {
      AlternativeFamily::gaussian(2.0), AlternativeFamily::laplace(2.0),
      AlternativeFamily::subbotin(1.5, 1.5), AlternativeFamily::subbotin(2.0, 1.0),
      AlternativeFamily::student(9, 1.3), AlternativeFamily::student(36, 2.5)};
  for (const auto& family : families) {
    MixtureModel one(0.5, family, Sidedness::OneSided);
    MixtureModel two(0.5, family, Sidedness::TwoSided);
    for (double u = 0.01; u < 1.0; u += 0.01) {
      const double composed =
          g1_cdf(one, u / 2.0) + 1.0 - g1_cdf(one, 1.0 - u / 2.0);
      if (std::abs(g1_cdf(two, u) - composed) >= 1e-10) {
        std::ostringstream what;
        what << "two-sided composition identity (" << family.name()
             << ") at u=" << u;
        check.require(false, what.str());
        break;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 4. Desk-scale reproduction of the power study
// ---------------------------------------------------------------------------
void criterion_4(Checker& check) {
  std::vector<double> grid(50);
  for (int i = 1; i <= 50; ++i) {
    grid[i - 1] = 0.01 * i;
  }
  int config_index = 0;
  for (const char* family_name : {"gaussian", "laplace"}) {
    for (double theta : {1.0, 2.0}) {
      const auto family = std::string(family_name) == "gaussian"
                              ? AlternativeFamily::gaussian(theta)
                              : AlternativeFamily::laplace(theta);
      for (double pi0 : {0.0, 0.75, 0.9}) {
        MixtureModel model(pi0, family, Sidedness::OneSided);
        SimulationConfig cfg(model);
        cfg.m = 1000;
        cfg.B = 1000;
        cfg.alpha_grid = grid;
        cfg.seed = 321 + static_cast<std::uint64_t>(config_index);
        cfg.threads = g_threads;
        const auto summary = run(cfg);
        const double astar = critical_value_closed_form(model);
        for (const auto& row : summary.rows) {
          std::ostringstream ctx;
          ctx << family_name << " theta=" << theta << " pi0=" << pi0
              << " alpha=" << row.alpha;
          // (a) median power tracks the asymptote above criticality.
          if (pi0 < 1.0 && row.alpha >= astar + 0.05 - 1e-12) {
            const double median = row.power_quantiles[1];
            const double target = row.asymptotic.pi_inf;
            if (std::abs(median - target) > 0.05) {
              check.require(false, ctx.str() + ": |median power - pi_inf| = " +
                                       std::to_string(std::abs(median - target)));
            }
          }
          // (b) sub-critical Laplace power is negligible.
          if (std::string(family_name) == "laplace" &&
              row.alpha <= astar - 0.05 + 1e-12) {
            if (row.power_quantiles[1] > 0.05) {
              check.require(false,
                            ctx.str() + ": sub-critical median power " +
                                std::to_string(row.power_quantiles[1]));
            }
          }
          // (c) FDR control at the pi0-scaled level.
          const double bound = pi0 * row.alpha;
          const double se =
              std::sqrt(row.mean_fdp * (1.0 - row.mean_fdp) / cfg.B);
          if (row.mean_fdp > bound + 3.0 * se) {
            check.require(false, ctx.str() + ": mean FDP " +
                                     std::to_string(row.mean_fdp) +
                                     " above pi0*alpha + 3se");
          }
        }
        ++config_index;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 5. Null-proportion estimation rates
// ---------------------------------------------------------------------------
void criterion_5(Checker& check) {
  MixtureModel gauss2(0.5, AlternativeFamily::gaussian(2.0),
                      Sidedness::TwoSided);
  const double pi0_bar = 0.5 + 0.5 * std::exp(-2.0);

  // (a) MSE rate of the bandwidth estimator at k = 2.
  {
    const std::vector<int> m_list = {1000, 10000, 100000, 1000000};
    const int B = 500;
    std::vector<double> log_m, log_mse;
    for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
      const int m = m_list[mi];
      std::vector<double> sq(B);
      std::atomic<int> next{0};
      auto worker = [&]() {
        for (;;) {
          const int b = next.fetch_add(1);
          if (b >= B) return;
          const auto sample = sample_pvalues(
              gauss2, m, 9100 + static_cast<std::uint64_t>(mi),
              static_cast<std::uint64_t>(b));
          const double est =
              storey_bandwidth(sample.pvalues, 2).value_raw;
          sq[b] = (est - pi0_bar) * (est - pi0_bar);
        }
      };
      std::vector<std::thread> pool;
      for (int w = 0; w < g_threads; ++w) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
      const double mse = std::accumulate(sq.begin(), sq.end(), 0.0) / B;
      log_m.push_back(std::log(static_cast<double>(m)));
      log_mse.push_back(std::log(mse));
    }
    const double slope = num::lls_slope(log_m, log_mse);
    check.require_close(slope, -0.8, 0.15,
                        "MSE log-log slope (storey bandwidth, k=2)");
  }

  // (b) Bias at fixed bandwidths scales as h^2.
  {
    const std::vector<double> hs = {0.4, 0.2, 0.1, 0.05};
    const int B = 4000;
    const int m = 2000000;
    std::vector<std::vector<double>> estimates(hs.size(),
                                               std::vector<double>(B));
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int b = next.fetch_add(1);
        if (b >= B) return;
        const auto sample =
            sample_pvalues(gauss2, m, 9200, static_cast<std::uint64_t>(b));
        for (std::size_t hi = 0; hi < hs.size(); ++hi) {
          estimates[hi][b] =
              storey_fixed(sample.pvalues, 1.0 - hs[hi]).value_raw;
        }
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < g_threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    std::vector<double> log_h, log_bias;
    for (std::size_t hi = 0; hi < hs.size(); ++hi) {
      const double mean = std::accumulate(estimates[hi].begin(),
                                          estimates[hi].end(), 0.0) /
                          B;
      const double bias = mean - pi0_bar;
      check.require(bias > 0.0, "positive storey bias at h=" +
                                    std::to_string(hs[hi]));
      log_h.push_back(std::log(hs[hi]));
      log_bias.push_back(std::log(std::abs(bias)));
    }
    const double slope = num::lls_slope(log_h, log_bias);
    check.require_close(slope, 2.0, 0.3, "bias log-log slope in h");
  }

  // (c) One-sided Laplace: storey at lambda = 1/2 is unbiased for pi0_bar.
  {
    MixtureModel lap(0.5, AlternativeFamily::laplace(2.0), Sidedness::OneSided);
    const double target = 0.5 + 0.5 * std::exp(-2.0);
    const int B = 500;
    const int m = 100000;
    std::vector<double> values(B);
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int b = next.fetch_add(1);
        if (b >= B) return;
        const auto sample =
            sample_pvalues(lap, m, 9300, static_cast<std::uint64_t>(b));
        values[b] = storey_fixed(sample.pvalues, 0.5).value_raw;
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < g_threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    const double mean =
        std::accumulate(values.begin(), values.end(), 0.0) / B;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= (B - 1);
    const double se = std::sqrt(var / B);
    check.require_close(mean, target, 3.0 * se,
                        "storey(0.5) unbiasedness for pi0_bar ~ 0.5677");
  }
}

// ---------------------------------------------------------------------------
// 6. Plug-in FDP limit law
// ---------------------------------------------------------------------------
void criterion_6(Checker& check) {
  MixtureModel model(0.5, AlternativeFamily::laplace(2.0), Sidedness::OneSided);
  const auto rows =
      fdp_law_experiment(model, 0.45, Pi0Estimator::storey(0.5), {100000},
                         2000, 424242, g_threads);
  const auto& row = rows.at(0);
  const double se = std::sqrt(row.var_fdp / 2000.0);
  check.require_close(row.mean_fdp, row.predicted_limit, 3.0 * se,
                      "mean FDP vs pi0 alpha / pi0_bar");
  const double ratio = row.scaled_variance / row.predicted_scaled_variance;
  std::ostringstream what;
  what << "sqrt(m h)-scaled FDP variance within 20% of the predicted "
       << row.predicted_scaled_variance << " (observed " << row.scaled_variance
       << ", ratio " << ratio << ")";
  check.require(std::abs(ratio - 1.0) <= 0.20, what.str());
  const double ad = oracles::anderson_darling_normal(row.standardized);
  std::ostringstream adw;
  adw << "Anderson-Darling normality of the standardized FDP (A*^2 = " << ad
      << ", 1% critical " << oracles::kAdCritical1pct << ")";
  check.require(ad < oracles::kAdCritical1pct, adw.str());
}

// ---------------------------------------------------------------------------
// 7. Step-up equals the brute-force crossing definition
// ---------------------------------------------------------------------------
void criterion_7(Checker& check) {
  rng::Philox gen(777, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 1 + static_cast<int>(gen.next_u64() % 200);
    std::vector<double> p(m);
    for (auto& v : p) {
      v = gen.next_double();
    }
    const double alpha = 0.01 + 0.99 * gen.next_double();
    const auto fast = bh95(p, alpha);
    const auto brute = oracles::brute_force_bh(p, alpha);
    const auto crossing = oracles::sup_crossing_bh(p, alpha);
    if (fast.rejected != brute.rejected || fast.rejected != crossing.rejected) {
      check.require(false, "rejection set mismatch at trial " +
                               std::to_string(trial));
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// 8. Two-sample pipeline against the asymptotic rejection fractions
// ---------------------------------------------------------------------------
void criterion_8(Checker& check) {
  const auto data = synthetic_dataset(0.9, 0.5, 3051, 27, 11, 1.0, 88);
  std::vector<double> grid(50);
  for (int i = 1; i <= 50; ++i) {
    grid[i - 1] = 0.01 * i;
  }
  ResamplingPlan plan;
  plan.rates = {1.0, 0.6, 0.3};
  plan.B = 100;
  plan.seed = 99;
  const auto curve =
      rejection_curve(data, grid, plan, StudentAsymptote{0.9, 0.5}, g_threads);

  std::map<std::pair<double, double>, std::vector<double>> samples;
  for (const auto& row : curve.rows) {
    samples[{row.rate, row.alpha}].push_back(row.rho);
  }
  std::map<std::pair<double, double>, double> rho_inf;
  for (const auto& row : curve.asymptote) {
    rho_inf[{row.rate, row.alpha}] = row.rho_inf;
  }
  std::map<double, double> median_at_02;
  for (auto& [key, values] : samples) {
    if (key.second < 0.05 - 1e-12) {
      continue;
    }
    std::sort(values.begin(), values.end());
    const double median = num::quantile_sorted(values, 0.5);
    if (std::abs(key.second - 0.2) < 1e-12) {
      median_at_02[key.first] = median;
    }
    const double target = rho_inf.at(key);
    if (std::abs(median - target) > 0.05) {
      std::ostringstream what;
      what << "rate " << key.first << " alpha " << key.second
           << ": |median rho - rho_inf| = " << std::abs(median - target);
      check.require(false, what.str());
    }
  }
  check.require(median_at_02.at(1.0) > median_at_02.at(0.6) &&
                    median_at_02.at(0.6) > median_at_02.at(0.3),
                "rejection-fraction ordering full > 60% > 30% at alpha=0.2");
}

// ---------------------------------------------------------------------------
// 9. CLI determinism across thread counts
// ---------------------------------------------------------------------------
std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_9(Checker& check) {
  if (g_cli_path.empty()) {
    check.require(false, "no --cli path provided");
    return;
  }
  const fs::path dir =
      fs::temp_directory_path() / ("fdrlab_acceptance_" + std::to_string(getpid()));
  fs::create_directories(dir);
  const auto sim_cfg = dir / "sim.json";
  {
    std::ofstream out(sim_cfg);
    out << R"({"version":1,"command":"simulate",)"
        << R"("model":{"family":"laplace","theta":2.0,"pi0":0.75,"sided":"one"},)"
        << R"("experiment":{"m":500,"B":100,"seed":31,)"
        << R"("alpha_grid":{"count":20,"max":0.5}}})";
  }
  const auto fdp_cfg = dir / "fdp.json";
  {
    std::ofstream out(fdp_cfg);
    out << R"({"version":1,"command":"fdp-law",)"
        << R"("model":{"family":"laplace","theta":2.0,"pi0":0.5,"sided":"one"},)"
        << R"("experiment":{"alpha":0.45,"m_list":[20000],"B":200,"seed":8,)"
        << R"("estimator":{"kind":"storey_fixed","lambda":0.5}}})";
  }
  auto run_cmd = [&](const std::string& args) {
    const std::string cmd = g_cli_path + " " + args + " >/dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  struct Job {
    std::string label;
    std::string args;
    std::vector<std::string> outputs;
  };
  const std::vector<Job> jobs = {
      {"simulate", "simulate --config " + sim_cfg.string(),
       {"summary.csv", "summary.json"}},
      {"fdp-law", "fdp-law --config " + fdp_cfg.string(),
       {"fdp_law.csv", "fdp_law.json"}},
      {"ttest",
       "ttest --synthetic --delta 0.9 --pi0 0.5 --m 600 --nx 20 --ny 8 "
       "--rates 1.0 0.5 --B 10 --alpha-count 10 --seed 5",
       {"rejection.csv", "asymptote.csv"}},
  };
  for (const auto& job : jobs) {
    const auto out1 = dir / (job.label + "_t1");
    const auto out4 = dir / (job.label + "_t4");
    const int rc1 = run_cmd(job.args + " --threads 1 --out " + out1.string());
    const int rc4 = run_cmd(job.args + " --threads 4 --out " + out4.string());
    check.require(rc1 == 0 && rc4 == 0, job.label + ": CLI exited nonzero");
    for (const auto& name : job.outputs) {
      const auto a = slurp(out1 / name);
      const auto b = slurp(out4 / name);
      check.require(!a.empty() && a == b,
                    job.label + "/" + name +
                        ": outputs differ across thread counts");
    }
  }
  fs::remove_all(dir);
}

struct Criterion {
  int id;
  const char* label;
  std::function<void(Checker&)> fn;
};

} // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected = std::atoi(argv[++i]);
    } else if (arg == "--threads" && i + 1 < argc) {
      g_threads = std::atoi(argv[++i]);
    } else if (arg == "--cli" && i + 1 < argc) {
      g_cli_path = argv[++i];
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "critical values: closed form vs numeric infimum", criterion_1},
      {2, "Hh recurrence vs quadrature", criterion_2},
      {3, "distribution correctness", criterion_3},
      {4, "desk-scale power study", criterion_4},
      {5, "pi0 estimation rates", criterion_5},
      {6, "plug-in FDP limit law", criterion_6},
      {7, "step-up vs brute-force crossing", criterion_7},
      {8, "two-sample pipeline vs asymptotics", criterion_8},
      {9, "CLI determinism across thread counts", criterion_9},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (selected != 0 && criterion.id != selected) {
      continue;
    }
    Checker check;
    const auto start = std::chrono::steady_clock::now();
    criterion.fn(check);
    const auto seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << (check.failures == 0 ? "[PASS]" : "[FAIL]") << " criterion "
              << criterion.id << ": " << criterion.label << " ("
              << static_cast<int>(seconds) << "s)" << check.detail.str()
              << "\n";
    failures += check.failures == 0 ? 0 : 1;
  }
  return failures;
}
