#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fdrlab/procedures.hpp"
#include "fdrlab/rng.hpp"
#include "oracles.hpp"

using namespace fdrlab;

TEST_CASE("worked step-up example") {
  const std::vector<double> p = {0.01, 0.02, 0.5};
  const auto out = bh95(p, 0.15);
  CHECK(out.i_hat == 2);
  CHECK(out.tau_hat == doctest::Approx(0.10).epsilon(1e-14));
  CHECK(out.R == 2);
  CHECK(out.rejected == std::vector<int>{0, 1});
}

TEST_CASE("no rejection and full rejection") {
  const std::vector<double> none = {0.9, 0.95};
  const auto out_none = bh95(none, 0.1);
  CHECK(out_none.R == 0);
  CHECK(out_none.tau_hat == 0.0);
  CHECK(out_none.fdp == std::nullopt);

  const std::vector<double> zeros(7, 0.0);
  const auto out_all = bh95(zeros, 0.05);
  CHECK(out_all.R == 7);
  CHECK(out_all.i_hat == 7);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS((void)bh95(std::vector<double>{}, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)bh95(std::vector<double>{0.5, 1.2}, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)bh95(std::vector<double>{0.5}, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)plug_in_bh(std::vector<double>{0.5}, 0.1, 0.0),
                  std::invalid_argument);
}

TEST_CASE("step-up equals brute force and the ecdf crossing form") {
  rng::Philox gen(2024, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 1 + static_cast<int>(gen.next_u64() % 200);
    std::vector<double> p(m);
    for (auto& v : p) {
      v = gen.next_double();
    }
    if (trial % 7 == 0 && m > 3) {
      // Inject ties.
      p[1] = p[0];
      p[3] = p[2];
    }
    const double alpha = 0.01 + 0.99 * gen.next_double();
    const auto fast = bh95(p, alpha);
    const auto brute = oracles::brute_force_bh(p, alpha);
    const auto crossing = oracles::sup_crossing_bh(p, alpha);
    CHECK(fast.rejected == brute.rejected);
    CHECK(fast.rejected == crossing.rejected);
  }
}

TEST_CASE("rejections grow with alpha") {
  rng::Philox gen(7, 0);
  std::vector<double> p(300);
  for (auto& v : p) {
    v = std::pow(gen.next_double(), 1.3);
  }
  int prev = 0;
  for (double alpha = 0.02; alpha <= 1.0; alpha += 0.02) {
    const auto out = bh95(p, alpha);
    CHECK(out.R >= prev);
    prev = out.R;
  }
}

TEST_CASE("plug-in scaling and clamping") {
  rng::Philox gen(8, 0);
  std::vector<double> p(200);
  for (auto& v : p) {
    v = gen.next_double() * gen.next_double();
  }
  const auto neutral = plug_in_bh(p, 0.1, 1.0);
  const auto plain = bh95(p, 0.1);
  CHECK(neutral.rejected == plain.rejected);

  const auto scaled = plug_in_bh(p, 0.1, 0.5);
  const auto direct = bh95(p, 0.2);
  CHECK(scaled.rejected == direct.rejected);
  CHECK(scaled.effective_level == doctest::Approx(0.2));

  const auto clamped = plug_in_bh(p, 0.1, 0.05);
  const auto at_one = bh95(p, 1.0);
  CHECK(clamped.effective_level == 1.0);
  CHECK(clamped.rejected == at_one.rejected);
  CHECK_THROWS_AS((void)plug_in_bh(p, 0.1, 0.05, /*strict=*/true),
                  std::invalid_argument);
}

TEST_CASE("plug-in rejections are nested in the estimate") {
  rng::Philox gen(9, 0);
  std::vector<double> p(400);
  for (auto& v : p) {
    v = gen.next_double();
  }
  int prev = std::numeric_limits<int>::max();
  for (double pi0_hat : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    const auto out = plug_in_bh(p, 0.1, pi0_hat);
    CHECK(out.R <= prev);
    prev = out.R;
  }
}

TEST_CASE("permutation invariance of the rejection set") {
  rng::Philox gen(10, 0);
  std::vector<double> p(97);
  for (auto& v : p) {
    v = gen.next_double();
  }
  const auto base = bh95(p, 0.3);
  std::vector<int> perm(p.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::swap(perm[i - 1], perm[gen.next_u64() % i]);
  }
  std::vector<double> shuffled(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    shuffled[perm[i]] = p[i];
  }
  const auto out = bh95(shuffled, 0.3);
  std::vector<int> mapped;
  for (int idx : base.rejected) {
    mapped.push_back(perm[static_cast<std::size_t>(idx)]);
  }
  std::sort(mapped.begin(), mapped.end());
  CHECK(out.rejected == mapped);
}

TEST_CASE("accounting conventions") {
  const std::vector<double> p = {0.001, 0.002, 0.003, 0.9};
  const std::vector<std::uint8_t> all_null = {1, 1, 1, 1};
  auto out = bh95(p, 0.2);
  REQUIRE(out.R == 3);
  account(out, all_null);
  CHECK(out.V == 3);
  CHECK(out.fdp == doctest::Approx(1.0));
  CHECK_FALSE(out.power.has_value());

  const std::vector<std::uint8_t> all_alt = {0, 0, 0, 0};
  auto out2 = bh95(p, 0.2);
  account(out2, all_alt);
  CHECK(out2.fdp == doctest::Approx(0.0));
  CHECK(out2.power == doctest::Approx(3.0 / 4.0));

  // R = 0: the max(R, 1) convention gives FDP 0.
  auto none = bh95(std::vector<double>{0.8, 0.9}, 0.05);
  account(none, std::vector<std::uint8_t>{1, 0});
  CHECK(none.fdp == doctest::Approx(0.0));

  auto bad = bh95(p, 0.2);
  CHECK_THROWS_AS(account(bad, std::vector<std::uint8_t>{1, 0}),
                  std::invalid_argument);
}

TEST_CASE("mean FDP stays under the pi0-scaled level at desk scale") {
  // 2000 replicates of m = 500 mixture draws: nulls uniform, alternatives
  // one-sided Gaussian theta = 2 via the statistic transform.
  const int B = 2000;
  const int m = 500;
  const int m0 = 375; // pi0 = 0.75
  const double alpha = 0.2;
  double sum_fdp = 0.0;
  for (int b = 0; b < B; ++b) {
    rng::Philox gen(515, static_cast<std::uint64_t>(b));
    std::vector<double> p(m);
    std::vector<std::uint8_t> labels(m);
    for (int i = 0; i < m; ++i) {
      const bool is_null = i < m0;
      labels[i] = is_null ? 1 : 0;
      if (is_null) {
        p[i] = gen.next_double();
      } else {
        const double t = 2.0 + gen.next_normal();
        p[i] = 0.5 * std::erfc(t / std::numbers::sqrt2);
      }
    }
    auto out = bh95(p, alpha);
    account(out, labels);
    sum_fdp += out.fdp.value_or(0.0);
  }
  const double mean_fdp = sum_fdp / B;
  const double bound = 0.75 * alpha;
  const double mc_se = std::sqrt(mean_fdp * (1.0 - mean_fdp) / B);
  CHECK(mean_fdp <= bound + 3.0 * mc_se);
}
