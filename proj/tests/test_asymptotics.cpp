#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fdrlab/asymptotics.hpp"
#include "fdrlab/criticality.hpp"
#include "oracles.hpp"

using namespace fdrlab;

TEST_CASE("t_star on the pure null is 0 below alpha = 1") {
  MixtureModel model(1.0, AlternativeFamily::gaussian(2.0),
                     Sidedness::OneSided);
  for (double alpha : {0.05, 0.3, 0.9}) {
    CHECK(t_star(model, alpha, 1.0) == 0.0);
  }
  CHECK(t_star(model, 1.0, 1.0) == 1.0);
}

TEST_CASE("t_star vanishes below the critical level") {
  MixtureModel model(0.75, AlternativeFamily::laplace(2.0),
                     Sidedness::OneSided);
  const double astar = critical_value_closed_form(model); // ~0.385
  CHECK(t_star(model, 0.3, 1.0) == 0.0);
  CHECK(t_star(model, astar - 1e-3, 1.0) == 0.0);
  CHECK(t_star(model, astar + 1e-3, 1.0) > 0.0);
}

TEST_CASE("t_star solves the crossing equation") {
  MixtureModel model(0.75, AlternativeFamily::gaussian(2.0),
                     Sidedness::OneSided);
  const double ts = t_star(model, 0.2, 1.0);
  REQUIRE(ts > 0.0);
  CHECK(std::abs(mixture_cdf(model, ts) - ts / 0.2) < 1e-9);

  // Independent bisection oracle on psi(t) = G(t) - t/alpha from t = 1 down.
  double lo = 1e-12, hi = 1.0;
  auto psi = [&](double t) { return mixture_cdf(model, t) - t / 0.2; };
  // The rightmost crossing: find psi < 0 just above, psi >= 0 below.
  double probe = 1.0;
  while (psi(probe) < 0.0) {
    hi = probe;
    probe *= 0.75;
  }
  lo = probe;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (psi(mid) >= 0.0 ? lo : hi) = mid;
  }
  CHECK(ts == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-8));
}

TEST_CASE("t_star handles crossings far below the linear-scan resolution") {
  MixtureModel model(0.9, AlternativeFamily::gaussian(1.0),
                     Sidedness::OneSided);
  const double ts = t_star(model, 0.05, 1.0);
  CHECK(ts > 0.0);
  CHECK(ts < 1e-6);
  CHECK(std::abs(mixture_cdf(model, ts) - ts / 0.05) <
        1e-9 * std::max(1.0, ts / 0.05));
}

TEST_CASE("standard prediction across the critical transition") {
  MixtureModel model(0.9, AlternativeFamily::laplace(2.0), Sidedness::OneSided);
  const double astar = critical_value_closed_form(model);
  const auto below = predict(model, astar - 0.01);
  CHECK(below.t_star == 0.0);
  CHECK(below.rho_inf == 0.0);
  CHECK(below.pi_inf == 0.0);
  CHECK(below.fdp_limit == 0.0);

  const auto above = predict(model, astar + 0.01);
  CHECK(above.t_star > 0.0);
  CHECK(above.rho_inf > 0.0);
  CHECK(above.pi_inf > 0.0);
  CHECK(above.fdp_limit == doctest::Approx(0.9 * (astar + 0.01)));
}

TEST_CASE("power identity connects pi_inf and rho_inf") {
  std::vector<MixtureModel> models = {
      MixtureModel(0.75, AlternativeFamily::gaussian(2.0), Sidedness::OneSided),
      MixtureModel(0.5, AlternativeFamily::laplace(2.0), Sidedness::OneSided),
      MixtureModel(0.5, AlternativeFamily::student(36, 2.5),
                   Sidedness::TwoSided)};
  for (const auto& model : models) {
    for (double alpha : {0.2, 0.35, 0.5}) {
      const auto pred = predict(model, alpha);
      if (pred.t_star == 0.0) continue;
      CHECK(pred.pi_inf * (1.0 - model.pi0) ==
            doctest::Approx(pred.rho_inf * (1.0 - model.pi0 * alpha))
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("Gaussian power curve is smooth, increasing, positive at 0.05") {
  MixtureModel model(0.75, AlternativeFamily::gaussian(2.0),
                     Sidedness::OneSided);
  double prev = 0.0;
  for (double alpha = 0.05; alpha <= 0.5; alpha += 0.025) {
    const auto pred = predict(model, alpha);
    CHECK(pred.pi_inf > prev);
    prev = pred.pi_inf;
  }
  CHECK(predict(model, 0.05).pi_inf > 0.0);
}

TEST_CASE("Laplace pure-alternative crossing lands on the middle branch") {
  MixtureModel model(0.0, AlternativeFamily::laplace(2.0), Sidedness::OneSided);
  const auto pred = predict(model, 0.2);
  // Closed-form branch algebra: 5 t^2 - t + e^-2/4 = 0, rightmost root.
  const double disc = std::sqrt(1.0 - 5.0 * std::exp(-2.0));
  const double expected = (1.0 + disc) / 10.0;
  CHECK(pred.t_star == doctest::Approx(expected).epsilon(1e-10));
  CHECK(pred.rho_inf == doctest::Approx(expected / 0.2).epsilon(1e-10));
}

TEST_CASE("plug-in prediction constants for the one-sided Laplace") {
  MixtureModel model(0.5, AlternativeFamily::laplace(2.0), Sidedness::OneSided);
  const double pi0_bar = 0.5 + 0.5 * std::exp(-2.0);
  const auto pred = predict_plug_in(model, 0.45, 0.5);
  CHECK(pred.fdp_limit ==
        doctest::Approx(0.5 * 0.45 / pi0_bar).epsilon(1e-12));
  CHECK(pred.fdp_limit == doctest::Approx(0.3963586850900471).epsilon(1e-12));
  REQUIRE(pred.fdp_scaled_variance.has_value());
  CHECK(*pred.fdp_scaled_variance ==
        doctest::Approx(0.25 * 0.45 * 0.45 / std::pow(pi0_bar, 3))
            .epsilon(1e-12));
  CHECK(*pred.fdp_scaled_variance ==
        doctest::Approx(0.27674680698454119).epsilon(1e-12));
  // t* for the plug-in slope sits on the top branch.
  const double c = pi0_bar / 0.45;
  const double expected_t =
      (0.5 - 0.5 * std::exp(-2.0)) / (c - 0.5 - 0.5 * std::exp(-2.0));
  CHECK(pred.t_star == doctest::Approx(expected_t).epsilon(1e-10));
}

TEST_CASE("plug-in prediction under purity recovers alpha exactly") {
  MixtureModel model(0.5, AlternativeFamily::gaussian(2.0),
                     Sidedness::OneSided);
  const auto pred = predict_plug_in(model, 0.2, 0.01);
  CHECK(pred.fdp_limit == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(*pred.fdp_scaled_variance ==
        doctest::Approx(0.2 * 0.2 / 0.5).epsilon(1e-12));
}

TEST_CASE("plug-in prediction refuses the critical regime") {
  MixtureModel model(0.5, AlternativeFamily::laplace(2.0), Sidedness::OneSided);
  const auto report = purity_report(model);
  const double boundary = report.pi0_bar * report.alpha_star;
  CHECK_THROWS_AS((void)predict_plug_in(model, boundary * 0.9, 0.5),
                  std::domain_error);
  CHECK_NOTHROW((void)predict_plug_in(model, boundary * 1.1, 0.5));
}

TEST_CASE("custom variance function flows through") {
  MixtureModel model(0.5, AlternativeFamily::laplace(2.0), Sidedness::OneSided);
  const double pi0_bar = 0.5 + 0.5 * std::exp(-2.0);
  const auto pred =
      predict_plug_in(model, 0.45, 0.5, [](double x) { return 2.0 * x; });
  const double q = 0.5 * 0.45 / pi0_bar;
  CHECK(*pred.fdp_scaled_variance ==
        doctest::Approx(q * q * 2.0 / pi0_bar).epsilon(1e-12));
}

TEST_CASE("tvr deltas: zero deviation, sign, and finite-difference match") {
  MixtureModel model(0.5, AlternativeFamily::laplace(2.0), Sidedness::OneSided);
  const auto zero = predict_tvr_deltas(model, 0.45, 0.0);
  CHECK(zero.dtau == 0.0);
  CHECK(zero.dnu == 0.0);
  CHECK(zero.drho == 0.0);

  // Larger estimate => smaller threshold.
  const auto up = predict_tvr_deltas(model, 0.45, 0.01);
  CHECK(up.dtau < 0.0);

  // Finite differences of t_star with respect to pi0_ref.
  const auto report = purity_report(model);
  const double bar = report.pi0_bar;
  auto ts_at = [&](double ref) { return t_star(model, 0.45, ref); };
  for (double dev : {1e-2, 1e-3, 1e-4}) {
    const auto deltas = predict_tvr_deltas(model, 0.45, dev);
    const double fd = ts_at(bar + dev) - ts_at(bar);
    CHECK(deltas.dtau == doctest::Approx(fd).epsilon(0.05));
  }
  // First-order error shrinks roughly quadratically with the deviation.
  const double err2 = std::abs(predict_tvr_deltas(model, 0.45, 1e-2).dtau -
                               (ts_at(bar + 1e-2) - ts_at(bar)));
  const double err4 = std::abs(predict_tvr_deltas(model, 0.45, 1e-4).dtau -
                               (ts_at(bar + 1e-4) - ts_at(bar)));
  CHECK(err4 < err2 * 1e-2);
}

TEST_CASE("bandwidth hypothesis flag") {
  CHECK(bandwidth_hypothesis_ok(0.004, 100000));
  CHECK_FALSE(bandwidth_hypothesis_ok(0.5, 100000));
}
